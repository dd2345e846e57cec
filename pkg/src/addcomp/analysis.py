"""Finite-scale verification: sumset kernels, coverage, ratio profiles.

Nothing here proves an asymptotic statement. Ratios are exact
:class:`~fractions.Fraction` values; only :func:`classify_growth` reports
fixed-precision numbers.
"""

import random
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import product

import numpy as np

from .errors import BudgetExceeded, CapExceeded, CoverageFailure, EnumerationRefused
from .sets import DEFAULT_CAP, is_exact


# -- sumset kernel ---------------------------------------------------------

def _mask_bits(mask):
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def _shift_or(a_bits, b_bits, bound):
    """Sumset of two bitmaps truncated to [0, bound]; iterates the sparser one."""
    if a_bits.bit_count() > b_bits.bit_count():
        a_bits, b_bits = b_bits, a_bits
    full = (1 << (bound + 1)) - 1
    acc = 0
    for e in _int_to_mask(a_bits, bound).nonzero()[0].tolist():
        acc |= b_bits << e
    return acc & full


def _progression_or(bits, pieces, bound):
    """bits + (union of {lo, lo + k, ..., hi}) by doubling, O(log length)
    shifts per piece instead of one shift per element."""
    full = (1 << (bound + 1)) - 1
    out = 0
    for lo, hi, k in pieces:
        terms = (hi - lo) // k + 1
        acc, offset = 0, 0
        power, span = bits, 1  # power = bits + {0, k, ..., (span - 1) k}
        while terms:
            if terms & 1:
                acc |= (power << offset) & full
                offset += span * k
            terms >>= 1
            if terms:
                power = (power | (power << (span * k))) & full
                span *= 2
        out |= (acc << lo) & full
    return out


def _piece_cost(pieces):
    return sum(2 * ((hi - lo) // k + 1).bit_length() for lo, hi, k in pieces)


def _add_set(acc, s, bound, cap):
    """acc + s over [0, bound]. Progression-shaped sets are added by doubling
    when that is cheaper than a shift per element."""
    pieces = s.pieces(bound) if hasattr(s, "pieces") else None
    if pieces is not None:
        cost = _piece_cost(pieces)
        if cost < acc.bit_count() or cost < s.count(bound):
            return _progression_or(acc, pieces, bound)
    return _shift_or(acc, _mask_bits(s.mask_upto(bound, cap)), bound)


def _int_to_mask(bits, bound):
    nbytes = (bound + 8) // 8
    raw = np.frombuffer(bits.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[: bound + 1].astype(bool)


def sumset_upto(sets, bound, cap=DEFAULT_CAP):
    """The sumset restricted to [0, bound] as an int bitmap (bit j <=> j).

    ``cap`` limits how many elements of any one summand are materialised;
    summands made of arithmetic pieces are never enumerated element-wise.
    """
    if not sets:
        raise ValueError("need at least one set")
    acc = 1  # {0}
    for s in sets:
        acc = _add_set(acc, s, bound, cap)
    return acc


def sumset_mask(sets, bound, cap=DEFAULT_CAP):
    """Boolean array m over [0, bound] with m[j] iff j is in A_1 + ... + A_r."""
    return _int_to_mask(sumset_upto(sets, bound, cap), bound)


def naive_sumset(element_lists, bound):
    """Reference oracle: every tuple of elements, summed."""
    out = set()
    for combo in product(*element_lists):
        s = sum(combo)
        if s <= bound:
            out.add(s)
    return out


def bits_to_set(bits):
    out, j = set(), 0
    while bits:
        if bits & 1:
            out.add(j)
        bits >>= 1
        j += 1
    return out


def coverage_gap(sets, bound, cap=DEFAULT_CAP):
    """Smallest j <= bound missing from the sumset, or None."""
    bits = sumset_upto(sets, bound, cap)
    gap = ((bits + 1) & ~bits).bit_length() - 1
    return gap if gap <= bound else None


@dataclass(frozen=True)
class CoverageReport:
    bound: int
    covered: bool
    first_gap: int = None
    witnesses_checked: int = 0


def scan(sets, bound, cap=DEFAULT_CAP):
    gap = coverage_gap(sets, bound, cap)
    return CoverageReport(bound, gap is None, gap)


def representation_count(sets, n, cap=DEFAULT_CAP):
    """Number of ordered tuples (a_1, ..., a_r), a_i in A_i, summing to n."""
    if n < 0:
        return 0
    masks = [s.mask_upto(n, cap) for s in sets]
    sizes = [int(m.sum()) for m in masks]
    total = 1
    for c in sizes:
        total *= max(c, 1)
    dtype = np.int64 if total < 2**62 else object
    acc = masks[0].astype(dtype)
    for m in masks[1:-1]:
        new = np.zeros(n + 1, dtype=dtype)
        for e in np.flatnonzero(m).tolist():
            new[e:] += acc[: n + 1 - e]
        acc = new
    if len(masks) == 1:
        return int(acc[n])
    last = np.flatnonzero(masks[-1])
    return int(sum(acc[n - e] for e in last.tolist()))


# -- counting profiles -----------------------------------------------------

@dataclass(frozen=True)
class RatioSample:
    x: int
    counts: tuple
    ratio: Fraction
    exact: bool = True


@dataclass(frozen=True)
class RatioProfile:
    samples: tuple

    @property
    def ratios(self):
        return [s.ratio for s in self.samples]

    def covers_bound(self):
        """Product of counts >= x + 1 at every sample."""
        return all(s.ratio * s.x >= s.x + 1 for s in self.samples)


def ratio_profile(family, xs):
    """Exact (prod_i count_i(x)) / x at each x (xs strictly increasing, >= 1)."""
    samples = []
    prev = None
    for x in xs:
        if x < 1 or (prev is not None and x <= prev):
            raise ValueError("sample points must be positive and strictly increasing")
        prev = x
        counts = tuple(s.count(x) for s in family.sets)
        prod = 1
        for c in counts:
            prod *= int(c)
        samples.append(RatioSample(x, tuple(int(c) for c in counts), Fraction(prod, x),
                                   all(is_exact(c) for c in counts)))
    return RatioProfile(tuple(samples))


def ladder_points(family, first, last):
    """Distinct E(N) for first <= N <= last on the most recent lift's ladder."""
    tail = family.tail
    out = []
    for N in range(first, last + 1):
        x = tail.boundary(N)
        # lcm-type G can repeat a boundary; keep the points strictly increasing
        if not out or x > out[-1]:
            out.append(x)
    return out


@dataclass(frozen=True)
class GrowthTrace:
    xs: tuple
    trace: tuple
    slope: Decimal
    label: str
    heuristic: bool = True


DENSE_LEVEL = Decimal("0.9")
SPARSE_LEVEL = Decimal("0.5")
FLAT_TOL = Decimal("0.01")


def classify_growth(s, xs, digits=20):
    """Trace ln(count(x)) / ln(x) and a heuristic dense/sparse label.

    dense: every trace value above 0.9 and the least-squares slope against
    ln x not below -0.01. sparse: last value below 0.5 with negative slope.
    Anything else is inconclusive. A finite trace cannot decide the
    asymptotic dichotomy; the label is only a diagnostic.
    """
    xs = tuple(xs)
    if any(x < 2 for x in xs):
        raise ValueError("need x >= 2 for a logarithmic trace")
    with localcontext() as ctx:
        ctx.prec = digits + 10
        logs = [Decimal(x).ln() for x in xs]
        trace = []
        for x, lx in zip(xs, logs):
            c = int(s.count(x))
            trace.append(Decimal(c).ln() / lx if c > 0 else Decimal(0))
        slope = _ls_slope(logs, trace) if len(xs) > 1 else Decimal(0)
        ctx.prec = digits
        trace = tuple(+t for t in trace)
        slope = +slope
    if all(t > DENSE_LEVEL for t in trace) and slope >= -FLAT_TOL:
        label = "dense"
    elif trace[-1] < SPARSE_LEVEL and slope < 0:
        label = "sparse"
    else:
        label = "inconclusive"
    return GrowthTrace(xs, trace, slope, label)


def _ls_slope(us, vs):
    n = len(us)
    mu = sum(us) / n
    mv = sum(vs) / n
    num = sum((u - mu) * (v - mv) for u, v in zip(us, vs))
    den = sum((u - mu) ** 2 for u in us)
    return num / den if den else Decimal(0)


# -- whole-family verification --------------------------------------------

@dataclass
class VerificationReport:
    seed: int
    coverage: dict = field(default_factory=dict)
    lower_bound: dict = field(default_factory=dict)
    ratio: dict = field(default_factory=dict)
    schedules: list = field(default_factory=list)

    @property
    def passed(self):
        return (self.coverage.get("passed", False) and self.lower_bound.get("passed", False)
                and self.ratio.get("passed", False) and all(s["passed"] for s in self.schedules))

    def to_dict(self):
        return {
            "passed": self.passed,
            "seed": self.seed,
            "condition_1_coverage": self.coverage,
            "condition_2_lower_bound": self.lower_bound,
            "condition_3_ratio": self.ratio,
            "schedule_checks": self.schedules,
        }


def sample_targets(family, count, seed, top_window=12):
    """Seeded targets: half uniform on [0, E(top)], half spread over windows."""
    rng = random.Random(seed)
    tail = family.tail
    if tail is None:
        top = 10**12
        return [rng.randint(0, top) for _ in range(count)], f"uniform on [0, {top}]"
    s = tail.n_start
    edges = [0] + [tail.boundary(N) for N in range(s, top_window + 1)]
    top = edges[-1]
    out = [rng.randint(0, top) for _ in range(count - count // 2)]
    for _ in range(count // 2):
        i = rng.randrange(len(edges) - 1)
        out.append(rng.randint(edges[i], edges[i + 1]))
    return out, f"uniform on [0, E({top_window})] and per-window stratified"


def verify_family(family, coverage_samples=1000, ratio_ladder_depth=30, rng_seed=0,
                  exhaustive_bound=10**4, top_window=12):
    """Check conditions (1)-(3) of the induction at finite scale.

    Failures are report entries, never exceptions. Deterministic given the
    seed; every entry lists the samples it was computed on.
    """
    from .construction import decompose, report_ok

    rep = VerificationReport(rng_seed)
    tail = family.tail
    top_window = max(top_window, tail.n_start if tail else 0)

    # (1) coverage: seeded witnesses plus an exhaustive prefix
    try:
        targets, rule = sample_targets(family, coverage_samples, rng_seed, top_window)
    except BudgetExceeded as exc:
        targets, rule = [], f"no targets: {exc}"
    failures, budget_skips, witnesses = [], [], []
    for y in targets:
        try:
            witnesses.append(decompose(family, y))
        except CoverageFailure as exc:
            failures.append({"target": str(y), "diagnostics": exc.diagnostics})
        except BudgetExceeded:
            budget_skips.append(str(y))
    try:
        gap = coverage_gap(list(family.sets), exhaustive_bound)
        exhaustive = {"bound": exhaustive_bound, "first_gap": gap, "covered": gap is None}
    except (CapExceeded, EnumerationRefused, BudgetExceeded) as exc:
        exhaustive = {"bound": exhaustive_bound, "skipped": str(exc), "covered": None}
    rep.coverage = {
        "passed": not failures and exhaustive["covered"] is not False,
        "sampling": rule,
        "targets": [str(y) for y in targets],
        "witnesses_checked": len(witnesses),
        "failures": failures,
        "budget_skipped": budget_skips,
        "exhaustive": exhaustive,
    }

    # (2) lower bounds on the witnesses, monotonicity of f on the ladder
    f = family.lower_bound
    below = [str(w.target) for w in witnesses if any(p < f(w.target) for p in w.parts)]
    ladder = []
    if tail is not None:
        try:
            ladder = [(tail.boundary(N), f(tail.boundary(N))) for N in range(tail.n_start, top_window + 1)]
        except BudgetExceeded:
            pass
    values = [v for _, v in ladder]
    monotone = all(a <= b for a, b in zip(values, values[1:]))
    rep.lower_bound = {
        "passed": not below and monotone,
        "witnesses": len(witnesses),
        "below_bound": below,
        "ladder_values": [[str(x), str(v)] for x, v in ladder],
        "monotone_on_ladder": monotone,
        "grows_on_ladder": bool(values) and values[-1] > values[0],
    }

    # (3) ratio profile on the ladder
    try:
        if tail is not None:
            xs = ladder_points(family, tail.n_start, ratio_ladder_depth)
        else:
            xs = [10**j for j in range(1, ratio_ladder_depth + 1)]
        prof = ratio_profile(family, xs)
        ratios = prof.ratios
        rises = [i for i in range(1, len(ratios)) if ratios[i] > ratios[i - 1]]
        rep.ratio = {
            "passed": prof.covers_bound(),
            "xs": [str(x) for x in xs],
            "ratios": [f"{r.numerator}/{r.denominator}" for r in ratios],
            "product_at_least_x_plus_1": prof.covers_bound(),
            "increases_at": [str(xs[i]) for i in rises],
            "first_ratio": f"{float(ratios[0]):.6g}",
            "last_ratio": f"{float(ratios[-1]):.6g}",
        }
    except BudgetExceeded as exc:
        rep.ratio = {"passed": False, "skipped": str(exc)}

    for i, step in enumerate(family.history):
        rep.schedules.append({
            "lift": i + 1,
            "schedule": step.schedule.to_dict(),
            "unchecked": step.unchecked,
            "passed": report_ok(step.report),
            "checks": {k: v for k, v in step.report.items()},
        })
    return rep
