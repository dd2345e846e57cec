"""The recursive construction of exact additive complements.

Start from the naturals (h = 1, lower bound f(n) = n) and lift h -> h + 1
with a growth schedule (g, G)::

    B_i     = {G(g(a)) + a : a in A_i} + {0}          for i <= h
    B_{h+1} = [0, E(s) - 1]  u  U_{n >= s} Block(n)

Every lifted family carries a constructive :func:`decompose` that returns an
explicit, re-checkable witness b_1 + ... + b_{h+1} = y.
"""

from dataclasses import dataclass, field

from .errors import (
    BudgetExceeded,
    CoverageFailure,
    InvalidArity,
    ScheduleDomainError,
    ScheduleRejected,
)
from .numerics import block_modulus, ceil_sqrt
from .schedule import Adapted, GrowthSchedule, LcmRange, Square, classic_schedule
from .sets import LazySum, Mapped, Naturals, TailProgression, block_of  # noqa: F401


class IdentityBound:
    """f(n) = n, the lower bound of the one-set family."""

    def __call__(self, n):
        return n

    def last_at_most(self, m):
        return m

    def __repr__(self):
        return "IdentityBound()"


class LiftedBound:
    """Lower bound f_{h+1} of a lifted family.

    Zero below E(s). For y in window N (E(N) <= y < E(N+1)) the decomposition
    uses parts b_i >= a_i >= f_h(ceil(sqrt(N))) and a last part inside
    Block(N), whose smallest value is G(g(N)) - 2k_N; the bound is the
    minimum of the two, clamped to be nondecreasing in N.
    """

    def __init__(self, parent, tail):
        self.parent = parent
        self.tail = tail
        self._values = {}

    def window_value(self, N):
        if N in self._values:
            return self._values[N]
        s = self.tail.n_start
        sched = self.tail.schedule
        prev = self.window_value(N - 1) if N > s else 0
        raw = min(self.parent(ceil_sqrt(N)), sched.Gg(N) - 2 * block_modulus(N))
        value = max(prev, raw)
        self._values[N] = value
        return value

    def __call__(self, n):
        N = self.tail.window(n)
        return 0 if N is None else self.window_value(N)

    def last_at_most(self, m):
        """Largest n with f(n) <= m."""
        N = self.tail.n_start
        if self.window_value(N) > m:
            return self.tail.initial_end() - 1
        while self.window_value(N + 1) <= m:
            N += 1
        return self.tail.boundary(N + 1) - 1

    def __repr__(self):
        return f"LiftedBound(h={self.tail.h + 1})"


@dataclass(frozen=True)
class Lift:
    schedule: GrowthSchedule
    unchecked: bool = False
    report: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True, eq=False)
class Family:
    sets: tuple
    lower_bound: object
    history: tuple = ()
    kind: str = "base"
    parent: "Family" = None

    @property
    def h(self):
        return len(self.sets)

    @property
    def tail(self):
        """The progression set of the most recent lift, if any."""
        fam = self
        while fam is not None and fam.kind == "merge":
            fam = fam.parent
        return fam.sets[-1] if fam is not None and fam.kind == "lift" else None

    @property
    def n_merges(self):
        fam, k = self, 0
        while fam.kind == "merge":
            fam, k = fam.parent, k + 1
        return k


@dataclass(frozen=True)
class Witness:
    target: int
    parts: tuple
    window: int = None
    modulus: int = None

    def problems(self, family):
        """Independent re-check: sum, per-part membership, lower bound and
        congruence. Returns a list of human-readable failures."""
        out = []
        if len(self.parts) != family.h:
            return [f"expected {family.h} parts, got {len(self.parts)}"]
        if sum(self.parts) != self.target:
            out.append("parts do not sum to target")
        for i, (p, s) in enumerate(zip(self.parts, family.sets)):
            if p < 0 or not s.member(p):
                out.append(f"part {i + 1} is not a member of set {i + 1}")
        bound = family.lower_bound(self.target)
        if any(p < bound for p in self.parts):
            out.append(f"a part is below the lower bound {bound}")
        if self.modulus is not None and family.kind == "lift":
            if (sum(self.parts[:-1]) - self.target) % self.modulus:
                out.append("lifted parts are not congruent to the target")
        return out


def base_family():
    return Family((Naturals(),), IdentityBound())


def lower_bound_lift(parent, schedule, h):
    return LiftedBound(parent, TailProgression(schedule, h))


def schedule_report(schedule, lower_bound, upto=64):
    """Sampled checks of a schedule against the family it lifts."""
    g = schedule.g
    if isinstance(g, Adapted) and g.horizon is not None:
        upto = min(upto, g.horizon)
    report = schedule.check(upto)
    report["g_of_f"] = None
    report["range"] = [0, upto]
    try:
        for n in range(upto + 1):
            if g(lower_bound(n)) < n * n:
                report["g_of_f"] = n
                break
    except (BudgetExceeded, ScheduleDomainError) as exc:
        report["g_of_f_error"] = str(exc)
    return report


def report_ok(report):
    return all(report.get(k) is None for k in ("g_increasing", "G_nondecreasing", "G_divisibility", "g_of_f"))


def lift(family, schedule, unchecked=False, validate_upto=64):
    """Lift an h-family to an (h+1)-family.

    The schedule is validated on a sampled range (g strictly increasing, G
    nondecreasing with the divisibility property, g(f(n)) >= n**2); failures
    raise :class:`ScheduleRejected` unless ``unchecked`` is set.
    """
    report = schedule_report(schedule, family.lower_bound, validate_upto)
    if not unchecked and not report_ok(report):
        raise ScheduleRejected(report)
    h = family.h
    tail = TailProgression(schedule, h)
    sets = tuple(Mapped(s, schedule, adjoin_zero=True) for s in family.sets) + (tail,)
    return Family(
        sets,
        LiftedBound(family.lower_bound, tail),
        family.history + (Lift(schedule, unchecked, report),),
        "lift",
        family,
    )


def adapted_schedule(family, G=None, horizon=None, n_start=6):
    """Schedule whose g is adapted to ``family``'s lower bound."""
    return GrowthSchedule(Adapted(family.lower_bound, horizon), G or LcmRange(), n_start)


def merge_last(family):
    """Replace the last two sets by their (lazy) sumset."""
    if family.h < 2:
        raise InvalidArity(f"merge needs at least two sets, family has {family.h}")
    sets = family.sets[:-2] + (LazySum(family.sets[-2], family.sets[-1]),)
    # parts of the merged witness are sums of parts, so the parent bound still holds
    return Family(sets, family.lower_bound, family.history, "merge", family)


def decompose(family, y, window="largest"):
    """Explicit parts b_1 + ... + b_h = y with b_i in the i-th set.

    For a lifted family and y >= E(s): take the window N of y, the unique
    m in [ceil(sqrt(N)), N - 1] with m = y (mod k_N), decompose m in the
    parent, map each part a to G(g(a)) + a (divisible shift, so the sum
    stays congruent to y) and let the progression set absorb the rest.
    ``window="smallest"`` picks the smallest N with y <= E(N+1) instead.
    """
    if y < 0:
        raise ValueError("targets are nonnegative")
    if family.kind == "base":
        return Witness(y, (y,))
    if family.kind == "merge":
        w = decompose(family.parent, y, window)
        return Witness(y, w.parts[:-2] + (w.parts[-2] + w.parts[-1],), w.window, w.modulus)

    parent = family.parent
    tail = family.sets[-1]
    sched = tail.schedule
    h = parent.h
    N = tail.window(y)
    if N is None:
        w = Witness(y, (0,) * h + (y,))
    else:
        if window == "smallest" and N > tail.n_start and y == tail.boundary(N):
            N -= 1
        k = block_modulus(N)
        lo = ceil_sqrt(N)
        m = lo + (y - lo) % k
        inner = decompose(parent, m, window)
        lifted = tuple(sched.mapped(a) for a in inner.parts)
        w = Witness(y, lifted + (y - sum(lifted),), N, k)
    bad = w.problems(family)
    if bad:
        raise CoverageFailure(y, {"window": w.window, "problems": bad})
    return w


def danzer_family():
    """h = 2 with g(n) = n**2 and G = factorial."""
    return lift(base_family(), classic_schedule())


def lcm_family(h=3, horizon=30, n_start=6):
    """Desk-scale surrogate: first lift g(n) = n**2, later lifts use an
    adapted g (valid up to ``horizon``), all with G = lcm(1..m)."""
    fam = lift(base_family(), GrowthSchedule(Square(), LcmRange(), n_start))
    while fam.h < h:
        fam = lift(fam, adapted_schedule(fam, LcmRange(), horizon, n_start))
    return fam
