"""Lazy infinite subsets of the naturals.

Each set answers membership, exact counting ``count(x) = |{s <= x}|`` and
bounded enumeration without materialising anything beyond ``x``. The two
set shapes produced by a lift are :class:`Mapped` (the image of a set under
a -> G(g(a)) + a, optionally with 0 adjoined) and :class:`TailProgression`
(an initial interval followed by blocks of multiples with slowly growing
moduli).
"""

import bisect
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, EnumerationRefused, InvalidIndex
from .numerics import block_modulus, ceil_div

DEFAULT_CAP = 10**7
# LazySum counts exactly through the bitmap kernel up to this bound
EXACT_SUM_LIMIT = 10**7


class UpperBound(int):
    """An int that is only an upper bound for the true count."""

    exact = False

    def __repr__(self):
        return f"UpperBound({int(self)})"


def is_exact(count):
    return getattr(count, "exact", True)


def _mult_count(lo, hi, k):
    """Number of multiples of k in [lo, hi]."""
    if hi < lo:
        return 0
    return hi // k - (lo - 1) // k


def _mask_to_int(mask):
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


class SetExpr:
    def member(self, x):
        raise NotImplementedError

    def count(self, x):
        raise NotImplementedError

    def _elements(self, x):
        """Ascending members <= x; callers have already checked the cap."""
        raise NotImplementedError

    def __contains__(self, x):
        return x >= 0 and self.member(x)

    def enumerate_upto(self, x, cap=DEFAULT_CAP):
        if x < 0:
            return []
        c = self.count(x)
        if c > cap:
            raise CapExceeded(int(c), cap)
        return self._elements(x)

    def mask_upto(self, x, cap=DEFAULT_CAP):
        """Boolean numpy array m of length x + 1 with m[j] iff j is a member."""
        mask = np.zeros(x + 1, dtype=bool)
        els = self.enumerate_upto(x, cap)
        if els:
            mask[np.asarray(els, dtype=np.int64)] = True
        return mask

    def bitmap_upto(self, x, cap=DEFAULT_CAP):
        """Members <= x packed into the bits of a Python int."""
        if x < 0:
            return 0
        return _mask_to_int(self.mask_upto(x, cap))


class Naturals(SetExpr):
    def member(self, x):
        return x >= 0

    def count(self, x):
        return max(x + 1, 0)

    def _elements(self, x):
        return list(range(x + 1))

    def mask_upto(self, x, cap=DEFAULT_CAP):
        if x + 1 > cap:
            raise CapExceeded(x + 1, cap)
        return np.ones(x + 1, dtype=bool)

    def __repr__(self):
        return "Naturals()"


class Explicit(SetExpr):
    """A finite set given by its elements."""

    def __init__(self, elements):
        els = tuple(sorted(set(int(e) for e in elements)))
        if els and els[0] < 0:
            raise ValueError("sets live in the nonnegative integers")
        self.elements = els

    def member(self, x):
        i = bisect.bisect_left(self.elements, x)
        return i < len(self.elements) and self.elements[i] == x

    def count(self, x):
        return bisect.bisect_right(self.elements, x)

    def _elements(self, x):
        return list(self.elements[: self.count(x)])

    def __repr__(self):
        return f"Explicit({list(self.elements)})"


class PowersOf(SetExpr):
    """{1, b, b**2, ...}"""

    def __init__(self, base):
        if base < 2:
            raise ValueError("base must be at least 2")
        self.base = base

    def member(self, x):
        if x < 1:
            return False
        while x % self.base == 0:
            x //= self.base
        return x == 1

    def count(self, x):
        c, p = 0, 1
        while p <= x:
            c += 1
            p *= self.base
        return c

    def _elements(self, x):
        return [self.base**j for j in range(self.count(x))]

    def __repr__(self):
        return f"PowersOf({self.base})"


class Mapped(SetExpr):
    """{G(g(a)) + a : a in base}, with 0 adjoined when ``adjoin_zero``.

    The map a -> G(g(a)) + a is strictly increasing, so counting reduces to
    counting ``base`` at the largest admissible preimage.
    """

    def __init__(self, base, schedule, adjoin_zero=True):
        self.base = base
        self.schedule = schedule
        self.adjoin_zero = adjoin_zero

    def preimage_bound(self, x):
        """Largest a with G(g(a)) + a <= x, or -1."""
        a = 0
        while a <= x and not self.schedule.Gg_exceeds(a, x - a):
            a += 1
        return a - 1

    def _zero_extra(self):
        if not self.adjoin_zero:
            return 0
        # 0 is already an image only when G(g(0)) == 0 and 0 is in the base
        return 0 if self.schedule.Gg(0) == 0 and self.base.member(0) else 1

    def member(self, x):
        if x == 0 and self.adjoin_zero:
            return True
        a = self.preimage_bound(x)
        return a >= 0 and self.schedule.mapped(a) == x and self.base.member(a)

    def count(self, x):
        if x < 0:
            return 0
        a = self.preimage_bound(x)
        base = self.base.count(a) if a >= 0 else 0
        total = base + self._zero_extra()
        return total if is_exact(base) else UpperBound(total)

    def _elements(self, x):
        a = self.preimage_bound(x)
        out = [self.schedule.mapped(v) for v in self.base.enumerate_upto(a)] if a >= 0 else []
        if self._zero_extra():
            out.insert(0, 0)
        return out

    def __repr__(self):
        return f"Mapped({self.base!r}, adjoin_zero={self.adjoin_zero})"


@dataclass(frozen=True)
class Block:
    """{modulus * t : lo_mult <= t <= hi_mult}"""

    modulus: int
    lo_mult: int
    hi_mult: int

    @property
    def lo(self):
        return self.modulus * self.lo_mult

    @property
    def hi(self):
        return self.modulus * self.hi_mult

    def __contains__(self, x):
        return x % self.modulus == 0 and self.lo_mult <= x // self.modulus <= self.hi_mult

    def count_upto(self, x):
        return max(0, min(self.hi_mult, x // self.modulus) - self.lo_mult + 1)


def block_of(schedule, h, n):
    """The n-th block [G(g(n))/k - 2, E(n+1)/k] * k with k = n - ceil(sqrt(n)).

    Non-integral endpoints are rounded inward (ceil / floor), matching the
    set-builder definition over the naturals.
    """
    if n < schedule.n_start:
        raise InvalidIndex(f"block index {n} is below n_start={schedule.n_start}")
    k = block_modulus(n)
    lo = max(ceil_div(schedule.Gg(n), k) - 2, 0)
    hi = schedule.boundary(n + 1, h) // k
    return Block(k, lo, hi)


class TailProgression(SetExpr):
    """[0, E(s) - 1] together with Block(n) for every n >= s.

    Here E(N) = G(g(N)) + h * G(g(N) - 1) and s = ``schedule.n_start``.
    Counting is closed form: a sweep over the pieces below x with
    inclusion-exclusion where pieces overlap (only adjacent ones do for
    sane schedules).
    """

    # extra slack in the stopping rule, covering short runs where G is flat
    _SLACK = 128

    def __init__(self, schedule, h):
        self.schedule = schedule
        self.h = h

    @property
    def n_start(self):
        return self.schedule.n_start

    def boundary(self, N):
        return self.schedule.boundary(N, self.h)

    def initial_end(self):
        """E(s): the initial interval is [0, E(s) - 1]."""
        return self.boundary(self.n_start)

    def block(self, n):
        return block_of(self.schedule, self.h, n)

    def window(self, y):
        """Largest N >= s with E(N) <= y, or None when y < E(s)."""
        sched, h = self.schedule, self.h
        N = self.n_start
        if sched.boundary_exceeds(N, h, y):
            return None
        while not sched.boundary_exceeds(N + 1, h, y):
            N += 1
        return N

    def pieces(self, x):
        """(lo, hi, modulus) for every piece meeting [0, x], hi clipped to x."""
        sched, h = self.schedule, self.h
        out = []
        s = self.n_start
        init_hi = x if sched.boundary_exceeds(s, h, x) else min(x, self.boundary(s) - 1)
        if init_hi >= 0:
            out.append((0, init_hi, 1))
        n = s
        while not sched.Gg_exceeds(n, x + 2 * (n + self._SLACK)):
            k = block_modulus(n)
            lo = k * max(ceil_div(sched.Gg(n), k) - 2, 0)
            if lo <= x:
                if sched.boundary_exceeds(n + 1, h, x):
                    hi = x
                else:
                    hi = min(x, self.boundary(n + 1) // k * k)
                if hi >= lo:
                    out.append((lo, hi, k))
            n += 1
        return out

    def member(self, x):
        if x < 0:
            return False
        return any(lo <= x <= hi and x % k == 0 for lo, hi, k in self.pieces(x))

    def count(self, x):
        if x < 0:
            return 0
        return union_count(self.pieces(x))

    def _elements(self, x):
        return np.flatnonzero(self.mask_upto(x)).tolist()

    def mask_upto(self, x, cap=DEFAULT_CAP):
        c = self.count(x)
        if c > cap:
            raise CapExceeded(c, cap)
        mask = np.zeros(x + 1, dtype=bool)
        for lo, hi, k in self.pieces(x):
            mask[lo : hi + 1 : k] = True
        return mask

    def enumerate_upto(self, x, cap=DEFAULT_CAP):
        if x < 0:
            return []
        return np.flatnonzero(self.mask_upto(x, cap)).tolist()

    def __repr__(self):
        return f"TailProgression(h={self.h}, n_start={self.n_start})"


def union_count(pieces):
    """Size of the union of arithmetic pieces {v in [lo, hi] : k | v}.

    Sweeps the elementary segments between piece endpoints and applies
    inclusion-exclusion over the pieces active on each segment.
    """
    cuts = sorted({lo for lo, _, _ in pieces} | {hi + 1 for _, hi, _ in pieces})
    total = 0
    for a, b in zip(cuts, cuts[1:]):
        active = [k for lo, hi, k in pieces if lo <= a and hi >= b - 1]
        if not active:
            continue
        if len(active) > 16:
            raise EnumerationRefused(f"{len(active)} pieces overlap on one segment")
        for r in range(1, len(active) + 1):
            sign = 1 if r % 2 else -1
            for combo in itertools.combinations(active, r):
                total += sign * _mult_count(a, b - 1, math.lcm(*combo))
    return total


class LazySum(SetExpr):
    """left + right, kept symbolic.

    Counting is exact (via the bitmap kernel) up to ``EXACT_SUM_LIMIT`` and
    falls back to the product bound ``count(left) * count(right)`` above it,
    returned as an :class:`UpperBound`.
    """

    def __init__(self, left, right, cap=DEFAULT_CAP):
        self.left = left
        self.right = right
        self.cap = cap

    def _sparse_side(self, x):
        for side, other in ((self.left, self.right), (self.right, self.left)):
            try:
                return side.enumerate_upto(x, self.cap), other
            except CapExceeded:
                continue
        raise EnumerationRefused(f"neither summand is enumerable below {x}")

    def member(self, x):
        if x < 0:
            return False
        els, other = self._sparse_side(x)
        return any(other.member(x - e) for e in els)

    def exact_count(self, x):
        if x < 0:
            return 0
        if x > EXACT_SUM_LIMIT:
            raise EnumerationRefused(f"exact sumset count above {EXACT_SUM_LIMIT}")
        from .analysis import sumset_upto

        try:
            return sumset_upto([self.left, self.right], x, cap=self.cap).bit_count()
        except CapExceeded as exc:
            raise EnumerationRefused(str(exc)) from exc

    def count(self, x):
        try:
            return self.exact_count(x)
        except EnumerationRefused:
            return UpperBound(self.left.count(x) * self.right.count(x))

    def enumerate_upto(self, x, cap=DEFAULT_CAP):
        if x < 0:
            return []
        mask = self.mask_upto(x, cap)
        return np.flatnonzero(mask).tolist()

    def mask_upto(self, x, cap=DEFAULT_CAP):
        from .analysis import sumset_mask

        try:
            mask = sumset_mask([self.left, self.right], x, cap=cap)
        except CapExceeded as exc:
            raise EnumerationRefused(str(exc)) from exc
        c = int(mask.sum())
        if c > cap:
            raise CapExceeded(c, cap)
        return mask

    def __repr__(self):
        return f"LazySum({self.left!r}, {self.right!r})"


def member(s, x):
    return s.member(x)


def count(s, x):
    return s.count(x)


def enumerate_upto(s, x, cap=DEFAULT_CAP):
    return s.enumerate_upto(x, cap)
