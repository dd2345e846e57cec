"""Growth schedules: the pair (g, G) that parameterises one lift.

``g`` is a strictly increasing map on the naturals and ``G`` a nondecreasing
map whose value at m is divisible by every k <= m (factorial and lcm-range
both qualify). The classical instance is g(n) = n**2, G = factorial.
"""

import threading
from dataclasses import dataclass, field

from . import numerics
from .errors import BudgetExceeded, InvalidIndex, ScheduleDomainError


class Square:
    name = "square"

    def __call__(self, n):
        return n * n

    def to_dict(self):
        return {"rule": self.name}


class Identity:
    name = "identity"

    def __call__(self, n):
        return n

    def to_dict(self):
        return {"rule": self.name}


class Table:
    """Explicit finite table; evaluation past its end is an error."""

    name = "table"

    def __init__(self, values):
        self.values = tuple(int(v) for v in values)

    def __call__(self, n):
        if 0 <= n < len(self.values):
            return self.values[n]
        raise ScheduleDomainError(f"table of length {len(self.values)} has no entry {n}")

    def to_dict(self):
        return {"rule": self.name, "values": list(self.values)}


class Adapted:
    """g(m) = max(g(m-1) + 1, (max{n : f(n) <= m})**2) for a lower-bound f.

    By construction g(f(n)) >= n**2. With ``horizon`` set, the inner maximum
    only ranges over n <= horizon, so the guarantee holds for n <= horizon;
    otherwise the exact inverse of f is used (often astronomically large).
    """

    name = "adapted"

    def __init__(self, lower_bound, horizon=None):
        self.lower_bound = lower_bound
        self.horizon = horizon
        self._values = []
        self._lock = threading.Lock()

    def _last_at_most(self, m):
        if self.horizon is None:
            return self.lower_bound.last_at_most(m)
        f = self.lower_bound
        n = self.horizon
        while n > 0 and f(n) > m:
            n -= 1
        return n

    def __call__(self, m):
        if m < 0:
            raise InvalidIndex(f"g is defined on the naturals, got {m}")
        with self._lock:
            while len(self._values) <= m:
                i = len(self._values)
                prev = self._values[-1] if self._values else -1
                self._values.append(max(prev + 1, self._last_at_most(i) ** 2))
            return self._values[m]

    def to_dict(self):
        return {"rule": self.name, "horizon": self.horizon}


def _exceeds(G, m, bound):
    if numerics.lower_bound_exceeds(m, bound):
        return True
    try:
        return G(m) > bound
    except BudgetExceeded:
        # the value is over budget; if the bound is not, the value is larger
        if numerics.digits_of(bound) + 1 < numerics.get_digit_budget():
            return True
        raise


class Factorial:
    name = "factorial"
    divisible = True

    def __call__(self, m):
        return numerics.factorial(m)

    def exceeds(self, m, bound):
        return _exceeds(self, m, bound)

    def to_dict(self):
        return {"rule": self.name}


class LcmRange:
    """lcm(1..m): keeps the divisibility property but grows like e**m, so it
    supports coverage experiments while losing the step ratio that exactness
    needs."""

    name = "lcm"
    divisible = True

    def __call__(self, m):
        return numerics.lcm_upto(m)

    def exceeds(self, m, bound):
        return _exceeds(self, m, bound)

    def to_dict(self):
        return {"rule": self.name}


class GTable(Table):
    divisible = None  # decided by sampling

    def exceeds(self, m, bound):
        return self(m) > bound


G_RULES = {"factorial": Factorial, "lcm": LcmRange}


def g_rule_from_dict(d, lower_bound=None):
    rule = d["rule"]
    if rule == "square":
        return Square()
    if rule == "identity":
        return Identity()
    if rule == "table":
        return Table(d["values"])
    if rule == "adapted":
        if lower_bound is None:
            raise ValueError("adapted g needs the lower bound of the family being lifted")
        return Adapted(lower_bound, d.get("horizon"))
    raise ValueError(f"unknown g rule {rule!r}")


def G_rule_from_dict(d):
    rule = d["rule"]
    if rule == "table":
        return GTable(d["values"])
    try:
        return G_RULES[rule]()
    except KeyError:
        raise ValueError(f"unknown G rule {rule!r}") from None


@dataclass(frozen=True, eq=False)
class GrowthSchedule:
    g: object
    G: object
    n_start: int = 6
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.n_start < 2:
            raise InvalidIndex("n_start must be at least 2 so block moduli are positive")

    def Gg(self, n):
        """G(g(n)), memoised."""
        try:
            return self._memo[n]
        except KeyError:
            value = self.G(self.g(n))
            self._memo[n] = value
            return value

    def Gg_exceeds(self, n, bound):
        if n in self._memo:
            return self._memo[n] > bound
        return self.G.exceeds(self.g(n), bound)

    def mapped(self, a):
        return self.Gg(a) + a

    def boundary(self, N, h):
        """The ladder value G(g(N)) + h * G(g(N) - 1)."""
        gN = self.g(N)
        return self.Gg(N) + h * self.G(gN - 1)

    def boundary_exceeds(self, N, h, bound):
        return self.Gg_exceeds(N, bound) or self.boundary(N, h) > bound

    def check(self, upto=200):
        """Sampled structural checks; returns a dict of name -> first failure or None."""
        out = {"g_increasing": None, "G_nondecreasing": None, "G_divisibility": None}
        prev = None
        for n in range(upto + 1):
            try:
                v = self.g(n)
            except ScheduleDomainError:
                break
            if prev is not None and v <= prev:
                out["g_increasing"] = n
                break
            prev = v
        prev = None
        for m in range(min(upto, 400) + 1):
            try:
                v = self.G(m)
            except ScheduleDomainError:
                break
            if prev is not None and v < prev:
                out["G_nondecreasing"] = m
                break
            if out["G_divisibility"] is None and any(v % k for k in range(1, m + 1)):
                out["G_divisibility"] = m
            prev = v
        return out

    def to_dict(self):
        return {"g": self.g.to_dict(), "G": self.G.to_dict(), "n_start": self.n_start}

    @classmethod
    def from_dict(cls, d, lower_bound=None):
        return cls(g_rule_from_dict(d["g"], lower_bound), G_rule_from_dict(d["G"]), int(d.get("n_start", 6)))


def classic_schedule():
    """g(n) = n**2, G = factorial, starting at n = 6."""
    return GrowthSchedule(Square(), Factorial(), 6)
