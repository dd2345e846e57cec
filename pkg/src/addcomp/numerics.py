"""Exact integer helpers with a decimal-digit budget.

Every potentially huge result is checked against a budget (default 10**5
decimal digits, overridable through ``ADDCOMP_DIGIT_BUDGET`` or the
:func:`digit_budget` context manager) before it is materialised.
"""

import bisect
import contextlib
import contextvars
import math
import os
from functools import lru_cache

from .errors import BudgetExceeded, InvalidIndex, NotDivisible

DEFAULT_DIGIT_BUDGET = 10**5
_LOG10_2 = 0.30102999566398120

_budget = contextvars.ContextVar("digit_budget", default=None)


def get_digit_budget():
    value = _budget.get()
    if value is not None:
        return value
    env = os.environ.get("ADDCOMP_DIGIT_BUDGET")
    return int(env) if env else DEFAULT_DIGIT_BUDGET


@contextlib.contextmanager
def digit_budget(digits):
    """Temporarily set the digit budget for the current context."""
    token = _budget.set(int(digits))
    try:
        yield
    finally:
        _budget.reset(token)


def digits_of(n):
    """Cheap estimate of the number of decimal digits of ``n``."""
    return int(n.bit_length() * _LOG10_2) + 1


def _check(what, estimate):
    budget = get_digit_budget()
    if estimate > budget:
        raise BudgetExceeded(what, int(estimate), budget)


def factorial(m):
    if m < 0:
        raise InvalidIndex(f"factorial of negative {m}")
    if m > 1:
        # Stirling estimate of log10(m!); the margin absorbs its tiny error
        _check(f"factorial({m})", math.lgamma(m + 1) / math.log(10) - 1)
    return _factorial(m)


@lru_cache(maxsize=4096)
def _factorial(m):
    return math.factorial(m)


def lcm_upto(m):
    """lcm(1, ..., m); the empty range (m = 0) gives 1."""
    if m < 0:
        raise InvalidIndex(f"lcm_upto of negative {m}")
    # log lcm(1..m) = psi(m) < 1.03883 m
    _check(f"lcm_upto({m})", 1.03883 * m / math.log(10) - 1)
    return _lcm_upto(m)


@lru_cache(maxsize=4096)
def _lcm_upto(m):
    result = 1
    for p in primes_upto(m):
        q = p
        while q * p <= m:
            q *= p
        result *= q
    return result


@lru_cache(maxsize=64)
def _sieve(limit):
    flags = bytearray([1]) * (limit + 1)
    flags[:2] = b"\x00\x00"[: min(2, limit + 1)]
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return tuple(i for i in range(limit + 1) if flags[i])


def primes_upto(m):
    if m < 2:
        return ()
    # sieve in power-of-two chunks so the cache is reused across calls
    limit = 1 << max(m.bit_length(), 6)
    primes = _sieve(limit)
    return primes[: bisect.bisect_right(primes, m)]


def ceil_sqrt(n):
    """Smallest s with s*s >= n."""
    if n < 0:
        raise InvalidIndex(f"ceil_sqrt of negative {n}")
    if n == 0:
        return 0
    return math.isqrt(n - 1) + 1


def block_modulus(n):
    """n - ceil(sqrt(n)), the modulus of the n-th progression block."""
    if n < 2:
        raise InvalidIndex(f"block modulus needs n >= 2, got {n}")
    return n - ceil_sqrt(n)


def exact_div(a, b):
    if b < 1:
        raise InvalidIndex(f"divisor must be positive, got {b}")
    q, r = divmod(a, b)
    if r:
        raise NotDivisible(a, b, r)
    return q


def ceil_div(a, b):
    return -(-a // b)


def lower_bound_exceeds(m, bound):
    """True when 2**(m-1) > bound, a cheap certificate that m! and
    lcm(1..m) both exceed ``bound`` without computing them."""
    return m >= 1 and m - 1 >= bound.bit_length()
