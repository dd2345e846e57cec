import random

import pytest
from hypothesis import given, settings, strategies as st

from addcomp.errors import CapExceeded, InvalidIndex
from addcomp.schedule import Factorial, GrowthSchedule, Identity, LcmRange, Square, Table
from addcomp.sets import (
    Block,
    Explicit,
    LazySum,
    Mapped,
    Naturals,
    PowersOf,
    TailProgression,
    block_of,
    count,
    enumerate_upto,
    is_exact,
    member,
    union_count,
)

import oracles


def toy_tail(h=1, n_start=6):
    return TailProgression(GrowthSchedule(Identity(), Factorial(), n_start), h)


def danzer_b1():
    return Mapped(Naturals(), GrowthSchedule(Square(), Factorial()), adjoin_zero=True)


def test_member_examples():
    assert member(toy_tail(), 714)
    assert member(danzer_b1(), 26)
    assert not member(Explicit([0, 2]), 1)


def test_count_examples():
    assert count(Explicit([12, 15, 18, 21]), 18) == 3
    assert count(danzer_b1(), 10**6) == 5
    assert count(Naturals(), 100) == 101


def test_enumerate_examples():
    assert enumerate_upto(PowersOf(2), 20, 100) == [1, 2, 4, 8, 16]
    assert enumerate_upto(danzer_b1(), 10**6, 100) == [0, 1, 2, 26, 362883]
    assert enumerate_upto(Explicit([5]), 4, 10) == []


def test_enumerate_cap():
    with pytest.raises(CapExceeded):
        enumerate_upto(Naturals(), 1000, 10)


def test_literal_mapped_set_has_no_zero():
    literal = Mapped(Naturals(), GrowthSchedule(Square(), Factorial()), adjoin_zero=False)
    assert not literal.member(0)
    assert literal.count(10**6) == 4


def test_block_example():
    b = block_of(GrowthSchedule(Identity(), Factorial()), 1, 6)
    assert b == Block(3, 238, 1920)
    assert b.lo == 714 and 714 in b and 717 in b and 715 not in b


def test_block_below_start():
    with pytest.raises(InvalidIndex):
        block_of(GrowthSchedule(Square(), Factorial()), 1, 1)


def test_nonintegral_endpoints_round_inward():
    # G values not divisible by the modulus: lo = ceil(G/k) - 2, hi = floor(E/k)
    sched = GrowthSchedule(Identity(), Table_G([1, 1, 2, 6, 24, 121, 721, 5041, 40321]), 6)
    b = block_of(sched, 1, 6)
    assert b.lo_mult == -(-721 // 3) - 2
    assert b.hi_mult == (5041 + 721) // 3


def Table_G(values):
    from addcomp.schedule import GTable

    return GTable(values)


def test_powers_count():
    p = PowersOf(3)
    assert [p.count(x) for x in (0, 1, 2, 3, 8, 9, 26, 27)] == [0, 1, 1, 2, 2, 3, 3, 4]


@given(st.lists(st.integers(0, 10**6), max_size=50), st.integers(-1, 10**6 + 5))
def test_explicit_count_matches_list(elements, x):
    s = Explicit(elements)
    assert s.count(x) == len({e for e in elements if e <= x})


def tail_configs():
    return [
        (Identity(), Factorial(), 1, 6),
        (Identity(), Factorial(), 2, 6),
        (Identity(), Factorial(), 3, 7),
        (Table(range(1, 60)), Factorial(), 1, 5),
        (Table([2 * n for n in range(60)]), LcmRange(), 1, 6),
        (Table([2 * n for n in range(60)]), LcmRange(), 2, 6),
    ]


@pytest.mark.parametrize("g, G, h, s", tail_configs())
def test_tail_count_matches_bruteforce(g, G, h, s):
    limit = 10**6
    tail = TailProgression(GrowthSchedule(g, G, s), h)
    ref = sorted(oracles.tail_elements(g, oracles.independent_G(G.name), h, s, limit))
    import bisect

    rng = random.Random(11)
    for x in [0, 1, limit] + [rng.randint(0, limit) for _ in range(300)]:
        assert tail.count(x) == bisect.bisect_right(ref, x)
    assert tail.enumerate_upto(limit, cap=10**6) == ref


def test_tail_overlapping_nonadjacent_blocks_counted_once():
    # with lcm and g(n) = 2n, block 6 reaches past the start of block 8
    sched = GrowthSchedule(Table([2 * n for n in range(60)]), LcmRange(), 6)
    b6, b8 = block_of(sched, 1, 6), block_of(sched, 1, 8)
    assert b6.hi >= b8.lo
    tail = TailProgression(sched, 1)
    ref = oracles.tail_elements(sched.g, oracles.lcm_fold, 1, 6, 10**6)
    assert tail.count(10**6) == len(ref)


def test_tail_initial_interval():
    tail = TailProgression(GrowthSchedule(Square(), Factorial()), 1)
    E6 = tail.initial_end()
    assert tail.count(E6 - 1) == E6
    assert tail.count(10**6) == 10**6 + 1


@pytest.mark.parametrize("n", range(6, 40))
def test_classic_blocks_only_adjacent_overlap(n):
    sched = GrowthSchedule(Square(), Factorial())
    assert block_of(sched, 1, n).hi < block_of(sched, 1, n + 2).lo


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6 - 1))
def test_membership_count_consistency(x):
    for s in (toy_tail(), toy_tail(2), danzer_b1(), PowersOf(2), Explicit([3, 9, 27, 10**5])):
        assert (s.count(x) - s.count(x - 1) == 1) == s.member(x)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**7), st.integers(0, 10**7))
def test_count_monotone(x, y):
    x, y = min(x, y), max(x, y)
    for s in (toy_tail(), danzer_b1(), PowersOf(5)):
        assert s.count(x) <= s.count(y)


@given(st.integers(0, 30), st.integers(0, 30))
def test_mapped_strictly_increasing(a, b):
    sched = GrowthSchedule(Square(), Factorial())
    if a < b:
        assert sched.mapped(a) < sched.mapped(b)


@given(st.lists(st.tuples(st.integers(0, 400), st.integers(0, 400), st.integers(1, 12)), max_size=8))
def test_union_count_matches_set(raw):
    pieces = [(min(a, b), max(a, b), k) for a, b, k in raw]
    brute = {v for lo, hi, k in pieces for v in range(lo, hi + 1) if v % k == 0}
    assert union_count(pieces) == len(brute)


def test_lazysum_member_and_exact_count():
    s = LazySum(Explicit([0, 1]), Explicit([0, 2]))
    assert s.member(3) and not s.member(4)
    assert s.count(10) == 4 and is_exact(s.count(10))


def test_lazysum_upper_bound_marker():
    from addcomp import sets

    s = LazySum(danzer_b1(), Naturals())
    big = sets.EXACT_SUM_LIMIT + 1
    c = s.count(big)
    assert not is_exact(c)
    assert c == danzer_b1().count(big) * (big + 1)
