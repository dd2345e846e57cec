import math
import random

import pytest

from addcomp import numerics
from addcomp.construction import (
    IdentityBound,
    Witness,
    base_family,
    danzer_family,
    decompose,
    lcm_family,
    lift,
    lower_bound_lift,
    merge_last,
)
from addcomp.errors import CoverageFailure, InvalidArity, ScheduleRejected
from addcomp.schedule import Factorial, GrowthSchedule, Identity, classic_schedule
from addcomp.sets import Explicit, LazySum, Mapped, TailProgression, block_of

import oracles

f = math.factorial
E6 = f(36) + f(35)


@pytest.fixture(scope="module")
def danzer():
    return danzer_family()


def test_base_family():
    fam = base_family()
    assert fam.h == 1
    assert fam.sets[0].member(7)
    assert fam.lower_bound(42) == 42
    assert fam.sets[0].count(10) == 11


def test_base_decompose_exhaustive():
    fam = base_family()
    assert all(decompose(fam, y).parts == (y,) for y in range(10**4 + 1))


def test_block_of_classic_schedule():
    b = block_of(classic_schedule(), 1, 6)
    assert b.modulus == 3
    assert b.lo_mult == f(36) // 3 - 2
    assert b.hi_mult == (f(49) + f(48)) // 3


def test_lift_shape(danzer):
    assert danzer.h == 2
    assert isinstance(danzer.sets[0], Mapped) and isinstance(danzer.sets[1], TailProgression)
    assert danzer.sets[0].member(362883)
    assert danzer.sets[1].count(E6 - 1) == E6


def test_identity_schedule_rejected():
    with pytest.raises(ScheduleRejected) as info:
        lift(base_family(), GrowthSchedule(Identity(), Factorial()))
    assert info.value.report["g_of_f"] == 2


def test_lower_bound_lift_examples():
    fb = lower_bound_lift(IdentityBound(), classic_schedule(), 1)
    assert fb(5) == 0
    assert fb(E6 - 1) == 0
    assert fb(E6) == 3
    E7 = f(49) + f(48)
    assert fb(E7) >= fb(E6)


def test_lower_bound_monotone_and_growing(danzer):
    tail = danzer.sets[1]
    values = [danzer.lower_bound(tail.boundary(N)) for N in range(6, 40)]
    assert values == sorted(values)
    assert values[-1] > values[0]
    assert values == [numerics.ceil_sqrt(N) for N in range(6, 40)]


def test_lower_bound_inverse(danzer):
    fb = danzer.lower_bound
    assert fb.last_at_most(0) == E6 - 1
    n = fb.last_at_most(3)
    assert fb(n) <= 3 < fb(n + 1)


def test_decompose_initial_interval(danzer):
    assert decompose(danzer, 5).parts == (0, 5)
    assert decompose(danzer, 0).parts == (0, 0)


def test_decompose_at_first_boundary(danzer):
    w = decompose(danzer, E6)
    assert w.parts == (362883, E6 - 362883)
    assert (w.window, w.modulus) == (6, 3)
    lo, hi = f(36) - 6, f(49) + f(48)
    assert w.parts[1] % 3 == 0 and lo <= w.parts[1] <= hi


def stratified(tail, first, last, per, seed):
    rng = random.Random(seed)
    out = []
    for N in range(first, last):
        a, b = tail.boundary(N), tail.boundary(N + 1)
        if a == b:  # flat step of an lcm ladder
            continue
        out += [a, b - 1] + [rng.randint(a, b - 1) for _ in range(per)]
    return out


@pytest.mark.parametrize("window", ["largest", "smallest"])
def test_decompose_every_window(danzer, window):
    tail = danzer.sets[1]
    for y in stratified(tail, 6, 20, 15, 3):
        w = decompose(danzer, y, window)
        assert sum(w.parts) == y
        assert all(oracles.member(danzer, i, p) for i, p in enumerate(w.parts))
        assert (w.parts[0] - y) % w.modulus == 0
        assert min(w.parts) >= danzer.lower_bound(y)


def test_window_choices_differ_only_on_boundaries(danzer):
    tail = danzer.sets[1]
    E8 = tail.boundary(8)
    assert decompose(danzer, E8, "largest").window == 8
    assert decompose(danzer, E8, "smallest").window == 7
    assert decompose(danzer, E8 + 1, "smallest").window == 8


def test_decompose_deterministic(danzer):
    y = 10**200 + 12345
    assert decompose(danzer, y) == decompose(danzer, y)


def test_unchecked_schedule_reports_coverage_failure():
    bad = lift(base_family(), GrowthSchedule(Identity(), Factorial()), unchecked=True)
    tail = bad.sets[1]
    failures = 0
    for y in stratified(tail, 6, 12, 10, 5):
        try:
            w = decompose(bad, y)
        except CoverageFailure:
            failures += 1
        else:
            assert not w.problems(bad)
    assert failures > 0


def test_h3_surrogate_structure():
    fam = lcm_family(3, horizon=30)
    assert fam.h == 3
    g = fam.sets[-1].schedule.g
    assert [g(m) for m in range(3)] == [900, 901, 902]
    # adapted g meets g(f(n)) >= n^2 on its horizon
    assert all(g(fam.parent.lower_bound(n)) >= n * n for n in range(31))


def test_h3_decompose_stratified():
    fam = lcm_family(3, horizon=30)
    tail = fam.sets[-1]
    for y in stratified(tail, 6, 14, 5, 9):
        w = decompose(fam, y)
        assert sum(w.parts) == y
        assert all(oracles.member(fam, i, p) for i, p in enumerate(w.parts))
        assert (sum(w.parts[:-1]) - y) % w.modulus == 0


def test_merge_last_small():
    fam = base_family()
    from addcomp.construction import Family

    two = Family((Explicit([0, 1]), Explicit([0, 2])), IdentityBound(), kind="lift")
    merged = merge_last(two)
    assert isinstance(merged.sets[-1], LazySum)
    assert merged.sets[-1].member(3)
    with pytest.raises(InvalidArity):
        merge_last(fam)


def test_merge_witness_transfer():
    fam = lcm_family(3, horizon=30)
    merged = merge_last(fam)
    assert merged.h == 2
    tail = fam.sets[-1]
    for y in stratified(tail, 6, 10, 3, 1):
        w, v = decompose(merged, y), decompose(fam, y)
        assert w.parts == (v.parts[0], v.parts[1] + v.parts[2])
        assert sum(w.parts) == y


def test_witness_problems_detects_tampering(danzer):
    w = decompose(danzer, E6 + 7)
    bad = Witness(w.target, (w.parts[0] + 1, w.parts[1] - 1), w.window, w.modulus)
    assert bad.problems(danzer)
