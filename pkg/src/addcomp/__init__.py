"""Exact additive complements: the recursive construction, constructive
decompositions, exact counting functions and finite-scale verification."""

from .analysis import (
    classify_growth,
    coverage_gap,
    ratio_profile,
    representation_count,
    sumset_upto,
    verify_family,
)
from .construction import (
    Family,
    Witness,
    base_family,
    danzer_family,
    decompose,
    lcm_family,
    lift,
    lower_bound_lift,
    merge_last,
)
from .errors import BudgetExceeded, CoverageFailure, ScheduleRejected
from .numerics import digit_budget
from .schedule import GrowthSchedule, classic_schedule
from .sets import Block, Explicit, LazySum, Mapped, Naturals, PowersOf, TailProgression, block_of

__version__ = "0.1.0"

__all__ = [
    "Block", "BudgetExceeded", "CoverageFailure", "Explicit", "Family", "GrowthSchedule",
    "LazySum", "Mapped", "Naturals", "PowersOf", "ScheduleRejected", "TailProgression",
    "Witness", "base_family", "block_of", "classify_growth", "coverage_gap", "danzer_family",
    "decompose", "digit_budget", "lcm_family", "lift", "lower_bound_lift", "merge_last",
    "classic_schedule", "ratio_profile", "representation_count", "sumset_upto", "verify_family",
]
