"""Family descriptors: small JSON recipes from which a family is rebuilt.

Sets are infinite, so files store the construction (the lift schedules and
the number of trailing merges), never materialised elements. Big integers
travel as decimal strings.
"""

import json
import sys

from .construction import Witness, base_family, lift, merge_last
from .numerics import DEFAULT_DIGIT_BUDGET
from .schedule import GrowthSchedule

VERSION = 1


def allow_long_ints():
    # Python >= 3.10.7 caps int <-> str conversion at 4300 digits by default
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)


def descriptor(lifts, digit_budget=DEFAULT_DIGIT_BUDGET, merges=0):
    """Canonical descriptor dict; ``lifts`` holds schedule dicts plus an
    optional ``unchecked`` flag."""
    out = []
    for step in lifts:
        out.append({
            "g": dict(step["g"]),
            "G": dict(step["G"]),
            "n_start": int(step.get("n_start", 6)),
            "unchecked": bool(step.get("unchecked", False)),
        })
    return {"version": VERSION, "digit_budget": int(digit_budget), "lifts": out, "merges": int(merges)}


def descriptor_of(family, digit_budget=DEFAULT_DIGIT_BUDGET):
    lifts = [dict(step.schedule.to_dict(), unchecked=step.unchecked) for step in family.history]
    return descriptor(lifts, digit_budget, family.n_merges)


def dumps_descriptor(desc):
    return json.dumps(desc, sort_keys=True, indent=2) + "\n"


def loads_descriptor(text):
    d = json.loads(text)
    if d.get("version") != VERSION:
        raise ValueError(f"unsupported descriptor version {d.get('version')!r}")
    return descriptor(d["lifts"], d.get("digit_budget", DEFAULT_DIGIT_BUDGET), d.get("merges", 0))


def build_family(desc):
    fam = base_family()
    for step in desc["lifts"]:
        sched = GrowthSchedule.from_dict(step, fam.lower_bound)
        fam = lift(fam, sched, unchecked=step.get("unchecked", False))
    for _ in range(desc.get("merges", 0)):
        fam = merge_last(fam)
    return fam


def witness_to_json(w):
    return json.dumps({"target": str(w.target), "parts": [str(p) for p in w.parts]},
                      separators=(",", ":"))


def witness_from_json(text):
    d = json.loads(text)
    return Witness(int(d["target"]), tuple(int(p) for p in d["parts"]))
