"""Command-line interface.

Exit status: 0 success, 1 verification failure (gap found, bad witness,
failed report), 2 usage error, 3 budget or cap exhausted.
"""

import argparse
import csv
import io
import json
import os
import re
import sys
from decimal import Decimal, localcontext

from . import analysis, construction, serialize
from .errors import BudgetExceeded, CapExceeded, CoverageFailure, EnumerationRefused, ScheduleRejected
from .numerics import digit_budget
from .sets import Explicit, Naturals, PowersOf

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

PRESETS = {
    "danzer": [{"g": {"rule": "square"}, "G": {"rule": "factorial"}}],
    "lcm3": [
        {"g": {"rule": "square"}, "G": {"rule": "lcm"}},
        {"g": {"rule": "adapted", "horizon": 30}, "G": {"rule": "lcm"}},
    ],
}


class UsageError(Exception):
    pass


def _rule(text, flag):
    name, _, arg = text.partition(":")
    if name in ("square", "identity", "factorial", "lcm"):
        if arg:
            raise UsageError(f"{flag}: rule {name!r} takes no argument")
        return {"rule": name}
    if name == "table":
        try:
            return {"rule": "table", "values": [int(v) for v in arg.split(":")]}
        except ValueError:
            raise UsageError(f"{flag}: table entries must be integers") from None
    if name == "adapted":
        return {"rule": "adapted", "horizon": int(arg) if arg else None}
    raise UsageError(f"{flag}: unknown rule {name!r}")


def parse_lift(text):
    """'g=square,G=factorial[,n_start=6][,unchecked]' -> lift dict."""
    out = {"n_start": 6, "unchecked": False}
    for item in filter(None, text.split(",")):
        key, _, value = item.partition("=")
        if key == "g":
            out["g"] = _rule(value, "--lift g")
        elif key == "G":
            out["G"] = _rule(value, "--lift G")
        elif key == "n_start":
            out["n_start"] = int(value)
        elif key == "unchecked":
            out["unchecked"] = value.lower() not in ("0", "false", "no")
        else:
            raise UsageError(f"--lift: unknown key {key!r}")
    if "g" not in out or "G" not in out:
        raise UsageError("--lift needs both g= and G=")
    return out


def parse_sets(text):
    """'{0,2},{0,4},N,pow:2' -> list of sets."""
    out = []
    for tok in re.findall(r"\{[^}]*\}|[^,\s]+", text):
        if tok.startswith("{"):
            body = tok[1:-1].strip()
            try:
                out.append(Explicit(int(v) for v in body.split(",") if v.strip()))
            except ValueError:
                raise UsageError(f"--sets: bad element in {tok}") from None
        elif tok == "N":
            out.append(Naturals())
        elif tok.startswith("pow:"):
            out.append(PowersOf(int(tok[4:])))
        else:
            raise UsageError(f"--sets: cannot parse {tok!r}")
    if not out:
        raise UsageError("--sets: no sets given")
    return out


def _load(path):
    with open(path) as fh:
        desc = serialize.loads_descriptor(fh.read())
    return desc


def _budget(desc):
    env = os.environ.get("ADDCOMP_DIGIT_BUDGET")
    return int(env) if env else desc["digit_budget"]


def _approx(num, den):
    with localcontext() as ctx:
        ctx.prec = 15
        return format(Decimal(num) / Decimal(den), "f")


def profile_csv(family, first, last):
    tail = family.tail
    if tail is not None:
        rows = []
        for N in range(first, last + 1):
            x = tail.boundary(N)
            if not rows or x > rows[-1][1]:
                rows.append((N, x))
    else:
        rows = [(j, 10**j) for j in range(first, last + 1)]
    prof = analysis.ratio_profile(family, [x for _, x in rows])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "x"] + [f"count_{i + 1}" for i in range(family.h)]
               + ["ratio_num", "ratio_den", "ratio_approx"])
    for (N, x), s in zip(rows, prof.samples):
        r = s.ratio
        w.writerow([N, x, *s.counts, r.numerator, r.denominator, _approx(r.numerator, r.denominator)])
    return buf.getvalue()


def cmd_build(args, out):
    if args.preset and args.lift:
        raise UsageError("--preset and --lift are exclusive")
    lifts = PRESETS[args.preset] if args.preset else [parse_lift(t) for t in args.lift or []]
    desc = serialize.descriptor(lifts, args.digit_budget, args.merges)
    with digit_budget(_budget(desc)):
        serialize.build_family(desc)  # validates the recipe
    text = serialize.dumps_descriptor(desc)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_decompose(args, out):
    desc = _load(args.family)
    with digit_budget(_budget(desc)):
        fam = serialize.build_family(desc)
        try:
            w = construction.decompose(fam, args.target, args.window)
        except CoverageFailure as exc:
            out.write(json.dumps({"target": str(args.target), "error": str(exc)}) + "\n")
            return EXIT_FAIL
    out.write(serialize.witness_to_json(w) + "\n")
    return EXIT_OK


def cmd_check_witness(args, out):
    desc = _load(args.family)
    text = sys.stdin.read() if args.witness == "-" else open(args.witness).read()
    w = serialize.witness_from_json(text)
    with digit_budget(_budget(desc)):
        fam = serialize.build_family(desc)
        problems = w.problems(fam)
    out.write(json.dumps({"target": str(w.target), "valid": not problems, "problems": problems}) + "\n")
    return EXIT_OK if not problems else EXIT_FAIL


def cmd_profile(args, out):
    desc = _load(args.family)
    with digit_budget(_budget(desc)):
        fam = serialize.build_family(desc)
        first = args.start if args.start is not None else (fam.tail.n_start if fam.tail else 1)
        out.write(profile_csv(fam, first, args.ladder_depth))
    return EXIT_OK


def cmd_scan(args, out):
    rep = analysis.scan(parse_sets(args.sets), args.bound)
    out.write(json.dumps({
        "bound": str(rep.bound),
        "covered": rep.covered,
        "first_gap": None if rep.first_gap is None else str(rep.first_gap),
    }) + "\n")
    return EXIT_OK if rep.covered else EXIT_FAIL


def cmd_verify(args, out):
    desc = _load(args.family)
    with digit_budget(_budget(desc)):
        fam = serialize.build_family(desc)
        rep = analysis.verify_family(fam, args.samples, args.depth, args.seed)
    out.write(json.dumps(rep.to_dict(), indent=2) + "\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_demo_danzer(args, out):
    fam = construction.danzer_family()
    out.write(profile_csv(fam, fam.tail.n_start, args.depth))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="addcomp", description="Exact additive complements toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="write a family descriptor")
    b.add_argument("--lift", action="append", help="g=RULE,G=RULE[,n_start=N][,unchecked]")
    b.add_argument("--preset", choices=sorted(PRESETS))
    b.add_argument("--merges", type=int, default=0, help="merge the last two sets this many times")
    b.add_argument("--digit-budget", type=int, default=10**5)
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_build)

    d = sub.add_parser("decompose", help="witness for one target")
    d.add_argument("--family", required=True)
    d.add_argument("--target", required=True, type=int)
    d.add_argument("--window", choices=["largest", "smallest"], default="largest")
    d.set_defaults(func=cmd_decompose)

    c = sub.add_parser("check-witness", help="re-verify a witness JSON")
    c.add_argument("--family", required=True)
    c.add_argument("--witness", required=True, help="file or - for stdin")
    c.set_defaults(func=cmd_check_witness)

    pr = sub.add_parser("profile", help="CSV counting profile on the ladder")
    pr.add_argument("--family", required=True)
    pr.add_argument("--ladder-depth", required=True, type=int)
    pr.add_argument("--start", type=int)
    pr.set_defaults(func=cmd_profile)

    s = sub.add_parser("scan", help="first gap of a finite sumset")
    s.add_argument("--sets", required=True, help="e.g. '{0,2},{0,4}' ; N ; pow:2")
    s.add_argument("--bound", required=True, type=int)
    s.set_defaults(func=cmd_scan)

    v = sub.add_parser("verify", help="JSON verification report")
    v.add_argument("--family", required=True)
    v.add_argument("--samples", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--depth", type=int, default=30, help="ratio ladder depth")
    v.set_defaults(func=cmd_verify)

    dd = sub.add_parser("demo-danzer", help="profile of the h=2 construction")
    dd.add_argument("--depth", type=int, default=12)
    dd.set_defaults(func=cmd_demo_danzer)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    serialize.allow_long_ints()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, ScheduleRejected, ValueError, OSError) as exc:
        print(f"addcomp {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetExceeded, CapExceeded, EnumerationRefused) as exc:
        print(f"addcomp {args.command}: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
