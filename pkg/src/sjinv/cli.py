"""Command line: run scenario files and list type enumerations.

Exit codes: 0 verdict OK, 1 verdict FAIL, 2 usage or parse error,
3 incoherent fixture.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .btypes.enumeration import enumeration_for
from .diffalg import DECIDERS, enumerate_types_n
from .presentations import ClassTag, FixtureIncoherent
from .scenario import CLASSES, ScenarioError, parse_scenario, run_scenario

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCOHERENT = 0, 1, 2, 3

ENUM_CLASSES = {
    "linear-order": ClassTag.LINEAR_ORDER,
    "boolean-algebra": ClassTag.BOOLEAN_ALGEBRA,
    "tree": ClassTag.TREE,
}
BUDGETS = {"small": 100, "medium": 1000, "large": 10000}


def _budget(text: str) -> int:
    if text in BUDGETS:
        return BUDGETS[text]
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"budget must be an integer or one of {', '.join(BUDGETS)}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("budget must be non-negative")
    return v


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sjinv", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario file and print a verdict")
    run.add_argument("scenario")
    run.add_argument("--stages", type=int, help="override the horizon")
    run.add_argument("--verify-prefix", type=int, help="override the verified prefix length")
    run.add_argument("--class", dest="class_tag", choices=CLASSES,
                     help="require the scenario to be of this class")
    run.add_argument("--trace-out", help="write the stage trace here instead of stdout")
    run.add_argument("--budget", type=_budget, help="decider budget (dcf0 scenarios)")

    en = sub.add_parser("enumerate", help="list an enumeration of types")
    en.add_argument("what", choices=sorted(ENUM_CLASSES) + ["dcf0"])
    en.add_argument("--max-index", type=int, default=10, help="how many valid indices to list")
    en.add_argument("--n", type=int, default=1, help="tuple length (dcf0)")
    en.add_argument("--budget", type=_budget, default=BUDGETS["small"])
    en.add_argument("--size-bound", type=int, default=5, help="formal size bound (dcf0)")
    en.add_argument("--probe", type=int, default=5, help="queries answered per type (dcf0)")
    en.add_argument("--decider", choices=sorted(DECIDERS), default="algebraic")
    return ap


def cmd_run(args, out) -> int:
    try:
        with open(args.scenario, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"sjinv: cannot read {args.scenario}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    try:
        sc = parse_scenario(text, args.scenario)
        if args.class_tag and args.class_tag != sc.class_tag:
            raise ScenarioError(f"scenario is {sc.class_tag}, not {args.class_tag}", None,
                                args.scenario)
        if args.stages is not None:
            sc.horizon = args.stages
        if args.verify_prefix is not None:
            sc.verify_prefix = args.verify_prefix
        if not sc.horizon >= sc.verify_prefix >= 0:
            raise ScenarioError("need horizon >= verify-prefix >= 0", None, args.scenario)
        outcome = run_scenario(sc, args.budget)
    except ScenarioError as exc:
        print(f"sjinv: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FixtureIncoherent as exc:
        print(f"sjinv: fixture incoherent: {exc}", file=sys.stderr)
        return EXIT_INCOHERENT
    lines = [str(e) for e in outcome.trace]
    if args.trace_out:
        with open(args.trace_out, "w", encoding="utf-8") as fh:
            fh.write("".join(line + "\n" for line in lines))
    else:
        for line in lines:
            print(line, file=out)
    for note in outcome.notes:
        print(f"# {note}", file=out)
    print(outcome.verdict, file=out)
    return EXIT_OK if outcome.ok else EXIT_FAIL


def cmd_enumerate(args, out) -> int:
    if args.what == "dcf0":
        if args.n < 1:
            print("sjinv: --n must be at least 1", file=sys.stderr)
            return EXIT_USAGE
        for rec in enumerate_types_n(args.n, args.budget, DECIDERS[args.decider](),
                                     size_bound=args.size_bound, probe=args.probe,
                                     on_stall="record"):
            print(rec.dump(), file=out)
        return EXIT_OK
    R = enumeration_for(ENUM_CLASSES[args.what])
    for i, code in R.listing(args.max_index):
        print(f"{i}: {code}", file=out)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = make_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "run":
        return cmd_run(args, out)
    return cmd_enumerate(args, out)


if __name__ == "__main__":
    sys.exit(main())
