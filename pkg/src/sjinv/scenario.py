"""Scenario files: a line-oriented format naming a fixture, its enumeration
schedule, the limit oracles, and the run parameters.

    # comments start with '#'
    CLASS linear-order
    FIXTURE
      blocks 1 3 2 4
      elements 40
    SCHEDULE
      pace 2
    ORACLE
      bound 4
    RUN
      horizon 5000
      verify-prefix 8
      seed 0

Classes and their keys:

* ``linear-order`` (the general engine): FIXTURE ``blocks n...`` (sizes of
  the blocks at successive dyadic positions), ``random-blocks N|depth``,
  ``default-block n``, ``elements n``, ``shuffle yes|no``; or ``keys q...``;
  or ``size n`` with ``lt a b`` facts. ORACLE ``bound N``.
* ``linear-order-buffer``: block fixtures as above; ORACLE
  ``reveal <element> <stage>`` (the element's block) and ``default-reveal s``.
* ``boolean-algebra``: FIXTURE ``atoms m``, ``depth d``; ORACLE
  ``wrong <atom> <stage>``.
* ``tree``: FIXTURE ``rules simple|recurrent``, ``nodes n``, ``mode oracle|observe``;
  ORACLE ``reveal <path> <stage>`` with paths like ``0`` or ``0.1``.
* ``equivalence``: FIXTURE ``pair n k [start stop]...`` (stop -1 = open).
* ``dcf0``: FIXTURE ``n``, ``size-bound``, ``probe``, ``decider``; RUN ``budget``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice
from typing import Callable, Optional

from .btypes.enumeration import RLabeling
from .diffalg import DECIDERS, enumerate_types_n
from .engine import (InsufficientPrefix, ba_build_labeled_copy, ordering_build_labeled_copy,
                     run_engine, tree_build_labeled_copy, verify_ba_prefix,
                     verify_prefix_isomorphism, verify_tree_result)
from .presentations import (RECURRENT_RULES, SIMPLE_RULES, BooleanAlgebraPresentation,
                            CharacterApprox, FixtureIncoherent, OrderPresentation,
                            RevealingSizes, Schedule, TreePresentation, block_order,
                            build_equivalence_copy, character_realized, exact_atom_oracle)
from .presentations.order import block_of, dyadic_depth, dyadic_positions
from .sizes import INF

CLASSES = ("linear-order", "linear-order-buffer", "boolean-algebra", "tree", "equivalence", "dcf0")
SECTIONS = ("FIXTURE", "SCHEDULE", "ORACLE", "RUN")
RULES = {"simple": SIMPLE_RULES, "recurrent": RECURRENT_RULES}


class ScenarioError(ValueError):
    """Parse error, with the offending line number."""

    def __init__(self, msg: str, line: Optional[int] = None, source: str = "<scenario>"):
        self.line = line
        loc = source if line is None else f"{source}:{line}"
        super().__init__(f"{loc}: {msg}")


@dataclass
class Scenario:
    class_tag: str
    fixture: dict = field(default_factory=dict)     # key -> list of (line, args)
    schedule: dict = field(default_factory=dict)
    oracle: dict = field(default_factory=dict)
    run: dict = field(default_factory=dict)
    horizon: int = 1000
    verify_prefix: int = 6
    seed: int = 0
    source: str = "<scenario>"

    def get(self, section: str, key: str, default=None):
        entries = getattr(self, section).get(key)
        return entries[-1][1] if entries else default

    def all(self, section: str, key: str) -> list:
        return getattr(self, section).get(key, [])

    def error(self, msg: str, section: str = "", key: str = "") -> ScenarioError:
        entries = getattr(self, section).get(key) if section else None
        return ScenarioError(msg, entries[-1][0] if entries else None, self.source)


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    class_tag = None
    section = None
    data: dict = {s: {} for s in ("fixture", "schedule", "oracle", "run")}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        if head == "CLASS":
            if len(words) != 2 or words[1] not in CLASSES:
                raise ScenarioError(f"CLASS must be one of {', '.join(CLASSES)}", no, source)
            class_tag = words[1]
            continue
        if head in SECTIONS:
            if len(words) != 1:
                raise ScenarioError(f"section header {head} takes no arguments", no, source)
            section = head.lower()
            continue
        if section is None:
            raise ScenarioError(f"'{head}' outside any section", no, source)
        data[section].setdefault(head, []).append((no, words[1:]))
    if class_tag is None:
        raise ScenarioError("missing CLASS line", None, source)
    sc = Scenario(class_tag, data["fixture"], data["schedule"], data["oracle"], data["run"],
                  source=source)
    sc.horizon = _int(sc, "run", "horizon", 1000)
    sc.verify_prefix = _int(sc, "run", "verify-prefix", 6)
    sc.seed = _int(sc, "run", "seed", 0)
    if not sc.horizon >= sc.verify_prefix >= 0:
        raise sc.error("need horizon >= verify-prefix >= 0", "run", "horizon")
    return sc


def _int(sc: Scenario, section: str, key: str, default: int) -> int:
    args = sc.get(section, key)
    if args is None:
        return default
    if len(args) != 1:
        raise sc.error(f"{key} takes one integer", section, key)
    try:
        return int(args[0])
    except ValueError:
        raise sc.error(f"{key}: not an integer: {args[0]!r}", section, key) from None


def _ints(sc: Scenario, section: str, key: str, args: list, line: int) -> list:
    try:
        return [int(a) for a in args]
    except ValueError:
        raise ScenarioError(f"{key}: expected integers, got {' '.join(args)!r}", line,
                            sc.source) from None


# -- running ----------------------------------------------------------------------------

@dataclass
class Outcome:
    ok: bool
    verdict: str
    trace: list
    notes: list = field(default_factory=list)


def _schedule(sc: Scenario, n: int) -> Schedule:
    stages = sc.get("schedule", "stages")
    if stages is not None:
        entry = sc.all("schedule", "stages")[-1]
        st = _ints(sc, "schedule", "stages", stages, entry[0])
        if len(st) < n:
            raise sc.error(f"stages lists {len(st)} stages for {n} elements", "schedule", "stages")
        return Schedule(st[:n])
    return Schedule(pace=_int(sc, "schedule", "pace", 1), limit=n)


def _prefix_iso(k: int, check: Callable[[], bool]) -> tuple[bool, str]:
    try:
        ok = check()
    except InsufficientPrefix as exc:
        return False, f"PREFIX-ISO k={k} FAIL ({exc})"
    return ok, f"PREFIX-ISO k={k} {'OK' if ok else 'FAIL'}"


def build_order_fixture(sc: Scenario, pace_default: int = 1) -> OrderPresentation:
    fx = sc.fixture
    if "keys" in fx:
        line, args = fx["keys"][-1]
        try:
            keys = [Fraction(a) for a in args]
        except (ValueError, ZeroDivisionError):
            raise ScenarioError("keys: expected rationals", line, sc.source) from None
        return OrderPresentation(keys, _schedule(sc, len(keys)))
    if "lt" in fx:
        n = _int(sc, "fixture", "size", 0)
        facts = set()
        for line, args in fx["lt"]:
            a, b = _ints(sc, "fixture", "lt", args, line) if len(args) == 2 else (None, None)
            if a is None:
                raise ScenarioError("lt takes two elements", line, sc.source)
            if not (0 <= a < n and 0 <= b < n):
                raise ScenarioError(f"lt {a} {b}: element outside 0..{n - 1}", line, sc.source)
            facts.add((a, b))
        return OrderPresentation(order_from_facts(n, facts), _schedule(sc, n))
    rng = random.Random(sc.seed)
    sizes: dict = {}
    listed = []
    if "blocks" in fx:
        line, args = fx["blocks"][-1]
        listed = _ints(sc, "fixture", "blocks", args, line)
        if any(m < 1 for m in listed):
            raise ScenarioError("block sizes must be positive", line, sc.source)
    positions = list(islice(dyadic_positions(), len(listed)))
    fixed = dict(zip(positions, listed))
    default = _int(sc, "fixture", "default-block", 1)
    rand = sc.get("fixture", "random-blocks")

    def size(q):
        if q in fixed:
            return fixed[q]
        if rand is not None:
            hi = dyadic_depth(q) + 1 if rand[0] == "depth" else int(rand[0])
            return sizes.setdefault(q, rng.randint(1, hi))
        return default

    total = _int(sc, "fixture", "elements", sum(listed) or 40)
    shuffle = (sc.get("fixture", "shuffle", ["yes"])[0] == "yes")
    return block_order(size, total, pace=_int(sc, "schedule", "pace", pace_default),
                       shuffle_within=shuffle)


def order_from_facts(n: int, facts: set) -> list:
    """Sort keys for a strict total order given as ``lt`` facts; the facts must
    be irreflexive, transitive and total."""
    for a, b in facts:
        if a == b:
            raise FixtureIncoherent(f"lt {a} {a} is reflexive")
        if (b, a) in facts:
            raise FixtureIncoherent(f"lt {a} {b} and lt {b} {a}")
    for a in range(n):
        for b in range(n):
            if a != b and (a, b) not in facts and (b, a) not in facts:
                raise FixtureIncoherent(f"{a} and {b} are incomparable")
    for a, b in facts:
        for c in range(n):
            if (b, c) in facts and (a, c) not in facts:
                raise FixtureIncoherent(f"lt {a} {b}, lt {b} {c} but not lt {a} {c}")
    return [sum(1 for (x, y) in facts if y == a) for a in range(n)]


def run_linear_order(sc: Scenario) -> Outcome:
    p = build_order_fixture(sc)
    bound = _int(sc, "oracle", "bound", 4)
    lab = RLabeling.observing(p, bound=bound)
    r = run_engine(p, lab, sc.horizon, epoch=p.count_at)
    k = sc.verify_prefix
    ok, verdict = _prefix_iso(k, lambda: verify_prefix_isomorphism(
        r.B.facts_at(sc.horizon), p, r.f, k, s=sc.horizon))
    notes = [f"injuries={len(r.injuries)} mapped={len(r.f)}"]
    return Outcome(ok, verdict, r.trace, notes)


def run_linear_order_buffer(sc: Scenario) -> Outcome:
    p = build_order_fixture(sc, pace_default=10)
    reveal = {}
    for line, args in sc.all("oracle", "reveal"):
        x, s = _ints(sc, "oracle", "reveal", args, line) if len(args) == 2 else (None, None)
        if x is None or not 0 <= x < len(p.keys):
            raise ScenarioError("reveal takes an element of the fixture and a stage", line, sc.source)
        reveal[block_of(p, x)] = s
    orc = RevealingSizes(p, reveal, default=_int(sc, "oracle", "default-reveal", 0))
    r = ordering_build_labeled_copy(p, sc.horizon, orc, epoch=orc.epoch)
    k = sc.verify_prefix
    ok, verdict = _prefix_iso(k, lambda: verify_prefix_isomorphism(
        r.B.facts_at(sc.horizon), p, r.f, k, s=sc.horizon))
    bufs = r.extra["buffers"]
    truth = all(p.true_size(c, z) is INF and p.true_size(z, z2) is INF and p.true_size(z2, c2) is INF
                for c, z, z2, c2 in bufs)
    notes = [f"injuries={len(r.injuries)} buffers={len(bufs)} buffers-infinite={truth}"]
    ok = ok and truth
    return Outcome(ok, f"PREFIX-ISO k={k} {'OK' if ok else 'FAIL'}", r.trace, notes)


def run_boolean_algebra(sc: Scenario) -> Outcome:
    m = _int(sc, "fixture", "atoms", 0)
    depth = _int(sc, "fixture", "depth", 4)
    try:
        p = BooleanAlgebraPresentation(m, Schedule(pace=_int(sc, "schedule", "pace", 1)),
                                       max_depth=depth)
    except ValueError as exc:
        raise sc.error(str(exc), "fixture", "depth") from None
    wrong = {}
    for line, args in sc.all("oracle", "wrong"):
        vals = _ints(sc, "oracle", "wrong", args, line)
        if len(vals) != 2 or not 0 <= vals[0] < m:
            raise ScenarioError("wrong takes an atom index and a stage", line, sc.source)
        wrong[vals[0]] = vals[1]
    p.atom_oracle = exact_atom_oracle(p, wrong)
    r = ba_build_labeled_copy(p, sc.horizon,
                              guess_epoch=lambda s: sum(1 for v in wrong.values() if v <= s))
    k = sc.verify_prefix
    conds = all(ok for _, ok in r.extra["conditions"])
    ok, verdict = _prefix_iso(k, lambda: verify_ba_prefix(r, p, k) and conds)
    return Outcome(ok, verdict, r.trace, [f"injuries={len(r.injuries)} conditions={conds}"])


def run_tree(sc: Scenario) -> Outcome:
    name = sc.get("fixture", "rules", ["simple"])[0]
    if name not in RULES:
        raise sc.error(f"rules must be one of {', '.join(RULES)}", "fixture", "rules")
    reveal = {}
    for line, args in sc.all("oracle", "reveal"):
        if len(args) != 2:
            raise ScenarioError("reveal takes a path and a stage", line, sc.source)
        try:
            path = tuple(int(x) for x in args[0].split(".")) if args[0] != "root" else ()
            reveal[path] = int(args[1])
        except ValueError:
            raise ScenarioError(f"bad reveal {' '.join(args)!r}", line, sc.source) from None
    mode = sc.get("fixture", "mode", ["oracle"])[0]
    p = TreePresentation(RULES[name], "I", _int(sc, "fixture", "nodes", 150),
                         pace=_int(sc, "schedule", "pace", 1), guess_mode=mode, reveal=reveal)
    r = tree_build_labeled_copy(p, sc.horizon)
    k = sc.verify_prefix
    ok, verdict = _prefix_iso(k, lambda: verify_tree_result(r, p, k))
    return Outcome(ok, verdict, r.trace, [f"injuries={len(r.injuries)} vowed={r.extra['vowed']}"])


def run_equivalence(sc: Scenario) -> Outcome:
    entries: dict = {}
    for line, args in sc.all("fixture", "pair"):
        vals = _ints(sc, "fixture", "pair", args, line)
        if len(vals) < 2 or len(vals) % 2 or min(vals[:2]) < 1:
            raise ScenarioError("pair takes n k and optional start/stop pairs", line, sc.source)
        spans = [(vals[i], vals[i + 1]) for i in range(2, len(vals), 2)] or [(0, -1)]
        entries[(vals[0], vals[1])] = spans
    char = CharacterApprox.scripted(entries)
    copy = build_equivalence_copy(char, sc.horizon)
    k = sc.verify_prefix
    ok = character_realized(copy, char, sc.horizon, k)
    sizes = sorted(copy.class_sizes(k).items())
    return Outcome(ok, f"PREFIX-ISO k={k} {'OK' if ok else 'FAIL'}", [],
                   [f"class sizes in prefix: {sizes}"])


def run_dcf0(sc: Scenario, budget: Optional[int] = None) -> Outcome:
    n = _int(sc, "fixture", "n", 1)
    decider = sc.get("fixture", "decider", ["algebraic"])[0]
    if decider not in DECIDERS:
        raise sc.error(f"decider must be one of {', '.join(DECIDERS)}", "fixture", "decider")
    budget = budget if budget is not None else _int(sc, "run", "budget", 1000)
    lines, bad = [], []
    for rec in enumerate_types_n(n, budget, DECIDERS[decider](),
                                 size_bound=_int(sc, "fixture", "size-bound", 6),
                                 probe=_int(sc, "fixture", "probe", 10), on_stall="record"):
        lines.append(rec.dump())
        for o in rec.oracles:
            bad += o.audit()
    ok = not bad
    return Outcome(ok, f"TYPE-AUDIT n={n} {'OK' if ok else 'FAIL'}", lines, bad[:5])


RUNNERS = {
    "linear-order": run_linear_order,
    "linear-order-buffer": run_linear_order_buffer,
    "boolean-algebra": run_boolean_algebra,
    "tree": run_tree,
    "equivalence": run_equivalence,
    "dcf0": run_dcf0,
}


def run_scenario(sc: Scenario, budget: Optional[int] = None) -> Outcome:
    if sc.class_tag == "dcf0":
        return run_dcf0(sc, budget)
    return RUNNERS[sc.class_tag](sc)
