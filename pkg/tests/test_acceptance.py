"""Acceptance suite: one PASS/FAIL line per criterion.

Each check returns ``(ok, detail)``; the line is recorded for the terminal
summary (see conftest.py) and the test then asserts ``ok``.  Run this module
directly to print the lines without pytest."""
import contextlib
import io
import random
import time
from collections import Counter
from pathlib import Path

import pytest

from sjinv.btypes import BAType, OrderType, gap, size_ge
from sjinv.btypes.enumeration import RLabeling
from sjinv.btypes.theory_tree import grow, paths_bruteforce
from sjinv.cli import main
from sjinv.completion import GeneratedType, complete_type, is_generated, realize
from sjinv.diffalg import (NONE_FOUND, QQ, AlgebraicDecider, Rank, enumerate_types_n,
                           formal_polys, materialize_poly, probe_queries, rank_of,
                           reducibility_witness)
from sjinv.diffalg.poly import DifferentialPolynomial as DP
from sjinv.engine import (ba_build_labeled_copy, ordering_build_labeled_copy, run_engine,
                          verify_prefix_isomorphism)
from sjinv.engine.trees import TreeBuilder
from sjinv.presentations import (RECURRENT_RULES, SIMPLE_RULES, BooleanAlgebraPresentation,
                                 CharacterApprox, RevealingSizes, Schedule, TreePresentation,
                                 block_order, build_equivalence_copy, exact_atom_oracle)
from sjinv.presentations.order import block_of, dyadic_depth
from sjinv.presentations.tree import canon
from sjinv.sizes import INF

RESULTS: list = []
SCN = Path(__file__).resolve().parent.parent / "scenarios"


def report(n, ok, detail):
    RESULTS.append(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    return ok


# -- 1: general engine on bounded-block orderings ------------------------------------------

def criterion_1():
    t0 = time.time()
    rows = []
    for seed in range(10):
        rng = random.Random(seed)
        sizes = {}
        p = block_order(lambda q: sizes.setdefault(q, rng.randint(1, 4)), 40 + 2 * seed,
                        pace=rng.randint(1, 5), shuffle_within=True)
        r = run_engine(p, RLabeling.observing(p, bound=4), 5000, epoch=p.count_at)
        iso = verify_prefix_isomorphism(r.B.facts_at(5000), p, r.f, 8)
        late = [i for i in r.injuries if i.stage > p.settle_stage()]
        rows.append(iso and not late)
    dt = time.time() - t0
    ok = all(rows) and dt < 10
    return ok, f"{sum(rows)}/10 fixtures prefix-8 OK with no late injury, {dt:.1f}s (<10s)"


# -- 2: buffer pairs ------------------------------------------------------------------------------

def criterion_2(H=10000, pace=10):
    good = 0
    for seed in range(5):
        rng = random.Random(seed)
        sizes = {}
        p = block_order(lambda q: sizes.setdefault(q, rng.randint(1, dyadic_depth(q) + 1)),
                        H // pace + 1, pace=pace, shuffle_within=True)
        blocks = list(dict.fromkeys(block_of(p, x) for x in range(12)))
        multi = [q for q in blocks if sizes[q] > 1]
        # scripted flips: these blocks look infinite until their reveal stage
        reveal = {q: rng.randint(20, 300) for q in rng.sample(multi, min(3, len(multi)))}
        orc = RevealingSizes(p, reveal)
        r = ordering_build_labeled_copy(p, H, orc, epoch=orc.epoch)
        iso = verify_prefix_isomorphism(r.B.facts_at(H), p, r.f, 6)
        bufs = r.extra["buffers"]
        truth = all(p.true_size(c, z) is INF and p.true_size(z, z2) is INF
                    and p.true_size(z2, c2) is INF for c, z, z2, c2 in bufs)
        good += bool(iso and truth and bufs)
    return good == 5, f"{good}/5 fixtures prefix-6 OK with every buffer interval infinite"


# -- 3: Boolean algebras --------------------------------------------------------------------------

def _cells_agree(p, bld, f, bs):
    """All 2^len(bs) sign vectors: the B cell and the A cell have the same size."""
    leaves = sorted(bld.B.leaves())
    bit = {x: 1 << i for i, x in enumerate(leaves)}
    bmask = [sum(bit[x] for x in bld.B.elems[b]) for b in bs]
    full_b = (1 << len(leaves)) - 1
    avals = [p.value(f[b]) for b in bs]
    one = p.one
    label = {bit[x]: bld.B.label_of[x] for x in leaves}

    def bsize(m):
        n = 0
        while m:
            low = m & -m
            if label[low] is INF:
                return INF
            n += 1
            m ^= low
        return n

    def rec(i, mb, ma):
        if i == len(bs):
            return bsize(mb) == p.true_size(ma)
        a, c = avals[i], p.comp(avals[i])
        return (rec(i + 1, mb & bmask[i], p.meet(ma, a))
                and rec(i + 1, mb & ~bmask[i] & full_b, p.meet(ma, c)))

    return rec(0, full_b, one)


def criterion_3(H=400):
    parts = []
    for m, wrong in ((0, {}), (4, {3: 40})):
        p = BooleanAlgebraPresentation(m, max_depth=4)
        p.atom_oracle = exact_atom_oracle(p, wrong)
        r = ba_build_labeled_copy(p, H, guess_epoch=lambda s, w=wrong: sum(t <= s for t in w.values()))
        bld = r.extra["builder"]
        stages = [s for s, _ in r.extra["conditions"]]
        conds = stages == list(range(H + 1)) and all(ok for _, ok in r.extra["conditions"])
        bs = list(range(16))
        iso = all(b in r.f for b in bs) and _cells_agree(p, bld, r.f, bs)
        parts.append((conds, iso))
    ok = all(c and i for c, i in parts)
    return ok, ("atomless / atomless+4 atoms: "
                + ", ".join(f"conditions={c} iso16={i}" for c, i in parts))


# -- 4: trees -------------------------------------------------------------------------------------

def _rule_label(rules, t, seen=()):
    """Brute force from the generating rules: expand until a cycle appears."""
    r = rules[t]
    if "cycle" in r or t in seen:
        return INF
    kids = [_rule_label(rules, c, seen + (t,)) for c in r["children"]]
    return INF if any(k is INF for k in kids) else canon(kids)


def criterion_4(H=400):
    parts = []
    for rules, reveal in ((SIMPLE_RULES, None), (RECURRENT_RULES, {(0,): 7})):
        p = TreePresentation(rules, "I", 150, reveal=reveal)
        bld = TreeBuilder(p)
        committed, kept = [], True
        for s in range(H + 1):
            bld.step(s)
            kept &= bld.B.label[:len(committed)] == committed
            committed = list(bld.B.label)
        f = {e.b: e.a for e in bld.f}
        labels = all(bld.B.label[b] == _rule_label(rules, p.types[a]) for b, a in f.items())
        bld.B.schedule = Schedule(list(bld.B.stages))
        iso = verify_prefix_isomorphism(bld.B.facts_at(H), p, f, 6, s=H)
        parts.append(kept and labels and iso)
    return all(parts), f"simple / with reveal: {parts} (labels kept, brute-force labels, prefix-6)"


# -- 5: type completion ---------------------------------------------------------------------------

L, R = "-inf", "+inf"
COMPLETION_PAIRS = [
    (OrderType((0,), (INF, INF)), gap(0, 1, 0)),
    (OrderType((0,), (INF, INF)), gap(1, 0, 0)),
    (OrderType((0,), (INF, INF)), gap(0, 1, 3)),
    (OrderType((0,), (2, INF)), gap(1, 0, 0)),
    (OrderType((0,), (0, 5)), gap(0, 1, 2)),
    (OrderType((0,), (INF, 0)), gap(L, 1, 4)),
    (OrderType((0, 1), (INF, INF, INF)), gap(0, 2, 1)),
    (OrderType((0, 1), (INF, 3, INF)), gap(2, 1, 0)),
    (OrderType((1, 0), (1, INF, 2)), gap(1, 2, 0)),
    (OrderType((0, 1), (0, INF, 0)), gap(0, 2, 5)),
    (OrderType((), (INF,)), gap(L, 0, 2)),
    (OrderType((), (3,)), gap(0, R, 1)),
    (BAType(1, (INF, INF)), size_ge((1,), 1)),
    (BAType(1, (INF, INF)), size_ge((1,), 3)),
    (BAType(1, (2, INF)), size_ge((2,), 1)),
    (BAType(1, (0, 4)), size_ge((3,), 2)),
    (BAType(1, (INF, 3)), size_ge((1, 3), 2)),
    (BAType(0, (INF,)), size_ge((1,), 2)),
    (BAType(2, (1, INF, 2, INF)), size_ge((4,), 1)),
    (BAType(2, (0, INF, INF, 0)), size_ge((2, 6), 3)),
]


def criterion_5():
    good = 0
    for p, phi in COMPLETION_PAIRS:
        q = complete_type(p, phi, 12)
        good += is_generated(p, q) and realize(q, 15) is not None
    p1 = OrderType((0, 1), (INF, INF, INF))
    q1 = GeneratedType.from_code(p1, OrderType((0, 2, 1), (INF, 2, INF, INF)))
    p2 = BAType(1, (INF, INF))
    q2 = GeneratedType.from_code(p2, BAType(2, (INF, INF, INF, 2)))
    neg = not is_generated(p1, q1) and not is_generated(p2, q2)
    ok = good == len(COMPLETION_PAIRS) and neg
    return ok, f"{good}/{len(COMPLETION_PAIRS)} generated and realized (<=15 elements); negatives rejected={neg}"


# -- 6: theory type trees -------------------------------------------------------------------------

def two_paths(j, seq):
    return all(seq[1:])


def three_paths(j, seq):
    if not seq:
        return True
    return all(seq[1:]) if not seq[0] else all(seq[2:])


def four_paths(j, seq):
    return all(seq[2:])


def _inherits(snaps):
    for before, after in zip(snaps, snaps[1:]):
        for i, (j, node) in before.holders.items():
            if node in before.terminals.get(j, {}):
                j2, node2 = after.holders[i]
                if j2 != j or node2[:len(node)] != node:
                    return False
    return True


def criterion_6():
    got = []
    for pred, want in ((two_paths, 2), (three_paths, 3), (four_paths, 4)):
        snaps = grow(pred, 5)
        live = len(snaps[-1].live_indices())
        got.append((live, paths_bruteforce(pred, 5), want, _inherits(snaps)))
    ok = all(a == b == c and inh for a, b, c, inh in got)
    return ok, "live/bruteforce/expected/inheritance " + str(got)


# -- 7: equivalence structures --------------------------------------------------------------------

EQ_FIXTURES = [
    CharacterApprox.constant([(1, 2), (3, 1), (5, 1)]),
    CharacterApprox.constant([(2, 3), (4, 2)]),
    CharacterApprox.scripted({(1, 1): [(0, -1)], (2, 2): [(0, 3), (5, -1)], (3, 1): [(1, 4)]}),
    CharacterApprox.scripted({(5, 2): [(0, -1)], (1, 4): [(5, -1)], (4, 1): [(0, 2), (4, 6)]}),
]


def _class_counts(cp, H, prefix):
    """Brute-force class counting from the emitted E facts."""
    n = cp.count_at(H)
    eq = {(f[1], f[2]) for f in cp.facts_at(H) if f[0] == "E"}
    classes = {frozenset(y for y in range(n) if (x, y) in eq) for x in range(prefix)}
    return Counter(len(c) for c in classes if max(c) < prefix)


def criterion_7(H=200, prefix=60):
    good = 0
    for c in EQ_FIXTURES:
        cp = build_equivalence_copy(c, H)
        counts = _class_counts(cp, H, prefix)
        conf = c.confirmed(H)
        good += all(min(counts.get(n, 0), 5) == min(max((k for m, k in conf if m == n), default=0), 5)
                    for n in range(1, 6))
    return good == 4, f"{good}/4 character fixtures realized exactly in the first {prefix} elements"


# -- 8: differential algebra ----------------------------------------------------------------------

x, dx, d2x = DP.gen(0, "x1"), DP.gen(1, "x1"), DP.gen(2, "x1")
RANK_TABLE = [
    (x, Rank(0, 1)), (x ** 5 - 2, Rank(0, 5)), (d2x ** 3 + x, Rank(2, 3)),
    (dx * dx - x * x, Rank(1, 2)), (dx * x ** 7, Rank(1, 1)), (DP.const(3, "x1"), Rank(0, 0)),
    (x * d2x + dx ** 4, Rank(2, 1)), (DP.gen(5, "x1") ** 2 * x, Rank(5, 2)),
    ((dx + 1) * (dx - 1), Rank(1, 2)),
]


def _sqrt2_oracle(q):
    """q(sqrt 2) with every derivative 0, in exact a + b*sqrt(2) arithmetic."""
    a, b = 0, 0
    for e, c in q.terms.items():
        if any(e[1:]):
            continue
        u, v = 1, 0
        for _ in range(e[0] if e else 0):
            u, v = 2 * v, u
        a, b = a + c * u, b + c * v
    return a == 0 and b == 0


def criterion_8():
    t0 = time.time()
    rng = random.Random(0)
    pool = [materialize_poly(f, QQ) for f in formal_polys(0, "x1", 12)]
    laws = all((p * q).differentiate() == p.differentiate() * q + p * q.differentiate()
               and (p + q).differentiate() == p.differentiate() + q.differentiate()
               for p, q in ((rng.choice(pool), rng.choice(pool)) for _ in range(500)))
    table = RANK_TABLE + [(DP({}, "x1"), None)]
    ranks = all(rank_of(p) == want for p, want in table[:-1]) and rank_of(table[-1][0]).order is INF
    w1 = reducibility_witness(QQ, x * x - 1, 10 ** 4)
    w2 = reducibility_witness(QQ, dx * dx - x * x, 10 ** 4)
    wit = (w1 is not NONE_FOUND and sorted(map(str, w1)) == sorted(map(str, (x - 1, x + 1)))
           and w2 is not NONE_FOUND and sorted(map(str, w2)) == sorted(map(str, (dx - x, dx + x)))
           and reducibility_witness(QQ, x * x - 2, 10 ** 4) is NONE_FOUND)
    queries = probe_queries(QQ, 50)
    found = {}
    for rec in enumerate_types_n(1, 1000, AlgebraicDecider(), size_bound=8, probe=50,
                                 on_stall="record"):
        p = materialize_poly(rec.formal[0], QQ)
        if p.is_zero():
            found["trans"] = rec
        elif p == x * x - 2:
            found["sqrt2"] = rec
    types = (len(queries) == 50 and set(found) == {"trans", "sqrt2"}
             and all(not found["trans"].oracles[0].decide(q) for q in queries)
             and all(found["sqrt2"].oracles[0].decide(q) == _sqrt2_oracle(q) for q in queries))
    dt = time.time() - t0
    ok = laws and ranks and wit and types and dt < 30
    return ok, (f"laws={laws} ranks(10)={ranks} witnesses={wit} "
                f"types(50 queries)={types} {dt:.1f}s (<30s)")


# -- 9: determinism -------------------------------------------------------------------------------

def _run_cli(path):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stderr(err):
        code = main(["run", str(path)], out)
    return code, out.getvalue(), err.getvalue()


def criterion_9():
    paths = sorted(SCN.glob("*.scn"))
    same = [_run_cli(f) == _run_cli(f) for f in paths]
    return bool(paths) and all(same), f"{sum(same)}/{len(paths)} scenarios byte-identical on rerun"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("n", range(1, len(CRITERIA) + 1))
def test_criterion(n):
    ok, detail = CRITERIA[n - 1]()
    assert report(n, ok, detail), detail


if __name__ == "__main__":
    for i, crit in enumerate(CRITERIA, 1):
        report(i, *crit())
        print(RESULTS[-1])
