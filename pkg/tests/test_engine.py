from fractions import Fraction

import pytest

from sjinv.btypes import encode_order
from sjinv.btypes.enumeration import ORDER_R, RLabeling, order_type_at
from sjinv.coding import pair_order_key
from sjinv.engine import (NOT_YET, BABuilder, BufferPair, ConstructionState,
                          InsufficientPrefix, Requirement, ReqKind, PriorityEngine,
                          ba_build_labeled_copy, engine_step, find_buffer_pair,
                          ordering_build_labeled_copy, run_engine, tree_build_labeled_copy,
                          verify_ba_prefix, verify_prefix_isomorphism, verify_tree_result)
from sjinv.engine.core import entry_priority
from sjinv.presentations import (RECURRENT_RULES, SIMPLE_RULES, BooleanAlgebraPresentation,
                                 OrderPresentation, RevealingSizes, Schedule,
                                 TreePresentation, block_order, chain, exact_atom_oracle)
from sjinv.presentations.order import block_of
from sjinv.sizes import INF


# -- bookkeeping ----------------------------------------------------------------------

def test_priorities():
    assert entry_priority(3, 1) == 2
    assert entry_priority(0, 5) == 1
    assert Requirement.of(7) == Requirement(ReqKind.INTO_DOMAIN, 3)
    assert Requirement(ReqKind.INTO_RANGE, 4).priority == 8


def test_verify_prefix_identity_and_reversal():
    p = chain(2)
    facts = p.facts_at(5)
    assert verify_prefix_isomorphism(facts, p, {0: 0, 1: 1}, 2)
    assert not verify_prefix_isomorphism(facts, p, {0: 1, 1: 0}, 2)
    with pytest.raises(InsufficientPrefix):
        verify_prefix_isomorphism(facts, p, {0: 0}, 2)


# -- the general engine ------------------------------------------------------------------

def observing(p):
    return RLabeling.observing(p, bound=4)


def test_small_fixture_settles_without_injury():
    p = chain(3)
    r = run_engine(p, observing(p), 50, check_monotone=True)
    assert sorted(r.f) == [0, 1, 2] and sorted(r.f.values()) == [0, 1, 2]
    assert r.injuries == []
    assert verify_prefix_isomorphism(r.B.facts_at(50), p, r.f, 3)


def test_empty_fixture():
    p = OrderPresentation([], Schedule([]))
    st = ConstructionState()
    eng = PriorityEngine(p, observing(p))
    for s in range(5):
        st = engine_step(st, p, observing(p), s, eng)
    assert st.f == [] and st.keys == [] and st.injury_log == []


def test_flip_at_stage_10_injures_then_recovers():
    p = block_order(lambda q: 1, 12)
    keys = list(p.keys)
    keys[0] = (Fraction(-1), 0)       # element 0 wrongly reported leftmost
    fake = OrderPresentation(keys, Schedule(pace=1, limit=len(keys)))

    def label(tup, s):
        src = fake if 10 <= s < 20 and 0 in tup else p
        return encode_order(order_type_at(src, tup, s, bound=4))

    r = run_engine(p, RLabeling(label, ORDER_R), 80, check_monotone=True)
    assert [i.stage for i in r.injuries] == [10, 20]
    assert any(e.stage == 10 and e.injury for e in r.trace)
    assert len(r.f) == 12
    assert verify_prefix_isomorphism(r.B.facts_at(80), p, r.f, 8)


# -- buffer pairs -------------------------------------------------------------------------

def scan_buffer(p, c, c2, s, sizes):
    """Exhaustive oracle: every pair of names inside (c, c'), in pair order."""
    n = p.count_at(s)
    inside = [x for x in range(n)
              if (c is None or p.less(c, x)) and (c2 is None or p.less(x, c2))]
    pairs = sorted(((x, y) for x in inside for y in inside if x < y),
                   key=lambda xy: pair_order_key(*xy))
    for x, y in pairs:
        z, z2 = (x, y) if p.less(x, y) else (y, x)
        if all(sizes(u, v, s) is INF for u, v in ((c, z), (z, z2), (z2, c2))):
            return BufferPair(z, z2)
    return NOT_YET


def test_buffer_not_yet_at_stage_zero():
    p = block_order(lambda q: 1, 30)
    assert find_buffer_pair(p, None, None, 0, RevealingSizes(p)) is NOT_YET


@pytest.mark.parametrize("s", [5, 12, 29])
def test_buffer_first_pair_matches_scan(s):
    p = block_order(lambda q: 2, 30)
    sizes = RevealingSizes(p)
    c, c2 = p.sorted_elements(s)[0], p.sorted_elements(s)[-1]
    got = find_buffer_pair(p, c, c2, s, sizes)
    assert got == scan_buffer(p, c, c2, s, sizes)
    assert find_buffer_pair(p, c, c2, s, sizes) == got


def test_buffer_selection_moves_after_reveal():
    p = block_order(lambda q: 2, 30)
    # every block is revealed at once except the first candidate's
    first = find_buffer_pair(p, None, None, 20, RevealingSizes(p, default=10**9))
    assert isinstance(first, BufferPair)
    blk = block_of(p, first.z)
    assert block_of(p, first.z2) == blk
    sizes = RevealingSizes(p, reveal={blk: 25}, default=10**9)
    assert find_buffer_pair(p, None, None, 24, sizes) == first
    moved = find_buffer_pair(p, None, None, 25, sizes)
    assert moved != first
    assert moved == scan_buffer(p, None, None, 25, sizes)


def _labels_match(r, p, k):
    bs = sorted(r.f)[:k]
    B = r.extra["builder"].B
    return all(B.label(b, b2) == p.true_size(*sorted((r.f[b], r.f[b2]), key=p.rank.__getitem__))
               for b in bs for b2 in bs if B.pos(b) < B.pos(b2))


def test_buffer_copy_shuffled_blocks():
    sz = {}
    p = block_order(lambda q: sz.setdefault(q, 1 + len(sz) % 3), 200, pace=10,
                    shuffle_within=True)
    sizes = RevealingSizes(p)
    r = ordering_build_labeled_copy(p, 2000, sizes, epoch=sizes.epoch, check_monotone=True)
    assert _labels_match(r, p, 8)
    assert verify_prefix_isomorphism(r.B.facts_at(2000), p, r.f, 8)


def test_buffer_copy_dense_all_infinite():
    p = block_order(lambda q: 1, 60, pace=5)
    sizes = RevealingSizes(p)
    r = ordering_build_labeled_copy(p, 300, sizes, epoch=sizes.epoch)
    B = r.extra["builder"].B
    assert B.links and all(l is INF for l in B.links)


def test_buffer_copy_matches_size_three_block():
    p = block_order(lambda q: 1, 80, pace=5, extra_blocks={Fraction(1, 2): 3})
    sizes = RevealingSizes(p)
    r = ordering_build_labeled_copy(p, 400, sizes, epoch=sizes.epoch)
    B = r.extra["builder"].B
    ends = [b for b in r.f if p.keys[r.f[b]] in ((Fraction(1, 2), 0), (Fraction(1, 2), 2))]
    assert len(ends) == 2
    assert B.label(*ends) == 1
    assert all(B.label(b, b2) is INF for b in r.f for b2 in r.f
               if b != b2 and block_of(p, r.f[b]) != block_of(p, r.f[b2]))


# -- Boolean algebras -----------------------------------------------------------------------

def ba_fixture(m, wrong=None):
    p = BooleanAlgebraPresentation(m, max_depth=4)
    p.atom_oracle = exact_atom_oracle(p, wrong)
    w = dict(wrong or {})
    return p, (lambda s: sum(1 for t in w.values() if t <= s))


def test_ba_atomless_all_infinite():
    p, ge = ba_fixture(0)
    r = ba_build_labeled_copy(p, 120, guess_epoch=ge)
    B = r.extra["builder"].B
    assert all(v is INF for v in B.label_of.values())
    assert all(ok for _, ok in r.extra["conditions"])
    assert verify_ba_prefix(r, p, 12)


def test_ba_refuted_guess_rolls_back():
    p, ge = ba_fixture(4, {3: 40})
    r = ba_build_labeled_copy(p, 200, guess_epoch=ge)
    assert [i.stage for i in r.injuries] == [40]
    assert any(e.action == "rollback" and e.stage == 40 for e in r.trace)
    assert all(ok for _, ok in r.extra["conditions"])
    assert verify_ba_prefix(r, p, 12)


def test_ba_look_ahead_is_least_split():
    p, _ = ba_fixture(2)
    bld = BABuilder(p)
    bld.view.update(p._size)
    for alpha in (p.one, p.halves(p.one)[0], (0, 0b11)):
        want = None
        for i in range(p._size):
            v = p.value(i)
            if v in (p.zero, alpha) or not p.leq(v, alpha):
                continue
            if p.true_size(v) is INF and p.true_size(p.diff(alpha, v)) is INF:
                want = v
                break
        assert bld.look_ahead(alpha) == want
    assert bld.look_ahead((0, 0b11)) is None


def test_ba_prefix_needs_domain():
    p, ge = ba_fixture(0)
    r = ba_build_labeled_copy(p, 3, guess_epoch=ge)
    with pytest.raises(InsufficientPrefix):
        verify_ba_prefix(r, p, 50)


# -- trees ----------------------------------------------------------------------------------------

def test_tree_all_infinite_no_retarget():
    p = TreePresentation({"I": {"prefix": [], "cycle": ["I"]}}, "I", 60)
    r = tree_build_labeled_copy(p, 150)
    assert all(v is INF for v in r.B.label)
    assert not any("retarget" in e.action for e in r.trace)
    assert verify_tree_result(r, p, 6)


def test_tree_reveal_retargets():
    p = TreePresentation(RECURRENT_RULES, "I", 100, reveal={(0,): 7})
    r = tree_build_labeled_copy(p, 300)
    assert [i.stage for i in r.injuries] == [7]
    assert any("retarget" in e.action for e in r.trace)
    b = next(e for e in r.trace if "retarget" in e.action).action.split()[1].split("->")[0]
    assert r.B.label[int(b[1:])] == p.true_label(r.f[int(b[1:])])
    assert verify_tree_result(r, p, 6)


def test_tree_simple_class_labels():
    p = TreePresentation(SIMPLE_RULES, "I", 100)
    r = tree_build_labeled_copy(p, 300)
    assert all(r.B.label[b] == p.true_label(a) for b, a in r.f.items())
    assert verify_tree_result(r, p, 6)
