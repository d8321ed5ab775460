import pytest
from hypothesis import given, settings, strategies as st

from sjinv.presentations import (RECURRENT_RULES, SIMPLE_RULES, BooleanAlgebraPresentation,
                                 CharacterApprox, ClassTag, EmptyPresentation,
                                 FixtureIncoherent, OrderPresentation, Schedule,
                                 TreePresentation, UnknownElement, ba_atom_guess,
                                 ba_element_size, block_order, build_equivalence_copy,
                                 chain, character_realized, diagram_fragment,
                                 exact_atom_oracle, interval_size, node_guess)
from sjinv.presentations.tree import LEAF, canon
from sjinv.sizes import INF


# -- generic ---------------------------------------------------------------------

def test_empty_fragment():
    assert diagram_fragment(EmptyPresentation(), 0) == (frozenset(), frozenset())


def test_chain_fragments():
    p = chain(3)
    assert diagram_fragment(p, 2) == (frozenset({0, 1, 2}),
                                      frozenset({("lt", 0, 1), ("lt", 1, 2), ("lt", 0, 2)}))
    assert diagram_fragment(p, 1) == (frozenset({0, 1}), frozenset({("lt", 0, 1)}))


def test_schedule_monotone():
    with pytest.raises(ValueError):
        Schedule([0, 3, 2])
    sch = Schedule(pace=3, offset=2, limit=4)
    assert [sch.count_at(s) for s in range(0, 14)] == [0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3, 4, 4, 4]


def test_duplicate_keys_incoherent():
    with pytest.raises(FixtureIncoherent):
        OrderPresentation([1, 1], Schedule([0, 0]))


# -- orderings ---------------------------------------------------------------------

def test_interval_size_dense_cutoff():
    # a, b and then five elements between them
    keys = [0, 100, 10, 20, 30, 40, 50]
    p = OrderPresentation(keys, Schedule(list(range(7))))
    assert interval_size(p, 0, 1, 5, bound=4) == 4
    assert interval_size(p, 0, 1, 6, bound=4) is INF


def test_interval_size_finite_block():
    p = block_order(lambda q: 4, 4)
    # one block of 4: elements 0 and 3 have two between them
    assert interval_size(p, 0, 3, 10, bound=4) == 2
    assert p.true_size(0, 3) == 2


def test_interval_size_revised_by_schedule():
    p = OrderPresentation([0, 2, 1], Schedule([0, 0, 5]))
    guesses = [interval_size(p, 0, 1, s) for s in range(8)]
    assert guesses == [0] * 5 + [1] * 3
    with pytest.raises(UnknownElement):
        interval_size(p, 0, 2, 4)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(2, 10), st.integers(1, 3))
def test_block_order_ground_truth_matches_brute_force(m, blocks, pace):
    p = block_order(lambda q: m, m * blocks, pace=pace, shuffle_within=True)
    s = p.settle_stage()
    els = p.sorted_elements(s)
    for i in range(len(els) - 1):
        a, b = els[i], els[i + 1]
        assert p.true_size(a, b) == (0 if p.keys[a][0] == p.keys[b][0] else INF)
        assert p.count_between(a, b, s) == 0


# -- Boolean algebras ----------------------------------------------------------------

def _first_below(p, v):
    """Replay the schedule: first name of a non-zero element strictly below v."""
    for i in range(p._size):
        w = p.value(i)
        if w != p.zero and w != v and p.leq(w, v):
            return i
    return None


def test_ba_atom_guess_true_atom():
    p = BooleanAlgebraPresentation(4, max_depth=2)
    a = p.name_of(p.atom_value(2))
    assert all(ba_atom_guess(p, a, s) for s in range(a, a + 40))


def test_ba_atom_guess_revised_when_split_appears():
    p = BooleanAlgebraPresentation(0, max_depth=2)
    half = p.halves(p.one)[0]
    a = p.name_of(half)
    t = _first_below(p, half)
    assert t is not None and t > a
    assert ba_atom_guess(p, a, t - 1)
    assert not ba_atom_guess(p, a, t)
    assert not ba_atom_guess(p, a, t + 5)


def test_ba_element_size():
    p = BooleanAlgebraPresentation(4, max_depth=2)
    p.atom_oracle = exact_atom_oracle(p)
    late = p._size
    assert ba_element_size(p, 0, late) == 0
    two = p.name_of(p.join(p.atom_value(0), p.atom_value(3)))
    assert ba_element_size(p, two, late) == 2
    inf = p.name_of(p.halves(p.one)[1])
    assert ba_element_size(p, inf, late) is INF


def test_ba_names_roundtrip():
    p = BooleanAlgebraPresentation(2, max_depth=2)
    assert p.value(0) == p.zero and p.value(1) == p.one
    for i in range(p._size):
        assert p.name_of(p.value(i)) == i


# -- equivalence structures --------------------------------------------------------------

def test_equivalence_singleton_character():
    c = CharacterApprox.constant([(1, 1)])
    cp = build_equivalence_copy(c, 100)
    sizes = cp.class_sizes(20)
    assert sizes.get(1, 0) >= 1
    assert character_realized(cp, c, 100, 20)


def test_equivalence_empty_character_all_growing():
    cp = build_equivalence_copy(CharacterApprox.constant([]), 100)
    assert all(n > 5 for n in cp.class_sizes().elements())


def test_equivalence_confirmed_late_pair():
    c = CharacterApprox.scripted({(2, 1): [(5, -1)]})
    cp = build_equivalence_copy(c, 100)
    sizes = cp.class_sizes(30)
    assert sizes.get(2, 0) == 1
    assert sum(v for n, v in sizes.items() if n <= 5) == 1


def test_equivalence_facts_are_an_equivalence():
    cp = build_equivalence_copy(CharacterApprox.constant([(1, 2), (3, 1)]), 40)
    n = cp.count_at(40)
    eq = {(f[1], f[2]) for f in cp.facts_at(40) if f[0] == "E"}
    for x in range(n):
        assert (x, x) in eq
    for x, y in eq:
        assert (y, x) in eq
    assert cp.class_tag is ClassTag.EQUIVALENCE


# -- trees -------------------------------------------------------------------------------------

def test_tree_rules_validated():
    with pytest.raises(FixtureIncoherent):
        TreePresentation({"X": {"prefix": [], "cycle": []}}, "X", 5)
    with pytest.raises(FixtureIncoherent):
        TreePresentation({"X": {"children": [], "cycle": ["X"]}}, "X", 5)


def test_tree_true_labels_and_reveal():
    p = TreePresentation(RECURRENT_RULES, "I", 60, reveal={(0,): 7})
    x = p.index[(0,)]
    assert p.true_label(x) == canon([LEAF])
    assert node_guess(p, x, 6) is INF
    assert node_guess(p, x, 7) == canon([LEAF])
    assert node_guess(p, 0, 59) is INF


def test_tree_enumeration_pred_closed():
    p = TreePresentation(SIMPLE_RULES, "I", 80)
    for x in range(1, len(p.nodes)):
        assert p.pred(x) < x
    # at most two terminal successors per infinite node (fewer if cut off)
    for x in range(len(p.nodes)):
        if p.true_label(x) is INF:
            kids = p.children_at(x, len(p.nodes))
            assert sum(1 for k in kids if p.true_label(k) == LEAF) <= 2
