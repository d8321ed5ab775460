from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from sjinv.btypes import (BA_R, ORDER_R, TREE_R, BAType, DecodeError, OrderType,
                          PredicateViolation, TheoryTypeTree, TreeType, decode_ba,
                          decode_order, encode_ba, encode_order, encode_tree, gap,
                          label_tuple, size_ge, theory_tree_step, type_membership, var_cells)
from sjinv.btypes.enumeration import RLabeling
from sjinv.btypes.order import finite_realization
from sjinv.btypes.theory_tree import grow, paths_bruteforce
from sjinv.presentations import (SIMPLE_RULES, BooleanAlgebraPresentation, TreePresentation,
                                 block_order, exact_atom_oracle)
from sjinv.sizes import INF

sizes = st.one_of(st.just(INF), st.integers(0, 6))


@st.composite
def order_types(draw):
    n = draw(st.integers(0, 4))
    ranks = draw(st.permutations(range(n)))
    return OrderType(tuple(ranks), tuple(draw(st.lists(sizes, min_size=n + 1, max_size=n + 1))))


@st.composite
def ba_types(draw):
    n = draw(st.integers(0, 3))
    vals = draw(st.lists(sizes, min_size=1 << n, max_size=1 << n))
    if all(v == 0 for v in vals):
        vals[0] = INF
    return BAType(n, tuple(vals))


# -- codes -----------------------------------------------------------------------

@given(order_types())
def test_order_code_roundtrip(t):
    assert decode_order(encode_order(t)) == t


@given(ba_types())
def test_ba_code_roundtrip(t):
    assert decode_ba(encode_ba(t)) == t


@pytest.mark.parametrize("R", [ORDER_R, BA_R, TREE_R], ids=["order", "ba", "tree"])
def test_listing_is_consistent(R):
    listed = R.listing(25)
    assert [i for i, _ in listed] == sorted({i for i, _ in listed})
    for i, code in listed:
        assert R.encode(code) == i


def test_bad_codes_rejected():
    with pytest.raises(DecodeError):
        BAType(1, (0, 0))
    with pytest.raises(DecodeError):
        OrderType((0, 0), (1, 1, 1))
    with pytest.raises(DecodeError):
        TreeType((-1, 0, 0), (2, 1), (INF, INF, INF))   # nodes not in walk order


def test_tree_family_listing_matches_scan():
    from sjinv.btypes.tree import finite_trees
    assert [len(finite_trees(k)) for k in range(1, 7)] == [1, 1, 2, 4, 9, 20]
    listed = TREE_R.listing(3)
    # the listed codes really are the least valid indices: scan below the third
    valid = []
    for i in range(listed[2][0] + 1):
        try:
            TREE_R.decode(i)
            valid.append(i)
        except DecodeError:
            pass
    assert valid == [i for i, _ in listed]


def test_tree_code_roundtrip():
    t = TreeType((-1, 0, 1), (2, 0), (INF, INF, ((),)))
    assert TREE_R.decode(encode_tree(t)) == t


# -- membership -------------------------------------------------------------------------

def test_membership_right_interval_infinite():
    i = encode_order(OrderType((0,), (INF, INF)))
    assert type_membership(ORDER_R, i, gap(0, "+inf", 1))


def _three_between(t):
    """Brute force on a realizing finite-block ordering."""
    universe, pos = finite_realization(t, infinite_as=10)
    u1, u2 = pos
    between = [z for z in universe if u1 < z < u2 and z not in pos]
    return len(between) >= 3


def test_membership_finite_gap_bruteforce():
    t = OrderType((0, 1), (0, 2, INF))
    assert not _three_between(t)
    assert type_membership(ORDER_R, encode_order(t), gap(0, 1, 3)) is False
    assert type_membership(ORDER_R, encode_order(t), gap(0, 1, 2)) is True


def test_membership_ba_infinite_non_atom():
    t = BAType(1, (INF, INF))
    assert type_membership(BA_R, encode_ba(t), size_ge(var_cells(1, 0), 2))


@settings(max_examples=60)
@given(order_types(), st.integers(0, 5))
def test_order_gap_matches_realization(t, m):
    universe, pos = finite_realization(t, infinite_as=8)
    n = t.arity
    for a, b in product(range(n), repeat=2):
        if a == b:
            continue
        seen = sum(1 for z in universe if pos[a] < z < pos[b])
        want = pos[a] < pos[b] and seen >= m
        assert t.satisfies(gap(a, b, m)) == want


# -- labelings -----------------------------------------------------------------------------

def test_label_bounded_block_ordering():
    p = block_order(lambda q: 2, 40)
    s = p.settle_stage()
    a = next(x for x in range(40) if p.count_left(x, s) >= 5 and p.count_right(x, s) >= 5)
    assert label_tuple(p, (a,), s, bound=4) == encode_order(OrderType((0,), (INF, INF)))


def test_label_ba_join_of_two_atoms():
    p = BooleanAlgebraPresentation(4, max_depth=2)
    p.atom_oracle = exact_atom_oracle(p)
    v = p.join(p.atom_value(1), p.atom_value(2))
    a = p.name_of(v)
    late = p._size
    # brute force: count atoms inside and outside v
    inside = bin(v[1]).count("1")
    outside = INF if p.comp(v)[0] else bin(p.comp(v)[1]).count("1")
    assert (inside, outside) == (2, INF)
    assert label_tuple(p, (a,), late) == encode_ba(BAType(1, (outside, inside)))


def test_label_tree_root():
    p = TreePresentation(SIMPLE_RULES, "I", 30)
    assert label_tuple(p, (0,), 29) == encode_tree(TreeType((-1,), (0,), (INF,)))


# -- theory trees ---------------------------------------------------------------------------

def all_ok(j, seq):
    return True


def force_first(j, seq):
    return not seq or seq[0]


def three_paths(j, seq):
    # phi_0 false forces everything after; phi_0 true leaves phi_1 free, then fixed
    if not seq:
        return True
    if not seq[0]:
        return all(b for b in seq[1:])
    return all(b for b in seq[2:])


def test_full_tree_depth_two():
    T = grow(all_ok, 2)[-1]
    assert len(T.live_indices()) == 4


def test_forced_first_formula():
    T = theory_tree_step(TheoryTypeTree(), force_first, 0)
    assert T.live_indices() == [0]
    assert T.formulas(0) == ((0, True),)


def test_three_paths_bruteforce():
    T = grow(three_paths, 3)[-1]
    assert len(T.live_indices()) == paths_bruteforce(three_paths, 3) == 3


def test_dead_end_detected():
    with pytest.raises(PredicateViolation):
        grow(lambda j, seq: len(seq) < 2, 3)


@settings(max_examples=40)
@given(st.sets(st.tuples(st.booleans(), st.booleans(), st.booleans()), min_size=1))
def test_index_inheritance(allowed):
    """Indices never die and each one's node extends its previous node."""
    def cons(j, seq):
        if len(seq) > 3:
            return cons(j, seq[:3]) and all(seq[3:])
        return any(a[:len(seq)] == seq for a in allowed)

    snaps = grow(cons, 5, n_tuples=2)
    for before, after in zip(snaps, snaps[1:]):
        for i, (j, node) in before.holders.items():
            if node in before.terminals.get(j, {}):
                j2, node2 = after.holders[i]
                assert j2 == j and node2[:len(node)] == node
    assert len(snaps[-1].live_indices(0)) == paths_bruteforce(cons, 5) == len(allowed)


def test_observing_shortcut_agrees_with_decoding():
    p = block_order(lambda q: 2, 20, pace=2)
    lab = RLabeling.observing(p, bound=4)
    for s in (3, 11, 40):
        n = p.count_at(s)
        for tup in [(0,), (1, 0), (2, 0, 1)]:
            if max(tup) < n:
                assert lab.type_of(tup, s) == ORDER_R.decode(lab(tup, s))
