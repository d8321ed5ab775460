import pytest
from hypothesis import assume, given, settings, strategies as st

from sjinv.btypes import BAType, OrderType, gap, size_ge
from sjinv.completion import (GeneratedType, PreconditionViolated, canonical_formulas,
                              complete_type, extensions, is_generated, realize)
from sjinv.sizes import INF

sizes = st.one_of(st.just(INF), st.integers(0, 4))


def test_splitting_extension_not_generated_ordering():
    # x at finite distance 2 right of u_0, inside an infinite gap to u_1
    p = OrderType((0, 1), (INF, INF, INF))
    ext = OrderType((0, 2, 1), (INF, 2, INF, INF))
    assert ext.restrict(2) == p
    assert not is_generated(p, GeneratedType.from_code(p, ext))


def test_splitting_extension_not_generated_boolean_algebra():
    # x splits an infinite u into a size-2 piece and an infinite piece
    p = BAType(1, (INF, INF))
    ext = BAType(2, (INF, INF, INF, 2))
    assert ext.restrict(1) == p
    assert not is_generated(p, GeneratedType.from_code(p, ext))


def test_completion_output_is_generated():
    p = OrderType((0,), (INF, INF))
    q = complete_type(p, gap(0, 1, 0), 12)
    assert is_generated(p, q)
    assert q.decisions[0] == gap(0, 1, 0)
    assert len(q.decisions) == 13


def test_precondition():
    with pytest.raises(PreconditionViolated):
        complete_type(OrderType((0,), (INF, 0)), gap(0, 1, 0), 5)


def test_first_existential_rejected_after_forced_universal():
    # u has exactly 3 elements to its right: "at least 4 right of x" fails for x > u
    p = OrderType((0,), (INF, 3))
    q = complete_type(p, gap(0, 1, 0), 20)
    assert ("not", gap(1, "+inf", 3)) in q.derived_universals
    r = realize(q)
    assert r is not None


def test_extensions_restrict_to_base():
    p = BAType(1, (2, INF))
    for e in extensions(p, 3):
        assert e.restrict(1) == p
    q = OrderType((1, 0), (0, INF, 1))
    for e in extensions(q, 2):
        assert e.restrict(2) == q


@settings(max_examples=40, deadline=None)
@given(st.lists(sizes, min_size=2, max_size=3), st.integers(0, 3), st.data())
def test_order_completion_generated_and_realized(gaps, m, data):
    n = len(gaps) - 1
    p = OrderType(tuple(range(n)), tuple(gaps))
    ends = ["-inf", *range(n), "+inf"]
    a = data.draw(st.sampled_from(ends[:-1]))
    phi = gap(a, n, m)
    try:
        q = complete_type(p, phi, 12)
    except PreconditionViolated:
        assume(False)
    assert is_generated(p, q)
    assert realize(q, 15) is not None


@settings(max_examples=40, deadline=None)
@given(st.lists(sizes, min_size=2, max_size=2), st.integers(1, 3), st.data())
def test_ba_completion_generated_and_realized(cells, m, data):
    assume(any(v != 0 for v in cells))
    p = BAType(1, tuple(cells))
    sel = data.draw(st.sampled_from([(2,), (3,), (2, 3), (1, 3), (0, 2)]))
    phi = size_ge(sel, m)
    try:
        q = complete_type(p, phi, 12)
    except PreconditionViolated:
        assume(False)
    assert is_generated(p, q)
    assert realize(q, 15) is not None


def test_canonical_list_prefix_stable():
    p = BAType(1, (INF, INF))
    assert canonical_formulas(p, 12)[:5] == canonical_formulas(p, 5)
