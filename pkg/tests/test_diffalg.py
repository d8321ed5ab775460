from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from sjinv.diffalg import (NONE_FOUND, QQ, UNDEFINED, AlgebraicDecider, FormalName,
                           FormalPoly, MalformedName, Rank, Stalled, StallingDecider,
                           enumerate_type, enumerate_types_n, evaluate_name, extend_field,
                           materialize_poly, polys_of_size, rank_of, reducibility_witness)
from sjinv.diffalg.poly import DifferentialPolynomial as DP
from sjinv.sizes import INF

x = DP.gen(0, "x1")
dx = DP.gen(1, "x1")

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
monos = st.lists(st.integers(0, 2), min_size=0, max_size=3).map(tuple)


@st.composite
def polys(draw):
    terms = draw(st.dictionaries(monos, coeffs, max_size=4))
    return DP(terms, "x1")


# -- differential ring laws ------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_leibniz_rule(p, q):
    assert (p * q).differentiate() == p.differentiate() * q + p * q.differentiate()


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_derivation_additive(p, q):
    assert (p + q).differentiate() == p.differentiate() + q.differentiate()


def test_rank_table():
    d2x = DP.gen(2, "x1")
    assert rank_of(d2x ** 3 + x) == Rank(2, 3)
    assert rank_of(x ** 5 - 2) == Rank(0, 5)
    assert rank_of(DP({}, "x1")).order is INF
    assert Rank(0, 5) < Rank(2, 3) < rank_of(DP({}, "x1"))


# -- formal names: counts against an independent generating function -----------------------

def _phi(k):
    return sum(1 for a in range(1, k + 1) if gcd(a, k) == 1)


def _partitions(w):
    ways = [1] + [0] * w
    for part in range(1, w + 1):
        for t in range(part, w + 1):
            ways[t] += ways[t - part]
    return ways[w]


def _count_oracle(n):
    """Polynomials of size n over Q: 1 + sum(weight + coefficient size) over
    distinct monomials; a nonzero rational of size k is +-p/q with p+q=k."""
    budget = n - 1
    series = [1] + [0] * budget
    for w in range(budget + 1):
        for _ in range(_partitions(w)):
            factor = [0] * (budget + 1)
            for k in range(2, budget + 1 - w):
                factor[w + k] = 2 * _phi(k)
            series = [series[t] + sum(series[t - u] * factor[u] for u in range(1, t + 1))
                      for t in range(budget + 1)]
    return series[budget]


def test_poly_counts_match_generating_function():
    got = [len(polys_of_size(0, "x1", n)) for n in range(1, 11)]
    assert got == [_count_oracle(n) for n in range(1, 11)]
    assert got == [1, 0, 2, 6, 12, 30, 66, 162, 366, 814]


def test_malformed_names():
    with pytest.raises(MalformedName):
        FormalPoly.of("x1", 0, {(1,): FormalName.rational(0)})
    p = FormalPoly.of("x2", 0, {(1,): FormalName.rational(1)})
    with pytest.raises(MalformedName):
        FormalName.quotient(p, p)
    one = FormalPoly.of("x1", 0, {(): FormalName.rational(1)})
    with pytest.raises(MalformedName):
        evaluate_name(FormalName.quotient(one, one), QQ)


# -- reducibility witnesses ---------------------------------------------------------------------

def test_witness_difference_of_squares():
    w = reducibility_witness(QQ, x * x - 1, 10 ** 4)
    assert w is not NONE_FOUND and w[0] * w[1] == x * x - 1


def test_witness_differential_factorization():
    w = reducibility_witness(QQ, dx * dx - x * x, 10 ** 4)
    assert w is not NONE_FOUND and w[0] * w[1] == dx * dx - x * x


def test_no_witness_for_irreducible():
    assert reducibility_witness(QQ, x * x - 2, 10 ** 4) is NONE_FOUND


# -- types and the fields they generate -----------------------------------------------------------

@pytest.fixture(scope="module")
def sqrt2():
    lam = enumerate_type(QQ, x * x - 2, AlgebraicDecider(), 1000)
    return lam, extend_field(QQ, lam, 10)


def test_algebraic_type_answers(sqrt2):
    lam, _ = sqrt2
    assert lam.decide(x * x - 2) and lam.decide(dx) and lam.decide(x ** 4 - 4)
    assert not lam.decide(x - 1)


def _pair_mul(a, b):
    return (a[0] * b[0] + 2 * a[1] * b[1], a[0] * b[1] + a[1] * b[0])


@settings(max_examples=30, deadline=None)
@given(coeffs, coeffs, coeffs, coeffs)
def test_sqrt2_arithmetic_matches_pairs(sqrt2, a, b, c, d):
    _, K = sqrt2
    r = K.generator

    def elem(u, v):
        return K.lift(u) + K.lift(v) * r

    e, f = _pair_mul((a, b), (c, d))
    assert elem(a, b) * elem(c, d) == elem(e, f)
    assert elem(a, b) + elem(c, d) == elem(a + c, b + d)
    assert elem(a, b).is_zero() == (a == 0 and b == 0)
    if (c, d) != (0, 0):
        n = c * c - 2 * d * d
        assert elem(a, b) / elem(c, d) == elem(*_pair_mul((a, b), (c / n, -d / n)))
    assert elem(a, b).derive().is_zero()


def test_materialize_and_undefined(sqrt2):
    _, K = sqrt2
    one_x = FormalPoly.of("x1", 0, {(1,): FormalName.rational(1)})
    m = materialize_poly(FormalPoly.of("x2", 1, {(1,): FormalName.quotient(one_x, one_x)}), K)
    assert m.coefficient((1,)) == 1
    zero = FormalPoly("x1", 0, ())
    assert evaluate_name(FormalName.quotient(one_x, zero), K) is UNDEFINED
    three = FormalPoly.of("x1", 0, {(): FormalName.rational(3)})
    one = FormalPoly.of("x1", 0, {(): FormalName.rational(1)})
    assert evaluate_name(FormalName.quotient(three, one), K) == K.lift(3)
    assert evaluate_name(FormalName.rational(Fraction(3, 1)), K) == K.lift(3)


def test_transcendental_constant():
    lam = enumerate_type(QQ, dx, AlgebraicDecider(), 1000)
    K = extend_field(QQ, lam, 8)
    t = K.generator
    assert t.derive().is_zero() and (1 / t) * t == 1 and not (t * t == t)
    assert not lam.decide(x * x - 2)


def test_rational_point_type():
    lam = enumerate_type(QQ, x, AlgebraicDecider(), 1000)
    assert lam.decide(x) and not lam.decide(x - 1)


# -- stalling ------------------------------------------------------------------------------------

def test_stalling_decider_raises():
    lam = enumerate_type(QQ, x * x - 2, StallingDecider(), 100)
    with pytest.raises(Stalled):
        lam.decide(x - 1)


def test_greedy_choice_is_consistent():
    lam = enumerate_type(QQ, x * (x - 1), StallingDecider(), 1000)
    assert lam.decide(x) and not lam.decide(x - 1)
    assert lam.mode == "greedy"
    assert lam.audit() == []


def test_enumerate_types_small():
    recs = list(enumerate_types_n(1, 1000, AlgebraicDecider(), size_bound=5, probe=10,
                                  on_stall="record"))
    assert len(recs) == sum(len(polys_of_size(0, "x1", n)) for n in range(1, 6))
    assert [r.index for r in recs] == list(range(len(recs)))
    assert recs[0].dump().startswith("#0 0")
    assert all(r.stalled is None for r in recs)
