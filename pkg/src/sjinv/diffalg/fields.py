"""Presented differential fields: the rationals (trivial derivation) and the
extensions ``K' = K<x>`` generated by an element realizing a type over ``K``.

Elements of ``K'`` are formal quotients ``r(x)/s(x)`` of differential
polynomials over ``K``. Operations are computed formally (and normalized when
the type supplies a normal form); equality is decided by the type via cross
multiplication: ``r1/s1 = r2/s2`` iff ``r1*s2 - r2*s1 = 0`` is in the type.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Optional

from .names import FormalName, FormalPoly, MalformedName, names_of_size, var_of
from .poly import DifferentialPolynomial


class _Undefined:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "UNDEFINED"


UNDEFINED = _Undefined()


class OracleInconsistent(RuntimeError):
    pass


class Rationals:
    """The prime field, level 0, with the derivation sending everything to 0."""

    level = 0
    base = None
    var = None

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def lift(self, c):
        if isinstance(c, (int, Fraction)):
            return Fraction(c)
        raise TypeError(f"cannot read {c!r} as a rational")

    def tower(self) -> list:
        return [self]

    def __repr__(self) -> str:
        return "Q"


QQ = Rationals()


class Elem:
    """An element r(x)/s(x) of a presented extension field."""

    __slots__ = ("field", "num", "den")
    __hash__ = None

    def __init__(self, field: "FieldPresentation", num: DifferentialPolynomial,
                 den: DifferentialPolynomial, normalize: bool = True):
        self.field = field
        if normalize:
            num, den = field.oracle.normal_form(num, den)
        self.num, self.den = num, den

    def _other(self, o) -> "Elem":
        return self.field.lift(o)

    def __add__(self, o):
        o = self._other(o)
        return Elem(self.field, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Elem(self.field, -self.num, self.den, normalize=False)

    def __sub__(self, o):
        return self + (-self._other(o))

    def __rsub__(self, o):
        return self._other(o) - self

    def __mul__(self, o):
        o = self._other(o)
        return Elem(self.field, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "Elem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return Elem(self.field, self.den, self.num)

    def __truediv__(self, o):
        return self * self._other(o).inverse()

    def __rtruediv__(self, o):
        return self._other(o) * self.inverse()

    def derive(self) -> "Elem":
        dn, dd = self.num.differentiate(), self.den.differentiate()
        return Elem(self.field, dn * self.den - self.num * dd, self.den * self.den)

    def is_zero(self) -> bool:
        return self.field.oracle.is_zero(self.num)

    def __eq__(self, o) -> bool:
        try:
            o = self._other(o)
        except TypeError:
            return NotImplemented
        return self.field.oracle.is_zero(self.num * o.den - o.num * self.den)

    def __str__(self) -> str:
        if self.den.is_constant():
            c = self.den.coefficient(())
            if c == 1:
                return f"<{self.num}>"
        return f"<({self.num})/({self.den})>"

    __repr__ = __str__


class FieldPresentation:
    """``K<x>`` for ``x`` realizing the type ``oracle`` over ``base``.

    The universe is the list of names (in canonical order) that make sense
    and are not equal to an earlier name; it is grown lazily up to a bound.
    """

    def __init__(self, base, oracle, universe_bound: int = 0, max_name_size: int = 13):
        self.base = base
        self.level = base.level + 1
        self.var = var_of(self.level)
        self.oracle = oracle
        self.zero = Elem(self, self._poly(base.zero), self._poly(base.one), normalize=False)
        self.one = Elem(self, self._poly(base.one), self._poly(base.one), normalize=False)
        self.universe: list = []          # (FormalName, Elem)
        self.max_name_size = max_name_size
        self._frontier = self._candidates()
        self._exhausted = False
        self.grow(universe_bound)

    def _poly(self, c) -> DifferentialPolynomial:
        return DifferentialPolynomial({(): c}, self.var)

    @property
    def generator(self) -> Elem:
        return Elem(self, DifferentialPolynomial.gen(0, self.var, self.base.one), self._poly(self.base.one))

    def tower(self) -> list:
        return self.base.tower() + [self]

    def lift(self, c) -> Elem:
        if isinstance(c, Elem) and c.field is self:
            return c
        b = self.base.lift(c)
        return Elem(self, self._poly(b), self._poly(self.base.one), normalize=False)

    # -- universe --------------------------------------------------------------
    def _candidates(self) -> Iterator[FormalName]:
        for n in range(1, self.max_name_size + 1):
            yield from names_of_size(self.level, n)

    def grow(self, bound: int) -> int:
        """Extend the universe to ``bound`` elements (or until the name budget
        runs out); resumable."""
        while len(self.universe) < bound and not self._exhausted:
            try:
                name = next(self._frontier)
            except StopIteration:
                self._exhausted = True
                break
            v = evaluate_name(name, self)
            if v is UNDEFINED:
                continue
            if any(v == w for _, w in self.universe):
                continue
            self.universe.append((name, v))
        return len(self.universe)

    def index_of(self, v: Elem) -> Optional[int]:
        for i, (_, w) in enumerate(self.universe):
            if v == w:
                return i
        return None

    def operate(self, op: str, i: int, j: Optional[int] = None) -> Optional[int]:
        """Table lookup: the universe index of ``u_i op u_j`` (None if the result
        lies outside the universe built so far, or is undefined)."""
        a = self.universe[i][1]
        if op == "d":
            return self.index_of(a.derive())
        b = self.universe[j][1]
        try:
            r = {"+": a + b, "-": a - b, "*": a * b}.get(op)
            if op == "/":
                r = a / b
        except ZeroDivisionError:
            return None
        if r is None:
            raise ValueError(f"unknown operation {op}")
        return self.index_of(r)

    def __repr__(self) -> str:
        return f"{self.base!r}<{self.var}>"


def extend_field(K, oracle, universe_bound: int = 0, max_name_size: int = 13) -> FieldPresentation:
    if oracle.K is not K:
        raise ValueError("the type must be over the field being extended")
    F = FieldPresentation(K, oracle, universe_bound, max_name_size)
    oracle.attach(F)
    return F


def evaluate_name(f: FormalName, K, _memo: Optional[dict] = None):
    """The value of ``f`` in ``K`` (lifted through the tower), or UNDEFINED when
    some denominator along the way is 0."""
    if f.level > K.level:
        raise MalformedName(f"level-{f.level} name over a level-{K.level} field")
    memo = {} if _memo is None else _memo
    key = (f, K.level)
    if key in memo:
        return memo[key]
    if f.level == 0:
        out = K.lift(f.value)
    else:
        Kf = K.tower()[f.level]
        num = materialize_poly(f.num, Kf.base, memo)
        den = materialize_poly(f.den, Kf.base, memo)
        if num is UNDEFINED or den is UNDEFINED or Kf.oracle.is_zero(den):
            out = UNDEFINED
        else:
            out = Elem(Kf, num, den)
            for F in K.tower()[f.level + 1:]:
                out = F.lift(out)
    memo[key] = out
    return out


def materialize_poly(p: FormalPoly, K, _memo: Optional[dict] = None):
    """The formal polynomial read as a differential polynomial over ``K``, or
    UNDEFINED if a coefficient makes no sense."""
    if p.coeff_level > K.level:
        raise MalformedName(f"coefficients of level {p.coeff_level} over a level-{K.level} field")
    terms = {}
    for e, c in p.terms:
        v = evaluate_name(c, K, _memo)
        if v is UNDEFINED:
            return UNDEFINED
        terms[e] = v
    return DifferentialPolynomial(terms, p.var)
