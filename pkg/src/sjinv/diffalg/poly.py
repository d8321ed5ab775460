"""Differential polynomials in one indeterminate over an exact field.

A polynomial is a sparse map from monomials to coefficients. A monomial is
an exponent vector ``(e0, e1, ..., en)`` over ``x, dx, d2x, ..., dnx`` with
trailing zeros trimmed (so ``()`` is the monomial 1). Coefficients are
``Fraction`` or any field element supporting ``+ - * /`` and ``==`` (with an
optional ``derive()`` for a nontrivial derivation on the coefficients).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from ..sizes import INF

Monomial = tuple


def is_zero(c) -> bool:
    test = getattr(c, "is_zero", None)
    return test() if test is not None else c == 0


def derive_coefficient(c):
    d = getattr(c, "derive", None)
    return d() if d is not None else Fraction(0)


def trim(e: Iterable[int]) -> Monomial:
    e = list(e)
    while e and e[-1] == 0:
        e.pop()
    return tuple(e)


def mono_key(e: Monomial) -> tuple:
    """Monomial order: highest derivative first, then its power, and so on down."""
    return (len(e), tuple(reversed(e)))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    n = max(len(a), len(b))
    return trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def mono_div(a: Monomial, b: Monomial) -> Optional[Monomial]:
    if len(b) > len(a):
        return None
    out = [a[i] - (b[i] if i < len(b) else 0) for i in range(len(a))]
    if any(v < 0 for v in out):
        return None
    return trim(out)


def mono_weight(e: Monomial) -> int:
    """Serialization weight: d^j x counts j + 1 per power."""
    return sum((j + 1) * k for j, k in enumerate(e))


def var_name(var: str, j: int) -> str:
    return var if j == 0 else ("d" if j == 1 else f"d{j}") + var


def mono_str(e: Monomial, var: str) -> str:
    parts = []
    for j, k in enumerate(e):
        if k:
            v = var_name(var, j)
            parts.append(v if k == 1 else f"{v}^{k}")
    return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class Rank:
    """(order, degree), compared lexicographically; the zero polynomial has
    order ``INF`` and no degree."""

    order: object
    degree: Optional[int]

    def _key(self):
        return (1, 0) if self.order is INF else (0, self.order, self.degree)

    def __lt__(self, other: "Rank") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "Rank") -> bool:
        return self._key() <= other._key()


class DifferentialPolynomial:
    __slots__ = ("terms", "var")

    def __init__(self, terms: Optional[Mapping] = None, var: str = "x"):
        self.var = var
        self.terms = {}
        for e, c in (terms or {}).items():
            e = trim(e)
            if isinstance(c, int):
                c = Fraction(c)
            if not is_zero(c):
                self.terms[e] = c

    # -- constructors ----------------------------------------------------------
    @classmethod
    def const(cls, c, var: str = "x") -> "DifferentialPolynomial":
        if isinstance(c, int):
            c = Fraction(c)
        return cls({(): c}, var)

    @classmethod
    def gen(cls, j: int = 0, var: str = "x", one=Fraction(1)) -> "DifferentialPolynomial":
        """The indeterminate d^j x."""
        return cls({(0,) * j + (1,): one}, var)

    def _like(self, terms) -> "DifferentialPolynomial":
        return DifferentialPolynomial(terms, self.var)

    # -- structure ---------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def monomials(self) -> list:
        return sorted(self.terms, key=mono_key, reverse=True)

    def leading(self):
        e = max(self.terms, key=mono_key)
        return e, self.terms[e]

    def order(self):
        if not self.terms:
            return INF
        return max(len(e) for e in self.terms) - 1 if any(self.terms) else 0

    def degree_in(self, j: int) -> int:
        return max((e[j] if j < len(e) else 0) for e in self.terms) if self.terms else 0

    def rank(self) -> Rank:
        n = self.order()
        if n is INF:
            return Rank(INF, None)
        return Rank(n, self.degree_in(n))

    def is_constant(self) -> bool:
        return all(e == () for e in self.terms)

    def coefficient(self, e: Monomial):
        return self.terms.get(trim(e), 0)

    # -- arithmetic ----------------------------------------------------------------
    def __add__(self, other) -> "DifferentialPolynomial":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return self._like(out)

    __radd__ = __add__

    def __neg__(self) -> "DifferentialPolynomial":
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "DifferentialPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "DifferentialPolynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "DifferentialPolynomial":
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = mono_mul(e1, e2)
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return self._like(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "DifferentialPolynomial":
        out = self._like({(): self._one()})
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> "DifferentialPolynomial":
        return self._like({e: c * v for e, v in self.terms.items()})

    def _one(self):
        for c in self.terms.values():
            return c / c
        return Fraction(1)

    def _coerce(self, other) -> "DifferentialPolynomial":
        if isinstance(other, DifferentialPolynomial):
            return other
        return DifferentialPolynomial({(): other}, self.var)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DifferentialPolynomial):
            other = self._coerce(other)
        return (self - other).is_zero()

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- derivation ----------------------------------------------------------------
    def differentiate(self) -> "DifferentialPolynomial":
        """Formal derivative: additive, Leibniz on products, d(d^j x) = d^(j+1) x,
        and the coefficients' own derivation (zero on the rationals)."""
        out = self._like({})
        for e, c in self.terms.items():
            dc = derive_coefficient(c)
            if not is_zero(dc):
                out = out + self._like({e: dc})
            for j, k in enumerate(e):
                if k == 0:
                    continue
                lowered = list(e) + [0]
                lowered[j] -= 1
                lowered[j + 1] += 1
                out = out + self._like({trim(lowered): c * k})
        return out

    def substitute(self, values: list, zero, one):
        """Evaluate with ``values[j]`` standing for d^j x."""
        total = zero
        for e, c in self.terms.items():
            t = one * c
            for j, k in enumerate(e):
                for _ in range(k):
                    t = t * values[j]
            total = total + t
        return total

    # -- display -------------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in self.monomials():
            c = self.terms[e]
            m = mono_str(e, self.var)
            if e == ():
                parts.append(f"({c})")
            elif isinstance(c, Fraction) and c == 1:
                parts.append(m)
            else:
                parts.append(f"({c})*{m}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"DifferentialPolynomial({self})"


def differentiate(p: DifferentialPolynomial) -> DifferentialPolynomial:
    return p.differentiate()


def rank_of(p: DifferentialPolynomial) -> Rank:
    return p.rank()


def divide_exact(p: DifferentialPolynomial, r: DifferentialPolynomial) -> Optional[DifferentialPolynomial]:
    """``s`` with ``r * s == p``, or None when ``r`` does not divide ``p``."""
    if r.is_zero():
        return None
    er, cr = r.leading()
    q = p._like({})
    rest = p
    while not rest.is_zero():
        e, c = rest.leading()
        m = mono_div(e, er)
        if m is None:
            return None
        t = p._like({m: c / cr})
        q = q + t
        rest = rest - t * r
    return q


def poly_from_coeffs(coeffs: Mapping, var: str = "x") -> DifferentialPolynomial:
    """Convenience: ``{(2,): 1, (): -2}`` -> x^2 - 2, with int coefficients lifted."""
    return DifferentialPolynomial(
        {e: Fraction(c) if isinstance(c, int) else c for e, c in coeffs.items()}, var)
