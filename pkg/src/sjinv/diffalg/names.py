"""Formal names for the elements of a tower of differential fields.

A level-0 name is a rational. A level-(i+1) name is a formal quotient
``r(x_{i+1}) / s(x_{i+1})`` of two formal differential polynomials whose
coefficients are level-i names; the denominator may denote 0.

Sizes (used for the canonical enumeration order):

* rational ``p/q`` in lowest terms: ``|p| + q`` (so 0 has size 1);
* formal polynomial: ``1 + sum(size(coefficient) + weight(monomial))``, where
  ``d^j x`` weighs ``j + 1`` per power;
* level-(i+1) name: ``1 + size(r) + size(s)``.

Canonical order is by size, then by serialization string.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Iterator, Optional

from ..sizes import INF
from .poly import mono_key, mono_str, mono_weight, trim


def var_of(level: int) -> str:
    return f"x{level}"


@dataclass(frozen=True)
class FormalPoly:
    """A differential polynomial in ``var`` with formal-name coefficients,
    terms sorted by the monomial order (leading term first)."""

    var: str
    coeff_level: int
    terms: tuple = ()

    @classmethod
    def of(cls, var: str, coeff_level: int, terms: dict) -> "FormalPoly":
        ts = tuple(sorted(((trim(e), c) for e, c in terms.items()),
                          key=lambda t: mono_key(t[0]), reverse=True))
        for _, c in ts:
            if c.syntactically_zero() or c.level != coeff_level:
                raise MalformedName(f"bad coefficient {c} at level {coeff_level}")
        return cls(var, coeff_level, ts)

    def size(self) -> int:
        return 1 + sum(c.size() + mono_weight(e) for e, c in self.terms)

    def order(self):
        if not self.terms:
            return INF
        return max(len(e) for e, _ in self.terms) - 1 if any(e for e, _ in self.terms) else 0

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"[{c}]" if e == () else f"[{c}]*{mono_str(e, self.var)}"
                          for e, c in self.terms)


@dataclass(frozen=True)
class FormalName:
    level: int
    value: Optional[Fraction] = None
    num: Optional[FormalPoly] = None
    den: Optional[FormalPoly] = None

    @classmethod
    def rational(cls, q) -> "FormalName":
        return cls(0, Fraction(q))

    @classmethod
    def quotient(cls, num: FormalPoly, den: FormalPoly) -> "FormalName":
        if num.coeff_level != den.coeff_level or num.var != den.var:
            raise MalformedName("numerator and denominator disagree on level")
        if num.var != var_of(num.coeff_level + 1):
            raise MalformedName(f"level-{num.coeff_level + 1} name must use {var_of(num.coeff_level + 1)}")
        return cls(num.coeff_level + 1, None, num, den)

    def syntactically_zero(self) -> bool:
        return self.value == 0 if self.level == 0 else self.num.is_zero()

    def size(self) -> int:
        if self.level == 0:
            return rational_size(self.value)
        return 1 + self.num.size() + self.den.size()

    def __str__(self) -> str:
        if self.level == 0:
            return str(self.value)
        return f"({self.num})/({self.den})"


class MalformedName(ValueError):
    pass


def rational_size(q: Fraction) -> int:
    return abs(q.numerator) + q.denominator


# -- exact-size enumeration ---------------------------------------------------------

@lru_cache(maxsize=None)
def rationals_of_size(n: int) -> tuple:
    if n == 1:
        return (Fraction(0),)
    out = []
    for q in range(1, n):
        p = n - q
        if gcd(p, q) == 1:
            out += [Fraction(p, q), Fraction(-p, q)]
    return tuple(sorted(out, key=str))


@lru_cache(maxsize=None)
def monomials_of_weight(w: int) -> tuple:
    """Exponent vectors with total weight ``w`` (partitions of ``w``)."""
    out = []

    def rec(rest: int, j: int, acc: list):
        if rest == 0:
            out.append(trim(acc))
            return
        if j + 1 > rest:
            return
        for k in range(rest // (j + 1), -1, -1):
            rec(rest - k * (j + 1), j + 1, acc + [k])

    rec(w, 0, [])
    return tuple(sorted(set(out), key=mono_key))


@lru_cache(maxsize=None)
def _nonzero_names(level: int, n: int) -> tuple:
    return tuple(c for c in names_of_size(level, n) if not c.syntactically_zero())


@lru_cache(maxsize=None)
def names_of_size(level: int, n: int) -> tuple:
    if level == 0:
        return tuple(FormalName.rational(q) for q in rationals_of_size(n))
    out = []
    for a in range(1, n - 1):
        for num in polys_of_size(level - 1, var_of(level), a):
            for den in polys_of_size(level - 1, var_of(level), n - 1 - a):
                out.append(FormalName.quotient(num, den))
    return tuple(sorted(out, key=str))


@lru_cache(maxsize=None)
def polys_of_size(coeff_level: int, var: str, n: int) -> tuple:
    if n < 1:
        return ()
    if n == 1:
        return (FormalPoly(var, coeff_level, ()),)
    budget = n - 1
    mons = [m for w in range(budget) for m in monomials_of_weight(w)]
    out = []

    def rec(i: int, rest: int, acc: dict):
        if rest == 0:
            out.append(FormalPoly.of(var, coeff_level, acc))
            return
        for j in range(i, len(mons)):
            m = mons[j]
            w = mono_weight(m)
            for cs in range(1, rest - w + 1):
                for c in _nonzero_names(coeff_level, cs):
                    acc[m] = c
                    rec(j + 1, rest - w - cs, acc)
                    del acc[m]

    rec(0, budget, {})
    return tuple(sorted(out, key=str))


def formal_polys(coeff_level: int, var: str, size_bound: int) -> Iterator[FormalPoly]:
    for n in range(1, size_bound + 1):
        yield from polys_of_size(coeff_level, var, n)


def names_upto(level: int, size_bound: int) -> Iterator[FormalName]:
    for n in range(1, size_bound + 1):
        yield from names_of_size(level, n)


def _compositions(total: int, parts: int) -> Iterator[tuple]:
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_formal_tuples(n: int, size_bound: int) -> Iterator[tuple]:
    """Every n-tuple (p_1, ..., p_n), p_i in x_i with level-(i-1) coefficients,
    of total size at most ``size_bound``; each exactly once, in a fixed order."""
    if n < 1:
        raise ValueError("n must be at least 1")
    for total in range(n, size_bound + 1):
        for sizes in _compositions(total, n):
            pools = [polys_of_size(i, var_of(i + 1), k) for i, k in enumerate(sizes)]
            yield from product(*pools)
