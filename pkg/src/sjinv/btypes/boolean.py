"""B1-types of tuples in Boolean algebras.

A tuple ``u_0..u_{n-1}`` generates a finite subalgebra whose atoms are the
non-zero cells ``u_0^{e_0} & ... & u_{n-1}^{e_{n-1}}``. Cell ``e`` is the
bitmask of variables taken positively. The type is the size of every cell
(0 for an empty cell, ``INF`` for an infinite one).

Formulas are Boolean combinations of ``("size_ge", cells, m)``: "the join of
these cells has at least ``m`` atoms below it", i.e. it splits into ``m``
disjoint non-zero pieces. ``m = 1`` says the element is non-zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..coding import decode_tuple, encode_tuple, pair, unpair
from ..sizes import INF, Size, add, is_finite, size_str
from .common import DecodeError, UnsupportedFormula, holds

MAX_ARITY = 4


def _to_nat(v: Size) -> int:
    # 0 -> 0 keeps the all-empty (excluded) code at 0
    if v is INF:
        return 1
    return 0 if v == 0 else v + 1


def _from_nat(k: int) -> Size:
    if k == 0:
        return 0
    return INF if k == 1 else k - 1


@dataclass(frozen=True)
class BAType:
    arity: int
    sizes: tuple[Size, ...]  # indexed by cell bitmask, length 2**arity

    def __post_init__(self):
        if not 0 <= self.arity <= MAX_ARITY:
            raise DecodeError(f"arity {self.arity} out of range")
        if len(self.sizes) != 1 << self.arity:
            raise DecodeError("need one size per cell")
        for v in self.sizes:
            if not (v is INF or (isinstance(v, int) and v >= 0)):
                raise DecodeError(f"bad size {v!r}")
        if all(v == 0 for v in self.sizes):
            raise DecodeError("the cells must partition a non-zero 1")

    def __str__(self) -> str:
        return "{" + ",".join(f"{e:0{max(self.arity, 1)}b}:{size_str(v)}"
                              for e, v in enumerate(self.sizes)) + "}"

    def size_of(self, cells: Iterable[int]) -> Size:
        return add(*(self.sizes[c] for c in cells))

    def atomic(self, phi: tuple) -> bool:
        if phi[0] != "size_ge" or len(phi) != 3:
            raise UnsupportedFormula(f"not a Boolean-algebra formula: {phi!r}")
        _, cells, m = phi
        if any(not 0 <= c < len(self.sizes) for c in cells):
            raise UnsupportedFormula(f"cell out of range in {phi!r}")
        size = self.size_of(cells)
        return size is INF or size >= m

    def satisfies(self, phi: tuple) -> bool:
        return holds(phi, self.atomic)

    def restrict(self, keep: int) -> "BAType":
        mask = (1 << keep) - 1
        out: list[Size] = [0] * (1 << keep)
        for e, v in enumerate(self.sizes):
            out[e & mask] = add(out[e & mask], v)
        return BAType(keep, tuple(out))

    def element_size(self, i: int) -> Size:
        return self.size_of(var_cells(self.arity, i))


def var_cells(n: int, i: int) -> tuple[int, ...]:
    return tuple(e for e in range(1 << n) if e >> i & 1)


def not_cells(n: int, cells: Iterable[int]) -> tuple[int, ...]:
    s = set(cells)
    return tuple(e for e in range(1 << n) if e not in s)


def size_ge(cells: Iterable[int], m: int) -> tuple:
    return ("size_ge", tuple(sorted(set(cells))), m)


def encode_ba(t: BAType) -> int:
    return pair(t.arity, encode_tuple([_to_nat(v) for v in t.sizes]) - 1)


def decode_ba(i: int) -> BAType:
    if not isinstance(i, int) or i < 0:
        raise DecodeError(f"bad index {i!r}")
    n, rest = unpair(i)
    if n > MAX_ARITY:
        raise DecodeError(f"arity {n} out of range")
    sizes = tuple(_from_nat(v) for v in decode_tuple(rest + 1, 1 << n))
    return BAType(n, sizes)


def finite_realization(t: BAType, infinite_as: int) -> tuple[int, tuple[int, ...]]:
    """Power set of N atoms realizing ``t`` with infinite cells cut to
    ``infinite_as`` atoms: returns (N, bitmask of each u_i over the atoms)."""
    counts = [v if is_finite(v) else infinite_as for v in t.sizes]
    owner = []
    for e, k in enumerate(counts):
        owner.extend([e] * k)
    u = tuple(sum(1 << a for a, e in enumerate(owner) if e >> i & 1) for i in range(t.arity))
    return len(owner), u
