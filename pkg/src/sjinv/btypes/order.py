"""B1-types of tuples in linear orderings.

A tuple ``u_0..u_{n-1}`` of distinct elements has its type fixed by the
arrangement of the ``u_i`` and the ``n+1`` interval sizes read left to right:
left of the least element, between neighbours, right of the greatest.

Formulas are Boolean combinations of ``("gap", a, b, m)``: "at least ``m``
elements lie strictly between ``a`` and ``b``", where the endpoints are
variable indices or ``"-inf"``/``"+inf"``. With ``m = 0`` and two variables it
just says ``a < b``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Union

from ..coding import decode_tuple, encode_tuple, pair, unpair
from ..sizes import INF, Size, add, from_nat, is_finite, size_str, to_nat
from .common import DecodeError, UnsupportedFormula, holds

Endpoint = Union[int, str]
LEFT, RIGHT = "-inf", "+inf"


@dataclass(frozen=True)
class OrderType:
    ranks: tuple[int, ...]   # ranks[i] = position of u_i in increasing order
    sizes: tuple[Size, ...]  # n+1 gaps, left to right

    def __post_init__(self):
        n = len(self.ranks)
        if sorted(self.ranks) != list(range(n)):
            raise DecodeError(f"ranks {self.ranks} are not a permutation")
        if len(self.sizes) != n + 1:
            raise DecodeError("need one more size than variables")
        for v in self.sizes:
            if not (v is INF or (isinstance(v, int) and v >= 0)):
                raise DecodeError(f"bad size {v!r}")

    @property
    def arity(self) -> int:
        return len(self.ranks)

    @classmethod
    def sorted_tuple(cls, sizes) -> "OrderType":
        """Type of an increasing tuple with the given gaps."""
        return cls(tuple(range(len(sizes) - 1)), tuple(sizes))

    def __str__(self) -> str:
        return "[" + ",".join(size_str(v) for v in self.sizes) + "]" + (
            "" if self.ranks == tuple(range(self.arity)) else f"@{list(self.ranks)}")

    # -- semantics -----------------------------------------------------------
    def _pos(self, e: Endpoint) -> int:
        """Endpoint position on the line: -1, ranks, n."""
        if e == LEFT:
            return -1
        if e == RIGHT:
            return self.arity
        if isinstance(e, int) and 0 <= e < self.arity:
            return self.ranks[e]
        raise UnsupportedFormula(f"bad endpoint {e!r}")

    def between(self, a: Endpoint, b: Endpoint) -> Size:
        """Size of the open interval (a, b); -1 if not a < b."""
        pa, pb = self._pos(a), self._pos(b)
        if pa >= pb:
            return -1
        # gaps pa+1 .. pb plus the pb-pa-1 tuple elements strictly inside
        return add(*self.sizes[pa + 1: pb + 1], pb - pa - 1)

    def atomic(self, phi: tuple) -> bool:
        if phi[0] != "gap" or len(phi) != 4:
            raise UnsupportedFormula(f"not an ordering formula: {phi!r}")
        _, a, b, m = phi
        if not isinstance(m, int) or m < 0:
            raise UnsupportedFormula(f"bad count in {phi!r}")
        size = self.between(a, b)
        if size == -1:
            return False
        return size is INF or size >= m

    def satisfies(self, phi: tuple) -> bool:
        return holds(phi, self.atomic)

    def restrict(self, keep: int) -> "OrderType":
        """Type of the first ``keep`` variables."""
        order = sorted(range(self.arity), key=self.ranks.__getitem__)
        kept = [i for i in order if i < keep]
        ends = [LEFT] + kept + [RIGHT]
        sizes = tuple(self.between(a, b) for a, b in zip(ends, ends[1:]))
        ranks = [0] * keep
        for r, i in enumerate(kept):
            ranks[i] = r
        return OrderType(tuple(ranks), sizes)


def perm_rank(perm: tuple[int, ...]) -> int:
    """Lehmer-code rank of a permutation of ``range(n)``."""
    rest = sorted(perm)
    r = 0
    for i, v in enumerate(perm):
        j = rest.index(v)
        r += j * factorial(len(perm) - 1 - i)
        rest.pop(j)
    return r


def perm_unrank(r: int, n: int) -> tuple[int, ...]:
    rest = list(range(n))
    out = []
    for i in range(n):
        j, r = divmod(r, factorial(n - 1 - i))
        out.append(rest.pop(j))
    return tuple(out)


@lru_cache(maxsize=1 << 16)
def encode_order(t: OrderType) -> int:
    n = t.arity
    return pair(n, perm_rank(t.ranks) + factorial(n) * encode_tuple([to_nat(v) for v in t.sizes]))


@lru_cache(maxsize=1 << 16)
def decode_order(i: int) -> OrderType:
    if not isinstance(i, int) or i < 0:
        raise DecodeError(f"bad index {i!r}")
    n, rest = unpair(i)
    if n > 64:
        raise DecodeError(f"arity {n} too large")
    perm_idx, code = rest % factorial(n), rest // factorial(n)
    sizes = tuple(from_nat(v) for v in decode_tuple(code, n + 1))
    return OrderType(perm_unrank(perm_idx, n), sizes)


def gap(a: Endpoint, b: Endpoint, m: int = 0) -> tuple:
    return ("gap", a, b, m)


def finite_realization(t: OrderType, infinite_as: int) -> tuple[list[int], tuple[int, ...]]:
    """A finite chain realizing ``t`` with each infinite gap cut to ``infinite_as``
    elements: returns (universe 0..N-1 in order, positions of the tuple)."""
    cur = 0
    order = sorted(range(t.arity), key=t.ranks.__getitem__)
    where = {}
    for g, v in enumerate(t.sizes):
        cur += v if is_finite(v) else infinite_as
        if g < t.arity:
            where[order[g]] = cur
            cur += 1
    pos = tuple(where[i] for i in range(t.arity))
    return list(range(cur)), pos
