"""Sizes in N u {oo}.

``INF`` is a tagged singleton. It compares above every natural number and
supports only the two operations the constructions need (adding sizes and
comparing them), so it can never leak into ordinary arithmetic as a big
sentinel number.
"""
from __future__ import annotations

from typing import Union


class _Infinity:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("sjinv.INF")

    def __lt__(self, other) -> bool:
        _check(other)
        return False

    def __le__(self, other) -> bool:
        _check(other)
        return other is self

    def __gt__(self, other) -> bool:
        _check(other)
        return other is not self

    def __ge__(self, other) -> bool:
        _check(other)
        return True


def _check(other) -> None:
    if other is not INF and not isinstance(other, int):
        raise TypeError(f"cannot compare INF with {type(other).__name__}")


INF = _Infinity()

Size = Union[int, _Infinity]


def is_finite(v: Size) -> bool:
    return v is not INF


def add(*vals: Size) -> Size:
    """Sum of sizes; any infinite summand makes the sum infinite."""
    total = 0
    for v in vals:
        if v is INF:
            return INF
        total += v
    return total


def cap(v: Size, bound: int) -> int:
    """Replace INF (or anything above ``bound``) by ``bound``."""
    if v is INF or v > bound:
        return bound
    return v


def size_str(v: Size) -> str:
    return "inf" if v is INF else str(v)


def parse_size(text: str) -> Size:
    text = text.strip().lower()
    if text in ("inf", "oo", "infinity", "∞"):
        return INF
    n = int(text)
    if n < 0:
        raise ValueError(f"negative size {n}")
    return n


def to_nat(v: Size) -> int:
    """Bijection N u {oo} -> N used by the index coding (oo -> 0, k -> k+1)."""
    return 0 if v is INF else v + 1


def from_nat(n: int) -> Size:
    return INF if n == 0 else n - 1
