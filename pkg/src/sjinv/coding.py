"""Bijective codings of naturals, pairs, fixed-length tuples and finite lists."""
from __future__ import annotations

from math import comb, factorial, isqrt
from typing import Sequence


def pair(a: int, b: int) -> int:
    """Cantor pairing, a bijection N x N -> N."""
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(z: int) -> tuple[int, int]:
    if z < 0:
        raise ValueError("negative code")
    w = (isqrt(8 * z + 1) - 1) // 2
    t = w * (w + 1) // 2
    b = z - t
    return w - b, b


def encode_tuple(xs: Sequence[int]) -> int:
    """Bijection N^k -> N for a fixed k >= 1.

    Simplicial (generalised Cantor) numbering: with partial sums
    ``S_j = x_1 + ... + x_j`` the code is ``sum_j C(S_j + j - 1, j)``. Codes
    grow polynomially in the entries, unlike nested pairing.
    """
    if not xs:
        raise ValueError("empty tuple")
    code, acc = 0, 0
    for j, x in enumerate(xs, start=1):
        if x < 0:
            raise ValueError("negative entry")
        acc += x
        code += comb(acc + j - 1, j)
    return code


def _largest_sum(code: int, j: int) -> int:
    """Largest S with C(S + j - 1, j) <= code."""
    if j == 1:
        return code
    try:
        # S^j / j! <= C(S + j - 1, j) <= (S + j - 1)^j / j! brackets S within j
        est = int((code * factorial(j)) ** (1.0 / j))
    except OverflowError:
        return _largest_sum_bisect(code, j)
    lo, hi = max(0, est - j - 1), est + 2
    if comb(lo + j - 1, j) > code or comb(hi + j - 1, j) <= code:
        return _largest_sum_bisect(code, j)
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if comb(mid + j - 1, j) <= code:
            lo = mid
        else:
            hi = mid
    return lo


def _largest_sum_bisect(code: int, j: int) -> int:
    hi = 1
    while comb(hi + j - 1, j) <= code:
        hi *= 2
    lo = 0
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if comb(mid + j - 1, j) <= code:
            lo = mid
        else:
            hi = mid
    return lo


def decode_tuple(code: int, k: int) -> tuple[int, ...]:
    if k < 1:
        raise ValueError("k must be positive")
    if code < 0:
        raise ValueError("negative code")
    sums = [0] * k
    for j in range(k, 0, -1):
        sj = _largest_sum(code, j)
        sums[j - 1] = sj
        code -= comb(sj + j - 1, j)
    return tuple(b - a for a, b in zip([0] + sums[:-1], sums))


def encode_list(xs: Sequence[int]) -> int:
    """Bijection between finite lists of naturals and N; [] -> 0."""
    code = 0
    for x in reversed(xs):
        code = 1 + pair(x, code)
    return code


def decode_list(code: int) -> list[int]:
    out = []
    while code:
        x, code = unpair(code - 1)
        out.append(x)
    return out


def pair_order_key(z: int, z2: int) -> tuple[int, int, int]:
    """Standard well-order on pairs of naturals: by max, then first, then second.

    Pairs involving a newly enumerated (larger) element always come after
    every pair of older elements, so a first-qualifying search over growing
    prefixes never jumps backwards to a fresh pair.
    """
    return (max(z, z2), z, z2)
