"""Ordinary polynomial arithmetic in ``x`` alone (order-0 polynomials) over an
exact field: division, gcd, modular inverse and squarefree part."""
from __future__ import annotations

from typing import Optional

from .poly import DifferentialPolynomial, is_zero


def dense(p: DifferentialPolynomial, zero) -> list:
    if p.order() not in (0,) and not p.is_zero():
        raise ValueError(f"{p} involves derivatives")
    n = max((e[0] if e else 0) for e in p.terms) if p.terms else -1
    out = [zero] * (n + 1)
    for e, c in p.terms.items():
        out[e[0] if e else 0] = c
    return out


def sparse(coeffs: list, var: str) -> DifferentialPolynomial:
    return DifferentialPolynomial({((i,) if i else ()): c for i, c in enumerate(coeffs)}, var)


def _strip(a: list) -> list:
    while a and is_zero(a[-1]):
        a.pop()
    return a


def deg(p: DifferentialPolynomial) -> int:
    """Degree in x; -1 for the zero polynomial."""
    return max((e[0] if e else 0) for e in p.terms) if p.terms else -1


def poly_divmod(a: DifferentialPolynomial, b: DifferentialPolynomial, zero):
    A, B = _strip(dense(a, zero)), _strip(dense(b, zero))
    if not B:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [zero] * max(len(A) - len(B) + 1, 0)
    while len(A) >= len(B):
        c = A[-1] / B[-1]
        k = len(A) - len(B)
        q[k] = c
        for i, bc in enumerate(B):
            A[i + k] = A[i + k] - c * bc
        A.pop()
        _strip(A)
    return sparse(q, a.var), sparse(A, a.var)


def poly_mod(a, b, zero) -> DifferentialPolynomial:
    return poly_divmod(a, b, zero)[1]


def monic(p: DifferentialPolynomial) -> DifferentialPolynomial:
    if p.is_zero():
        return p
    _, c = p.leading()
    return p.scale(1 / c) if not hasattr(c, "inverse") else p.scale(c.inverse())


def poly_gcd(a, b, zero) -> DifferentialPolynomial:
    while not b.is_zero():
        a, b = b, poly_mod(a, b, zero)
    return monic(a)


def poly_xgcd(a, b, zero, one):
    """(g, u, v) with u*a + v*b = g monic."""
    r0, r1 = a, b
    s0, s1 = a._like({(): one}), a._like({})
    t0, t1 = a._like({}), a._like({(): one})
    while not r1.is_zero():
        q, r = poly_divmod(r0, r1, zero)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    _, c = r0.leading()
    inv = one / c
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def inverse_mod(a, g, zero, one) -> Optional[DifferentialPolynomial]:
    h, u, _ = poly_xgcd(a, g, zero, one)
    if deg(h) != 0:
        return None
    return poly_mod(u, g, zero)


def formal_derivative_x(p: DifferentialPolynomial) -> DifferentialPolynomial:
    """d/dx of an order-0 polynomial (coefficients held fixed)."""
    return p._like({((e[0] - 1,) if e[0] > 1 else ()): c * e[0] for e, c in p.terms.items() if e})


def squarefree(p, zero) -> DifferentialPolynomial:
    if deg(p) <= 0:
        return monic(p)
    g = poly_gcd(p, formal_derivative_x(p), zero)
    return monic(poly_divmod(p, g, zero)[0])
