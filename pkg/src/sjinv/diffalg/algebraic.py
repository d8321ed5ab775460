"""Exact reasoning behind the shipped decider.

``ModularContext``: x is a root of a squarefree order-0 polynomial g over K.
Then dx is forced (differentiate g(x) = 0) and every differential polynomial
in x reduces to an ordinary polynomial modulo g. A query q is
derivably 0 when its residue is 0 mod g, and derivably nonzero when the
residue is coprime to g.

``LinearTopReducer``: p has order n and is linear in d^n x with a nonzero
separant. Using p and its derivatives, any q reduces to a polynomial of order
< n, which is 0 exactly when it is formally 0 (the lower derivatives of a
generic zero of p are independent).
"""
from __future__ import annotations

from typing import Optional

from .poly import DifferentialPolynomial, derive_coefficient
from .univariate import (deg, formal_derivative_x, inverse_mod, poly_divmod, poly_gcd,
                         poly_mod, squarefree)


class ModularContext:
    def __init__(self, K, g: DifferentialPolynomial):
        self.K = K
        self.var = g.var
        self.set_modulus(squarefree(g, K.zero))

    def set_modulus(self, g: DifferentialPolynomial) -> None:
        if deg(g) < 1:
            raise ValueError("modulus must be nonconstant")
        self.g = g
        self._vals: list = []

    def _coef_derive(self, r: DifferentialPolynomial) -> DifferentialPolynomial:
        return r._like({e: derive_coefficient(c) for e, c in r.terms.items()})

    def _mod(self, r: DifferentialPolynomial) -> DifferentialPolynomial:
        return poly_mod(r, self.g, self.K.zero)

    def values(self, n: int) -> list:
        """Residues of x, dx, ..., d^n x modulo g."""
        if not self._vals:
            x = DifferentialPolynomial.gen(0, self.var, self.K.one)
            inv = inverse_mod(formal_derivative_x(self.g), self.g, self.K.zero, self.K.one)
            if inv is None:
                raise ValueError("modulus is not squarefree")
            self._vals = [self._mod(x), self._mod(-(self._coef_derive(self.g) * inv))]
        while len(self._vals) <= n:
            r = self._vals[-1]
            self._vals.append(self._mod(self._coef_derive(r) + formal_derivative_x(r) * self._vals[1]))
        return self._vals

    def residue(self, q: DifferentialPolynomial) -> DifferentialPolynomial:
        n = q.order()
        if n is not None and not isinstance(n, int):
            return q                                  # the zero polynomial
        vals = self.values(max(n, 1))
        zero = q._like({})
        one = q._like({(): self.K.one})
        return self._mod(q.substitute(vals, zero, one))

    def verdict(self, q: DifferentialPolynomial) -> Optional[bool]:
        """True: q = 0 follows; False: q != 0 follows; None: neither."""
        r = self.residue(q)
        if r.is_zero():
            return True
        if deg(poly_gcd(r, self.g, self.K.zero)) == 0:
            return False
        return None

    def refine(self, q: DifferentialPolynomial, zero: bool) -> None:
        """Commit q = 0 (keep the common roots) or q != 0 (drop them)."""
        r = self.residue(q)
        h = poly_gcd(r, self.g, self.K.zero)
        if zero:
            self.set_modulus(h)
        else:
            self.set_modulus(poly_divmod(self.g, h, self.K.zero)[0])

    def normal_form(self, num, den):
        r, s = self.residue(num), self.residue(den)
        inv = inverse_mod(s, self.g, self.K.zero, self.K.one)
        if inv is None:
            return num, den
        return self._mod(r * inv), num._like({(): self.K.one})


class LinearTopReducer:
    def __init__(self, p: DifferentialPolynomial):
        n = p.order()
        if not isinstance(n, int) or n < 1 or p.degree_in(n) != 1:
            raise ValueError("needs order >= 1 and degree 1 in the top derivative")
        self.n = n
        self.sep = _coefficient_of_power(p, n, 1)
        self.derivs = [p]

    def _tail(self, k: int) -> DifferentialPolynomial:
        """d^k p minus its top part sep * d^(n+k) x."""
        while len(self.derivs) <= k:
            self.derivs.append(self.derivs[-1].differentiate())
        d = self.derivs[k]
        return d - self.sep * _gen_like(d, self.n + k)

    def reduce(self, q: DifferentialPolynomial) -> DifferentialPolynomial:
        m = q.order()
        while isinstance(m, int) and m >= self.n:
            tail = -self._tail(m - self.n)
            d = q.degree_in(m)
            out = q._like({})
            for i in range(d + 1):
                c = _coefficient_of_power(q, m, i)
                if not c.is_zero():
                    out = out + c * tail ** i * self.sep ** (d - i)
            q = out
            m = q.order()
        return q

    def verdict(self, q: DifferentialPolynomial) -> bool:
        return self.reduce(q).is_zero()


def _gen_like(p: DifferentialPolynomial, j: int) -> DifferentialPolynomial:
    one = p._one()
    return DifferentialPolynomial.gen(j, p.var, one)


def _coefficient_of_power(q: DifferentialPolynomial, j: int, i: int) -> DifferentialPolynomial:
    """The coefficient of (d^j x)^i, as a polynomial free of d^j x."""
    out = {}
    for e, c in q.terms.items():
        k = e[j] if j < len(e) else 0
        if k == i:
            f = list(e) + [0] * (j + 1 - len(e))
            f[j] = 0
            out[tuple(f)] = c
    return q._like(out)
