"""Types over presented differential fields and the n-type enumeration.

A ``TypeOracle`` stands for a type lambda(x) over a field K determined by a
polynomial p: it commits to p(x) = 0 and answers atomic queries q(x) = 0 one
at a time, each answer staying fixed forever. Answers come from a bounded
*decider* (which derives q = 0 or q != 0 from p = 0 together with the
inequalities for lower-order polynomials). When the decider cannot settle a
query we look for a factorization of p within the budget. A factorization
switches the oracle to greedy answering (keep q = 0 whenever that stays
consistent with the committed answers). Otherwise the query stalls.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import count
from typing import Iterator, Optional

from ..sizes import INF
from .algebraic import LinearTopReducer, ModularContext
from .fields import (QQ, UNDEFINED, OracleInconsistent, evaluate_name, extend_field,
                     materialize_poly)
from .names import enumerate_formal_tuples, formal_polys, names_of_size, var_of
from .poly import DifferentialPolynomial, divide_exact, mono_key, mono_weight, trim


class Verdict(str, Enum):
    IN = "In"
    OUT = "Out"
    UNKNOWN = "Unknown"


class Stalled(RuntimeError):
    def __init__(self, query, index: Optional[int] = None):
        self.query = query
        self.index = index
        where = "" if index is None else f" (tuple #{index})"
        super().__init__(f"no verdict for {query} = 0 within budget{where}")


class _NoneFound:
    def __repr__(self) -> str:
        return "NONE_FOUND"

    def __bool__(self) -> bool:
        return False


NONE_FOUND = _NoneFound()


# -- deciders -----------------------------------------------------------------------

class AlgebraicDecider:
    """Exact decider for three kinds of p: the zero polynomial (x is
    differentially transcendental), order 0 (arithmetic modulo p in an
    explicitly built algebraic extension), and p linear in its top derivative
    (reduction by p and its derivatives). Anything else: Unknown."""

    name = "algebraic"

    def decide(self, oracle: "TypeOracle", q: DifferentialPolynomial) -> Verdict:
        if oracle.mode == "transcendental":
            return Verdict.IN if q.is_zero() else Verdict.OUT
        if oracle.context is not None:
            v = oracle.context.verdict(q)
            return Verdict.UNKNOWN if v is None else (Verdict.IN if v else Verdict.OUT)
        if oracle.reducer is not None:
            return Verdict.IN if oracle.reducer.verdict(q) else Verdict.OUT
        return Verdict.UNKNOWN


class StallingDecider:
    """Never derives anything: every non-trivial query goes to the fallback."""

    name = "stalling"

    def decide(self, oracle: "TypeOracle", q: DifferentialPolynomial) -> Verdict:
        return Verdict.UNKNOWN


DECIDERS = {"algebraic": AlgebraicDecider, "stalling": StallingDecider}


# -- the type oracle ----------------------------------------------------------------

def query_key(q: DifferentialPolynomial) -> str:
    """q = 0 and c*q = 0 are the same formula: key on the monic form."""
    if q.is_zero():
        return "0"
    _, c = q.leading()
    inv = c.inverse() if hasattr(c, "inverse") else 1 / c
    return str(q.scale(inv))


class TypeOracle:
    def __init__(self, K, p, decider, budget: int):
        self.K = K
        self.var = var_of(K.level + 1)
        self.p = p
        self.decider = decider
        self.budget = budget
        self.committed: dict = {}
        self._qmap: dict = {}            # key -> the polynomial first asked
        self.log: list = []              # (query text, verdict) in commit order
        self.events: list = []
        self.context: Optional[ModularContext] = None
        self.reducer: Optional[LinearTopReducer] = None
        self.witness = None
        self._searched = False
        self.stalled: list = []
        self.F = None
        if p is UNDEFINED or (not p.is_zero() and p.is_constant()):
            # nothing sensible to commit: fall back to the differentially
            # transcendental type, where every committed q != 0 stays consistent
            self.mode = "transcendental"
            self.events.append("fallback: p makes no sense or is a nonzero constant")
            return
        self.mode = "transcendental" if p.is_zero() else "type"
        if p.is_zero():
            return
        self._commit(query_key(p), p, Verdict.IN)
        n = p.order()
        if n == 0:
            self.context = ModularContext(K, p)
        elif p.degree_in(n) == 1:
            self.reducer = LinearTopReducer(p)

    def attach(self, F) -> None:
        self.F = F

    # -- answering --------------------------------------------------------------------
    def decide(self, q: DifferentialPolynomial) -> bool:
        """True iff q(x) = 0 is in the type."""
        if q.is_zero():
            return True
        if q.is_constant():
            return False
        k = query_key(q)
        if k in self.committed:
            return self.committed[k] is Verdict.IN
        v = self.decider.decide(self, q)
        if v is Verdict.UNKNOWN:
            v = self._fallback(q)
        self._commit(k, q, v)
        return v is Verdict.IN

    is_zero = decide

    def _fallback(self, q) -> Verdict:
        if not self._searched:
            self._searched = True
            self.witness = reducibility_witness(self.K, self.p, self.budget)
            if self.witness:
                r, s = self.witness
                self.mode = "greedy"
                self.events.append(f"reducible: ({r}) * ({s})")
        if self.mode == "greedy" and self.context is not None:
            v = self.context.verdict(q)
            if v is None:
                v = True                    # q = 0 is consistent: keep it
                self.context.refine(q, True)
            return Verdict.IN if v else Verdict.OUT
        self.stalled.append(str(q))
        self.events.append(f"stalled: {q}")
        raise Stalled(q)

    def _commit(self, key: str, q, v: Verdict) -> None:
        old = self.committed.get(key)
        if old is not None and old is not v:
            raise OracleInconsistent(f"{q} = 0 both asserted and refuted")
        self.committed[key] = v
        self._qmap.setdefault(key, q)
        self.log.append((str(q), v))

    def normal_form(self, num, den):
        if self.context is not None:
            return self.context.normal_form(num, den)
        return num, den

    def dump(self) -> str:
        lines = [f"mode={self.mode} p={self.p if self.p is not UNDEFINED else 'undefined'}"]
        lines += [f"  {e}" for e in self.events]
        lines += [f"  {q} = 0 : {v.value}" for q, v in self.log]
        return "\n".join(lines)

    def audit(self) -> list:
        """Re-check every committed answer against the final state; returns
        the violations (empty when the committed data is consistent)."""
        bad = []
        if self.mode in ("type", "greedy") and self.committed.get(query_key(self.p)) is Verdict.OUT:
            bad.append(f"p = 0 refuted: {self.p}")
        for key, v in self.committed.items():
            q = self._qmap.get(key)
            if q is None:
                continue
            if self.context is not None:
                w = self.context.verdict(q)
            elif self.reducer is not None:
                w = self.reducer.verdict(q)
            elif self.mode == "transcendental":
                w = q.is_zero()
            else:
                continue
            if w is not None and w != (v is Verdict.IN):
                bad.append(f"{q}: committed {v.value}")
        return bad


def enumerate_type(K, p, decider, budget: int) -> TypeOracle:
    return TypeOracle(K, p, decider, budget)


# -- searches -----------------------------------------------------------------------

def _coefficients_of_size(K, n: int) -> list:
    out = []
    for name in names_of_size(K.level, n):
        if name.syntactically_zero():
            continue
        v = evaluate_name(name, K)
        if v is UNDEFINED or (v == 0 if K.level == 0 else v.is_zero()):
            continue
        out.append(v)
    return out


def _monic_candidates(K, var: str, mons: list) -> Iterator[DifferentialPolynomial]:
    """Monic polynomials on the allowed monomials, by increasing size."""
    mons = sorted(mons, key=mono_key, reverse=True)
    coeff_cache: dict = {}

    def coeffs(n):
        if n not in coeff_cache:
            coeff_cache[n] = _coefficients_of_size(K, n)
        return coeff_cache[n]

    one_size = 2                                  # the rational 1
    for total in count(1):
        for i, lead in enumerate(mons):
            if lead == ():
                continue
            rest = total - 1 - one_size - mono_weight(lead)
            if rest < 0:
                continue
            lower = mons[i + 1:]

            def rec(j, left, acc):
                if left == 0:
                    yield dict(acc)
                    return
                for t in range(j, len(lower)):
                    m = lower[t]
                    w = mono_weight(m)
                    for cs in range(1, left - w + 1):
                        for c in coeffs(cs):
                            acc[m] = c
                            yield from rec(t + 1, left - w - cs, acc)
                            del acc[m]

            for terms in rec(0, rest, {lead: K.one}):
                yield DifferentialPolynomial(terms, var)


def reducibility_witness(K, p, budget: int):
    """Search ``budget`` candidate factors r (monic, nonconstant, in the
    monomials bounded by p's) for ``p = r * s`` with s nonconstant. Returns
    ``(r, s)`` or NONE_FOUND (which proves nothing)."""
    if p is UNDEFINED or p.is_zero() or p.is_constant():
        return NONE_FOUND
    width = max(len(e) for e in p.terms)
    top = [max((e[j] if j < len(e) else 0) for e in p.terms) for j in range(width)]
    mons = [()]
    for j, k in enumerate(top):
        mons = [trim(tuple(m) + (0,) * (j - len(m)) + (i,)) for m in mons for i in range(k + 1)]
    mons = sorted(set(mons), key=mono_key)
    for tried, r in enumerate(_monic_candidates(K, p.var, mons)):
        if tried >= budget:
            return NONE_FOUND
        s = divide_exact(p, r)
        if s is not None and not s.is_constant() and r * s == p:
            return (r, s)
    return NONE_FOUND


def lower_order_stream(K, p, size_bound: int) -> Iterator[DifferentialPolynomial]:
    """Polynomials over K (from formal polynomials of size <= bound, each once)
    of order below p's; the zero polynomial counts as order infinity."""
    n = p.order()
    if n == 0:
        return
    for fp in formal_polys(K.level, var_of(K.level + 1), size_bound):
        m = fp.order()
        if m is INF or (n is not INF and m >= n):
            continue
        q = materialize_poly(fp, K)
        if q is not UNDEFINED:
            yield q


def probe_queries(K, how_many: int, size_bound: int = 12) -> list:
    """The first nonconstant polynomials over K in canonical order."""
    out = []
    for fp in formal_polys(K.level, var_of(K.level + 1), size_bound):
        if len(out) >= how_many:
            break
        if fp.order() == 0 and all(e == () for e, _ in fp.terms):
            continue
        q = materialize_poly(fp, K)
        if q is UNDEFINED or q.is_constant():
            continue
        out.append(q)
    return out


# -- the pipeline -------------------------------------------------------------------

@dataclass
class TypeRecord:
    index: int
    formal: tuple
    oracles: list = field(default_factory=list)
    fields: list = field(default_factory=list)
    stalled: Optional[tuple] = None          # (coordinate, query text)

    def dump(self) -> str:
        head = f"#{self.index} " + " ; ".join(str(p) for p in self.formal)
        body = []
        for i, o in enumerate(self.oracles, 1):
            body.append(f" x{i}: " + o.dump().replace("\n", "\n   "))
        if self.stalled:
            body.append(f" stalled at x{self.stalled[0]}: {self.stalled[1]}")
        return "\n".join([head] + body)


def enumerate_types_n(n: int, budget: int, decider, size_bound: int = 8, probe: int = 20,
                      universe_bound: int = 0, on_stall: str = "raise") -> Iterator[TypeRecord]:
    """For each formal n-tuple: materialize p_i over K_{i-1}, build the type of
    x_i over K_{i-1}, answer ``probe`` canonical queries, and extend the field.
    ``on_stall="raise"`` propagates Stalled with the tuple index;
    ``"record"`` notes it in the record and moves on."""
    for index, tup in enumerate(enumerate_formal_tuples(n, size_bound)):
        rec = TypeRecord(index, tup)
        K = QQ
        for i, fp in enumerate(tup, 1):
            p = materialize_poly(fp, K)
            lam = enumerate_type(K, p, decider, budget)
            rec.oracles.append(lam)
            try:
                for q in probe_queries(K, probe):
                    lam.decide(q)
            except Stalled as exc:
                if on_stall == "raise":
                    raise Stalled(exc.query, index) from exc
                rec.stalled = (i, str(exc.query))
                break
            K = extend_field(K, lam, universe_bound)
            rec.fields.append(K)
        yield rec
