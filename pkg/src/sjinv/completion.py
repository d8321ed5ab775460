"""Effective type completion for orderings and Boolean algebras.

Given a type ``p(u)`` and an existential formula ``phi(u, x)`` with
``(Ex) phi`` in ``p``, run through a fixed list of existential formulas
about ``x`` and keep each one that is consistent with ``p`` and everything
decided so far; each rejected one contributes its negation.

Consistency is decided from ``p`` alone. Every formula only tests sizes up
to a threshold ``K``, so it suffices to try the extensions of ``p`` in which
``x`` splits one interval (ordering) or every cell (Boolean algebra) into
pieces of size ``0..K+1`` or ``INF``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count, islice, product
from typing import Iterator, Optional, Union

from .btypes.boolean import BAType
from .btypes.common import atoms_of, neg
from .btypes.order import LEFT, RIGHT, OrderType, finite_realization, gap
from .sizes import INF, Size, is_finite

TypeCode = Union[OrderType, BAType]


class PreconditionViolated(ValueError):
    pass


# -- the canonical formula lists -------------------------------------------------

def order_formulas(n: int) -> Iterator[tuple]:
    """x-formulas over ``u_0..u_{n-1}, x`` (x is variable ``n``), by count then position."""
    x = n
    for m in count():
        for a in [LEFT, *range(n)]:
            if not (m == 0 and a == LEFT):
                yield gap(a, x, m)
        for b in [*range(n), RIGHT]:
            if not (m == 0 and b == RIGHT):
                yield gap(x, b, m)


def ba_formulas(n: int) -> Iterator[tuple]:
    """``size_ge`` formulas whose cell set genuinely involves ``x``."""
    cells = 1 << (n + 1)
    xbit = 1 << n
    for m in count(1):
        for sel in range(1, 1 << cells):
            cs = tuple(c for c in range(cells) if sel >> c & 1)
            if all((c ^ xbit) in cs for c in cs):
                continue
            yield ("size_ge", cs, m)


def canonical_formulas(p: TypeCode, depth: int) -> list[tuple]:
    gen = order_formulas(p.arity) if isinstance(p, OrderType) else ba_formulas(p.arity)
    return list(islice(gen, depth))


# -- extension candidates ----------------------------------------------------------

def _threshold(formulas) -> int:
    ms = [a[-1] for f in formulas for a in atoms_of(f)]
    return max(ms, default=0)


def _splits(S: Size, K: int, min_total: int) -> list[tuple[Size, Size]]:
    """Pairs (left, right) of sizes whose total (plus ``min_total``) is S."""
    if is_finite(S):
        return [(a, S - min_total - a) for a in range(S - min_total + 1)]
    vals: list[Size] = list(range(K + 2)) + [INF]
    out = [(INF, v) for v in vals] + [(v, INF) for v in vals if v is not INF]
    return out


def extensions(p: TypeCode, K: int) -> list[TypeCode]:
    """Types of ``(u, x)`` extending ``p``, sizes capped as described above."""
    if isinstance(p, OrderType):
        out = []
        n = p.arity
        for g, S in enumerate(p.sizes):
            if is_finite(S) and S < 1:
                continue
            ranks = tuple(r + 1 if r >= g else r for r in p.ranks) + (g,)
            for left, right in _splits(S, K, 1):
                sizes = p.sizes[:g] + (left, right) + p.sizes[g + 1:]
                out.append(OrderType(ranks, sizes))
        return out
    n = p.arity
    per_cell = [_splits(S, K, 0) for S in p.sizes]
    out = []
    for choice in product(*per_cell):
        sizes: list[Size] = [0] * (1 << (n + 1))
        for e, (off, on) in enumerate(choice):
            sizes[e], sizes[e | 1 << n] = off, on
        if all(v == 0 for v in sizes):
            continue
        out.append(BAType(n + 1, tuple(sizes)))
    return out


# -- generated types ------------------------------------------------------------------

@dataclass
class GeneratedType:
    base: TypeCode
    phi: tuple
    committed_existentials: list = field(default_factory=list)
    derived_universals: list = field(default_factory=list)
    depth: int = 0
    decisions: list = field(default_factory=list)  # phi, then one literal per list formula

    def formulas(self) -> list[tuple]:
        return self.committed_existentials + self.derived_universals

    def holds_in(self, ext: TypeCode) -> bool:
        return all(ext.satisfies(f) for f in self.formulas())

    def candidates(self, extra: int = 1) -> list[TypeCode]:
        K = _threshold(self.formulas()) + extra
        return [e for e in extensions(self.base, K) if self.holds_in(e)]

    def agrees(self, ext: TypeCode, first: int) -> bool:
        """Does ``ext`` agree with this type on the first ``first`` decisions?"""
        return all(ext.satisfies(f) for f in self.decisions[:first])

    @classmethod
    def from_code(cls, base: TypeCode, ext: TypeCode,
                  depth: Optional[int] = None) -> "GeneratedType":
        """The type of a concrete extension, decided on the canonical list.

        By default the list runs far enough to pass every finite size in ``ext``.
        """
        if depth is None:
            finite = [v for v in ext.sizes if is_finite(v)]
            top = max(finite, default=0) + 2
            depth = 0
            for f in (order_formulas(base.arity) if isinstance(base, OrderType)
                      else ba_formulas(base.arity)):
                if f[-1] > top:
                    break
                depth += 1
        q = cls(base, ("true",), [("true",)], [], depth, [("true",)])
        for f in canonical_formulas(base, depth):
            lit = f if ext.satisfies(f) else neg(f)
            (q.committed_existentials if lit is f else q.derived_universals).append(lit)
            q.decisions.append(lit)
        return q


def _exists(p: TypeCode, phi: tuple) -> bool:
    K = _threshold([phi]) + 1
    return any(e.satisfies(phi) for e in extensions(p, K))


def complete_type(p: TypeCode, phi: tuple, depth: int) -> GeneratedType:
    """Greedy pass over the first ``depth`` canonical formulas, starting from ``phi``."""
    if not _exists(p, phi):
        raise PreconditionViolated(f"(Ex) {phi} is not in {p}")
    formulas = canonical_formulas(p, depth)
    K = _threshold(formulas + [phi]) + 1
    live = [e for e in extensions(p, K) if e.satisfies(phi)]
    q = GeneratedType(p, phi, [phi], [], depth, [phi])
    for f in formulas:
        keep = [e for e in live if e.satisfies(f)]
        if keep:
            live = keep
            q.committed_existentials.append(f)
            q.decisions.append(f)
        else:
            q.derived_universals.append(neg(f))
            q.decisions.append(neg(f))
    return q


def is_generated(p: TypeCode, q: GeneratedType) -> bool:
    """Is every decided universal forced, over ``p``, by the accepted existentials?"""
    if q.base != p:
        return False
    K = _threshold(q.formulas()) + 1
    chi = [e for e in extensions(p, K)
           if all(e.satisfies(f) for f in q.committed_existentials)]
    if not chi:
        return False
    return all(e.satisfies(psi) for e in chi for psi in q.derived_universals)


# -- brute-force realization --------------------------------------------------------

@dataclass(frozen=True)
class Realization:
    size: int          # elements (ordering) or atoms (Boolean algebra)
    tuple_: tuple      # the realization of u
    witness: object    # an x satisfying q


def realize(q: GeneratedType, max_size: int = 15) -> Optional[Realization]:
    """Find a small structure with a tuple of type ``p`` (up to the formulas'
    thresholds) and search it exhaustively for an ``x`` satisfying ``q``.

    Infinite pieces are cut to ``T`` elements, ``T`` the largest count any
    formula of ``q`` asks for; that preserves every formula of ``q``.
    """
    T = max(_threshold(q.formulas()), 1)
    cands = q.candidates()
    if not cands:
        return None
    if isinstance(q.base, OrderType):
        return _realize_order(q, cands, T, max_size)
    return _realize_ba(q, cands, T, max_size)


def _truncate(v: Size, T: int) -> Size:
    return v if is_finite(v) and v < T else T


def _realize_order(q, cands, T, max_size):
    n = q.base.arity
    best = min(cands, key=lambda c: sum(v if is_finite(v) else T for v in c.sizes))
    universe, pos = finite_realization(best, T)
    if len(universe) > max_size:
        return None
    u = pos[:n]
    p_seen = _order_type(universe, u)
    if tuple(_truncate(v, T) for v in p_seen.sizes) != tuple(
            _truncate(v, T) for v in q.base.sizes) or p_seen.ranks != q.base.ranks:
        return None
    for y in universe:
        if y in u:
            continue
        if q.holds_in(_order_type(universe, u + (y,))):
            return Realization(len(universe), u, y)
    return None


def _order_type(universe, tup) -> OrderType:
    order = sorted(range(len(tup)), key=lambda i: tup[i])
    ranks = [0] * len(tup)
    for r, i in enumerate(order):
        ranks[i] = r
    ends = [-1] + [tup[i] for i in order] + [len(universe)]
    return OrderType(tuple(ranks), tuple(b - a - 1 for a, b in zip(ends, ends[1:])))


def _realize_ba(q, cands, T, max_size):
    from .btypes.boolean import finite_realization as ba_real
    n = q.base.arity
    best = min(cands, key=lambda c: sum(v if is_finite(v) else T for v in c.sizes))
    N, masks = ba_real(best, T)
    if N > max_size:
        return None
    u = masks[:n]
    seen = _ba_type(N, u)
    if tuple(_truncate(v, T) for v in seen.sizes) != tuple(
            _truncate(v, T) for v in q.base.sizes):
        return None
    for y in range(1 << N):
        if q.holds_in(_ba_type(N, u + (y,))):
            return Realization(N, u, y)
    return None


def _ba_type(N: int, masks) -> BAType:
    full = (1 << N) - 1
    sizes = []
    for e in range(1 << len(masks)):
        cell = full
        for i, m in enumerate(masks):
            cell &= m if e >> i & 1 else full & ~m
        sizes.append(bin(cell).count("1"))
    return BAType(len(masks), tuple(sizes))
