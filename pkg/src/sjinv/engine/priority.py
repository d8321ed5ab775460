"""The general priority construction: a computable copy B of A together with
a limit isomorphism f from B to A, driven by an R-labeling of A.

Stage by stage we keep a finite partial isomorphism ``f_s`` (a list of pairs
ordered by requirement priority). Each stage we

1. re-check every pair against the current labels and throw away
   everything from the first pair that rests on a guess that changed;
2. attack the least unsatisfied requirement: ``R_{2a}`` (put ``a`` in the
   range) or ``R_{2b+1}`` (put ``b`` in the domain).

B's diagram is never retracted. For ``R_{2b+1}`` we read off an existential
formula true of ``b`` over the mapped tuple, complete it to a generated type
``q`` and map ``b`` to the first ``a`` whose guessed type agrees with ``q``.

This module implements the construction for linear orderings; the B side is
an ordered list of elements placed once and for all.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Optional, Sequence

from ..btypes.enumeration import RLabeling
from ..btypes.order import LEFT, RIGHT, OrderType, gap
from ..completion import GeneratedType, complete_type
from ..presentations.base import FixtureIncoherent, Schedule
from ..presentations.order import OrderPresentation
from ..sizes import INF, Size, is_finite
from .core import BuildResult, Injury, TraceEvent, entry_priority

DEFAULT_DEPTH = 12


@dataclass
class Entry:
    b: int
    a: int
    priority: int
    pledge: Optional[GeneratedType] = None


@dataclass
class ConstructionState:
    keys: list = field(default_factory=list)          # B element -> position key
    stages: list = field(default_factory=list)        # B element -> creation stage
    f: list = field(default_factory=list)             # Entries in priority order
    injury_log: list = field(default_factory=list)
    trace: list = field(default_factory=list)
    satisfied_upto: int = 0
    depth: int = DEFAULT_DEPTH
    order: list = field(default_factory=list)         # B elements left to right
    _pos: dict = field(default_factory=dict, repr=False)
    _epoch: object = None
    _failed: dict = field(default_factory=dict, repr=False)

    # -- B --------------------------------------------------------------------
    def built_facts(self) -> frozenset:
        order = self.order
        return frozenset(("lt", x, y) for i, x in enumerate(order) for y in order[i + 1:])

    def guaranteed_types(self) -> dict:
        return {e.b: e.pledge for e in self.f if e.pledge is not None}

    def fmap(self) -> dict:
        return {e.b: e.a for e in self.f}

    def copy_presentation(self) -> OrderPresentation:
        return OrderPresentation(list(self.keys), Schedule(list(self.stages)))

    def _new_b(self, at: int, s: int) -> int:
        """Place a fresh element at index ``at`` of the left-to-right order."""
        lo = self.keys[self.order[at - 1]] if at > 0 else None
        hi = self.keys[self.order[at]] if at < len(self.order) else None
        b = len(self.keys)
        self.keys.append(_between(lo, hi))
        self.stages.append(s)
        self.order.insert(at, b)
        self._reindex()
        return b

    def _drop_last(self) -> None:
        b = len(self.keys) - 1
        self.keys.pop()
        self.stages.pop()
        self.order.remove(b)
        self._reindex()

    def _reindex(self) -> None:
        self._pos = {b: i for i, b in enumerate(self.order)}

    def b_type(self, ds: Sequence[int]) -> OrderType:
        """Current B configuration of ``ds``: arrangement plus element counts."""
        pos = self._pos
        order = sorted(range(len(ds)), key=lambda i: pos[ds[i]])
        ranks = [0] * len(ds)
        for r, i in enumerate(order):
            ranks[i] = r
        idx = [pos[ds[i]] for i in order]
        bounds = [-1] + idx + [len(self.order)]
        return OrderType(tuple(ranks), tuple(b - a - 1 for a, b in zip(bounds, bounds[1:])))


def _fits(guess: OrderType, seen: OrderType) -> bool:
    """B counts only grow, so B is consistent with A's guess while every B
    count is at most the guessed size and the arrangement agrees."""
    return guess.ranks == seen.ranks and all(
        v is INF or c <= v for c, v in zip(seen.sizes, guess.sizes))


class PriorityEngine:
    def __init__(self, p: OrderPresentation, labeler: RLabeling,
                 epoch: Optional[Callable[[int], Hashable]] = None,
                 depth: int = DEFAULT_DEPTH):
        self.p = p
        self.labeler = labeler
        self.epoch = epoch or (lambda s: s)
        self.depth = depth
        self._cache: dict = {}

    def guess(self, tup: tuple, s: int) -> OrderType:
        key = (tup, self._cur_epoch)
        t = self._cache.get(key)
        if t is None:
            t = self.labeler.type_of(tup, s)
            if len(self._cache) > 200000:
                self._cache.clear()
            self._cache[key] = t
        return t

    # -- validation ---------------------------------------------------------------
    def _prefix_ok(self, st: ConstructionState, entries: list, j: int, s: int) -> bool:
        cs = tuple(e.a for e in entries[:j])
        ds = [e.b for e in entries[:j]]
        try:
            g = self.guess(cs, s)
        except Exception as exc:  # noqa: BLE001 - labeler refuses the tuple
            raise FixtureIncoherent(f"labeler failed on {cs}: {exc}") from exc
        if not _fits(g, st.b_type(ds)):
            return False
        q = entries[j - 1].pledge
        if q is not None:
            if q.base != self.guess(cs[:-1], s):
                return False
            if not q.agrees(g, min(s, q.depth + 1)):
                return False
        return True

    def first_bad(self, st: ConstructionState, entries: list, s: int, start: int = 1) -> Optional[int]:
        for j in range(start, len(entries) + 1):
            if not self._prefix_ok(st, entries, j, s):
                return j - 1
        return None

    def validate(self, st: ConstructionState, s: int) -> None:
        if st._epoch == self._cur_epoch:
            return
        st._epoch = self._cur_epoch
        bad = self.first_bad(st, st.f, s)
        if bad is None:
            return
        dropped = st.f[bad:]
        st.f = st.f[:bad]
        reason = f"guess-changed@{dropped[0].b}->{dropped[0].a}"
        st.injury_log.append(Injury(s, dropped[0].priority, reason))
        st.trace.append(TraceEvent(s, "rollback", dropped[0].priority, reason))
        st._failed.clear()

    # -- requirements -------------------------------------------------------------
    def least_unsatisfied(self, st: ConstructionState, s: int) -> Optional[int]:
        dom = {e.b for e in st.f}
        ran = {e.a for e in st.f}
        na, nb = self.p.count_at(s), len(st.keys)
        ta = next((t for t in range(na) if t not in ran), None)
        tb = next((t for t in range(nb) if t not in dom), None)
        cands = [2 * ta] if ta is not None else []
        if tb is not None:
            cands.append(2 * tb + 1)
        return min(cands, default=None)

    def _insert(self, st: ConstructionState, e: Entry) -> list:
        out = list(st.f)
        i = 0
        while i < len(out) and out[i].priority < e.priority:
            i += 1
        out.insert(i, e)
        return out

    def step(self, st: ConstructionState, s: int) -> ConstructionState:
        self._cur_epoch = self.epoch(s)
        self.validate(st, s)
        pr = self.least_unsatisfied(st, s)
        st.satisfied_upto = pr if pr is not None else 2 * self.p.count_at(s)
        if pr is None:
            return st
        memo = (pr, self._cur_epoch, len(st.keys), tuple((e.b, e.a) for e in st.f))
        if st._failed.get(pr) == memo:
            return st
        ok = self._attack_range(st, pr // 2, s) if pr % 2 == 0 else self._attack_domain(st, pr // 2, s)
        if not ok:
            st._failed[pr] = memo
            st.trace.append(TraceEvent(s, "wait", pr))
        return st

    def _slot(self, st: ConstructionState, ds: list, cs: list, a: int):
        """Positions (in B's order) of the mapped neighbours around ``a``'s gap."""
        left = [st._pos[d] for d, c in zip(ds, cs) if self.p.less(c, a)]
        right = [st._pos[d] for d, c in zip(ds, cs) if self.p.less(a, c)]
        return (max(left) if left else -1), (min(right) if right else len(st.order))

    def _attack_range(self, st: ConstructionState, a: int, s: int) -> bool:
        ds = [e.b for e in st.f]
        cs = [e.a for e in st.f]
        lo_i, hi_i = self._slot(st, ds, cs, a)
        dom = set(ds)
        # reuse an orphan already sitting in the slot
        for b in st.order[lo_i + 1: hi_i]:
            if b in dom:
                continue
            e = Entry(b, a, entry_priority(b, a))
            cand = self._insert(st, e)
            if self.first_bad(st, cand, s, cand.index(e) + 1) is None:
                st.f = cand
                st.trace.append(TraceEvent(s, f"map-orphan b{b}->a{a}", e.priority))
                return True
        # otherwise a fresh element, trying each place within the slot
        for at in range(lo_i + 1, hi_i + 1):
            b = self._try_new(st, at, a, s)
            if b is not None:
                st.trace.append(TraceEvent(s, f"new b{b}->a{a}", 2 * a))
                return True
        return False

    def _try_new(self, st: ConstructionState, at: int, a: int, s: int) -> Optional[int]:
        b = st._new_b(at, s)
        e = Entry(b, a, entry_priority(b, a))
        cand = self._insert(st, e)
        if self.first_bad(st, cand, s, cand.index(e) + 1) is None:
            st.f = cand
            return b
        # undo the tentative element: it was never published
        st._drop_last()
        return None

    def _attack_domain(self, st: ConstructionState, b: int, s: int) -> bool:
        ds = [e.b for e in st.f]
        cs = tuple(e.a for e in st.f)
        p_type = self.guess(cs, s)
        conf = st.b_type(ds + [b])
        n = len(ds)
        order = sorted(range(n + 1), key=conf.ranks.__getitem__)
        at = order.index(n)
        left = LEFT if at == 0 else order[at - 1]
        right = RIGHT if at == n else order[at + 1]
        phi = ("and", gap(left, n, conf.between(left, n)), gap(n, right, conf.between(n, right)))
        try:
            q = complete_type(p_type, phi, self.depth)
        except ValueError:
            return False
        ran = set(cs)
        for a in range(self.p.count_at(s)):
            if a in ran:
                continue
            if not q.agrees(self.guess(cs + (a,), s), min(s, q.depth + 1)):
                continue
            e = Entry(b, a, entry_priority(b, a), q)
            cand = self._insert(st, e)
            if self.first_bad(st, cand, s, cand.index(e) + 1) is None:
                st.f = cand
                st.trace.append(TraceEvent(s, f"map b{b}->a{a}", 2 * b + 1))
                return True
        return False


def _between(lo, hi):
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def engine_step(state: ConstructionState, p: OrderPresentation, labeler: RLabeling, s: int,
                engine: Optional[PriorityEngine] = None) -> ConstructionState:
    eng = engine or PriorityEngine(p, labeler, depth=state.depth)
    return eng.step(state, s)


def run_engine(p: OrderPresentation, labeler: RLabeling, horizon: int,
               epoch: Optional[Callable[[int], Hashable]] = None,
               depth: int = DEFAULT_DEPTH, check_monotone: bool = False) -> BuildResult:
    eng = PriorityEngine(p, labeler, epoch, depth)
    st = ConstructionState(depth=depth)
    prev = frozenset()
    for s in range(horizon + 1):
        eng.step(st, s)
        if check_monotone:
            now = st.built_facts()
            if not prev <= now:
                raise AssertionError(f"B's diagram shrank at stage {s}")
            prev = now
    B = st.copy_presentation()
    return BuildResult(B, st.fmap(), st.trace, st.injury_log, labeler, horizon,
                       {"state": st})
