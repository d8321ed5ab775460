"""Labeled copies of orderings whose infinite intervals carry arbitrarily
long finite successor chains.

The copy B is a row of *chains*: maximal runs of adjacent elements. The gap
between neighbours in a chain is empty and the gap between chains is
infinite; both are fixed when an element is placed, so every interval of B
carries its size label from the moment it exists. A chain only grows at its
ends, which never changes an old label.

The map ``f`` from B into A is a priority-ordered list of entries. An entry
``b -> a`` with both neighbouring intervals infinite is located inside the
first *buffer pair* ``(z, z')`` of its slot: a pair splitting the slot into
three intervals that are all guessed infinite. The entry is kept only while
its pair is still the first qualifying one, so a late finite verdict on a
buffer interval moves the search on instead of stranding ``b``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from ..btypes.enumeration import RLabeling, enumeration_for
from ..btypes.order import OrderType, encode_order
from ..coding import pair_order_key
from ..presentations.base import Schedule
from ..presentations.order import OrderPresentation
from ..sizes import INF, Size, is_finite
from .core import BuildResult, Injury, TraceEvent, entry_priority

SizeOracle = Callable[[Optional[int], Optional[int], int], Size]


@dataclass(frozen=True)
class BufferPair:
    z: int
    z2: int


class NotYet:
    """No qualifying buffer pair has been enumerated yet."""

    def __repr__(self) -> str:
        return "NotYet"


NOT_YET = NotYet()


def find_buffer_pair(p: OrderPresentation, c: Optional[int], c2: Optional[int], s: int,
                     sizes: SizeOracle):
    """First pair ``c < z < z' < c'`` (standard pair order on names) whose three
    intervals are all guessed infinite at stage ``s``; ``None`` ends are -oo/+oo."""
    n = p.count_at(s)
    inside = [x for x in range(n)
              if (c is None or p.less(c, x)) and (c2 is None or p.less(x, c2))]
    # names in increasing order, so pairs come out by their larger name first
    for j, m in enumerate(inside):
        cands = []
        for x in inside[:j]:
            z, z2 = (x, m) if p.less(x, m) else (m, x)
            cands.append((pair_order_key(x, m) if x < m else pair_order_key(m, x), z, z2))
        for _, z, z2 in sorted(cands):
            if sizes(c, z, s) is INF and sizes(z, z2, s) is INF and sizes(z2, c2, s) is INF:
                return BufferPair(z, z2)
    return NOT_YET


# ---------------------------------------------------------------------------
# The copy B


@dataclass
class ChainCopy:
    """B: elements left to right plus the fixed labels between neighbours."""
    keys: list = field(default_factory=list)
    stages: list = field(default_factory=list)
    order: list = field(default_factory=list)
    links: list = field(default_factory=list)   # links[i]: 0 or INF between order[i], order[i+1]
    _pos: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.keys)

    def pos(self, b: int) -> int:
        return self._pos[b]

    def _place(self, at: int, left_link: Size, right_link: Size, s: int) -> int:
        lo = self.keys[self.order[at - 1]] if at > 0 else None
        hi = self.keys[self.order[at]] if at < len(self.order) else None
        b = len(self.keys)
        self.keys.append(_between(lo, hi))
        self.stages.append(s)
        if at > 0 and at < len(self.order):
            if self.links[at - 1] is not INF:
                raise ValueError("cannot insert inside a chain")
            self.links[at - 1:at] = [left_link, right_link]
        elif at > 0:
            self.links.append(left_link)
        elif self.order:
            self.links.insert(0, right_link)
        self.order.insert(at, b)
        self._pos = {x: i for i, x in enumerate(self.order)}
        return b

    def chain(self, b: int) -> tuple[int, int]:
        """Positions of the ends of ``b``'s chain."""
        i = j = self._pos[b]
        while i > 0 and self.links[i - 1] == 0:
            i -= 1
        while j < len(self.links) and self.links[j] == 0:
            j += 1
        return i, j

    def extents(self, b: int) -> tuple[int, int]:
        i, j = self.chain(b)
        k = self._pos[b]
        return k - i, j - k

    def extend(self, b: int, right: bool, s: int) -> int:
        """New element adjacent to the end of ``b``'s chain."""
        i, j = self.chain(b)
        if right:
            return self._place(j + 1, 0, INF, s)
        return self._place(i, INF, 0, s)

    def insert_free(self, after: Optional[int], s: int) -> int:
        """New one-element chain just right of ``after``'s chain (leftmost if None)."""
        at = 0 if after is None else self.chain(after)[1] + 1
        return self._place(at, INF, INF, s)

    def label(self, b: Optional[int], b2: Optional[int]) -> Size:
        """Committed size of the open interval (b, b2); ``None`` ends are -oo/+oo."""
        if b is None or b2 is None:
            return INF
        i, j = self._pos[b], self._pos[b2]
        if i > j:
            i, j = j, i
        if all(l == 0 for l in self.links[i:j]):
            return j - i - 1
        return INF

    def at_offset(self, b: int, k: int) -> Optional[int]:
        """Element ``k`` places right (negative: left) of ``b`` inside its chain."""
        i, j = self.chain(b)
        t = self._pos[b] + k
        return self.order[t] if i <= t <= j else None

    def type_of(self, tup) -> OrderType:
        order = sorted(range(len(tup)), key=lambda i: self._pos[tup[i]])
        ranks = [0] * len(tup)
        for r, i in enumerate(order):
            ranks[i] = r
        ends = [None] + [tup[i] for i in order] + [None]
        return OrderType(tuple(ranks), tuple(self.label(x, y) for x, y in zip(ends, ends[1:])))

    def facts(self) -> frozenset:
        o = self.order
        return frozenset(("lt", x, y) for i, x in enumerate(o) for y in o[i + 1:])

    def presentation(self) -> OrderPresentation:
        return OrderPresentation(list(self.keys), Schedule(list(self.stages)))

    def labeling(self) -> RLabeling:
        R = enumeration_for(self.presentation().class_tag)
        return RLabeling(lambda tup, s: encode_order(self.type_of(tup)), R)


def _between(lo, hi):
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


# ---------------------------------------------------------------------------
# The construction


@dataclass
class BufferEntry:
    b: int
    a: int
    priority: int
    buffer: Optional[BufferPair] = None


class BufferPairBuilder:
    def __init__(self, p: OrderPresentation, sizes: SizeOracle,
                 epoch: Optional[Callable[[int], object]] = None,
                 guess_epoch: Optional[Callable[[int], object]] = None):
        self.p = p
        self.sizes = sizes
        # ``epoch`` changes whenever anything A-side may change; ``guess_epoch``
        # only when some size guess may change (new elements alone cannot
        # invalidate an entry: chains only grow and new pairs come last)
        self.epoch = epoch or (lambda s: s)
        self.guess_epoch = guess_epoch or self.epoch
        self._guess_epoch = None
        self.B = ChainCopy()
        self.f: list[BufferEntry] = []
        self.trace: list[TraceEvent] = []
        self.injuries: list[Injury] = []
        self._epoch = None
        self._failed: dict = {}
        self._cache: dict = {}

    # -- A-side guesses ----------------------------------------------------------
    def guess(self, a: Optional[int], a2: Optional[int], s: int) -> Size:
        return self.sizes(a, a2, s)

    def a_extents(self, c: int, s: int) -> tuple[int, int]:
        """How far A's currently guessed successor chain reaches around ``c``."""
        fast = getattr(self.sizes, "extents", None)
        if fast is not None:
            return fast(c, s)
        left = right = 0
        for x in range(self.p.count_at(s)):
            if x == c:
                continue
            if self.p.less(x, c):
                g = self.guess(x, c, s)
                if is_finite(g):
                    left = max(left, g + 1)
            else:
                g = self.guess(c, x, s)
                if is_finite(g):
                    right = max(right, g + 1)
        return left, right

    def buffer_for(self, c, c2, s):
        key = (c, c2, self._epoch)
        if key not in self._cache:
            self._cache[key] = find_buffer_pair(self.p, c, c2, s, self.sizes)
        return self._cache[key]

    # -- validity --------------------------------------------------------------------
    def _neighbours(self, entries: list, b: int):
        """Mapped neighbours of ``b`` in B among ``entries`` (entries, or None for an end)."""
        pb = self.B.pos(b)
        left = right = None
        for e in entries:
            pe = self.B.pos(e.b)
            if pe < pb and (left is None or pe > self.B.pos(left.b)):
                left = e
            if pe > pb and (right is None or pe < self.B.pos(right.b)):
                right = e
        return left, right

    def _entry_ok(self, before: list, e: BufferEntry, s: int) -> bool:
        p, B = self.p, self.B
        L, R = self._neighbours(before, e.b)
        cl = L.a if L else None
        cr = R.a if R else None
        if (cl is not None and not p.less(cl, e.a)) or (cr is not None and not p.less(e.a, cr)):
            return False
        if B.label(L.b if L else None, e.b) != self.guess(cl, e.a, s):
            return False
        if B.label(e.b, R.b if R else None) != self.guess(e.a, cr, s):
            return False
        # the vow: b's chain never outgrows the chain seen around its image
        bl, br = B.extents(e.b)
        al, ar = self.a_extents(e.a, s)
        if bl > al or br > ar:
            return False
        if e.buffer is not None:
            if self.buffer_for(cl, cr, s) != e.buffer:
                return False
            if not (p.less(e.buffer.z, e.a) and p.less(e.a, e.buffer.z2)):
                return False
        return True

    def first_bad(self, entries: list, s: int, start: int = 0) -> Optional[int]:
        for j in range(start, len(entries)):
            if not self._entry_ok(entries[:j], entries[j], s):
                return j
        return None

    def validate(self, s: int) -> None:
        ep = self.epoch(s)
        if ep == self._epoch:
            return
        self._epoch = ep
        self._cache.clear()
        gep = self.guess_epoch(s)
        if gep == self._guess_epoch:
            return
        self._guess_epoch = gep
        bad = self.first_bad(self.f, s)
        if bad is None:
            return
        dropped = self.f[bad]
        reason = f"guess-changed@{dropped.b}->{dropped.a}"
        self.f = self.f[:bad]
        self.injuries.append(Injury(s, dropped.priority, reason))
        self.trace.append(TraceEvent(s, "rollback", dropped.priority, reason))
        self._failed.clear()

    def _plausible(self, L, R, e: BufferEntry, s: int) -> bool:
        """Necessary conditions against the full map: slot, labels, vow."""
        p, B = self.p, self.B
        cl = L.a if L else None
        cr = R.a if R else None
        if (cl is not None and not p.less(cl, e.a)) or (cr is not None and not p.less(e.a, cr)):
            return False
        if B.label(L.b if L else None, e.b) != self.guess(cl, e.a, s):
            return False
        if B.label(e.b, R.b if R else None) != self.guess(e.a, cr, s):
            return False
        bl, br = B.extents(e.b)
        al, ar = self.a_extents(e.a, s)
        return bl <= al and br <= ar

    def _commit(self, e: BufferEntry, s: int) -> bool:
        out = list(self.f)
        i = 0
        while i < len(out) and out[i].priority < e.priority:
            i += 1
        out.insert(i, e)
        if self.first_bad(out, s, i) is None:
            self.f = out
            return True
        return False

    def final_buffers(self) -> list[tuple]:
        """``(c, z, z', c')`` for every entry currently resting on a buffer pair."""
        out = []
        for j, e in enumerate(self.f):
            if e.buffer is None:
                continue
            L, R = self._neighbours(self.f[:j], e.b)
            out.append((L.a if L else None, e.buffer.z, e.buffer.z2, R.a if R else None))
        return out

    # -- requirements ----------------------------------------------------------------
    def least_unsatisfied(self, s: int) -> Optional[int]:
        dom = {e.b for e in self.f}
        ran = {e.a for e in self.f}
        na, nb = self.p.count_at(s), len(self.B)
        for pr in range(2 * max(na, nb) + 2):
            t = pr // 2
            if pr % 2 == 0 and t < na and t not in ran:
                return pr
            if pr % 2 == 1 and t < nb and t not in dom:
                return pr
        return None

    def step(self, s: int) -> None:
        self.validate(s)
        pr = self.least_unsatisfied(s)
        if pr is None:
            return
        memo = (self._epoch, len(self.B), tuple((e.b, e.a) for e in self.f))
        if self._failed.get(pr) == memo:
            return
        ok = self._range(pr // 2, s) if pr % 2 == 0 else self._domain(pr // 2, s)
        if not ok:
            self._failed[pr] = memo
            self.trace.append(TraceEvent(s, "wait", pr))

    def _slot_a(self, a: int):
        left = right = None
        for e in self.f:
            if self.p.less(e.a, a) and (left is None or self.p.less(left.a, e.a)):
                left = e
            if self.p.less(a, e.a) and (right is None or self.p.less(e.a, right.a)):
                right = e
        return left, right

    def _range(self, a: int, s: int) -> bool:
        """R_2a: put ``a`` into the range."""
        L, R = self._slot_a(a)
        gl = self.guess(L.a if L else None, a, s)
        gr = self.guess(a, R.a if R else None, s)
        pr = entry_priority(len(self.B), a)
        if is_finite(gl) or is_finite(gr):
            anchor, off = (L.b, gl + 1) if is_finite(gl) else (R.b, -(gr + 1))
            b = self.B.at_offset(anchor, off)
            made = []
            while b is None:
                made.append(self.B.extend(anchor, off > 0, s))
                b = self.B.at_offset(anchor, off)
            e = BufferEntry(b, a, entry_priority(b, a))
            if b in {x.b for x in self.f} or not self._commit(e, s):
                if made:
                    self.trace.append(TraceEvent(s, f"grow-chain b{made[0]}..b{made[-1]}", pr))
                return False
            act = "extend" if made else "map-chain"
            self.trace.append(TraceEvent(s, f"{act} b{b}->a{a}", e.priority))
            return True
        b = self.B.insert_free(L.b if L else None, s)
        e = BufferEntry(b, a, entry_priority(b, a))
        if self._commit(e, s):
            self.trace.append(TraceEvent(s, f"new b{b}->a{a}", e.priority))
            return True
        self.trace.append(TraceEvent(s, f"orphan b{b}", pr))
        return False

    def _domain(self, b: int, s: int) -> bool:
        """R_2b+1: put ``b`` into the domain."""
        L, R = self._neighbours(self.f, b)
        bl = self.B.label(L.b if L else None, b)
        br = self.B.label(b, R.b if R else None)
        ran = {e.a for e in self.f}
        cl = L.a if L else None
        cr = R.a if R else None
        if is_finite(bl) or is_finite(br):
            for a in range(self.p.count_at(s)):
                if a in ran:
                    continue
                e = BufferEntry(b, a, entry_priority(b, a))
                if self._plausible(L, R, e, s) and self._commit(e, s):
                    self.trace.append(TraceEvent(s, f"map-chain b{b}->a{a}", e.priority))
                    return True
            return False
        buf = self.buffer_for(cl, cr, s)
        if buf is NOT_YET:
            return False
        for a in range(self.p.count_at(s)):
            if a in ran or not (self.p.less(buf.z, a) and self.p.less(a, buf.z2)):
                continue
            e = BufferEntry(b, a, entry_priority(b, a), buf)
            if self._plausible(L, R, e, s) and self._commit(e, s):
                self.trace.append(TraceEvent(s, f"buffer ({buf.z},{buf.z2}) b{b}->a{a}",
                                             e.priority))
                return True
        return False


def ordering_build_labeled_copy(p: OrderPresentation, horizon: int, sizes: SizeOracle,
                                epoch: Optional[Callable[[int], object]] = None,
                                check_monotone: bool = False) -> BuildResult:
    """Build the labeled copy for ``horizon`` stages. ``sizes`` is A's
    Delta^0_2 interval-size oracle."""
    bld = BufferPairBuilder(p, sizes, epoch, getattr(sizes, "guess_epoch", None))
    prev = frozenset()
    for s in range(horizon + 1):
        bld.step(s)
        if check_monotone:
            now = bld.B.facts()
            if not prev <= now:
                raise AssertionError(f"B's diagram shrank at stage {s}")
            prev = now
    return BuildResult(bld.B.presentation(), {e.b: e.a for e in bld.f}, bld.trace,
                       bld.injuries, bld.B.labeling(), horizon,
                       {"builder": bld,
                        "buffers": bld.final_buffers()})
