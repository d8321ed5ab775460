"""Labeled copies of Boolean algebras in which every infinite element splits
into two infinite elements.

B is kept as a finite partition into *leaves*, each labeled once and for
all: ``INF`` (to be split further) or ``1`` (an atom). A named element of B
is a set of leaves; splitting a leaf replaces it by its children in every
element, so no element changes and no label is ever retracted. Finite
pieces are cut into atoms as soon as they appear.

The map is checked cell by cell. For mapped tuples ``d`` (in B) and ``c``
(in A), every signature cell of ``d`` must

1. be non-empty exactly when the matching cell of ``c`` is,
2. carry the label A's current size guess gives the matching cell, and
3. hold no more atoms than have been seen below the matching cell.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from ..btypes.boolean import BAType, encode_ba
from ..btypes.enumeration import RLabeling, enumeration_for
from ..presentations.base import ClassTag, Presentation, Schedule
from ..presentations.boolean import (LEAVES, MAX_DEPTH, BooleanAlgebraPresentation,
                                     _new_masks, ba_atom_guess)
from ..sizes import INF, Size, is_finite
from .core import BuildResult, InsufficientPrefix, Injury, TraceEvent, entry_priority

Value = tuple[int, int]
FIXED = -1  # priority of the pairs 0 -> 0 and 1 -> 1, never injured


# ---------------------------------------------------------------------------
# The copy B


class LeafAlgebraCopy(Presentation):
    """B: named finite unions of labeled leaves."""

    class_tag = ClassTag.BOOLEAN_ALGEBRA

    def __init__(self):
        super().__init__(Schedule([]))
        self.label_of: dict[int, Size] = {0: INF}     # leaf -> INF or 1
        self.children: dict[int, list[int]] = {}
        self.next_leaf = 1
        self.elems: list[frozenset] = []
        self.stages: list[int] = []
        self.index: dict[frozenset, int] = {}
        self.name(frozenset(), 0)
        self.name(frozenset({0}), 0)

    # -- presentation ---------------------------------------------------------
    def count_at(self, s: int) -> int:
        n = 0
        while n < len(self.stages) and self.stages[n] <= s:
            n += 1
        return n

    def leaves(self) -> frozenset:
        return self.elems[1]

    def name(self, leaves: frozenset, s: int) -> int:
        if leaves in self.index:
            return self.index[leaves]
        self.elems.append(leaves)
        self.stages.append(s)
        self.index[leaves] = len(self.elems) - 1
        return len(self.elems) - 1

    def facts_at(self, s: int) -> frozenset:
        n = self.count_at(s)
        els = self.elems[:n]
        one = self.leaves()
        facts = set()
        for i, x in enumerate(els):
            if not x:
                facts.add(("zero", i))
            if x == one:
                facts.add(("one", i))
            for j, y in enumerate(els):
                if x <= y:
                    facts.add(("le", i, j))
                if y == one - x:
                    facts.add(("comp", i, j))
        return frozenset(facts)

    # -- leaves ---------------------------------------------------------------
    def split(self, leaf: int, n_inf: int, n_atoms: int) -> list[int]:
        """Replace an infinite leaf by ``n_inf`` infinite and ``n_atoms`` atom leaves."""
        if self.label_of[leaf] is not INF or n_inf < 1:
            raise ValueError("only an infinite leaf splits, keeping an infinite part")
        kids = []
        for j in range(n_inf + n_atoms):
            kid = self.next_leaf
            self.next_leaf += 1
            self.label_of[kid] = INF if j < n_inf else 1
            kids.append(kid)
        self.children[leaf] = kids
        del self.label_of[leaf]
        repl = frozenset(kids)
        for i, e in enumerate(self.elems):
            if leaf in e:
                self.elems[i] = (e - {leaf}) | repl
        self.index = {e: i for i, e in enumerate(self.elems)}
        return kids

    def current(self, cells: Iterable[int]) -> set:
        """Expand split cells into the leaves they became."""
        out, todo = set(), list(cells)
        while todo:
            x = todo.pop()
            if x in self.children:
                todo.extend(self.children[x])
            else:
                out.add(x)
        return out

    def label(self, leaves: Iterable[int]) -> Size:
        n = 0
        for x in leaves:
            if self.label_of[x] is INF:
                return INF
            n += 1
        return n

    def atoms(self, leaves: Iterable[int]) -> list[int]:
        return sorted(x for x in leaves if self.label_of[x] == 1)

    def inf_leaves(self, leaves: Iterable[int]) -> list[int]:
        return sorted(x for x in leaves if self.label_of[x] is INF)

    # -- labeling -------------------------------------------------------------
    def type_of(self, tup) -> BAType:
        n = len(tup)
        sizes = []
        for cell in range(1 << n):
            leaves = set(self.leaves())
            for i, b in enumerate(tup):
                leaves &= self.elems[b] if cell >> i & 1 else (self.leaves() - self.elems[b])
            sizes.append(self.label(leaves) if leaves else 0)
        return BAType(n, tuple(sizes))

    def labeling(self) -> RLabeling:
        R = enumeration_for(self.class_tag)
        return RLabeling(lambda tup, s: encode_ba(self.type_of(tup)), R)


# ---------------------------------------------------------------------------
# A-side guesses


class AtomView:
    """Stage-``s`` view of A: which enumerated elements are guessed atoms.

    ``guess_epoch`` changes whenever an atom guess on an old element may
    change; otherwise only new names are interrogated.
    """

    def __init__(self, p: BooleanAlgebraPresentation,
                 guess_epoch: Optional[Callable[[int], object]] = None):
        self.p = p
        self.guess_epoch = guess_epoch or (lambda s: s)
        self._epoch = object()
        self._done = 0
        self.seen: list[Value] = []
        self.version = 0

    def update(self, s: int) -> None:
        ep = self.guess_epoch(s)
        if ep != self._epoch:
            self._epoch = ep
            self._done = 0
            self.seen = []
            self.version += 1
        n = self.p.count_at(s)
        for a in range(self._done, n):
            if ba_atom_guess(self.p, a, s):
                self.seen.append(self.p.value(a))
                self.version += 1
        self._done = max(self._done, n)

    def below(self, v: Value) -> list[Value]:
        p = self.p
        return [w for w in self.seen if p.leq(w, v)]

    def size(self, v: Value) -> Size:
        if v == self.p.zero:
            return 0
        below = self.below(v)
        acc = self.p.zero
        for w in below:
            acc = self.p.join(acc, w)
        return len(below) if acc == v else INF


def _bits(p: BooleanAlgebraPresentation) -> list[Value]:
    """The indivisible pieces of A's values: dyadic leaves and extra atoms."""
    return [(1 << i, 0) for i in range(LEAVES)] + [(0, 1 << j) for j in range(p.m)]


# ---------------------------------------------------------------------------
# The construction


@dataclass
class BAEntry:
    b: int
    a: int
    priority: int


@dataclass
class Cell:
    beta: frozenset      # leaves of B
    alpha: Value         # matching value of A


class BABuilder:
    def __init__(self, p: BooleanAlgebraPresentation,
                 guess_epoch: Optional[Callable[[int], object]] = None,
                 closure_every: int = 3):
        self.p = p
        self.view = AtomView(p, guess_epoch)
        self.B = LeafAlgebraCopy()
        self.f: list[BAEntry] = [BAEntry(0, 0, FIXED), BAEntry(1, 1, FIXED)]
        self.trace: list[TraceEvent] = []
        self.injuries: list[Injury] = []
        self.conditions: list[tuple[int, bool]] = []
        self.closure_every = closure_every
        self._bits = _bits(p)
        self._failed: dict = {}
        self._leaf_queue: list[int] = []
        self._closure_cursor = 0
        self._checked = None

    # -- cells -------------------------------------------------------------------
    # Signatures are bitmasks: bit j says "inside the j-th mapped element".
    def _signatures(self, entries: list, upto: int):
        B, p = self.B, self.p
        bsig = dict.fromkeys(B.leaves(), 0)
        asig = [0] * len(self._bits)
        for j, e in enumerate(entries[:upto]):
            self._add_coordinate(bsig, asig, j, e)
        return bsig, asig

    def _add_coordinate(self, bsig: dict, asig: list, j: int, e: BAEntry) -> None:
        eb = self.B.elems[e.b]
        va = self.p.value(e.a)
        for leaf in eb:
            bsig[leaf] |= 1 << j
        for i, bit in enumerate(self._bits):
            if bit[0] & va[0] or bit[1] & va[1]:
                asig[i] |= 1 << j

    def _group(self, bsig: dict, asig: list) -> list[Cell]:
        bside: dict[int, set] = {}
        for leaf, sig in bsig.items():
            bside.setdefault(sig, set()).add(leaf)
        aside: dict[int, Value] = {}
        p = self.p
        for bit, sig in zip(self._bits, asig):
            aside[sig] = p.join(aside.get(sig, p.zero), bit)
        if set(bside) != set(aside):
            return []                                           # (1) fails
        return [Cell(frozenset(bside[sig]), aside[sig]) for sig in sorted(bside)]

    def cells(self, entries: list) -> list[Cell]:
        """Non-empty signature cells of the mapped tuple, on both sides."""
        return self._group(*self._signatures(entries, len(entries)))

    def _cells_ok(self, cells: list[Cell]) -> bool:
        if not cells:
            return False                                        # (1)
        for c in cells:
            if self.B.label(c.beta) != self.view.size(c.alpha):
                return False                                    # (2)
            if len(self.B.atoms(c.beta)) > len(self.view.below(c.alpha)):
                return False                                    # (3)
        return True

    def cells_ok(self, entries: list) -> bool:
        return self._cells_ok(self.cells(entries))

    def first_bad(self, entries: list, start: int = 2) -> Optional[int]:
        start = max(start, 2)
        bsig, asig = self._signatures(entries, start)
        for j in range(start, len(entries)):
            self._add_coordinate(bsig, asig, j, entries[j])
            if not self._cells_ok(self._group(bsig, asig)):
                return j
        return None

    def _state_key(self):
        return (self.view.version, len(self.B.label_of), tuple((e.b, e.a) for e in self.f))

    def validate(self, s: int) -> None:
        if self._checked == self._state_key():
            return
        bad = self.first_bad(self.f)
        if bad is None:
            self._mark_valid()
            return
        dropped = self.f[bad]
        reason = f"guess-changed@{dropped.b}->{dropped.a}"
        self.f = self.f[:bad]
        self.injuries.append(Injury(s, dropped.priority, reason))
        self.trace.append(TraceEvent(s, "rollback", dropped.priority, reason))
        self._failed.clear()
        self._mark_valid()

    def _mark_valid(self) -> None:
        """Record that the current map was just checked in full."""
        self._checked = self._state_key()
        self._ok = True

    def _commit(self, e: BAEntry) -> bool:
        out = list(self.f)
        i = 0
        while i < len(out) and out[i].priority < e.priority:
            i += 1
        out.insert(i, e)
        if self.first_bad(out, i) is None:
            self.f = out
            self._mark_valid()
            return True
        return False

    # -- requirements ------------------------------------------------------------
    def least_unsatisfied(self, s: int) -> Optional[int]:
        dom = {e.b for e in self.f}
        ran = {e.a for e in self.f}
        na, nb = self.p.count_at(s), len(self.B.elems)
        for pr in range(2 * max(na, nb) + 2):
            t = pr // 2
            if pr % 2 == 0 and t < na and t not in ran:
                return pr
            if pr % 2 == 1 and t < nb and t not in dom:
                return pr
        return None

    def step(self, s: int) -> None:
        self.view.update(s)
        self.validate(s)
        pr = self.least_unsatisfied(s)
        if pr is not None:
            memo = (self.view._epoch, self.p.count_at(s), len(self.B.elems),
                    len(self.B.label_of), tuple((e.b, e.a) for e in self.f))
            if self._failed.get(pr) != memo:
                ok = self._range(pr // 2, s) if pr % 2 == 0 else self._domain(pr // 2, s)
                if not ok:
                    self._failed[pr] = memo
        if s % self.closure_every == 0:
            self._close(s)
        key = self._state_key()
        if self._checked != key:
            self._ok = self.first_bad(self.f) is None
            self._checked = key
        self.conditions.append((s, self._ok))

    def _range(self, a: int, s: int) -> bool:
        """R_2a: split every cell of B along ``a``."""
        p, B, view = self.p, self.B, self.view
        va = p.value(a)
        pieces = []
        for c in self.cells(self.f):
            a1, a2 = p.meet(c.alpha, va), p.diff(c.alpha, va)
            pieces.append((c, view.size(a1), view.size(a2), a1, a2))
        chosen: set = set()
        for c, g1, g2, a1, a2 in pieces:
            beta = set(c.beta)
            if g1 == 0 or g2 == 0:
                if g1 != 0:
                    chosen |= beta
                continue
            atoms = B.atoms(beta)
            if is_finite(g1) and is_finite(g2):
                chosen |= set(atoms[:g1])
                continue
            infs = B.inf_leaves(beta)
            if not infs:
                self.trace.append(TraceEvent(s, f"wait a{a}: finite cell guessed infinite", 2 * a))
                return False
            if is_finite(g1) or is_finite(g2):
                k = g1 if is_finite(g1) else g2
                fin = atoms[:k]
                if len(fin) < k:
                    fin += B.split(infs[0], 1, k - len(fin))[1:]
                chosen |= set(fin) if is_finite(g1) else B.current(beta) - set(fin)
                continue
            # both infinite: each side needs an infinite leaf; share the atoms
            if len(infs) < 2:
                infs = B.split(infs[0], 2, 0)
            room1 = len(view.below(a1))
            side1 = {infs[0]} | set(atoms[:room1])
            chosen |= side1
        b = B.name(frozenset(B.current(chosen)), s)
        e = BAEntry(b, a, entry_priority(b, a))
        if b in {x.b for x in self.f} or not self._commit(e):
            self.trace.append(TraceEvent(s, f"wait a{a}", 2 * a))
            return False
        self.trace.append(TraceEvent(s, f"split b{b}->a{a}", e.priority))
        return True

    def _domain(self, b: int, s: int) -> bool:
        """R_2b+1: find an image for ``b``, looking ahead inside A when needed."""
        p, B, view = self.p, self.B, self.view
        eb = B.elems[b]
        target = p.zero
        for c in self.cells(self.f):
            b1, b2 = c.beta & eb, c.beta - eb
            if not b1:
                continue
            if not b2:
                target = p.join(target, c.alpha)
                continue
            l1, l2 = B.label(b1), B.label(b2)
            seen = view.below(c.alpha)
            if is_finite(l1):
                target = p.join(target, _join(p, seen[:l1]))
                continue
            if is_finite(l2):
                target = p.join(target, p.diff(c.alpha, _join(p, seen[:l2])))
                continue
            a1 = self.look_ahead(c.alpha)
            if a1 is None:
                self.trace.append(TraceEvent(s, f"look-ahead b{b}: no split of a-cell yet",
                                             2 * b + 1))
                return False
            k1 = len(B.atoms(b1))
            a1 = p.join(p.diff(a1, _join(p, seen)), _join(p, seen[:k1]))
            target = p.join(target, a1)
        try:
            a = p.name_of(target)
        except KeyError:
            return False
        if a in {x.a for x in self.f}:
            return False
        e = BAEntry(b, a, entry_priority(b, a))
        if not self._commit(e):
            self.trace.append(TraceEvent(s, f"wait b{b}", 2 * b + 1))
            return False
        self.trace.append(TraceEvent(s, f"map b{b}->a{a}", e.priority))
        return True

    def look_ahead(self, alpha: Value) -> Optional[Value]:
        """Least element of A (by name) strictly below ``alpha`` with both it
        and its complement in ``alpha`` guessed infinite."""
        p, view = self.p, self.view
        best = None
        for k in range(p.max_depth + 1):
            for mask in _new_masks(k):
                if mask & ~alpha[0] or mask == 0 and k > 0:
                    continue
                for at in range(1 << p.m):
                    if at & ~alpha[1]:
                        continue
                    v = (mask, at)
                    if v == alpha or v == p.zero:
                        continue
                    if view.size(v) is INF and view.size(p.diff(alpha, v)) is INF:
                        best = v
                        break
                if best is not None:
                    return best
        return None

    # -- totality of B -------------------------------------------------------------
    def _close(self, s: int) -> None:
        """Name one more element of B's closure, so every finite union of
        leaves is eventually named."""
        B = self.B
        for leaf in sorted(B.label_of):
            if frozenset({leaf}) not in B.index:
                B.name(frozenset({leaf}), s)
                return
        n = len(B.elems)
        while self._closure_cursor < n * n:
            i, j = divmod(self._closure_cursor, n)
            self._closure_cursor += 1
            x = B.elems[i] | B.elems[j]
            if x not in B.index:
                B.name(x, s)
                return


def _join(p: BooleanAlgebraPresentation, vals) -> Value:
    acc = p.zero
    for v in vals:
        acc = p.join(acc, v)
    return acc


def ba_build_labeled_copy(p: BooleanAlgebraPresentation, horizon: int,
                          guess_epoch: Optional[Callable[[int], object]] = None) -> BuildResult:
    bld = BABuilder(p, guess_epoch)
    for s in range(horizon + 1):
        bld.step(s)
    B = bld.B
    B.schedule = Schedule(list(B.stages))
    return BuildResult(B, {e.b: e.a for e in bld.f}, bld.trace, bld.injuries,
                       B.labeling(), horizon,
                       {"builder": bld, "conditions": bld.conditions})


def verify_ba_prefix(result: BuildResult, p: BooleanAlgebraPresentation, k: int) -> bool:
    """Do the first ``k`` elements of B generate a subalgebra isomorphic (via
    ``f``) to the one their images generate in A, with every cell carrying
    the true size of its image?"""
    missing = [b for b in range(k) if b not in result.f]
    if missing:
        raise InsufficientPrefix(f"dom(f) lacks {missing[:5]}")
    bld = result.extra["builder"]
    cells = bld.cells([BAEntry(b, result.f[b], 0) for b in range(k)])
    return bool(cells) and all(bld.B.label(c.beta) == p.true_size(c.alpha) for c in cells)
