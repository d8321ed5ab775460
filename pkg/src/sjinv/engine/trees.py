"""Labeled copies of trees whose infinite nodes have finitely many finite
successors, with every starred relabelling of a finite successor recurring.

Every node of B carries a label fixed at creation: ``INF`` or the finite tree
below it (in which case that whole subtree is added at once). The map ``f``
is closed under predecessors. When the image of an ``INF`` node turns out
to be finite, the node is *vowed*: it gets no further finite successors, and
it is retargeted to the first sibling whose finite successors match the
ones it already has.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional

from ..btypes.enumeration import RLabeling, enumeration_for
from ..btypes.tree import encode_tree, make_tree_type
from ..presentations.base import ClassTag, Presentation, Schedule
from ..presentations.tree import TreePresentation, label_str, node_guess
from ..sizes import INF
from .core import BuildResult, Injury, TraceEvent, entry_priority, verify_prefix_isomorphism


class TreeCopy(Presentation):
    """B: nodes listed after their predecessors, each with a fixed label."""

    class_tag = ClassTag.TREE

    def __init__(self):
        super().__init__(Schedule([]))
        self.pred_of: list[int] = [0]
        self.label: list = [INF]
        self.stages: list[int] = [0]
        self.children: list[list[int]] = [[]]

    def count_at(self, s: int) -> int:
        n = 0
        while n < len(self.stages) and self.stages[n] <= s:
            n += 1
        return n

    def __len__(self) -> int:
        return len(self.label)

    def add(self, parent: int, label, s: int) -> int:
        """New child of ``parent``; a finite label brings its whole subtree."""
        x = len(self.label)
        self.pred_of.append(parent)
        self.label.append(label)
        self.stages.append(s)
        self.children.append([])
        self.children[parent].append(x)
        if label is not INF:
            for kid in label:
                self.add(x, kid, s)
        return x

    def pred(self, x: int) -> int:
        return self.pred_of[x]

    def facts_at(self, s: int) -> frozenset:
        return frozenset(("pred", x, self.pred_of[x]) for x in range(self.count_at(s)))

    def finite_children(self, x: int) -> Counter:
        return Counter(self.label[c] for c in self.children[x] if self.label[c] is not INF)

    def path(self, x: int) -> tuple:
        out = []
        while x:
            out.append(x)
            x = self.pred_of[x]
        return (0,) + tuple(reversed(out))

    def type_of(self, tup):
        return make_tree_type(self.pred_of, tuple(tup), self.label.__getitem__)

    def labeling(self) -> RLabeling:
        R = enumeration_for(self.class_tag)
        return RLabeling(lambda tup, s: encode_tree(self.type_of(tup)), R)


@dataclass
class TreeEntry:
    b: int
    a: int
    priority: int


class TreeBuilder:
    def __init__(self, p: TreePresentation):
        self.p = p
        self.B = TreeCopy()
        self.f: list[TreeEntry] = [TreeEntry(0, 0, -1)]
        self.vowed: set[int] = set()
        self.trace: list[TraceEvent] = []
        self.injuries: list[Injury] = []
        self._kids: dict = {}
        self._failed: dict = {}

    # -- A side ------------------------------------------------------------------
    def a_children(self, a: int, s: int) -> list[int]:
        n = self.p.count_at(s)
        key = (a, n)
        if key not in self._kids:
            self._kids[key] = self.p.children_at(a, s)
        return self._kids[key]

    def a_finite_children(self, a: int, s: int) -> Counter:
        out = Counter()
        for c in self.a_children(a, s):
            g = node_guess(self.p, c, s)
            if g is not INF:
                out[g] += 1
        return out

    # -- validity ----------------------------------------------------------------
    def _entry_ok(self, fmap: dict, e: TreeEntry, s: int) -> bool:
        p, B = self.p, self.B
        if e.b != 0:
            if fmap.get(B.pred(e.b)) != p.pred(e.a) or e.a == 0:
                return False
        if B.label[e.b] != node_guess(p, e.a, s):
            return False
        if B.label[e.b] is INF:
            mine = B.finite_children(e.b)
            theirs = self.a_finite_children(e.a, s)
            if e.b in self.vowed:
                return mine == theirs
            return not (mine - theirs)
        return True

    def first_bad(self, entries: list, s: int, start: int = 1) -> Optional[int]:
        fmap = {e.b: e.a for e in entries[:start]}
        for j in range(start, len(entries)):
            if not self._entry_ok(fmap, entries[j], s):
                return j
            fmap[entries[j].b] = entries[j].a
        return None

    def validate(self, s: int) -> None:
        bad = self.first_bad(self.f, s)
        if bad is None:
            return
        dropped = self.f[bad]
        if self.B.label[dropped.b] is INF and node_guess(self.p, dropped.a, s) is not INF:
            # the image is finite after all: freeze b's finite part and move it
            self.vowed.add(dropped.b)
            reason = f"finite-image@{dropped.b}->{dropped.a}"
        else:
            reason = f"guess-changed@{dropped.b}->{dropped.a}"
        self.f = self.f[:bad]
        self.injuries.append(Injury(s, dropped.priority, reason))
        self.trace.append(TraceEvent(s, "rollback", dropped.priority, reason))
        self._failed.clear()

    def _commit(self, e: TreeEntry, s: int) -> bool:
        out = list(self.f)
        i = 0
        while i < len(out) and out[i].priority < e.priority:
            i += 1
        out.insert(i, e)
        if self.first_bad(out, s, i) is None:
            self.f = out
            return True
        return False

    # -- requirements --------------------------------------------------------------
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
        memo = (self.p.count_at(s), len(self.B), tuple((e.b, e.a) for e in self.f),
            tuple(node_guess(self.p, e.a, s) is INF for e in self.f))
        if self._failed.get(pr) == memo:
            return
        ok = self._range(pr // 2, s) if pr % 2 == 0 else self._domain(pr // 2, s)
        if not ok:
            self._failed[pr] = memo
            self.trace.append(TraceEvent(s, "wait", pr))

    def _range(self, a: int, s: int) -> bool:
        """R_2a: give ``a`` a preimage among the successors of its parent's preimage."""
        inv = {e.a: e.b for e in self.f}
        parent = inv.get(self.p.pred(a))
        if parent is None:
            return False
        dom = {e.b for e in self.f}
        g = node_guess(self.p, a, s)
        for c in self.B.children[parent]:
            if c in dom or self.B.label[c] != g:
                continue
            e = TreeEntry(c, a, entry_priority(c, a))
            if self._commit(e, s):
                self.trace.append(TraceEvent(s, f"map-orphan b{c}->a{a}", e.priority))
                return True
        if self.B.label[parent] is not INF or (g is not INF and parent in self.vowed):
            return False
        if g is not INF and (self.B.finite_children(parent) + Counter([g])
                             - self.a_finite_children(self.p.pred(a), s)):
            return False
        c = self.B.add(parent, g, s)
        e = TreeEntry(c, a, entry_priority(c, a))
        if self._commit(e, s):
            self.trace.append(TraceEvent(s, f"new b{c}:{label_str(g)}->a{a}", e.priority))
            return True
        self.trace.append(TraceEvent(s, f"orphan b{c}", 2 * a))
        return False

    def _domain(self, b: int, s: int) -> bool:
        """R_2b+1: map ``b`` to the first fitting successor of its parent's image."""
        fmap = {e.b: e.a for e in self.f}
        target_parent = fmap.get(self.B.pred(b))
        if target_parent is None:
            return False
        ran = set(fmap.values())
        for a in self.a_children(target_parent, s):
            if a in ran or node_guess(self.p, a, s) != self.B.label[b]:
                continue
            e = TreeEntry(b, a, entry_priority(b, a))
            if self._commit(e, s):
                act = "retarget" if b in self.vowed else "map"
                self.trace.append(TraceEvent(s, f"{act} b{b}->a{a}", e.priority))
                return True
        return False


def tree_build_labeled_copy(p: TreePresentation, horizon: int,
                            check_labels: bool = True) -> BuildResult:
    bld = TreeBuilder(p)
    committed: list = []
    for s in range(horizon + 1):
        bld.step(s)
        if check_labels:
            if bld.B.label[:len(committed)] != committed:
                raise AssertionError(f"a committed label changed at stage {s}")
            committed = list(bld.B.label)
    B = bld.B
    B.schedule = Schedule(list(B.stages))
    return BuildResult(B, {e.b: e.a for e in bld.f}, bld.trace, bld.injuries,
                       B.labeling(), horizon, {"builder": bld, "vowed": sorted(bld.vowed)})


def verify_tree_result(result: BuildResult, p: TreePresentation, k: int) -> bool:
    """Prefix-k isomorphism plus: every mapped B node carries its image's true label."""
    B = result.B
    if not all(B.label[b] == p.true_label(a) for b, a in result.f.items()):
        return False
    return verify_prefix_isomorphism(B.facts_at(result.horizon), p, result.f, k, s=result.horizon)
