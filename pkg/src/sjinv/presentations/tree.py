"""Subtrees of omega^<omega generated by node-type rules.

A rule set maps a type name to either ``{"children": [...]}`` (a finite
node, its children listed once) or ``{"prefix": [...], "cycle": [...]}`` (an
infinite node: children follow the prefix, then repeat the cycle forever).
Nodes are enumerated by dovetailing, root first and every node after its
predecessor.
"""
from __future__ import annotations

from functools import lru_cache
from typing import FrozenSet, Mapping, Optional, Sequence, Union

from ..coding import unpair
from ..sizes import INF
from .base import ClassTag, Fact, FixtureIncoherent, Presentation, Schedule

# A finite rooted unordered tree in canonical form: sorted tuple of child trees.
FiniteTree = tuple
LEAF: FiniteTree = ()
Label = Union[FiniteTree, type(INF)]


def canon(children) -> FiniteTree:
    return tuple(sorted(canon_tree(c) for c in children))


def canon_tree(t) -> FiniteTree:
    return tuple(sorted(canon_tree(c) for c in t))


def tree_size(t: FiniteTree) -> int:
    return 1 + sum(tree_size(c) for c in t)


def label_str(lbl) -> str:
    if lbl is INF:
        return "inf"
    return _fmt(lbl)


def _fmt(t) -> str:
    return "(" + "".join(_fmt(c) for c in t) + ")"


def parse_label(text: str):
    text = text.strip()
    if text.lower() in ("inf", "oo"):
        return INF
    pos = 0

    def node():
        nonlocal pos
        if text[pos] != "(":
            raise ValueError(f"bad tree label {text!r}")
        pos += 1
        kids = []
        while text[pos] != ")":
            kids.append(node())
        pos += 1
        return tuple(sorted(kids))

    t = node()
    if pos != len(text):
        raise ValueError(f"bad tree label {text!r}")
    return t


def embeds(small: FiniteTree, big: FiniteTree) -> bool:
    """Root-preserving injective embedding of ``small`` into ``big``."""
    return _embeds(small, big)


@lru_cache(maxsize=None)
def _embeds(small, big) -> bool:
    if len(small) > len(big):
        return False
    return _match(list(small), list(big))


def _match(kids, targets) -> bool:
    if not kids:
        return True
    first, rest = kids[0], kids[1:]
    for i, t in enumerate(targets):
        if _embeds(first, t) and _match(rest, targets[:i] + targets[i + 1:]):
            return True
    return False


Rules = Mapping[str, Mapping[str, Sequence[str]]]


class TreePresentation(Presentation):
    class_tag = ClassTag.TREE

    def __init__(self, rules: Rules, root_type: str, max_nodes: int, pace: int = 1,
                 guess_mode: str = "oracle", reveal: Optional[Mapping[tuple, int]] = None):
        super().__init__(Schedule(pace=pace))
        for name, r in rules.items():
            if ("children" in r) == ("cycle" in r):
                raise FixtureIncoherent(f"type {name} must be finite or infinite")
            if "cycle" in r and not r["cycle"]:
                raise FixtureIncoherent(f"type {name} has an empty cycle")
        self.rules = rules
        self.root_type = root_type
        self.guess_mode = guess_mode
        self.reveal = dict(reveal or {})
        self.nodes: list[tuple] = []
        self.types: list[str] = []
        self.index: dict[tuple, int] = {}
        self._enumerate(max_nodes)
        self.schedule.limit = len(self.nodes)

    # -- structure -----------------------------------------------------------
    def child_type(self, t: str, j: int) -> Optional[str]:
        r = self.rules[t]
        if "children" in r:
            kids = r["children"]
            return kids[j] if j < len(kids) else None
        pre, cyc = r["prefix"], r["cycle"]
        if j < len(pre):
            return pre[j]
        return cyc[(j - len(pre)) % len(cyc)]

    def type_infinite(self, t: str) -> bool:
        return "cycle" in self.rules[t] or any(
            self.type_infinite(c) for c in self.rules[t]["children"])

    def type_tree(self, t: str) -> FiniteTree:
        if self.type_infinite(t):
            raise ValueError(f"type {t} is infinite")
        return canon(self.type_tree(c) for c in self.rules[t]["children"])

    def _enumerate(self, max_nodes: int) -> None:
        self._add((), self.root_type)
        next_child: list[int] = [0]
        step = 0
        # Dovetail step pair(i, j) gives node i its next missing child.
        stall = 0
        while len(self.nodes) < max_nodes and stall < 10 * max_nodes * max_nodes + 100:
            i, _ = unpair(step)
            step += 1
            if i >= len(self.nodes):
                stall += 1
                continue
            j = next_child[i]
            ct = self.child_type(self.types[i], j)
            if ct is None:
                stall += 1
                continue
            next_child[i] += 1
            next_child.append(0)
            self._add(self.nodes[i] + (j,), ct)
            stall = 0

    def _add(self, node: tuple, t: str) -> None:
        self.index[node] = len(self.nodes)
        self.nodes.append(node)
        self.types.append(t)

    def pred(self, x: int) -> int:
        node = self.nodes[x]
        return 0 if not node else self.index[node[:-1]]

    def children_at(self, x: int, s: int) -> list[int]:
        n = self.count_at(s)
        node = self.nodes[x]
        return [y for y in range(n) if len(self.nodes[y]) == len(node) + 1
                and self.nodes[y][:-1] == node]

    def depth(self, x: int) -> int:
        return len(self.nodes[x])

    def true_label(self, x: int):
        t = self.types[x]
        return INF if self.type_infinite(t) else self.type_tree(t)

    def seen_tree(self, x: int, s: int) -> FiniteTree:
        return canon(self.seen_tree(c, s) for c in self.children_at(x, s))

    def facts_at(self, s: int) -> FrozenSet[Fact]:
        return frozenset(("pred", x, self.pred(x)) for x in range(self.count_at(s)))


def node_guess(p: TreePresentation, x: int, s: int):
    """Stage-s guess at the label of node ``x``: INF or its finite tree.

    ``observe`` mode (terminal-or-infinite classes): terminal until a
    successor is enumerated. ``oracle`` mode: the true label, except that a
    node listed in ``reveal`` is guessed infinite before its reveal stage.
    """
    p.require(s, x)
    if p.guess_mode == "observe":
        return INF if p.children_at(x, s) else LEAF
    truth = p.true_label(x)
    if truth is not INF and s < p.reveal.get(p.nodes[x], -1):
        return INF
    return truth


# Standard rule sets ---------------------------------------------------------

# Top node infinite; each infinite node has two terminal successors, the rest infinite.
SIMPLE_RULES = {
    "I": {"prefix": ["T", "T"], "cycle": ["I"]},
    "T": {"children": []},
}

# Infinite nodes have finitely many finite successors; every relabelling of a
# finite successor (with its infinite part starred) recurs infinitely often.
RECURRENT_RULES = {
    "I": {"prefix": ["F2", "F1"], "cycle": ["J", "P"]},
    "J": {"prefix": ["F1"], "cycle": ["P"]},
    "P": {"prefix": [], "cycle": ["P"]},
    "F2": {"children": ["F1"]},
    "F1": {"children": []},
}
