"""B1-type codes for tuples in trees (predecessor-function language).

A tuple generates the finite subtree of its elements' ancestors. The code
lists that subtree (nodes numbered by first appearance walking each ``u_i``
down from the root), which node each ``u_i`` is, and a label per node: INF
or the finite tree hanging below it.

Formulas: ``("anc", i, j, k)`` says ``pred^k(u_i) = u_j``; ``("below", i, T)``
says a copy of the finite tree ``T`` hangs below ``u_i`` (root-preserving).
An infinite node is taken to embed every finite tree, which holds in the
classes these codes are used for.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from ..coding import decode_list, encode_list
from ..sizes import INF
from ..presentations.tree import canon_tree, embeds, label_str
from .common import DecodeError, UnsupportedFormula, holds


def tree_code(t) -> int:
    return encode_list(sorted(tree_code(c) for c in t))


def tree_decode(code: int, _budget: list | None = None):
    budget = _budget if _budget is not None else [64]
    budget[0] -= 1
    if budget[0] < 0:
        raise DecodeError("tree too large")
    kids = decode_list(code)
    if kids != sorted(kids):
        raise DecodeError("non-canonical child order")
    return tuple(sorted(tree_decode(k, budget) for k in kids))


def _label_code(lbl) -> int:
    return 0 if lbl is INF else 1 + tree_code(lbl)


def _label_decode(k: int):
    return INF if k == 0 else tree_decode(k - 1)


@dataclass(frozen=True)
class TreeType:
    parents: tuple[int, ...]    # parents[0] == -1 (root); parents[j] < j
    positions: tuple[int, ...]  # node of u_i
    labels: tuple              # INF or canonical finite tree, per node

    def __post_init__(self):
        n = len(self.parents)
        if n == 0 or self.parents[0] != -1:
            raise DecodeError("subtree must contain the root")
        if any(not 0 <= p < j for j, p in enumerate(self.parents) if j):
            raise DecodeError("parents must precede children")
        if len(self.labels) != n or any(not 0 <= x < n for x in self.positions):
            raise DecodeError("labels/positions out of range")
        if _renumber(self.parents, self.positions) != (self.parents, self.positions):
            raise DecodeError("node numbering is not canonical")
        for j, lbl in enumerate(self.labels):
            if lbl is not INF and canon_tree(lbl) != lbl:
                raise DecodeError("label is not canonical")
        for j in range(n):
            kids = [c for c in range(n) if self.parents[c] == j]
            if self.labels[j] is INF:
                continue
            kid_labels = [self.labels[c] for c in kids]
            if any(k is INF for k in kid_labels):
                raise DecodeError("infinite node under a finite one")
            pool = list(self.labels[j])
            for k in kid_labels:
                if k not in pool:
                    raise DecodeError("child label not among the parent's subtrees")
                pool.remove(k)

    @property
    def arity(self) -> int:
        return len(self.positions)

    def __str__(self) -> str:
        return (f"tree{list(self.parents)} at {list(self.positions)} "
                f"labels {[label_str(l) for l in self.labels]}")

    def node_label(self, i: int):
        return self.labels[self.positions[i]]

    def _up(self, node: int, k: int) -> int:
        for _ in range(k):
            node = max(self.parents[node], 0)
        return node

    def atomic(self, phi: tuple) -> bool:
        head = phi[0]
        if head == "anc" and len(phi) == 4:
            _, i, j, k = phi
            return self._up(self.positions[i], k) == self.positions[j]
        if head == "below" and len(phi) == 3:
            lbl = self.node_label(phi[1])
            return lbl is INF or embeds(canon_tree(phi[2]), lbl)
        raise UnsupportedFormula(f"not a tree formula: {phi!r}")

    def satisfies(self, phi: tuple) -> bool:
        return holds(phi, self.atomic)


def _renumber(parents: Sequence[int], positions: Sequence[int]):
    """Canonical numbering: walk each tuple element's path down from the root."""
    new: dict[int, int] = {0: 0}
    for x in positions:
        path = []
        while x not in new:
            path.append(x)
            x = parents[x]
        for y in reversed(path):
            new[y] = len(new)
    if len(new) != len(parents):
        return None
    out = [0] * len(parents)
    for old, nw in new.items():
        out[nw] = -1 if old == 0 else new[parents[old]]
    return tuple(out), tuple(new[x] for x in positions)


def make_tree_type(pred_of: dict, tuple_nodes: Sequence, label_of) -> TreeType:
    """Build the canonical code from raw nodes: ``pred_of[x]`` (root maps to
    itself), the tuple, and a label function on raw nodes."""
    new: dict = {}
    order: list = []
    for x in tuple_nodes:
        path = []
        while x not in new:
            path.append(x)
            if pred_of[x] == x:
                break
            x = pred_of[x]
        for y in reversed(path):
            new[y] = len(order)
            order.append(y)
    parents = tuple(-1 if pred_of[y] == y else new[pred_of[y]] for y in order)
    return TreeType(parents, tuple(new[x] for x in tuple_nodes),
                    tuple(label_of(y) for y in order))


def encode_tree(t: TreeType) -> int:
    return encode_list([len(t.parents), *(p + 1 for p in t.parents),
                        len(t.positions), *t.positions,
                        *(_label_code(l) for l in t.labels)])


def decode_tree(i: int) -> TreeType:
    if not isinstance(i, int) or i < 0:
        raise DecodeError(f"bad index {i!r}")
    xs = decode_list(i)
    try:
        n = xs[0]
        parents = tuple(p - 1 for p in xs[1:1 + n])
        k = xs[1 + n]
        positions = tuple(xs[2 + n: 2 + n + k])
        labels = tuple(_label_decode(c) for c in xs[2 + n + k:])
    except IndexError:
        raise DecodeError(f"index {i} is not a tree code") from None
    if len(parents) != n or len(positions) != k or len(labels) != n:
        raise DecodeError(f"index {i} is not a tree code")
    t = TreeType(parents, positions, labels)
    if encode_tree(t) != i:
        raise DecodeError(f"index {i} is not canonical")
    return t


@lru_cache(maxsize=None)
def finite_trees(nodes: int) -> tuple:
    """Canonical finite trees with exactly ``nodes`` nodes."""
    if nodes == 1:
        return ((),)
    out = set()
    # split off one child subtree of size k, the rest keeps the root
    for k in range(1, nodes):
        for child in finite_trees(k):
            for rest in finite_trees(nodes - k):
                out.add(canon_tree(rest + (child,)))
    return tuple(sorted(out, key=lambda t: (tree_code(t), t)))


def tree_types_upto(bound: int) -> Iterator[TreeType]:
    """Every valid code with at most ``bound`` subtree nodes, tuple entries and
    label nodes; a finite family, increasing with ``bound``."""
    labels = [INF] + [t for k in range(1, bound + 1) for t in finite_trees(k)]
    for n in range(1, bound + 1):
        for parents in product(*[range(-1, 0)] + [range(j) for j in range(1, n)]):
            for k in range(bound + 1):
                for positions in product(range(n), repeat=k):
                    for lbls in product(labels, repeat=n):
                        try:
                            yield TreeType(tuple(parents), positions, lbls)
                        except DecodeError:
                            continue
