"""Trees of +/-phi decisions whose paths are the B1-types of a theory.

For each variable tuple ``j`` we grow a finitely branching tree: a node is a
sequence of decisions for the formulas ``phi_0, phi_1, ...`` (True meaning
``phi_k`` is put in). A node is only added when the supplied decidable
consistency predicate accepts it. Every terminal node carries an index;
when a node is extended, its first consistent child keeps the index and any
other child gets a fresh one. The formulas of ``R_i`` are the decisions on
the node currently holding ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .common import PredicateViolation

Seq = tuple[bool, ...]
Consistency = Callable[[int, Seq], bool]


@dataclass(frozen=True)
class TheoryTypeTree:
    n_tuples: int = 1
    stage: int = -1
    # per tuple id: terminal node -> index
    terminals: dict = field(default_factory=dict)
    # index -> (tuple id, node holding it)
    holders: dict = field(default_factory=dict)
    next_index: int = 0

    def live_indices(self, j: int = 0) -> list[int]:
        return sorted(self.terminals.get(j, {}).values())

    def formulas(self, i: int) -> tuple[tuple[int, bool], ...]:
        """``R_i`` so far: pairs ``(k, sign)`` for ``+phi_k`` / ``-phi_k``."""
        _, node = self.holders[i]
        return tuple(enumerate(node))

    def depth(self, j: int = 0) -> int:
        nodes = self.terminals.get(j, {})
        return max((len(n) for n in nodes), default=-1)


def theory_tree_step(T: TheoryTypeTree, consistency: Consistency, s: int) -> TheoryTypeTree:
    """Stage ``s``: open the trees of the first ``s+1`` tuples and extend every
    terminal node by all its consistent one-step extensions."""
    terminals = {j: dict(nodes) for j, nodes in T.terminals.items()}
    holders = dict(T.holders)
    nxt = T.next_index
    for j in range(min(s + 1, T.n_tuples)):
        if j not in terminals:
            if not consistency(j, ()):
                raise PredicateViolation(f"tuple {j}: the empty sequence is inconsistent")
            terminals[j] = {(): nxt}
            holders[nxt] = (j, ())
            nxt += 1
        grown: dict[Seq, int] = {}
        for node, idx in sorted(terminals[j].items()):
            kids = [node + (b,) for b in (True, False) if consistency(j, node + (b,))]
            if not kids:
                raise PredicateViolation(f"tuple {j}: node {node} has no consistent extension")
            grown[kids[0]] = idx
            holders[idx] = (j, kids[0])
            for kid in kids[1:]:
                grown[kid] = nxt
                holders[nxt] = (j, kid)
                nxt += 1
        terminals[j] = grown
    return TheoryTypeTree(T.n_tuples, s, terminals, holders, nxt)


def grow(consistency: Consistency, steps: int, n_tuples: int = 1) -> list[TheoryTypeTree]:
    """All snapshots of ``steps`` successive stages."""
    T = TheoryTypeTree(n_tuples)
    out = []
    for s in range(steps):
        T = theory_tree_step(T, consistency, s)
        out.append(T)
    return out


def paths_bruteforce(consistency: Consistency, depth: int, j: int = 0) -> int:
    """Number of length-``depth`` sequences all of whose prefixes are consistent."""
    level: list[Seq] = [()] if consistency(j, ()) else []
    for _ in range(depth):
        level = [n + (b,) for n in level for b in (True, False) if consistency(j, n + (b,))]
    return len(level)
