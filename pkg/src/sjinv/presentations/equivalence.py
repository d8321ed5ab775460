"""Equivalence structures and the Sigma^0_2 copy construction.

A character approximation guesses, stage by stage, the set of pairs
``(n, k)`` meaning "at least k classes of size n". A pair belongs to the
limit character iff from some stage on it is never ejected. The copy gives
each pair its own class, freezes it at size ``n`` while the pair is in, and
releases it to grow forever whenever the pair is ejected; fresh infinite
classes are started throughout, so there are infinitely many of them.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, FrozenSet, Iterable, Optional

from .base import ClassTag, Fact, Presentation, Schedule

Pair = tuple[int, int]


@dataclass(frozen=True)
class CharacterApprox:
    guess: Callable[[int], FrozenSet[Pair]]
    description: str = ""

    def __call__(self, s: int) -> FrozenSet[Pair]:
        return self.guess(s)

    @classmethod
    def constant(cls, pairs: Iterable[Pair]) -> "CharacterApprox":
        fs = frozenset(pairs)
        return cls(lambda s: fs, f"constant {sorted(fs)}")

    @classmethod
    def scripted(cls, entries: dict[Pair, list[tuple[int, int]]]) -> "CharacterApprox":
        """``entries[pair]`` lists ``(start, stop)`` stage ranges (stop exclusive,
        -1 for open-ended) during which the pair is in the guess."""
        def guess(s):
            return frozenset(pr for pr, spans in entries.items()
                             if any(a <= s and (b < 0 or s < b) for a, b in spans))
        return cls(guess, f"scripted {entries}")

    def confirmed(self, horizon: int, window: int = 10) -> FrozenSet[Pair]:
        """Pairs present at every stage of the last ``window`` stages up to ``horizon``."""
        start = max(0, horizon - window)
        sets = [self.guess(s) for s in range(start, horizon + 1)]
        return frozenset.intersection(*sets) if sets else frozenset()


def downward_closure(pairs: Iterable[Pair]) -> FrozenSet[Pair]:
    out = set()
    for n, k in pairs:
        for j in range(1, k + 1):
            out.add((n, j))
    return frozenset(out)


class EquivalencePresentation(Presentation):
    class_tag = ClassTag.EQUIVALENCE

    def __init__(self, class_of: list[int], stages: list[int]):
        super().__init__(Schedule(stages))
        self.class_of = class_of

    def facts_at(self, s: int) -> FrozenSet[Fact]:
        n = self.count_at(s)
        return frozenset(("E", x, y) for x in range(n) for y in range(n)
                         if self.class_of[x] == self.class_of[y])

    def classes(self, upto: Optional[int] = None) -> dict[int, list[int]]:
        n = len(self.class_of) if upto is None else min(upto, len(self.class_of))
        out: dict[int, list[int]] = {}
        for x in range(n):
            out.setdefault(self.class_of[x], []).append(x)
        return out

    def class_sizes(self, upto: Optional[int] = None) -> Counter:
        """Sizes of classes lying entirely within the first ``upto`` elements."""
        full = self.classes()
        part = self.classes(upto)
        return Counter(len(v) for c, v in part.items() if len(full[c]) == len(v))


def build_equivalence_copy(char: CharacterApprox, horizon: int,
                           grower_pad: int = 5,
                           grower_every: int = 4) -> EquivalencePresentation:
    """Run the Sigma^0_2 copy construction for ``horizon`` stages.

    Infinite classes are padded to more than ``grower_pad`` elements as soon
    as they are started or released, so no finite-looking grower ever passes
    for a frozen class in a prefix count.
    """
    class_of: list[int] = []
    stages: list[int] = []
    members: dict[int, int] = {}
    growers: list[int] = []
    owner: dict[Pair, int] = {}
    next_class = 0
    rr = 0

    def add(c: int, s: int, count: int = 1) -> None:
        for _ in range(count):
            class_of.append(c)
            stages.append(s)
            members[c] = members.get(c, 0) + 1

    def new_class() -> int:
        nonlocal next_class
        next_class += 1
        return next_class - 1

    def release(c: int, s: int) -> None:
        growers.append(c)
        if members[c] <= grower_pad:
            add(c, s, grower_pad + 1 - members[c])

    for s in range(horizon + 1):
        live = downward_closure(char(s))
        for pr in sorted(owner):
            if pr not in live:
                release(owner.pop(pr), s)
        for pr in sorted(live):
            n, _ = pr
            c = owner.get(pr)
            if c is not None and members[c] > n:
                release(owner.pop(pr), s)
                c = None
            if c is None:
                c = new_class()
                members[c] = 0
                owner[pr] = c
            if members[c] < n:
                add(c, s, n - members[c])
        if s % grower_every == 0:
            c = new_class()
            members[c] = 0
            release(c, s)
        if growers:
            add(growers[rr % len(growers)], s)
            rr += 1
    return EquivalencePresentation(class_of, stages)


def character_realized(copy: EquivalencePresentation, char: CharacterApprox, horizon: int,
                       prefix: int, bound: int = 5, window: int = 10) -> bool:
    """Among the classes lying entirely in the first ``prefix`` elements, the
    number of size ``n`` equals (capped at ``bound``) the largest ``k`` with
    (n, k) confirmed, for every n <= bound."""
    confirmed = downward_closure(char.confirmed(horizon, window))
    sizes = copy.class_sizes(prefix)
    for n in range(1, bound + 1):
        want = max((k for m, k in confirmed if m == n), default=0)
        if min(sizes.get(n, 0), bound) != min(want, bound):
            return False
    return True
