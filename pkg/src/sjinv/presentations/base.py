from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, FrozenSet, Hashable, Iterable, Optional, Sequence


class ClassTag(str, Enum):
    LINEAR_ORDER = "LinearOrder"
    BOOLEAN_ALGEBRA = "BooleanAlgebra"
    TREE = "Tree"
    EQUIVALENCE = "EquivalenceStructure"


class UnknownElement(LookupError):
    pass


class FixtureIncoherent(RuntimeError):
    """The fixture (or a labeler reading it) contradicts itself."""


Fact = tuple


class Schedule:
    """Monotone enumeration schedule: element ``i`` appears at stage ``stage_of(i)``.

    Element names are naturals listed in order of appearance, so the universe
    at any stage is a prefix ``range(count_at(s))``.
    """

    def __init__(self, stages: Optional[Sequence[int]] = None, *, pace: int = 1,
                 offset: int = 0, limit: Optional[int] = None):
        if stages is not None:
            stages = list(stages)
            if any(b < a for a, b in zip(stages, stages[1:])):
                raise ValueError("schedule stages must be non-decreasing")
            limit = len(stages) if limit is None else min(limit, len(stages))
        self._stages = stages
        self.pace = pace
        self.offset = offset
        self.limit = limit

    def stage_of(self, i: int) -> Optional[int]:
        if i < 0 or (self.limit is not None and i >= self.limit):
            return None
        if self._stages is not None:
            return self._stages[i]
        return self.offset + i * self.pace

    def count_at(self, s: int) -> int:
        if s < 0:
            return 0
        if self._stages is not None:
            n = 0
            lim = self.limit
            while n < lim and self._stages[n] <= s:
                n += 1
            return n
        if s < self.offset:
            return 0
        n = (s - self.offset) // self.pace + 1
        return n if self.limit is None else min(n, self.limit)

    def last_stage(self) -> Optional[int]:
        if self.limit is None:
            return None
        if self.limit == 0:
            return 0
        return self.stage_of(self.limit - 1)


class Presentation:
    """A stage-enumerated structure: universe prefix plus atomic facts."""

    class_tag: ClassTag

    def __init__(self, schedule: Schedule):
        self.schedule = schedule

    def count_at(self, s: int) -> int:
        return self.schedule.count_at(s)

    def universe_at(self, s: int) -> range:
        return range(self.count_at(s))

    def known(self, x: int, s: int) -> bool:
        return 0 <= x < self.count_at(s)

    def require(self, s: int, *xs: int) -> None:
        for x in xs:
            if not self.known(x, s):
                raise UnknownElement(f"element {x} not enumerated by stage {s}")

    def facts_at(self, s: int) -> FrozenSet[Fact]:
        raise NotImplementedError

    def settle_stage(self) -> Optional[int]:
        """Stage after which no new element appears (None if unbounded)."""
        return self.schedule.last_stage()


def diagram_fragment(p: Presentation, s: int) -> tuple[FrozenSet[int], FrozenSet[Fact]]:
    return frozenset(p.universe_at(s)), p.facts_at(s)


class EmptyPresentation(Presentation):
    def __init__(self, class_tag: ClassTag = ClassTag.LINEAR_ORDER):
        super().__init__(Schedule([]))
        self.class_tag = class_tag

    def facts_at(self, s: int) -> FrozenSet[Fact]:
        return frozenset()
