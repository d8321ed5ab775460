"""Shared bookkeeping for the priority constructions."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, FrozenSet, Iterable, Mapping, Optional

from ..presentations.base import Fact, Presentation


class InsufficientPrefix(ValueError):
    pass


class ReqKind(str, Enum):
    INTO_RANGE = "EvenIntoRange"   # R_{2a}: a in ran(f)
    INTO_DOMAIN = "OddIntoDomain"  # R_{2b+1}: b in dom(f)


@dataclass(frozen=True)
class Requirement:
    kind: ReqKind
    target: int

    @property
    def priority(self) -> int:
        return 2 * self.target + (self.kind is ReqKind.INTO_DOMAIN)

    @classmethod
    def of(cls, priority: int) -> "Requirement":
        kind = ReqKind.INTO_DOMAIN if priority % 2 else ReqKind.INTO_RANGE
        return cls(kind, priority // 2)


def entry_priority(b: int, a: int) -> int:
    """A pair b -> a meets both R_{2a} and R_{2b+1}; it ranks by the stronger."""
    return min(2 * a, 2 * b + 1)


@dataclass(frozen=True)
class TraceEvent:
    stage: int
    action: str
    req: Optional[int] = None
    injury: Optional[str] = None

    def __str__(self) -> str:
        out = f"s={self.stage} act={self.action} req={'-' if self.req is None else self.req}"
        if self.injury:
            out += f" injury={self.injury}"
        return out


@dataclass(frozen=True)
class Injury:
    stage: int
    priority: int
    reason: str


@dataclass
class BuildResult:
    """Output of a construction run: the copy B, its labeling and the map."""

    B: Presentation
    f: dict
    trace: list = field(default_factory=list)
    injuries: list = field(default_factory=list)
    labeling: Any = None
    horizon: int = 0
    extra: dict = field(default_factory=dict)

    def trace_text(self) -> str:
        return "".join(str(e) + "\n" for e in self.trace)

    def last_injury_stage(self) -> Optional[int]:
        return max((i.stage for i in self.injuries), default=None)


def _facts_on(facts: Iterable[Fact], keep: set) -> set:
    return {f for f in facts if all(x in keep for x in f[1:])}


def verify_prefix_isomorphism(B_facts: FrozenSet[Fact], p: Presentation,
                              f: Mapping[int, int], k: int,
                              s: Optional[int] = None,
                              A_facts: Optional[FrozenSet[Fact]] = None) -> bool:
    """Does ``f`` restrict to an isomorphism between the first ``k`` elements of
    B (plus the preimages of A's first ``k``) and their images?

    Relations are compared fact by fact: a fact about the chosen B elements
    must hold of their images in A and conversely.
    """
    missing_dom = [b for b in range(k) if b not in f]
    ran = set(f.values())
    missing_ran = [a for a in range(k) if a not in ran]
    if missing_dom or missing_ran:
        raise InsufficientPrefix(
            f"dom(f) lacks {missing_dom[:5]}, ran(f) lacks {missing_ran[:5]}")
    if len(ran) != len(f):
        return False
    inv = {a: b for b, a in f.items()}
    chosen = set(range(k)) | {inv[a] for a in range(k)}
    images = {f[b] for b in chosen}
    if A_facts is None:
        if s is None:
            s = p.settle_stage()
            if s is None:
                raise ValueError("pass a stage for presentations that never settle")
        A_facts = p.facts_at(s)
    if s is not None and any(a >= p.count_at(s) for a in images):
        raise InsufficientPrefix("image not yet enumerated")
    mine = _facts_on(B_facts, chosen)
    theirs = _facts_on(A_facts, images)
    pulled = {(fa[0],) + tuple(inv[x] for x in fa[1:]) for fa in theirs}
    return mine == pulled
