"""Stage-indexed approximations standing in for limit-computable oracles.

An :class:`ApproxOracle` is a total, deterministic guess function
``answer(query, stage)``. A Delta^0_2 set or function is the pointwise limit
of such guesses; at desk scale we can only inspect a finite horizon, so
"settled" means "constant for at least ``window`` stages up to the horizon".
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

DEFAULT_WINDOW = 10


class InvalidHorizon(ValueError):
    pass


@dataclass(frozen=True)
class ApproxOracle:
    answer: Callable[[int, int], int]
    description: str = ""

    def __call__(self, q: int, s: int) -> int:
        return self.answer(q, s)

    @classmethod
    def constant(cls, value: int) -> "ApproxOracle":
        return cls(lambda q, s: value, f"constant {value}")

    @classmethod
    def from_rule(cls, rule: Callable[[int, int], int], description: str = "") -> "ApproxOracle":
        return cls(rule, description or getattr(rule, "__name__", "rule"))

    @classmethod
    def from_changes(
        cls,
        changes: Mapping[int, Sequence[tuple[int, int]]],
        default: int = 0,
    ) -> "ApproxOracle":
        """Build an oracle from per-query change points.

        ``changes[q]`` is a list of ``(stage, value)`` pairs; the answer at
        stage ``s`` is the value of the last change at or before ``s``
        (``default`` before the first change or for unlisted queries).
        """
        table = {q: _ChangeList(pts) for q, pts in changes.items()}

        def answer(q: int, s: int) -> int:
            cl = table.get(q)
            if cl is None:
                return default
            return cl.value_at(s, default)

        desc = "changes " + ", ".join(
            f"{q}:{list(table[q].points)}" for q in sorted(table)
        )
        return cls(answer, desc)

    @classmethod
    def alternating(cls, period: int = 1, values: tuple[int, int] = (0, 1)) -> "ApproxOracle":
        """Flaps forever between two values; never settles."""
        a, b = values
        return cls(lambda q, s: a if (s // period) % 2 == 0 else b, f"alternating/{period}")


@dataclass(frozen=True)
class _ChangeList:
    points: tuple[tuple[int, int], ...]
    stages: tuple[int, ...] = field(init=False, repr=False)

    def __init__(self, pts):
        pts = tuple(sorted((int(s), int(v)) for s, v in pts))
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "stages", tuple(s for s, _ in pts))

    def value_at(self, s: int, default: int) -> int:
        i = bisect_right(self.stages, s)
        return default if i == 0 else self.points[i - 1][1]


@dataclass(frozen=True)
class StabilizationReport:
    query: int
    settled_at: Optional[int]  # None means not settled
    final_value: Optional[int]  # None means absent
    candidate_stage: int = 0

    @property
    def settled(self) -> bool:
        return self.settled_at is not None


def query(oracle: ApproxOracle, q: int, s: int) -> int:
    return oracle.answer(q, s)


def stabilization(
    oracle: ApproxOracle, q: int, horizon: int, window: int = DEFAULT_WINDOW
) -> StabilizationReport:
    """Least stage from which ``oracle(q, .)`` is constant up to ``horizon``.

    The last value always defines a candidate stage; the query counts as
    settled only when the candidate has dwelt at least ``window`` stages.
    """
    if horizon < 1:
        raise InvalidHorizon(f"horizon must be >= 1, got {horizon}")
    last = oracle.answer(q, horizon)
    s0 = horizon
    while s0 > 0 and oracle.answer(q, s0 - 1) == last:
        s0 -= 1
    if horizon - s0 < window:
        return StabilizationReport(q, None, None, s0)
    return StabilizationReport(q, s0, last, s0)
