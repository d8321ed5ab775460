"""Linear orders presented by sort keys plus an enumeration schedule."""
from __future__ import annotations

from bisect import bisect_left, insort
from fractions import Fraction
from typing import Callable, FrozenSet, Hashable, Iterator, Optional, Sequence

from ..sizes import INF, Size
from .base import ClassTag, Fact, FixtureIncoherent, Presentation, Schedule, UnknownElement


class OrderPresentation(Presentation):
    """Element ``i`` sits at ``keys[i]``; ``a < b`` iff ``keys[a] < keys[b]``.

    ``true_size`` optionally gives the size of ``(a, b)`` in the infinite
    structure the window is drawn from (the ground truth for limit checks).
    """

    class_tag = ClassTag.LINEAR_ORDER

    def __init__(self, keys: Sequence[Hashable], schedule: Schedule,
                 true_size: Optional[Callable[[int, int], Size]] = None,
                 bad_facts: Sequence[Fact] = ()):
        super().__init__(schedule)
        if len(set(keys)) != len(keys):
            raise FixtureIncoherent("duplicate order keys")
        self.keys = list(keys)
        # integer ranks stand in for the keys in every comparison
        order = sorted(range(len(self.keys)), key=self.keys.__getitem__)
        self.rank = [0] * len(self.keys)
        for r, i in enumerate(order):
            self.rank[i] = r
        if schedule.limit is None or schedule.limit > len(keys):
            schedule.limit = len(keys)
        self._true_size = true_size
        self.bad_facts = tuple(bad_facts)
        self._sorted_cache: dict[int, list] = {}

    def less(self, a: int, b: int) -> bool:
        return self.rank[a] < self.rank[b]

    def _sorted(self, n: int) -> list:
        cached = self._sorted_cache.get(n)
        if cached is None:
            cached = sorted(self.rank[:n])
            self._sorted_cache[n] = cached
        return cached

    def count_between(self, a: int, b: int, s: int) -> int:
        n = self.count_at(s)
        ks = self._sorted(n)
        lo, hi = self.rank[a], self.rank[b]
        return max(0, bisect_left(ks, hi) - bisect_left(ks, lo) - 1)

    def count_left(self, a: int, s: int) -> int:
        return bisect_left(self._sorted(self.count_at(s)), self.rank[a])

    def count_right(self, a: int, s: int) -> int:
        ks = self._sorted(self.count_at(s))
        return len(ks) - bisect_left(ks, self.rank[a]) - 1

    def sorted_elements(self, s: int) -> list[int]:
        n = self.count_at(s)
        return sorted(range(n), key=self.rank.__getitem__)

    def facts_at(self, s: int) -> FrozenSet[Fact]:
        els = self.sorted_elements(s)
        facts = {("lt", x, y) for i, x in enumerate(els) for y in els[i + 1:]}
        n = self.count_at(s)
        facts.update(f for f in self.bad_facts if all(0 <= v < n for v in f[1:]))
        return frozenset(facts)

    def true_size(self, a: Optional[int], b: Optional[int]) -> Size:
        """Ground-truth size of the open interval; ``None`` endpoints are -oo/+oo."""
        if self._true_size is None:
            raise NotImplementedError("fixture has no ground truth")
        return self._true_size(a, b)

    def check_coherent(self, s: int) -> None:
        n = self.count_at(s)
        for f in self.bad_facts:
            if f[0] == "lt" and all(0 <= v < n for v in f[1:]):
                if not self.less(f[1], f[2]):
                    raise FixtureIncoherent(f"fact {f} contradicts the order")


def interval_size(p: OrderPresentation, a: int, b: int, s: int,
                  bound: Optional[int] = None) -> Size:
    """Stage-``s`` guess at the size of ``(a, b)``.

    With a block bound ``N`` the interval is reported infinite as soon as
    more than ``N`` elements are seen inside it; otherwise the count seen so
    far is returned.
    """
    p.require(s, a, b)
    if not p.less(a, b):
        raise ValueError(f"{a} < {b} is not known at stage {s}")
    c = p.count_between(a, b, s)
    if bound is not None and c > bound:
        return INF
    return c


# ---------------------------------------------------------------------------
# Fixture builders


def dyadic_positions() -> Iterator[Fraction]:
    """Dyadic rationals of (0, 1) in breadth-first order: 1/2, 1/4, 3/4, 1/8, ..."""
    depth = 1
    while True:
        den = 2 ** depth
        for num in range(1, den, 2):
            yield Fraction(num, den)
        depth += 1


def dyadic_depth(q: Fraction) -> int:
    return q.denominator.bit_length() - 1


def block_order(
    block_size: Callable[[Fraction], int],
    max_elements: int,
    pace: int = 1,
    shuffle_within: bool = False,
    positions: Optional[Iterator[Fraction]] = None,
    extra_blocks: Optional[dict] = None,
) -> OrderPresentation:
    """Dense (eta) arrangement of finite blocks at dyadic positions.

    Block at position ``q`` has ``block_size(q)`` elements. Elements are
    listed block by block; with ``shuffle_within`` each block is listed
    middle-out so interior intervals are revised as the block fills in.
    Distinct blocks are infinitely far apart in the ground truth because the
    dyadics are dense.
    """
    positions = positions if positions is not None else dyadic_positions()
    keys: list = []
    for q in positions:
        m = block_size(q)
        if extra_blocks and q in extra_blocks:
            m = extra_blocks[q]
        order = list(range(m))
        if shuffle_within and m > 2:
            order = _middle_out(m)
        for j in order:
            if len(keys) >= max_elements:
                break
            keys.append((q, j))
        if len(keys) >= max_elements:
            break

    def true_size(a, b):
        if a is None or b is None:
            return INF
        (qa, ja), (qb, jb) = keys[a], keys[b]
        if qa != qb:
            return INF
        return abs(ja - jb) - 1

    return OrderPresentation(keys, Schedule(pace=pace, limit=len(keys)), true_size)


def _middle_out(m: int) -> list[int]:
    out = [0, m - 1]
    lo, hi = 1, m - 2
    take_hi = False
    while lo <= hi:
        if take_hi:
            out.append(hi)
            hi -= 1
        else:
            out.append(lo)
            lo += 1
        take_hi = not take_hi
    return out


def chain(n: int, stages: Optional[Sequence[int]] = None) -> OrderPresentation:
    """Finite chain 0 < 1 < ... < n-1, element ``i`` at stage ``stages[i]`` (default ``i``)."""
    stages = list(stages) if stages is not None else list(range(n))
    return OrderPresentation(list(range(n)), Schedule(stages),
                             lambda a, b: _chain_size(n, a, b))


def _chain_size(n, a, b):
    lo = -1 if a is None else a
    hi = n if b is None else b
    return max(0, hi - lo - 1)


def block_of(p: OrderPresentation, x: int):
    """Block id of ``x`` in a :func:`block_order` fixture (its dyadic position)."""
    return p.keys[x][0]


class RevealingSizes:
    """Delta^0_2 interval-size oracle for a block fixture.

    Intervals across blocks (or to an end) are infinite. An interval inside
    a block is guessed infinite until the block's reveal stage and correct
    from then on. ``reveal`` maps block ids to stages; unlisted blocks are
    revealed from stage ``default``.
    """

    def __init__(self, p: OrderPresentation, reveal: Optional[dict] = None, default: int = 0):
        self.p = p
        self.reveal = dict(reveal or {})
        self.default = default

    def revealed(self, x: int, s: int) -> bool:
        return s >= self.reveal.get(block_of(self.p, x), self.default)

    def __call__(self, a: Optional[int], b: Optional[int], s: int) -> Size:
        if a is None or b is None:
            return INF
        if block_of(self.p, a) != block_of(self.p, b) or not self.revealed(a, s):
            return INF
        return self.p.true_size(a, b)

    def guess_epoch(self, s: int) -> int:
        """Changes exactly when some size guess may change (a reveal)."""
        return sum(1 for t in self.reveal.values() if t <= s) + (s >= self.default)

    def epoch(self, s: int):
        """Changes whenever the A side may change: new element or a reveal."""
        return (self.p.count_at(s), self.guess_epoch(s))

    def extents(self, c: int, s: int) -> tuple[int, int]:
        """How far the guessed successor chain around ``c`` reaches among
        the elements enumerated by stage ``s`` (left, right)."""
        if not self.revealed(c, s):
            return 0, 0
        if not hasattr(self, "_members"):
            self._members = {}
            for x in range(len(self.p.keys)):
                self._members.setdefault(block_of(self.p, x), []).append(x)
        n = self.p.count_at(s)
        j = self.p.keys[c][1]
        left = right = 0
        for x in self._members[block_of(self.p, c)]:
            if x >= n:
                break
            k = self.p.keys[x][1]
            if k < j:
                left = max(left, j - k)
            elif k > j:
                right = max(right, k - j)
        return left, right
