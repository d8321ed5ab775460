"""Countable Boolean algebras: atomless dyadic part plus finitely many atoms.

An element is a pair ``(mask, atoms)``. ``mask`` is a finite union of dyadic
subintervals of [0, 1), written as a bitmask over ``2**RES`` leaves;
``atoms`` is a bitmask over the ``m`` extra atoms. An element is infinite iff
its mask is non-zero; otherwise its size is the number of atoms in it.

Elements are named by naturals in a fixed computable order: 0 and 1 first,
then by dyadic depth, mask and atom set. Names are computed on demand, so the
presentation is infinite, while a :class:`Schedule` says when each name shows
up.
"""
from __future__ import annotations

from functools import lru_cache
from typing import FrozenSet, Optional

from ..approx import ApproxOracle
from ..sizes import INF, Size
from .base import ClassTag, Fact, Presentation, Schedule

RES = 5  # leaves = 32
MAX_DEPTH = 4  # names stay arithmetic up to 2**16 masks per depth
LEAVES = 1 << RES
FULL_MASK = (1 << LEAVES) - 1


def _lift(mask_k: int, k: int) -> int:
    """Bitmask over 2**k intervals -> bitmask over the 2**RES leaves."""
    width = 1 << (RES - k)
    block = (1 << width) - 1
    out = 0
    for i in range(1 << k):
        if mask_k >> i & 1:
            out |= block << (i * width)
    return out


def _depth_of(mask: int) -> int:
    for k in range(RES + 1):
        width = 1 << (RES - k)
        block = (1 << width) - 1
        ok = True
        for i in range(1 << k):
            chunk = (mask >> (i * width)) & block
            if chunk not in (0, block):
                ok = False
                break
        if ok:
            return k
    raise ValueError("mask deeper than RES")


def _project(mask: int, k: int) -> int:
    width = 1 << (RES - k)
    out = 0
    for i in range(1 << k):
        if mask >> (i * width) & 1:
            out |= 1 << i
    return out


@lru_cache(maxsize=None)
def _new_masks(k: int) -> tuple[int, ...]:
    """Lifted masks of exact depth ``k``, ordered by their depth-``k`` bitmask."""
    if k == 0:
        return (0, FULL_MASK)
    half = 1 << (k - 1)
    out = []
    for mk in range(1 << (1 << k)):
        # exact depth k: some sibling pair of intervals is split
        if any((mk >> (2 * i) & 1) != (mk >> (2 * i + 1) & 1) for i in range(half)):
            out.append(_lift(mk, k))
    return tuple(out)


@lru_cache(maxsize=None)
def _mask_index(k: int) -> dict:
    return {m: i for i, m in enumerate(_new_masks(k))}


class BooleanAlgebraPresentation(Presentation):
    class_tag = ClassTag.BOOLEAN_ALGEBRA

    def __init__(self, n_atoms: int = 0, schedule: Optional[Schedule] = None,
                 atom_oracle: Optional[ApproxOracle] = None, max_depth: int = 3):
        super().__init__(schedule or Schedule(pace=1))
        if max_depth > MAX_DEPTH:
            raise ValueError(f"max_depth is at most {MAX_DEPTH}")
        self.m = n_atoms
        self.atom_oracle = atom_oracle
        self.max_depth = max_depth
        self._one_raw = (2 << n_atoms) - 1
        self._size = sum(len(_new_masks(k)) for k in range(max_depth + 1)) << n_atoms
        if self.schedule.limit is None or self.schedule.limit > self._size:
            self.schedule.limit = self._size

    # -- naming ------------------------------------------------------------
    # Raw positions list (depth, mask, atoms) in order; raw 0 is zero and
    # raw 2**(m+1) - 1 is one, both of which are hoisted to names 0 and 1.
    def _raw_of(self, v: tuple[int, int]) -> int:
        mask, at = v
        k = _depth_of(mask)
        base = sum(len(_new_masks(j)) for j in range(k)) << self.m
        return base + (_mask_index(k)[mask] << self.m) + at

    def _value_of_raw(self, raw: int) -> tuple[int, int]:
        for k in range(self.max_depth + 1):
            width = len(_new_masks(k)) << self.m
            if raw < width:
                return _new_masks(k)[raw >> self.m], raw & ((1 << self.m) - 1)
            raw -= width
        raise IndexError("name beyond this algebra")

    def value(self, i: int) -> tuple[int, int]:
        if i < 0 or i >= self._size:
            raise IndexError(f"no element named {i}")
        if i == 0:
            return self.zero
        if i == 1:
            return self.one
        raw = i - 1
        if raw >= self._one_raw:
            raw += 1
        return self._value_of_raw(raw)

    def name_of(self, v: tuple[int, int]) -> int:
        if v == self.zero:
            return 0
        if v == self.one:
            return 1
        depth = _depth_of(v[0])
        if depth > self.max_depth or v[1] >> self.m:
            raise KeyError(f"{v} is outside this algebra")
        raw = self._raw_of(v)
        return raw if raw > self._one_raw else raw + 1

    # -- operations on values -----------------------------------------------
    @property
    def zero(self) -> tuple[int, int]:
        return (0, 0)

    @property
    def one(self) -> tuple[int, int]:
        return (FULL_MASK, (1 << self.m) - 1)

    def meet(self, x, y):
        return (x[0] & y[0], x[1] & y[1])

    def join(self, x, y):
        return (x[0] | y[0], x[1] | y[1])

    def comp(self, x):
        one = self.one
        return (one[0] & ~x[0], one[1] & ~x[1])

    def diff(self, x, y):
        return self.meet(x, self.comp(y))

    def leq(self, x, y) -> bool:
        return self.meet(x, y) == x

    def true_size(self, v) -> Size:
        if v[0]:
            return INF
        return bin(v[1]).count("1")

    def is_atom_value(self, v) -> bool:
        return v[0] == 0 and bin(v[1]).count("1") == 1

    def atom_value(self, j: int) -> tuple[int, int]:
        return (0, 1 << j)

    def halves(self, v) -> Optional[tuple[tuple[int, int], tuple[int, int]]]:
        """Split the dyadic part of ``v`` into two infinite pieces, one level deeper."""
        mask = v[0]
        if not mask:
            return None
        k = min(_depth_of(mask) + 1, RES)
        proj = _project(mask, k)
        bits = [i for i in range(1 << k) if proj >> i & 1]
        if len(bits) < 2:
            return None
        left = 0
        for i in bits[: len(bits) // 2]:
            left |= 1 << i
        lm = _lift(left, k)
        return (lm, v[1]), (mask & ~lm, 0)

    # -- presentation ---------------------------------------------------------
    def facts_at(self, s: int) -> FrozenSet[Fact]:
        n = self.count_at(s)
        vals = [self.value(i) for i in range(n)]
        facts = set()
        for i, x in enumerate(vals):
            if x == self.zero:
                facts.add(("zero", i))
            if x == self.one:
                facts.add(("one", i))
            for j, y in enumerate(vals):
                if self.leq(x, y):
                    facts.add(("le", i, j))
                if y == self.comp(x):
                    facts.add(("comp", i, j))
        return frozenset(facts)

    def enumerated_values(self, s: int) -> list[tuple[int, int]]:
        return [self.value(i) for i in range(self.count_at(s))]


def exact_atom_oracle(p: BooleanAlgebraPresentation,
                      wrong_until: Optional[dict[int, int]] = None) -> ApproxOracle:
    """Delta^0_2 atom relation: exact, except ``wrong_until[name] = t`` flips the answer before stage t."""
    wrong_until = dict(wrong_until or {})

    def answer(q, s):
        truth = 1 if p.is_atom_value(p.value(q)) else 0
        if q in wrong_until and s < wrong_until[q]:
            return 1 - truth
        return truth

    return ApproxOracle(answer, "atom relation")


def ba_atom_guess(p: BooleanAlgebraPresentation, a: int, s: int) -> bool:
    """True for "Atom". With an atom oracle, its stage-s answer; otherwise
    NonAtom as soon as a witness 0 < b < a has been enumerated."""
    p.require(s, a)
    v = p.value(a)
    if v == p.zero:
        return False
    if p.atom_oracle is not None:
        return bool(p.atom_oracle(a, s))
    for b in range(p.count_at(s)):
        w = p.value(b)
        if w != p.zero and w != v and p.leq(w, v):
            return False
    return True


def ba_element_size(p: BooleanAlgebraPresentation, a: int, s: int) -> Size:
    """``n`` if ``a`` is currently seen as the join of ``n`` atom guesses, else INF."""
    p.require(s, a)
    v = p.value(a)
    if v == p.zero:
        return 0
    below = []
    for b in range(p.count_at(s)):
        w = p.value(b)
        if w != p.zero and p.leq(w, v) and ba_atom_guess(p, b, s):
            below.append(w)
    acc = p.zero
    for w in below:
        acc = p.join(acc, w)
    if acc == v:
        return len(below)
    return INF


def atoms_seen_below(p: BooleanAlgebraPresentation, v, s: int) -> list[tuple[int, int]]:
    """Enumerated elements below value ``v`` that the stage-s guess calls atoms."""
    out = []
    for b in range(p.count_at(s)):
        w = p.value(b)
        if w != p.zero and p.leq(w, v) and ba_atom_guess(p, b, s):
            out.append(w)
    return out


def value_size_guess(p: BooleanAlgebraPresentation, v, s: int) -> Size:
    """Stage-s size guess for an arbitrary value (not necessarily enumerated)."""
    if v == p.zero:
        return 0
    below = atoms_seen_below(p, v, s)
    acc = p.zero
    for w in below:
        acc = p.join(acc, w)
    return len(below) if acc == v else INF
