"""Computable enumerations R of B1-types and stage-wise R-labelings."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Union

from ..presentations.base import ClassTag, Presentation
from ..presentations.boolean import BooleanAlgebraPresentation, value_size_guess
from ..presentations.order import OrderPresentation
from ..presentations.tree import TreePresentation, node_guess
from ..sizes import INF, Size
from .boolean import BAType, decode_ba, encode_ba
from .common import DecodeError
from .order import OrderType, decode_order, encode_order
from .tree import TreeType, decode_tree, encode_tree, make_tree_type, tree_types_upto

B1TypeCode = Union[OrderType, BAType, TreeType]


@dataclass(frozen=True)
class TypeEnumeration:
    """R as a decidable set of pairs ``(i, phi)``: ``phi`` is in ``R_i`` iff
    the decoded type ``i`` satisfies it."""

    class_tag: ClassTag
    decode: Callable[[int], B1TypeCode]
    encode: Callable[[B1TypeCode], int]
    # for sparse codings: bound -> finite family of codes, growing with bound
    family: Optional[Callable[[int], Iterable[B1TypeCode]]] = None

    def membership(self, i: int, phi: tuple) -> bool:
        return self.decode(i).satisfies(phi)

    def listing(self, count: int) -> list[tuple[int, B1TypeCode]]:
        """The first ``count`` valid indices with their codes.

        With a ``family`` the listing is the ``count`` least indices of the
        smallest family that has that many members: valid indices are too
        sparse to scan for.
        """
        if self.family is not None:
            bound = 1
            while True:
                codes = sorted({self.encode(t): t for t in self.family(bound)}.items())
                if len(codes) >= count or bound >= 4:
                    return codes[:count]
                bound += 1
        out = []
        i = 0
        while len(out) < count:
            try:
                out.append((i, self.decode(i)))
            except DecodeError:
                pass
            i += 1
        return out


ORDER_R = TypeEnumeration(ClassTag.LINEAR_ORDER, decode_order, encode_order)
BA_R = TypeEnumeration(ClassTag.BOOLEAN_ALGEBRA, decode_ba, encode_ba)
TREE_R = TypeEnumeration(ClassTag.TREE, decode_tree, encode_tree, tree_types_upto)

_BY_TAG = {e.class_tag: e for e in (ORDER_R, BA_R, TREE_R)}
_BY_CODE = {OrderType: ORDER_R, BAType: BA_R, TreeType: TREE_R}


def enumeration_for(tag: ClassTag) -> TypeEnumeration:
    try:
        return _BY_TAG[ClassTag(tag)]
    except (KeyError, ValueError):
        raise DecodeError(f"no type enumeration for {tag!r}") from None


def encode_type(t: B1TypeCode) -> int:
    try:
        return _BY_CODE[type(t)].encode(t)
    except KeyError:
        raise DecodeError(f"not a type code: {t!r}") from None


def decode_type(i: int, tag: ClassTag) -> B1TypeCode:
    return enumeration_for(tag).decode(i)


def type_membership(R: TypeEnumeration, i: int, phi: tuple) -> bool:
    return R.membership(i, phi)


# -- labelings ------------------------------------------------------------------

SizeOracle = Callable[[Optional[int], Optional[int], int], Size]


def order_type_at(p: OrderPresentation, tup: Sequence[int], s: int,
                  bound: Optional[int] = None,
                  sizes: Optional[SizeOracle] = None) -> OrderType:
    p.require(s, *tup)
    if len(set(tup)) != len(tup):
        raise ValueError("ordering codes are for tuples of distinct elements")
    order = sorted(range(len(tup)), key=lambda i: p.rank[tup[i]])
    ranks = [0] * len(tup)
    for r, i in enumerate(order):
        ranks[i] = r
    ends: list[Optional[int]] = [None] + [tup[i] for i in order] + [None]
    out = []
    for a, b in zip(ends, ends[1:]):
        if sizes is not None:
            out.append(sizes(a, b, s))
            continue
        if a is None and b is None:
            c = p.count_at(s)
        elif a is None:
            c = p.count_left(b, s)
        elif b is None:
            c = p.count_right(a, s)
        else:
            c = p.count_between(a, b, s)
        out.append(INF if bound is not None and c > bound else c)
    return OrderType(tuple(ranks), tuple(out))


def ba_type_at(p: BooleanAlgebraPresentation, tup: Sequence[int], s: int) -> BAType:
    p.require(s, *tup)
    vals = [p.value(a) for a in tup]
    sizes = []
    for e in range(1 << len(tup)):
        cell = p.one
        for i, v in enumerate(vals):
            cell = p.meet(cell, v if e >> i & 1 else p.comp(v))
        sizes.append(value_size_guess(p, cell, s))
    return BAType(len(tup), tuple(sizes))


def tree_type_at(p: TreePresentation, tup: Sequence[int], s: int) -> TreeType:
    p.require(s, *tup)
    pred_of = {}
    for x in tup:
        while x not in pred_of:
            pred_of[x] = p.pred(x)
            x = p.pred(x)
    return make_tree_type(pred_of, list(tup), lambda y: node_guess(p, y, s))


def type_at(p: Presentation, tup: Sequence[int], s: int, **kw) -> B1TypeCode:
    if isinstance(p, OrderPresentation):
        return order_type_at(p, tup, s, **kw)
    if isinstance(p, BooleanAlgebraPresentation):
        return ba_type_at(p, tup, s)
    if isinstance(p, TreePresentation):
        return tree_type_at(p, tup, s)
    raise DecodeError(f"no B1-type codes for {p.class_tag}")


def label_tuple(p: Presentation, tup: Sequence[int], s: int, **kw) -> int:
    """R-index of the stage-``s`` guess at the B1-type of ``tup``."""
    return encode_type(type_at(p, tup, s, **kw))


@dataclass(frozen=True)
class RLabeling:
    label: Callable[[tuple, int], int]
    R: TypeEnumeration
    # optional shortcut: the decoded type itself, skipping encode/decode
    observe: Optional[Callable[[tuple, int], B1TypeCode]] = None

    def __call__(self, tup: Sequence[int], s: int) -> int:
        return self.label(tuple(tup), s)

    def type_of(self, tup: Sequence[int], s: int) -> B1TypeCode:
        if self.observe is not None:
            return self.observe(tuple(tup), s)
        return self.R.decode(self(tup, s))

    @classmethod
    def observing(cls, p: Presentation, **kw) -> "RLabeling":
        R = enumeration_for(p.class_tag)
        return cls(lambda tup, s: label_tuple(p, tup, s, **kw), R,
                   lambda tup, s: type_at(p, tup, s, **kw))
