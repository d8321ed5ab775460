from .boolean import BAType, decode_ba, encode_ba, size_ge, var_cells
from .common import DecodeError, PredicateViolation, UnsupportedFormula, neg
from .enumeration import (BA_R, ORDER_R, TREE_R, B1TypeCode, RLabeling, TypeEnumeration,
                          decode_type, encode_type, enumeration_for, label_tuple,
                          type_at, type_membership)
from .order import OrderType, decode_order, encode_order, gap
from .theory_tree import TheoryTypeTree, theory_tree_step
from .tree import TreeType, decode_tree, encode_tree

__all__ = [
    "BAType", "BA_R", "B1TypeCode", "DecodeError", "ORDER_R", "OrderType",
    "PredicateViolation", "RLabeling", "TREE_R", "TheoryTypeTree", "TreeType",
    "TypeEnumeration", "UnsupportedFormula", "decode_ba", "decode_order", "decode_tree",
    "decode_type", "encode_ba", "encode_order", "encode_tree", "encode_type",
    "enumeration_for", "gap", "label_tuple", "neg", "size_ge", "theory_tree_step",
    "type_at", "type_membership", "var_cells",
]
