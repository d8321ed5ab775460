from .core import (BuildResult, InsufficientPrefix, Injury, ReqKind, Requirement, TraceEvent,
                   verify_prefix_isomorphism)
from .boolean import BABuilder, LeafAlgebraCopy, ba_build_labeled_copy, verify_ba_prefix
from .buffer import (NOT_YET, BufferPair, BufferPairBuilder, ChainCopy, find_buffer_pair,
                     ordering_build_labeled_copy)
from .priority import ConstructionState, PriorityEngine, engine_step, run_engine
from .trees import TreeBuilder, TreeCopy, tree_build_labeled_copy, verify_tree_result

__all__ = [
    "BABuilder", "LeafAlgebraCopy", "ba_build_labeled_copy", "verify_ba_prefix",
    "NOT_YET", "BufferPair", "BufferPairBuilder", "ChainCopy", "find_buffer_pair",
    "ordering_build_labeled_copy",
    "TreeBuilder", "TreeCopy", "tree_build_labeled_copy", "verify_tree_result",
    "BuildResult", "ConstructionState", "InsufficientPrefix", "Injury", "ReqKind",
    "Requirement", "PriorityEngine", "TraceEvent", "engine_step", "run_engine",
    "verify_prefix_isomorphism",
]
