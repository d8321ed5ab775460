from .base import (ClassTag, EmptyPresentation, FixtureIncoherent, Presentation, Schedule,
                   UnknownElement, diagram_fragment)
from .boolean import (BooleanAlgebraPresentation, ba_atom_guess, ba_element_size,
                      exact_atom_oracle)
from .equivalence import (CharacterApprox, EquivalencePresentation, build_equivalence_copy,
                          character_realized)
from .order import OrderPresentation, RevealingSizes, block_of, block_order, chain, interval_size
from .tree import RECURRENT_RULES, SIMPLE_RULES, TreePresentation, node_guess

__all__ = [
    "BooleanAlgebraPresentation", "CharacterApprox", "ClassTag", "EmptyPresentation",
    "EquivalencePresentation", "FixtureIncoherent", "OrderPresentation", "RECURRENT_RULES",
    "Presentation", "SIMPLE_RULES", "Schedule", "TreePresentation", "UnknownElement",
    "ba_atom_guess", "ba_element_size", "RevealingSizes", "block_of", "block_order", "build_equivalence_copy", "chain", "character_realized",
    "diagram_fragment", "exact_atom_oracle", "interval_size", "node_guess",
]
