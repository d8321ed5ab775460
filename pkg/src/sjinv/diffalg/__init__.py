"""Exact differential algebra: differential polynomials over presented
fields, formal names for towers of extensions, and the enumeration of types."""
from .algebraic import LinearTopReducer, ModularContext
from .fields import (QQ, UNDEFINED, Elem, FieldPresentation, OracleInconsistent, Rationals,
                     evaluate_name, extend_field, materialize_poly)
from .names import (FormalName, FormalPoly, MalformedName, enumerate_formal_tuples, formal_polys,
                    names_of_size, polys_of_size, rational_size, rationals_of_size, var_of)
from .poly import DifferentialPolynomial, Rank, differentiate, divide_exact, rank_of
from .types import (DECIDERS, NONE_FOUND, AlgebraicDecider, Stalled, StallingDecider,
                    TypeOracle, TypeRecord, Verdict, enumerate_type, enumerate_types_n,
                    lower_order_stream, probe_queries, query_key, reducibility_witness)

__all__ = [
    "LinearTopReducer", "ModularContext",
    "QQ", "UNDEFINED", "Elem", "FieldPresentation", "OracleInconsistent", "Rationals",
    "evaluate_name", "extend_field", "materialize_poly",
    "FormalName", "FormalPoly", "MalformedName", "enumerate_formal_tuples", "formal_polys",
    "names_of_size", "polys_of_size", "rational_size", "rationals_of_size", "var_of",
    "DifferentialPolynomial", "Rank", "differentiate", "divide_exact", "rank_of",
    "DECIDERS", "NONE_FOUND", "AlgebraicDecider", "Stalled", "StallingDecider", "TypeOracle",
    "TypeRecord", "Verdict", "enumerate_type", "enumerate_types_n", "lower_order_stream",
    "probe_queries", "query_key", "reducibility_witness",
]
