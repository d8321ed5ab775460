"""Shared pieces: errors and Boolean combinations of class formulas."""
from __future__ import annotations

from typing import Callable


class DecodeError(ValueError):
    """Malformed type code or index outside the enumeration's range."""


class UnsupportedFormula(ValueError):
    pass


class PredicateViolation(RuntimeError):
    """A consistency predicate left some node without a consistent extension."""


def holds(phi: tuple, atomic: Callable[[tuple], bool]) -> bool:
    """Evaluate a Boolean combination (``and``/``or``/``not``/``true``) of atoms."""
    if not isinstance(phi, tuple) or not phi:
        raise UnsupportedFormula(f"not a formula: {phi!r}")
    head = phi[0]
    if head == "true":
        return True
    if head == "false":
        return False
    if head == "not":
        return not holds(phi[1], atomic)
    if head == "and":
        return all(holds(f, atomic) for f in phi[1:])
    if head == "or":
        return any(holds(f, atomic) for f in phi[1:])
    return atomic(phi)


def neg(phi: tuple) -> tuple:
    if phi[0] == "not":
        return phi[1]
    return ("not", phi)


def atoms_of(phi: tuple) -> list[tuple]:
    head = phi[0]
    if head in ("true", "false"):
        return []
    if head == "not":
        return atoms_of(phi[1])
    if head in ("and", "or"):
        return [a for f in phi[1:] for a in atoms_of(f)]
    return [phi]
