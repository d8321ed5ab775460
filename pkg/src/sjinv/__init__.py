"""Desk-scale strong jump inversion constructions."""

__version__ = "0.1.0"
