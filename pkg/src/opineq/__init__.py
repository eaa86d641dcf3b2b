"""Numerical laboratory for operator Popoviciu, Jensen, Hlawka and Bohr inequalities."""

__version__ = "0.1.0"
