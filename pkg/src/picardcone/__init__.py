"""Exact computations on the Picard lattice of blowups of the plane."""

__version__ = "0.1.0"
