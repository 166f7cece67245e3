"""Finite-group lattice models, finite gauge theory and their dualities."""

__version__ = "0.1.0"
