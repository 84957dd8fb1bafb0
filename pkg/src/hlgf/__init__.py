"""Lattice gauge fields and their higher analogues on finite simplicial complexes."""

__version__ = "0.1.0"
