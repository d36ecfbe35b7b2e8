"""Exact traces and characteristic polynomials of uniform hypergraph adjacency tensors."""

__version__ = "0.1.0"
