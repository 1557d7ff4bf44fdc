"""Finite-dimensional workbench for operational theories and the GNS construction
of their transformation algebra from a symmetric faithful bipartite state."""

__version__ = "0.1.0"
