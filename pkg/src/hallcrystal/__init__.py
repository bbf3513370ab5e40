"""Exact Hall-algebra, canonical-basis, and crystal-graph computations for
quivers over finite fields."""

__version__ = "0.1.0"
