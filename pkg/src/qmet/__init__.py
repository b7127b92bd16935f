"""Exact quasi-metric constructions on finite spaces."""

from .ext import INF, dreal, ext, fmt
from .space import QSpace, from_digraph, from_poset, validate_space

__all__ = ["INF", "QSpace", "dreal", "ext", "fmt", "from_digraph", "from_poset", "validate_space"]
