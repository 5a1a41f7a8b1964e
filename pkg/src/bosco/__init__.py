"""Spanning-tree cohomology of checkerboard graphs over char-2 function fields."""

__version__ = "0.1.0"
