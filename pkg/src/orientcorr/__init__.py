"""Exact cluster laws and correlation checks for random orientations and
percolation on small finite graphs."""

__version__ = "0.1.0"
