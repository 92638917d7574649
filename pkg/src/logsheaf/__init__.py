"""Combinatorial and chart-level algebra of logarithmic modifications."""

__version__ = "0.1.0"
