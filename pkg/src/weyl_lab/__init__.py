"""Weyl sums numerical laboratory."""

__version__ = "1.0"
