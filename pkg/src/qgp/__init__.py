"""Gorenstein-projective quiver representations over finite quasi-Frobenius rings."""

__version__ = "0.1.0"
