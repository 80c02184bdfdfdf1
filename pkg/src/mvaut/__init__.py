"""Exact computations on unsquared measurement varieties and their automorphisms."""

__version__ = "0.1.0"
