"""Symmetric means, Mahler measures and equilibrium-measure diagnostics for
conjugate algebraic numbers, plus a small-degree search for totally positive
algebraic integers of small trace."""

__version__ = "0.1.0"
