"""Exact Poincare series of divisors on finite graphs and chains of loops."""

__version__ = "0.1.0"
