"""Exact computations for the noncommutative calculus on Hochschild (co)chains."""

__version__ = "0.1.0"
