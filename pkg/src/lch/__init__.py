"""Chekanov-Eliashberg and composable LSFT algebra computations for
Legendrian knots presented by plat-position fronts."""

__version__ = "0.1.0"
