"""Exact-arithmetic verification of the twisted denominator identities of
the fake monster superalgebra."""

__version__ = "0.1.0"
