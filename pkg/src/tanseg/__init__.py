"""Exact tools for principal minors, exclusive rank and equations of the tangential variety of P^1 x ... x P^1."""

__version__ = "0.1.0"
