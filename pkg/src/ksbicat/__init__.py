"""Krull-Schmidt decompositions for finite-dimensional algebras and bimodules."""

__version__ = "0.1.0"
