"""Exact computations with vertex Lie algebras, their enveloping vertex
algebras, vertex Poisson algebras, good filtrations and h-deformations."""

__version__ = "0.1.0"
