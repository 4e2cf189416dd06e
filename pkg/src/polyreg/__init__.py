"""Exact decision procedures for polynomials, weighted automata and residual transducers."""

from .poly import Polynomial, Monomial, BinomialTerm
from .parse import ParseError, parse_polynomial

__all__ = ["Polynomial", "Monomial", "BinomialTerm", "ParseError", "parse_polynomial"]
__version__ = "0.1.0"
