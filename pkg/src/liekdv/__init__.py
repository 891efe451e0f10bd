"""Exact symbolic engine for the symmetry analysis of a (3+1)-dimensional
KdV-type equation: construction from a recursion operator, Lie point
symmetries and their algebra, one-dimensional optimal system, similarity
reductions, closed-form solution verification, and conserved vectors."""

from .expr import (Expr, add, canonicalize, fun, integral, jet, mul,
                   numeric_eval, pow_, probable_equal, rat, sym, to_text)
from .jets import (Equation, Generator, commutator, euler_operator,
                   onshell_reduce, prolong_generator, substitute,
                   total_derivative)
from .parsing import Context, parse

__all__ = [
    "Context", "Equation", "Expr", "Generator", "add", "canonicalize",
    "commutator", "euler_operator", "fun", "integral", "jet", "mul",
    "numeric_eval", "onshell_reduce", "parse", "pow_", "probable_equal",
    "prolong_generator", "rat", "substitute", "sym", "to_text",
    "total_derivative",
]
