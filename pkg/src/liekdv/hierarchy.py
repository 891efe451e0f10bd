"""Recursion-operator flows, assembly of the higher-dimensional equation,
and the potential transformation u = q_x."""

from __future__ import annotations

from fractions import Fraction

from .expr import (Expr, ExprError, IntNode, Rat, add, as_terms, atoms,
                   integral, mul, pow_, rat)
from .jets import Equation, jet_partial, substitute, total_derivative
from .parsing import Context
from . import refdata


class AssemblyError(ExprError):
    pass


class PotentialTransformError(ExprError):
    pass


class RecursionOperator:
    """Ordered term list; each term is (scalar, pre-multiplier in u and its
    jets, differential part: nonnegative power of D_x or the formal inverse).
    """

    def __init__(self, ctx: Context, dep: str, terms):
        self.ctx = ctx
        self.dep = dep
        self.terms = list(terms)  # (Fraction, Expr, int | "inv")

    def apply(self, f: Expr) -> Expr:
        out = []
        for scalar, pre, diff in self.terms:
            if diff == "inv":
                piece = integral(f, "x")
            else:
                piece = f
                for _ in range(diff):
                    piece = total_derivative(piece, "x")
            out.append(mul(rat(scalar), pre, piece))
        return add(*out)


def kdv_recursion_operator(ctx: Context | None = None) -> RecursionOperator:
    """(1/5) D_x^2 - (16/15) u + (2/3) u_x d_x^{-1}."""
    ctx = ctx or refdata.BASE
    u = ctx.jet("u")
    ux = ctx.jet("u", x=1)
    return RecursionOperator(ctx, "u", [
        (Fraction(1, 5), rat(1), 2),
        (Fraction(-16, 15), u, 0),
        (Fraction(2, 3), ux, "inv"),
    ])


def apply_recursion(op: RecursionOperator, f: Expr) -> Expr:
    return op.apply(f)


def flow(op: RecursionOperator, direction: str) -> Expr:
    """u_t - R(u_s) as an expression required to vanish."""
    ctx = op.ctx
    ut = ctx.jet("u", t=1)
    us = ctx.jet("u", **{direction: 1})
    return add(ut, mul(rat(-1), op.apply(us)))


def assemble_new_kdv(ctx: Context | None = None) -> tuple[Expr, Expr | None]:
    """Combine the three recursion flows into the (3+1)-dimensional equation.

    Returns (lhs in u-form with formal antiderivatives, scaling discrepancy
    against the reference transcription or None when they agree exactly).
    Raises AssemblyError when the cross-derivative identity fails to cancel
    the quadratic terms as expected.
    """
    ctx = ctx or refdata.BASE
    op = kdv_recursion_operator(ctx)
    fx, fy, fz = flow(op, "x"), flow(op, "y"), flow(op, "z")
    part_x = total_derivative(total_derivative(fx, "y"), "z")
    part_y = mul(rat(3), total_derivative(total_derivative(fy, "x"), "z"))
    part_z = mul(rat(3), total_derivative(total_derivative(fz, "x"), "y"))
    lhs = add(part_y, part_z, mul(rat(-1), part_x))
    reference = refdata.new_kdv_u_reference()
    if lhs == reference:
        return lhs, None
    # a pure scaling mismatch is reported, anything else is an assembly bug
    ratio = _leading_ratio(lhs, reference)
    if ratio is not None and mul(rat(ratio), reference) == lhs:
        return lhs, rat(ratio)
    raise AssemblyError("assembled flow combination does not match the "
                        "reference equation")


def _leading_ratio(a: Expr, b: Expr):
    ta, tb = as_terms(a), as_terms(b)
    if not ta or not tb:
        return None
    fa = {f: c for c, f in ta}
    fb = {f: c for c, f in tb}
    common = set(fa) & set(fb)
    if not common:
        return None
    f = sorted(common, key=lambda fs: tuple(x.sort_key() for x in fs))[0]
    return fa[f] / fb[f]


def potential_transform(lhs_u: Expr, ctx: Context | None = None) -> Equation:
    """Substitute u = q_x; all formal antiderivatives must cancel exactly.

    The result is normalized so the leading jet q_xxxxyz has coefficient -1.
    """
    ctx = ctx or refdata.BASE
    qx = ctx.jet("q", x=1)
    lhs_q = substitute(lhs_u, ctx.jet("u"), qx)
    leftovers = atoms(lhs_q, IntNode)
    if leftovers:
        bad = sorted(str(n) for n in leftovers)
        raise PotentialTransformError(
            "antiderivative does not cancel under u = q_x: " + ", ".join(bad))
    leading = ctx.jet("q", x=4, y=1, z=1)
    coeff = jet_partial(lhs_q, leading)
    if not isinstance(coeff, Rat) or coeff.value == 0:
        raise PotentialTransformError("transformed equation is not monic in "
                                      "its leading jet")
    lhs_q = mul(pow_(mul(rat(-1), coeff), -1), lhs_q)
    return Equation(lhs_q, "q", leading)


def new_kdv_equation(ctx: Context | None = None) -> Equation:
    """The q-form equation, assembled from scratch."""
    ctx = ctx or refdata.BASE
    lhs_u, _ = assemble_new_kdv(ctx)
    return potential_transform(lhs_u, ctx)
