"""Formal Lagrangian, adjoint equation, conserved-vector generation via the
characteristic formula, and on-shell divergence verification.

The conserved-vector formula is the full order-6 alternating expansion

    T^i = xi^i L + sum_K D_K(W) * C_{i,K},
    C_{i,K} = sum_M (-1)^|M| w(i,K,M) D_M(dL/dq_{i+K+M}),

with the multiplicity weight w(i,K,M) = (r!/K!)(s!/M!)((i+K+M)!/(1+r+s)!)
translating ordered-index sums into multi-index sums (r = |K|, s = |M|,
multi-index factorials componentwise)."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial

from .expr import (Expr, Sym, ZERO, add, atoms, jets_of, mul,
                   numeric_eval, rat)
from .jets import (Equation, Generator, ReductionError, euler_operator,
                   jet_partial, onshell_reduce, total_derivative)
from .parsing import Context
from . import refdata


def formal_lagrangian(eq: Equation, ctx: Context | None = None) -> Expr:
    ctx = ctx or refdata.BASE
    return mul(ctx.jet("v"), eq.lhs)


def adjoint_equation(eq: Equation, ctx: Context | None = None) -> Equation:
    """Variational derivative of v * lhs with respect to the dependent."""
    ctx = ctx or refdata.BASE
    lhs = euler_operator(formal_lagrangian(eq, ctx), eq.dep)
    leading = ctx.jet("v", x=4, y=1, z=1)
    return Equation(lhs, "v", leading)


class ConservedVector:
    """Four labeled components over the jets of q and v."""

    def __init__(self, components: dict, name: str = ""):
        self.components = dict(components)
        self.name = name

    def __getitem__(self, k: str) -> Expr:
        return self.components[k]

    def items(self):
        return self.components.items()

    def combine(self, other: "ConservedVector", a, b) -> "ConservedVector":
        return ConservedVector(
            {k: add(mul(a, v), mul(b, other.components[k]))
             for k, v in self.components.items()})

    def is_zero(self) -> bool:
        return all(v.is_zero for v in self.components.values())


def _mfact(counts) -> int:
    out = 1
    for c in counts:
        out *= factorial(c)
    return out


def _zero_index(n):
    return (0,) * n


def _sub_indices(bound):
    """All multi-indices componentwise <= bound."""
    ranges = [range(b + 1) for b in bound]
    return itertools.product(*ranges)


def conserved_vector(g: Generator, eq: Equation,
                     ctx: Context | None = None) -> ConservedVector:
    ctx = ctx or refdata.BASE
    variables = ctx.independents
    nvar = len(variables)
    L = formal_lagrangian(eq, ctx)
    W = g.characteristic()
    # partial of L against every q-jet present
    partials = {}
    for j in jets_of(L, eq.dep):
        if j.order > 6:
            raise ReductionError("Lagrangian carries jets above order 6")
        p = jet_partial(L, j)
        if not p.is_zero:
            partials[j.counts] = p

    dkw_cache: dict = {_zero_index(nvar): W}

    def dkw(K):
        if K in dkw_cache:
            return dkw_cache[K]
        # walk down one derivative
        i = next(idx for idx, c in enumerate(K) if c > 0)
        prev = list(K)
        prev[i] -= 1
        base = dkw(tuple(prev))
        out = total_derivative(base, variables[i])
        dkw_cache[K] = out
        return out

    dm_cache: dict = {}

    def dm_of_partial(J, M):
        key = (J, M)
        if key in dm_cache:
            return dm_cache[key]
        if all(c == 0 for c in M):
            out = partials[J]
        else:
            i = next(idx for idx, c in enumerate(M) if c > 0)
            prev = list(M)
            prev[i] -= 1
            out = total_derivative(dm_of_partial(J, tuple(prev)), variables[i])
        dm_cache[key] = out
        return out

    components = {}
    for ivar, vname in enumerate(variables):
        terms = []
        if not g.xi[vname].is_zero:
            terms.append(mul(g.xi[vname], L))
        # gather K candidates: K <= J - e_i for some J with J_i >= 1
        kset = set()
        for J in partials:
            if J[ivar] < 1:
                continue
            bound = list(J)
            bound[ivar] -= 1
            kset.update(_sub_indices(tuple(bound)))
        for K in sorted(kset):
            r = sum(K)
            coeff_terms = []
            for J in partials:
                if J[ivar] < 1:
                    continue
                rem = [J[a] - K[a] - (1 if a == ivar else 0)
                       for a in range(nvar)]
                if any(c < 0 for c in rem):
                    continue
                M = tuple(rem)
                s = sum(M)
                sign = -1 if s % 2 else 1
                w = (Fraction(factorial(r), _mfact(K))
                     * Fraction(factorial(s), _mfact(M))
                     * Fraction(_mfact(J), factorial(1 + r + s)))
                coeff_terms.append(mul(rat(sign * w), dm_of_partial(J, M)))
            if coeff_terms:
                terms.append(mul(dkw(K), add(*coeff_terms)))
        components[vname] = add(*terms)
    return ConservedVector(components, name=g.name)


def divergence(T: ConservedVector, ctx: Context | None = None) -> Expr:
    ctx = ctx or refdata.BASE
    return add(*[total_derivative(T[v], v) for v in ctx.independents])


def onshell_divergence_check(T: ConservedVector, eqs,
                             ctx: Context | None = None) -> dict:
    """Reduce the 4-divergence modulo the equations; residual 0 on success.

    On failure the surviving monomials are returned."""
    ctx = ctx or refdata.BASE
    div = divergence(T, ctx)
    residual = onshell_reduce(div, eqs)
    report = {"residual": residual, "ok": residual.is_zero}
    if not residual.is_zero:
        from .expr import as_terms, from_terms
        report["surviving"] = [from_terms([t]) for t in as_terms(residual)[:20]]
    return report


def onshell_numeric_check(T: ConservedVector, eqs, rng, npoints: int = 40,
                          tol: float = 1e-8, ctx: Context | None = None) -> dict:
    """Sample the constraint manifold: free jets uniform in [-1, 1], leading
    jets (and their derivative descendants) solved by forward substitution in
    increasing order, then evaluate the divergence."""
    ctx = ctx or refdata.BASE
    div = divergence(T, ctx)
    alljets = sorted(jets_of(div), key=lambda j: (j.order, j.sort_key()))
    solved_exprs = {}
    leadings = {eq.leading: eq for eq in eqs}
    for j in alljets:
        for lead, eq in leadings.items():
            if j.dominates(lead):
                e = eq.solved
                for a, cj, cl in zip(j.args, j.counts, lead.counts):
                    for _ in range(cj - cl):
                        e = total_derivative(e, a)
                solved_exprs[j] = e
                break
    free = [j for j in alljets if j not in solved_exprs]
    symbols = sorted(atoms(div, Sym), key=Expr.sort_key)
    worst = 0.0
    rows = []
    for _ in range(npoints):
        env = {}
        for s in symbols:
            env[s] = complex(rng.uniform(-1, 1))
        for j in free:
            env[j] = complex(rng.uniform(-1, 1))
        for j in sorted(solved_exprs, key=lambda j: j.order):
            env[j] = numeric_eval(solved_exprs[j], env)
        val = numeric_eval(div, env)
        scale = max(1.0, _term_scale(div, env))
        rel = abs(val) / scale
        worst = max(worst, rel)
        rows.append(rel)
    return {"worst": worst, "ok": worst < tol, "relative_residuals": rows}


def _term_scale(e: Expr, env) -> float:
    from .expr import as_terms, from_terms
    best = 0.0
    for t in as_terms(e):
        v = abs(numeric_eval(from_terms([t]), env))
        best = max(best, v)
    return best
