"""Differential algebra on jet expressions.

Total derivatives treat jet variables as coordinates linked by the usual
bump rule; a dependent variable may list another dependent among its
arguments (used for symmetry coefficients that depend on q), in which case
the chain rule inserts the argument's own jet.

Conventions:
  characteristic      W = eta - sum_j xi^j q_j
  prolonged coefficient for multi-index J:  eta^J = D_J(W) + sum_j xi^j q_{J+j}
  Euler operator      E(L) = sum_J (-D)_J dL/dq_J
"""

from __future__ import annotations

import itertools
from .expr import (Add, Expr, ExprError, Fun, IntNode, Jet, Mul,
                   NonDifferentiableError, Pow, Rat, Sym, ZERO, add, atoms,
                   fun, integral, jet, jets_of, mul, pow_, rat, replace_atoms,
                   sym)


class ReductionError(ExprError):
    pass


class SubstitutionError(ExprError):
    pass


# ---------------------------------------------------------------------------
# derivatives
# ---------------------------------------------------------------------------

def _fun_derivative(f: Fun, argindex: int) -> Expr:
    """Derivative of the function body with respect to its argindex-th slot."""
    a = f.fargs[0]
    name = f.name
    if name == "abs":
        raise NonDifferentiableError("abs is not differentiable symbolically")
    if name == "WeierstrassP":
        if argindex != 0:
            raise NonDifferentiableError(
                "WeierstrassP invariants must be constant")
        return fun("WeierstrassPPrime", *f.fargs)
    if name == "WeierstrassPPrime":
        if argindex != 0:
            raise NonDifferentiableError(
                "WeierstrassPPrime invariants must be constant")
        w, g2, _ = f.fargs
        return add(mul(rat(6), pow_(fun("WeierstrassP", *f.fargs), 2)),
                   mul(rat(-1, 2), g2))
    table = {
        "tanh": lambda: add(rat(1), mul(rat(-1), pow_(fun("tanh", a), 2))),
        "cosh": lambda: fun("sinh", a),
        "sinh": lambda: fun("cosh", a),
        "sech": lambda: mul(rat(-1), fun("sech", a), fun("tanh", a)),
        "exp": lambda: fun("exp", a),
        "ln": lambda: pow_(a, -1),
        "sin": lambda: fun("cos", a),
        "cos": lambda: mul(rat(-1), fun("sin", a)),
        "arctanh": lambda: pow_(add(rat(1), mul(rat(-1), pow_(a, 2))), -1),
        "Si": lambda: mul(fun("sin", a), pow_(a, -1)),
        "sqrt": lambda: mul(rat(1, 2), pow_(fun("sqrt", a), -1)),
    }
    if name not in table:
        raise NonDifferentiableError(f"no derivative rule for {name}")
    return table[name]()


_TD_CACHE: dict = {}


def clear_caches() -> None:
    _TD_CACHE.clear()


def total_derivative(e: Expr, var: str) -> Expr:
    """Total derivative D_var; jets gain one index, chain rule throughout.

    For a jet f_J whose argument list contains another dependent u, the
    chain contributes f_{J+u} * u_var.
    """
    key = (e, var)
    got = _TD_CACHE.get(key)
    if got is not None:
        return got
    res = _total_derivative(e, var)
    _TD_CACHE[key] = res
    return res


def _total_derivative(e: Expr, var: str) -> Expr:
    if isinstance(e, Rat):
        return ZERO
    if isinstance(e, Sym):
        return rat(1) if e.name == var else ZERO
    if isinstance(e, Jet):
        parts = []
        handler, dep_args = jet_of_arg_derivative
        for a in e.args:
            if a == var:
                parts.append(e.bump(a))
            elif a in dep_args:
                da = handler(a, var)
                if not da.is_zero:
                    parts.append(mul(e.bump(a), da))
        return add(*parts)
    if isinstance(e, Fun):
        pieces = []
        for i, a in enumerate(e.fargs):
            da = total_derivative(a, var)
            if not da.is_zero:
                pieces.append(mul(_fun_derivative(e, i), da))
        return add(*pieces)
    if isinstance(e, IntNode):
        if e.var == var:
            return e.body
        return integral(total_derivative(e.body, var), e.var)
    if isinstance(e, Pow):
        db = total_derivative(e.pbase, var)
        if db.is_zero:
            return ZERO
        return mul(rat(e.exp), pow_(e.pbase, e.exp - 1), db)
    if isinstance(e, Mul):
        pieces = []
        ch = e.children
        for i, c in enumerate(ch):
            dc = total_derivative(c, var)
            if not dc.is_zero:
                pieces.append(mul(*ch[:i], dc, *ch[i + 1:]))
        return add(*pieces)
    if isinstance(e, Add):
        return add(*[total_derivative(c, var) for c in e.children])
    raise TypeError(f"not an expression: {e!r}")


# Registry hook filled by Context-aware callers: maps a dependent-argument
# name to its own order-1 jet while differentiating.  Kept module-global and
# empty in the default configuration (main dependents have independent args).
jet_of_arg_derivative = (lambda a, var: ZERO, frozenset())


class dependent_arguments:
    """Context manager declaring dependents that appear as jet arguments.

    `mapping` sends an argument name to a callable (argname, var) -> Expr
    giving D_var of that argument (typically the argument's order-1 jet).
    """

    def __init__(self, mapping: dict):
        self.mapping = mapping

    def __enter__(self):
        global jet_of_arg_derivative
        self._saved = jet_of_arg_derivative
        mapping = self.mapping
        jet_of_arg_derivative = (
            lambda a, var: mapping[a](a, var), frozenset(mapping))
        _TD_CACHE.clear()
        return self

    def __exit__(self, *exc):
        global jet_of_arg_derivative
        jet_of_arg_derivative = self._saved
        _TD_CACHE.clear()
        return False


def total_derivative_multi(e: Expr, multi) -> Expr:
    """Apply D along a multi-index given as a sequence of variable names."""
    for v in multi:
        e = total_derivative(e, v)
    return e


def sym_partial(e: Expr, var: str) -> Expr:
    """Partial derivative with respect to an explicit symbol; jets are
    independent coordinates and do not differentiate."""
    if isinstance(e, Rat) or isinstance(e, Jet):
        return ZERO
    if isinstance(e, Sym):
        return rat(1) if e.name == var else ZERO
    if isinstance(e, Fun):
        pieces = []
        for i, a in enumerate(e.fargs):
            da = sym_partial(a, var)
            if not da.is_zero:
                pieces.append(mul(_fun_derivative(e, i), da))
        return add(*pieces)
    if isinstance(e, IntNode):
        raise ReductionError("partial derivative through a formal integral")
    if isinstance(e, Pow):
        db = sym_partial(e.pbase, var)
        if db.is_zero:
            return ZERO
        return mul(rat(e.exp), pow_(e.pbase, e.exp - 1), db)
    if isinstance(e, Mul):
        pieces = []
        ch = e.children
        for i, c in enumerate(ch):
            dc = sym_partial(c, var)
            if not dc.is_zero:
                pieces.append(mul(*ch[:i], dc, *ch[i + 1:]))
        return add(*pieces)
    if isinstance(e, Add):
        return add(*[sym_partial(c, var) for c in e.children])
    raise TypeError(f"not an expression: {e!r}")


def jet_partial(e: Expr, coord: Jet) -> Expr:
    """Partial derivative with respect to one jet coordinate."""
    if isinstance(e, (Rat, Sym)):
        return ZERO
    if isinstance(e, Jet):
        return rat(1) if e == coord else ZERO
    if isinstance(e, Fun):
        pieces = []
        for i, a in enumerate(e.fargs):
            da = jet_partial(a, coord)
            if not da.is_zero:
                pieces.append(mul(_fun_derivative(e, i), da))
        return add(*pieces)
    if isinstance(e, IntNode):
        if coord in atoms(e.body, Jet):
            raise ReductionError(
                "jet partial derivative through a formal integral")
        return ZERO
    if isinstance(e, Pow):
        db = jet_partial(e.pbase, coord)
        if db.is_zero:
            return ZERO
        return mul(rat(e.exp), pow_(e.pbase, e.exp - 1), db)
    if isinstance(e, Mul):
        pieces = []
        ch = e.children
        for i, c in enumerate(ch):
            dc = jet_partial(c, coord)
            if not dc.is_zero:
                pieces.append(mul(*ch[:i], dc, *ch[i + 1:]))
        return add(*pieces)
    if isinstance(e, Add):
        return add(*[jet_partial(c, coord) for c in e.children])
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------

def _coordinate_partial(e: Expr, a: str, coords: frozenset) -> Expr:
    """Partial derivative along the coordinate `a` of a function living on
    the space spanned by `coords`.  Jets whose dependent name lies in
    `coords` are coordinates themselves (derivative 1 against `a`, else 0);
    any other jet is a field and differentiates by bumping its index."""
    if isinstance(e, Rat):
        return ZERO
    if isinstance(e, Sym):
        return rat(1) if e.name == a else ZERO
    if isinstance(e, Jet):
        if e.dep in coords:
            if e.order > 0:
                raise SubstitutionError(
                    f"replacement carries jets of the coordinate {e.dep}")
            return rat(1) if e.dep == a else ZERO
        return e.bump(a) if a in e.args else ZERO
    if isinstance(e, Fun):
        pieces = []
        for i, arg in enumerate(e.fargs):
            da = _coordinate_partial(arg, a, coords)
            if not da.is_zero:
                pieces.append(mul(_fun_derivative(e, i), da))
        return add(*pieces)
    if isinstance(e, IntNode):
        raise SubstitutionError(
            "cannot chain a substitution through a formal antiderivative")
    if isinstance(e, Pow):
        db = _coordinate_partial(e.pbase, a, coords)
        if db.is_zero:
            return ZERO
        return mul(rat(e.exp), pow_(e.pbase, e.exp - 1), db)
    if isinstance(e, Mul):
        pieces = []
        ch = e.children
        for i, c in enumerate(ch):
            dc = _coordinate_partial(c, a, coords)
            if not dc.is_zero:
                pieces.append(mul(*ch[:i], dc, *ch[i + 1:]))
        return add(*pieces)
    if isinstance(e, Add):
        return add(*[_coordinate_partial(c, a, coords) for c in e.children])
    raise TypeError(f"not an expression: {e!r}")


def substitute(e: Expr, target: Expr, replacement: Expr) -> Expr:
    """Whole-variable substitution.

    * symbol/constant target: plain structural replacement;
    * order-0 jet target (a dependent variable): every jet of it is replaced
      by the matching derivative of the replacement, chained through jets;
    * any jet of order >= 1: rejected (jet-only substitution unsupported).
    """
    if isinstance(target, Jet):
        if target.order != 0:
            raise SubstitutionError("jet-only substitution unsupported")
        dep = target.dep
        if dep in {j.dep for j in jets_of(replacement)}:
            raise SubstitutionError(
                f"replacement for {dep} must not contain {dep}")
        coords = frozenset(target.args)
        # when the replacement carries no coordinate-dependents, the
        # coordinate partial coincides with the (memoized) total derivative
        plain = (not jet_of_arg_derivative[1]
                 and not any(j.dep in coords for j in jets_of(replacement)))
        deriv = (total_derivative if plain
                 else lambda r, a: _coordinate_partial(r, a, coords))
        mapping = {}
        for j in jets_of(e, dep):
            repl = replacement
            for a, c in zip(j.args, j.counts):
                for _ in range(c):
                    repl = deriv(repl, a)
            mapping[j] = repl
        return replace_atoms(e, mapping)
    if isinstance(target, Sym):
        occurs = any(target.name in j.args for j in jets_of(e))
        if occurs:
            raise SubstitutionError(
                f"cannot substitute {target.name}: it is a jet argument here")
        return replace_atoms(e, {target: replacement})
    raise SubstitutionError("target must be a symbol or a dependent variable")


# ---------------------------------------------------------------------------
# generators, equations
# ---------------------------------------------------------------------------

class ShapeError(ExprError):
    pass


class Generator:
    """A point vector field: one coefficient per independent variable and one
    for the dependent variable.  Coefficients may depend on the independents
    and the (order-0) dependent only."""

    def __init__(self, ctx, dep: str, xi: dict, eta: Expr, name: str = ""):
        self.ctx = ctx
        self.dep = dep
        self.xi = {v: xi.get(v, ZERO) for v in ctx.independents}
        self.eta = eta
        self.name = name
        for coeff in list(self.xi.values()) + [self.eta]:
            for j in jets_of(coeff):
                # dependence on the order-0 dependent is fine; its jets not
                if j.dep == dep and j.order > 0:
                    raise ShapeError(
                        "point generator coefficients cannot carry jets")

    def coefficients(self) -> list:
        return [self.xi[v] for v in self.ctx.independents] + [self.eta]

    def characteristic(self) -> Expr:
        q = self.ctx.jet(self.dep)
        terms = [self.eta]
        for v in self.ctx.independents:
            if not self.xi[v].is_zero:
                terms.append(mul(rat(-1), self.xi[v], q.bump(v)))
        return add(*terms)

    def apply_to(self, f: Expr) -> Expr:
        """First-order action on a function of the base variables."""
        q0 = self.ctx.jet(self.dep)
        pieces = [mul(self.xi[v], sym_partial(f, v))
                  for v in self.ctx.independents]
        pieces.append(mul(self.eta, jet_partial(f, q0)))
        return add(*pieces)

    def combine(self, other: "Generator", a, b) -> "Generator":
        xi = {v: add(mul(a, self.xi[v]), mul(b, other.xi[v]))
              for v in self.ctx.independents}
        eta = add(mul(a, self.eta), mul(b, other.eta))
        return Generator(self.ctx, self.dep, xi, eta)

    def scaled(self, a) -> "Generator":
        return Generator(self.ctx, self.dep,
                         {v: mul(a, self.xi[v]) for v in self.ctx.independents},
                         mul(a, self.eta), self.name)

    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coefficients())

    def __eq__(self, other):
        return (isinstance(other, Generator) and self.dep == other.dep
                and self.coefficients() == other.coefficients())

    def __repr__(self):
        parts = [f"{v}: {self.xi[v]}" for v in self.ctx.independents
                 if not self.xi[v].is_zero]
        if not self.eta.is_zero:
            parts.append(f"{self.dep}: {self.eta}")
        label = self.name or "generator"
        return f"<{label} " + "; ".join(parts or ["0"]) + ">"


def commutator(g1: Generator, g2: Generator) -> Generator:
    """[g1, g2] computed coefficient-wise: g1(g2 coeffs) - g2(g1 coeffs)."""
    xi = {v: add(g1.apply_to(g2.xi[v]), mul(rat(-1), g2.apply_to(g1.xi[v])))
          for v in g1.ctx.independents}
    eta = add(g1.apply_to(g2.eta), mul(rat(-1), g2.apply_to(g1.eta)))
    return Generator(g1.ctx, g1.dep, xi, eta)


class Equation:
    """lhs == 0, linear in a designated leading jet with rational coefficient;
    `solved` equals that jet on the equation manifold."""

    def __init__(self, lhs: Expr, dep: str, leading: Jet):
        self.lhs = lhs
        self.dep = dep
        self.leading = leading
        coeff = jet_partial(lhs, leading)
        if not isinstance(coeff, Rat) or coeff.value == 0:
            raise ShapeError(
                "equation must be linear in its leading jet with a nonzero "
                "rational coefficient")
        rest = add(lhs, mul(rat(-1), coeff, leading))
        self.solved = mul(rat(-1), pow_(coeff, -1), rest)
        check = replace_atoms(lhs, {leading: self.solved})
        if not check.is_zero:
            raise ShapeError("solved form does not annihilate the equation")

    def __repr__(self):
        return f"<Equation {self.leading} = ... ({self.dep})>"


# ---------------------------------------------------------------------------
# prolongation
# ---------------------------------------------------------------------------

def _multi_indices(variables, upto: int):
    n = len(variables)
    for total in range(upto + 1):
        for cuts in itertools.combinations(range(total + n - 1), n - 1):
            counts = []
            prev = -1
            for c in cuts:
                counts.append(c - prev - 1)
                prev = c
            counts.append(total + n - 2 - prev)
            yield tuple(counts)


def prolong_generator(g: Generator, upto_order: int) -> dict:
    """Prolonged coefficient for every jet of g.dep up to the given order."""
    if upto_order > 6:
        raise ShapeError("prolongation supported up to order 6")
    variables = g.ctx.independents
    out = {}
    for counts in _multi_indices(variables, upto_order):
        j = jet(g.dep, variables, counts)
        out[j] = prolonged_coefficient(g, j)
    return out


def prolonged_coefficient(g: Generator, j: Jet) -> Expr:
    W = g.characteristic()
    dW = W
    for a, c in zip(j.args, j.counts):
        for _ in range(c):
            dW = total_derivative(dW, a)
    transport = [mul(g.xi[v], j.bump(v)) for v in g.ctx.independents
                 if not g.xi[v].is_zero]
    return add(dW, *transport)


def apply_prolonged(g: Generator, e: Expr) -> Expr:
    """pr(g) applied to an expression in the base and jet variables."""
    pieces = []
    for v in g.ctx.independents:
        if not g.xi[v].is_zero:
            dv = sym_partial(e, v)
            if not dv.is_zero:
                pieces.append(mul(g.xi[v], dv))
    for j in sorted(jets_of(e, g.dep), key=Expr.sort_key):
        de = jet_partial(e, j)
        if not de.is_zero:
            pieces.append(mul(prolonged_coefficient(g, j), de))
    return add(*pieces)


# ---------------------------------------------------------------------------
# Euler operator and on-shell reduction
# ---------------------------------------------------------------------------

def euler_operator(L: Expr, dep: str) -> Expr:
    """Variational derivative sum_J (-D)_J dL/dq_J over the jets present."""
    pieces = []
    for j in sorted(jets_of(L, dep), key=Expr.sort_key):
        if j.order > 6:
            raise ShapeError("jets above order 6 are not supported")
        p = jet_partial(L, j)
        if p.is_zero:
            continue
        for a, c in zip(j.args, j.counts):
            for _ in range(c):
                p = total_derivative(p, a)
        sign = -1 if j.order % 2 else 1
        pieces.append(mul(rat(sign), p))
    return add(*pieces)


def onshell_reduce(e: Expr, eqs, max_passes: int = 16) -> Expr:
    """Substitute solved forms for every derivative descendant of each
    equation's leading jet until none remain."""
    eqs = list(eqs)
    for _ in range(max_passes):
        mapping = {}
        for j in jets_of(e):
            for eq in eqs:
                if j.dominates(eq.leading):
                    repl = eq.solved
                    for a, cj, cl in zip(j.args, j.counts, eq.leading.counts):
                        for _ in range(cj - cl):
                            repl = total_derivative(repl, a)
                    mapping[j] = repl
                    break
        if not mapping:
            return e
        e = replace_atoms(e, mapping)
    raise ReductionError("on-shell reduction did not terminate")
