"""Invariance condition, determining-equation extraction, and a restricted
solver for the linear symmetry system.

Two extraction modes exist.  The general mode keeps the five coefficient
functions fully unknown over (x, y, z, t, q) and yields the classical linear
determining PDEs.  The restricted mode substitutes a declared ansatz shape
(constants and functions of t) and yields a rational linear system that
`solve_restricted` eliminates and integrates.
"""

from __future__ import annotations

from fractions import Fraction

from .expr import (Expr, ExprError, Jet, Pow, Sym, ZERO, add, as_terms,
                   atoms, collect_by, from_terms, jets_of, mul, pow_, rat,
                   sym)
from .jets import (Equation, Generator, apply_prolonged, dependent_arguments,
                   onshell_reduce, total_derivative)
from .parsing import Context
from .ratmat import rref, solve_linear


class SolveError(ExprError):
    pass


# ---------------------------------------------------------------------------
# invariance residual
# ---------------------------------------------------------------------------

def invariance_residual(g: Generator, eq: Equation) -> Expr:
    """pr(g) applied to the equation, evaluated on its solution manifold."""
    r = apply_prolonged(g, eq.lhs)
    return onshell_reduce(r, [eq])


# ---------------------------------------------------------------------------
# ansatz declarations
# ---------------------------------------------------------------------------

class InfinitesimalAnsatz:
    """Shape declaration for the unknown coefficients.

    `coefficients` maps each slot (independent names and the dependent) to an
    expression over unknown constants (symbols) and unknown functions (jets
    of dependents declared over a subset of the variables).  `unknown_funcs`
    maps each unknown function name to its argument tuple; `unknown_consts`
    lists the unknown constant names.
    """

    def __init__(self, ctx: Context, dep: str, coefficients: dict,
                 unknown_funcs: dict, unknown_consts: tuple):
        self.ctx = ctx
        self.dep = dep
        self.coefficients = coefficients
        self.unknown_funcs = dict(unknown_funcs)
        self.unknown_consts = tuple(unknown_consts)

    def generator(self) -> Generator:
        xi = {v: self.coefficients[v] for v in self.ctx.independents}
        return Generator(self.ctx, self.dep, xi, self.coefficients[self.dep])

    @classmethod
    def general(cls, base_ctx: Context, dep: str = "q",
                names=("xi1", "xi2", "xi3", "tau", "eta")) -> "InfinitesimalAnsatz":
        """Fully general point ansatz: each coefficient an unknown function
        of all independents and the dependent."""
        ctx = base_ctx.copy()
        args = base_ctx.independents + (dep,)
        for n in names:
            ctx.add_dependent(n, args)
        coeffs = {}
        for v, n in zip(base_ctx.independents + (dep,), names):
            coeffs[v] = ctx.jet(n)
        return cls(ctx, dep, coeffs, {n: args for n in names}, ())

    @classmethod
    def restricted_3p1(cls, base_ctx: Context) -> "InfinitesimalAnsatz":
        """xi1 = a(t) x + b(t); xi2 = c y + d; xi3 = c z + e; tau = tau(t);
        eta = p(t) x + r(t) y + s(t) z + m q + n(t)."""
        ctx = base_ctx.copy()
        funcs = {"a": ("t",), "b": ("t",), "p": ("t",), "r": ("t",),
                 "s": ("t",), "n": ("t",), "tau": ("t",)}
        for f, fa in funcs.items():
            ctx.add_dependent(f, fa)
        ctx.add_constants("c", "d", "e", "m")
        x, y, z = sym("x"), sym("y"), sym("z")
        q = ctx.jet("q")
        coeffs = {
            "x": add(mul(ctx.jet("a"), x), ctx.jet("b")),
            "y": add(mul(sym("c"), y), sym("d")),
            "z": add(mul(sym("c"), z), sym("e")),
            "t": ctx.jet("tau"),
            "q": add(mul(ctx.jet("p"), x), mul(ctx.jet("r"), y),
                     mul(ctx.jet("s"), z), mul(sym("m"), q), ctx.jet("n")),
        }
        return cls(ctx, "q", coeffs, funcs, ("c", "d", "e", "m"))

    @classmethod
    def restricted_kdv(cls, base_ctx: Context, dep: str = "u") -> "InfinitesimalAnsatz":
        """xi = a(t) x + b(t); tau = tau(t); eta = m u + n(t)  (1+1 case)."""
        ctx = base_ctx.copy()
        funcs = {"a": ("t",), "b": ("t",), "n": ("t",), "tau": ("t",)}
        for f, fa in funcs.items():
            ctx.add_dependent(f, fa)
        ctx.add_constants("m")
        coeffs = {
            "x": add(mul(ctx.jet("a"), sym("x")), ctx.jet("b")),
            "t": ctx.jet("tau"),
            dep: add(mul(sym("m"), ctx.jet(dep)), ctx.jet("n")),
        }
        return cls(ctx, dep, coeffs, funcs, ("m",))


class DeterminingSystem:
    """Linear homogeneous equations (== 0) in the ansatz unknowns."""

    def __init__(self, ansatz: InfinitesimalAnsatz, members: list[Expr]):
        self.ansatz = ansatz
        self.members = members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def satisfied_by(self, assignment: dict) -> bool:
        """assignment: unknown name -> replacement Expr (functions get their
        whole-variable replacement, constants a plain expression)."""
        from .jets import substitute
        for m in self.members:
            e = m
            for name, repl in assignment.items():
                if name in self.ansatz.unknown_funcs:
                    target = _order0(self.ansatz.ctx, name)
                    if repl == target:
                        continue
                    e = substitute(e, target, repl)
                else:
                    if repl == sym(name):
                        continue
                    e = substitute(e, sym(name), repl)
            if not e.is_zero:
                return False
        return True

    def implies(self, target: Expr) -> bool:
        """Is `target` in the rational span of the members?"""
        basis: dict = {}
        rows = []
        for m in self.members + [target]:
            row: dict = {}
            for c, f in as_terms(m):
                idx = basis.setdefault(f, len(basis))
                row[idx] = c
            rows.append(row)
        n = len(basis)
        A = [[r.get(j, Fraction(0)) for j in range(n)] for r in rows[:-1]]
        b = [rows[-1].get(j, Fraction(0)) for j in range(n)]
        At = [[A[i][j] for i in range(len(A))] for j in range(n)]
        return solve_linear(At, b) is not None


def _order0(ctx: Context, name: str) -> Jet:
    return ctx.jet(name)


# ---------------------------------------------------------------------------
# extraction
# ---------------------------------------------------------------------------

def _dep_arg_hook(ctx: Context, dep: str):
    return dependent_arguments({dep: lambda a, var: ctx.jet(dep, **{var: 1})})


def extract_determining(ansatz: InfinitesimalAnsatz, eq: Equation) -> DeterminingSystem:
    """Residual of the invariance condition with symbolic unknowns, split by
    monomials in the coordinates no unknown depends on."""
    ctx = ansatz.ctx
    dep = ansatz.dep
    g = ansatz.generator()
    uses_dep_arg = any(dep in fa for fa in ansatz.unknown_funcs.values())
    if uses_dep_arg:
        with _dep_arg_hook(ctx, dep):
            r = apply_prolonged(g, eq.lhs)
            r = onshell_reduce(r, [eq])
    else:
        r = apply_prolonged(g, eq.lhs)
        r = onshell_reduce(r, [eq])
    # coordinates that remain structural after the reduction
    used_args = set()
    for fa in ansatz.unknown_funcs.values():
        used_args.update(fa)

    def is_coordinate(b: Expr) -> bool:
        if isinstance(b, Jet) and b.dep == dep:
            return b.order >= 1 or dep not in used_args
        if isinstance(b, Sym) and b.name in ctx.independents:
            return b.name not in used_args
        return False

    groups = collect_by(r, is_coordinate)
    members = []
    seen = set()
    for key in sorted(groups, key=Expr.sort_key):
        e = _normalize_member(groups[key])
        if e.is_zero or e in seen:
            continue
        seen.add(e)
        members.append(e)
    return DeterminingSystem(ansatz, members)


def _normalize_member(e: Expr) -> Expr:
    terms = as_terms(e)
    if not terms:
        return ZERO
    lead = min(terms, key=lambda cf: tuple(x.sort_key() for x in cf[1]))
    return mul(pow_(rat(lead[0]), -1), e)


# ---------------------------------------------------------------------------
# restricted solver
# ---------------------------------------------------------------------------

class SolvedFamily:
    """General solution of a restricted determining system.

    `assignment` maps unknown names to expressions over the free parameters;
    free constants are named K1, K2, ... and free functions keep their own
    names (reported in `free_funcs`)."""

    def __init__(self, ansatz, assignment, free_consts, free_funcs, remainder):
        self.ansatz = ansatz
        self.assignment = assignment
        self.free_consts = free_consts
        self.free_funcs = free_funcs
        self.remainder = remainder

    def generator(self) -> Generator:
        from .jets import substitute
        ctx = self.ansatz.ctx
        coeffs = {}
        for slot, e in self.ansatz.coefficients.items():
            for name, repl in self.assignment.items():
                if name in self.ansatz.unknown_funcs:
                    if repl == ctx.jet(name):
                        continue
                    e = substitute(e, ctx.jet(name), repl)
                else:
                    if repl == sym(name):
                        continue
                    e = substitute(e, sym(name), repl)
            coeffs[slot] = e
        xi = {v: coeffs[v] for v in ctx.independents}
        return Generator(ctx, self.ansatz.dep, xi, coeffs[self.ansatz.dep])

    def specialize(self, mapping: dict) -> Generator:
        """Substitute free functions/constants (name -> Expr) and return the
        resulting generator."""
        from .jets import substitute
        g = self.generator()
        ctx = self.ansatz.ctx

        def fix(e: Expr) -> Expr:
            for name, repl in mapping.items():
                if name in self.ansatz.unknown_funcs:
                    if repl == ctx.jet(name):
                        continue
                    e = substitute(e, ctx.jet(name), repl)
                else:
                    if repl == sym(name):
                        continue
                    e = substitute(e, sym(name), repl)
            return e

        xi = {v: fix(g.xi[v]) for v in ctx.independents}
        return Generator(ctx, self.ansatz.dep, xi, fix(g.eta))


def solve_restricted(system: DeterminingSystem) -> SolvedFamily:
    """Linear elimination over the unknown constants and t-function jets,
    followed by polynomial integration of resolved derivative constraints.

    The family is validated by substitution back into the system; anything
    that fails to resolve is reported as an unsolved remainder, never
    guessed."""
    ansatz = system.ansatz
    ctx = ansatz.ctx
    func_args = sorted({a for fa in ansatz.unknown_funcs.values() for a in fa})
    tsym_name = func_args[0] if func_args else "t"

    # close the system under differentiation along the unknown-function
    # arguments so derivative links between unknowns become explicit rows
    closed = list(system.members)
    frontier = list(system.members)
    for _ in range(2):
        nxt = []
        for m in frontier:
            for a in func_args:
                dm = total_derivative(m, a)
                if not dm.is_zero:
                    nxt.append(dm)
        closed.extend(nxt)
        frontier = nxt

    # collect linear variables: constants and every jet of unknown functions
    variables: list = []
    var_index: dict = {}

    def vid(v):
        if v not in var_index:
            var_index[v] = len(variables)
            variables.append(v)
        return var_index[v]

    rows = []
    for m in closed:
        row: dict = {}
        for c, factors in as_terms(m):
            if len(factors) != 1:
                raise SolveError(f"nonlinear determining member: {m}")
            f = factors[0]
            if isinstance(f, Pow):
                raise SolveError(f"nonlinear determining member: {m}")
            row[vid(f)] = row.get(vid(f), Fraction(0)) + c
        rows.append(row)
    n = len(variables)

    # pivot preference: undifferentiated unknown functions first (so their
    # values are expressed through the free functions' derivatives), then
    # derivatives by ascending order, constants last
    def weight(v):
        if isinstance(v, Jet):
            return (0, v.order, v.dep)
        return (1, 0, v.name)

    order = sorted(range(n), key=lambda i: weight(variables[i]))
    pos = {vi: k for k, vi in enumerate(order)}
    A = [[Fraction(0)] * n for _ in rows]
    for i, row in enumerate(rows):
        for j, c in row.items():
            A[i][pos[j]] = c
    red, pivots = rref(A, n)
    solved: dict = {}
    for r, pc in zip(red, pivots):
        v = variables[order[pc]]
        rhs_terms = []
        for j in range(n):
            if j != pc and r[j] != 0:
                rhs_terms.append(mul(rat(-r[j]), variables[order[j]]))
        solved[v] = add(*rhs_terms)

    # integrate derivative-only constraints: f^(k) = polynomial in t of the
    # already-free quantities -> f gains k integration constants
    kcount = 0

    def fresh_const():
        nonlocal kcount
        kcount += 1
        name = f"K{kcount}"
        if name not in ctx:
            ctx.add_constants(name)
        return sym(name)

    assignment: dict = {}
    remainder: list[Expr] = []
    free_funcs: list[str] = []

    def resolve(e: Expr, depth=0) -> Expr:
        if depth > 12:
            raise SolveError("elimination cycle")
        out = e
        for v, rhs in solved.items():
            if v in atoms(out, Jet) or v in atoms(out, Sym):
                out = _replace_linear(out, v, resolve(rhs, depth + 1))
        return out

    for fname in ansatz.unknown_funcs:
        jets_solved = sorted(
            [v for v in solved if isinstance(v, Jet) and v.dep == fname],
            key=lambda j: j.order)
        if not jets_solved:
            free_funcs.append(fname)
            assignment[fname] = ctx.jet(fname)
            continue
        low = jets_solved[0]
        rhs = resolve(solved[low])
        if any(j.dep == fname for j in jets_of(rhs)):
            remainder.append(add(low, mul(rat(-1), rhs)))
            continue
        if low.order == 0:
            assignment[fname] = rhs
            continue
        # f^(k) = rhs; integrate k times in t when rhs is polynomial in t
        expr = rhs
        ok = True
        for _ in range(low.order):
            anti = _t_antiderivative(expr, tsym_name)
            if anti is None:
                ok = False
                break
            expr = add(anti, fresh_const())
        if ok:
            assignment[fname] = expr
        else:
            remainder.append(add(low, mul(rat(-1), rhs)))
    for cname in ansatz.unknown_consts:
        v = sym(cname)
        if v in solved:
            assignment[cname] = resolve(solved[v])
        else:
            assignment[cname] = v  # stays free

    # replace any unknown-function jets inside assignments by the resolved
    # derivative of the assigned expression
    changed = True
    guard = 0
    while changed and guard < 12:
        changed = False
        guard += 1
        for name, e in list(assignment.items()):
            for j in sorted(jets_of(e), key=lambda j: -j.order):
                if j.dep in assignment and j.dep != name and j.dep in ansatz.unknown_funcs:
                    if j.dep in free_funcs:
                        continue
                    repl = assignment[j.dep]
                    for a, c in zip(j.args, j.counts):
                        for _ in range(c):
                            repl = total_derivative(repl, a)
                    e = _replace_linear(e, j, repl)
                    changed = True
            assignment[name] = e

    fam = SolvedFamily(ansatz, assignment, [f"K{i+1}" for i in range(kcount)],
                       free_funcs, remainder)
    if not remainder:
        # validation: the family must satisfy every member identically
        subst = {}
        for name in ansatz.unknown_funcs:
            subst[name] = assignment[name]
        for name in ansatz.unknown_consts:
            subst[name] = assignment[name]
        if not system.satisfied_by(subst):
            raise SolveError("solved family fails the determining system")
    return fam


def _replace_linear(e: Expr, atom, repl: Expr) -> Expr:
    from .expr import replace_atoms
    return replace_atoms(e, {atom: repl})


def _t_antiderivative(e: Expr, tname: str):
    """Antiderivative in t of a polynomial-in-t expression whose other
    factors are t-independent; None when the shape does not allow it."""
    t = sym(tname)
    out_terms = []
    for c, factors in as_terms(e):
        tpow = 0
        rest = []
        for f in factors:
            base, expn = (f.pbase, f.exp) if isinstance(f, Pow) else (f, 1)
            if base == t:
                if expn < 0:
                    return None
                tpow += expn
            else:
                if _depends_on_t(base, tname):
                    return None
                rest.append(f)
        out_terms.append((Fraction(c, tpow + 1),
                          tuple(rest) + (pow_(t, tpow + 1),)))
    return from_terms([(c, _sorted_factors(f)) for c, f in out_terms])


def _sorted_factors(fs):
    return tuple(sorted(fs, key=Expr.sort_key))


def _depends_on_t(e: Expr, tname: str) -> bool:
    if sym(tname) in atoms(e, Sym):
        return True
    return any(j.count(tname) > 0 or tname in j.args for j in jets_of(e))
