"""Structure of the seven-dimensional symmetry algebra: commutator table,
adjoint actions, invariant functions, and verification of the optimal-system
representative mapping."""

from __future__ import annotations

from fractions import Fraction

from .expr import (Expr, ExprError, ZERO, add, as_terms, fun, mul, rat,
                   rational_eval, sym)
from .jets import Generator, commutator, substitute
from .parsing import Context
from .ratmat import exp_scaled, solve_linear, vec_mat
from . import refdata


class ClosureError(ExprError):
    pass


def _coefficient_rows(gens: list[Generator]):
    """Monomial-coordinate rows for generators (for exact span arithmetic)."""
    basis_index: dict = {}
    rows = []
    for g in gens:
        row: dict = {}
        for slot, e in enumerate(g.coefficients()):
            for c, f in as_terms(e):
                key = basis_index.setdefault((slot, f), len(basis_index))
                row[key] = row.get(key, Fraction(0)) + c
        rows.append(row)
    n = len(basis_index)
    return [[r.get(j, Fraction(0)) for j in range(n)] for r in rows], basis_index


def coordinates_in_basis(g: Generator, basis: list[Generator]):
    """Exact coordinates of g in the rational span of `basis`, or None."""
    rows, index = _coefficient_rows(basis + [g])
    n = len(index)
    A = [[rows[i][j] for i in range(len(basis))] for j in range(n)]
    b = [rows[-1][j] for j in range(n)]
    return solve_linear(A, b)


def spans_same_space(b1: list[Generator], b2: list[Generator]) -> bool:
    return (all(coordinates_in_basis(g, b2) is not None for g in b1)
            and all(coordinates_in_basis(g, b1) is not None for g in b2))


class AlgebraBasis:
    """Ordered basis with the structure tensor c^k_{ij} ([S_i, S_j] row)."""

    def __init__(self, generators: list[Generator], structure=None):
        self.generators = list(generators)
        n = len(self.generators)
        self.n = n
        if structure is not None:
            self.structure = {k: list(v) for k, v in structure.items()}
            self._complete_antisymmetric()
        else:
            self.structure = {}
            for i in range(n):
                for j in range(n):
                    if i == j:
                        self.structure[(i + 1, j + 1)] = [Fraction(0)] * n
                        continue
                    br = commutator(self.generators[i], self.generators[j])
                    coords = coordinates_in_basis(br, self.generators)
                    if coords is None:
                        raise ClosureError(
                            f"[S{i+1}, S{j+1}] lies outside the span")
                    self.structure[(i + 1, j + 1)] = coords
        self._check_antisymmetry_and_jacobi()

    def _complete_antisymmetric(self):
        n = self.n
        for i in range(1, n + 1):
            self.structure[(i, i)] = [Fraction(0)] * n
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if (i, j) not in self.structure:
                    self.structure[(i, j)] = [
                        -c for c in self.structure[(j, i)]]

    def _check_antisymmetry_and_jacobi(self):
        n = self.n
        c = self.structure
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if any(a != -b for a, b in zip(c[(i, j)], c[(j, i)])):
                    raise ClosureError("structure tensor not antisymmetric")
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for k in range(1, n + 1):
                    acc = [Fraction(0)] * n
                    for m in range(1, n + 1):
                        for w in range(n):
                            acc[w] += (c[(j, k)][m - 1] * c[(i, m)][w]
                                       + c[(k, i)][m - 1] * c[(j, m)][w]
                                       + c[(i, j)][m - 1] * c[(k, m)][w])
                    if any(v != 0 for v in acc):
                        raise ClosureError("Jacobi identity fails")

    def bracket_vector(self, i: int, j: int):
        return list(self.structure[(i, j)])

    def ad_matrix(self, w: int):
        """(ad_w)[k][j] = c^k_{wj}; columns are images of basis elements."""
        n = self.n
        return [[self.structure[(w, j + 1)][k] for j in range(n)]
                for k in range(n)]


def canonical_basis(ctx: Context | None = None) -> AlgebraBasis:
    """Recomputed basis; the S5 variant is adjudicated so the reference rows
    [S1,S6] = -(1/6) S5 and [S5,S7] = -S5 hold exactly (eta = 1 wins)."""
    ctx = ctx or refdata.BASE
    printed = refdata.printed_generators(ctx)
    candidates = [refdata.canonical_s5(ctx), printed[4]]
    for s5 in candidates:
        gens = printed[:4] + [s5] + printed[5:]
        try:
            basis = AlgebraBasis(gens)
        except ClosureError:
            continue
        v16 = basis.bracket_vector(1, 6)
        v57 = basis.bracket_vector(5, 7)
        want16 = [Fraction(0)] * 7
        want16[4] = Fraction(-1, 6)
        want57 = [Fraction(0)] * 7
        want57[4] = Fraction(-1)
        if v16 == want16 and v57 == want57:
            basis.s5_variant = "eta=1" if s5 is candidates[0] else "eta=t"
            return basis
    raise ClosureError("no S5 variant closes the algebra consistently")


def printed_basis(ctx: Context | None = None) -> AlgebraBasis:
    """The printed generators with the antisymmetrized printed tensor (the
    inputs the published Theta system and adjoint matrices were built from)."""
    ctx = ctx or refdata.BASE
    gens = refdata.printed_generators(ctx)
    return AlgebraBasis(gens, structure=refdata.printed_structure_constants())


# ---------------------------------------------------------------------------
# table comparison
# ---------------------------------------------------------------------------

def commutator_table(basis: AlgebraBasis):
    return {(i, j): basis.bracket_vector(i, j)
            for i in range(1, 8) for j in range(1, 8)}


def commutator_discrepancies(basis: AlgebraBasis):
    """Cells where the recomputed table differs from the printed one."""
    out = []
    for (i, j), printed in refdata.TABLE1_PRINTED.items():
        vec = [Fraction(0)] * 7
        if printed is not None:
            coeff, k = printed
            vec[k - 1] = coeff
        if basis.bracket_vector(i, j) != vec:
            out.append({
                "cell": (i, j),
                "printed": vec,
                "recomputed": basis.bracket_vector(i, j),
            })
    return out


def adjoint_action_vector(basis: AlgebraBasis, w: int, j: int, eps: Expr):
    """Coefficients of Ad_{exp(eps S_w)}(S_j) = exp(-eps ad_w) e_j."""
    M = [[-x for x in row] for row in basis.ad_matrix(w)]
    E = exp_scaled(M, eps)
    return [E[k][j - 1] for k in range(basis.n)]


def adjoint_action(basis: AlgebraBasis, w: int, g: Generator, eps: Expr) -> Generator:
    coords = coordinates_in_basis(g, basis.generators)
    if coords is None:
        raise ClosureError("generator outside the basis span")
    n = basis.n
    out = None
    for j in range(1, n + 1):
        if coords[j - 1] == 0:
            continue
        vec = adjoint_action_vector(basis, w, j, eps)
        for k in range(n):
            if vec[k].is_zero:
                continue
            piece = basis.generators[k].scaled(mul(rat(coords[j - 1]), vec[k]))
            out = piece if out is None else out.combine(piece, rat(1), rat(1))
    if out is None:
        out = basis.generators[0].scaled(ZERO)
    out.name = g.name
    return out


def adjoint_table(basis: AlgebraBasis, eps_names=None):
    eps_names = eps_names or [f"eps{i}" for i in range(1, 8)]
    return {(w, j): adjoint_action_vector(basis, w, j, sym(eps_names[w - 1]))
            for w in range(1, 8) for j in range(1, 8)}


def adjoint_discrepancies(basis: AlgebraBasis):
    printed = refdata.table2_printed()
    table = adjoint_table(basis)
    out = []
    for cell in sorted(printed):
        if printed[cell] != table[cell]:
            out.append({
                "cell": cell,
                "printed": [str(c) for c in printed[cell]],
                "recomputed": [str(c) for c in table[cell]],
            })
    return out


# the mismatch cells explained by known typesetting slips: the eps1/s and
# e^{-2} eps7 cells, the 2/3-vs-3/2 cells inherited from the commutator
# table, the eps3-for-eps2 subscript in row 2, and the dropped second-order
# eps6^2 term in row 6 column 4
DOCUMENTED_TABLE1_CELLS = {(2, 6), (6, 2), (3, 6), (6, 3)}
DOCUMENTED_TABLE2_CELLS = {(1, 6), (2, 6), (2, 7), (3, 6), (6, 2), (6, 3),
                           (6, 4), (7, 6)}


# ---------------------------------------------------------------------------
# invariant function machinery
# ---------------------------------------------------------------------------

def _phi_context() -> Context:
    ctx = Context().add_independents(*[f"a{i}" for i in range(1, 8)])
    ctx.add_constants(*[f"b{i}" for i in range(1, 8)])
    ctx.add_dependent("Phi", tuple(f"a{i}" for i in range(1, 8)))
    return ctx


def theta_system(basis: AlgebraBasis):
    """Theta_k = coefficient of S_k in [sum a_i S_i, sum b_j S_j]."""
    ctx = _phi_context()
    a = [ctx.var(f"a{i}") for i in range(1, 8)]
    b = [ctx.var(f"b{i}") for i in range(1, 8)]
    thetas = []
    for k in range(7):
        terms = []
        for i in range(1, 8):
            for j in range(1, 8):
                c = basis.structure[(i, j)][k]
                if c != 0:
                    terms.append(mul(rat(c), a[i - 1], b[j - 1]))
        thetas.append(add(*terms))
    return ctx, thetas


def invariant_system(basis: AlgebraBasis):
    """Theta expressions, the Phi-PDE list (coefficients of each b_j), and
    the verification that Phi = a7 satisfies every equation."""
    ctx, thetas = theta_system(basis)
    phi_eqs = []
    for j in range(1, 8):
        bj = sym(f"b{j}")
        pieces = []
        for i in range(1, 8):
            coeff = _linear_coefficient(thetas[i - 1], bj)
            if not coeff.is_zero:
                pieces.append(mul(ctx.jet("Phi", **{f"a{i}": 1}), coeff))
        eq = add(*pieces)
        if not eq.is_zero:
            phi_eqs.append(eq)
    a7 = ctx.var("a7")
    verified = all(
        substitute(e, ctx.jet("Phi"), a7).is_zero for e in phi_eqs)
    return {"theta": thetas, "phi_system": phi_eqs, "phi_a7_verified": verified,
            "context": ctx}


def _linear_coefficient(e: Expr, s) -> Expr:
    """Coefficient of the symbol `s` in an expression linear in it."""
    out = []
    for c, factors in as_terms(e):
        if s in factors:
            rest = tuple(f for f in factors if f != s)
            out.append(mul(rat(c), *rest) if rest else rat(c))
    return add(*out)


# ---------------------------------------------------------------------------
# representative mapping check
# ---------------------------------------------------------------------------

def a_matrices(basis: AlgebraBasis, eps_values: dict):
    """A_w with rational eps values plugged in; A_w[i][j] = coefficient of
    S_j in Ad_{exp(eps_w S_w)}(S_i)."""
    mats = []
    for w in range(1, 8):
        epsv = eps_values.get(w, Fraction(0))
        M = [[-x for x in row] for row in basis.ad_matrix(w)]
        # exp of a rational multiple: evaluate the Expr matrix exactly
        E = exp_scaled(M, rat(epsv))
        A = [[_to_fraction(E[j][i]) for j in range(basis.n)]
             for i in range(basis.n)]
        mats.append(A)
    return mats


def _to_fraction(e: Expr) -> Fraction:
    return rational_eval(e, {})


def verify_optimal_representative(basis: AlgebraBasis, avec, eps_values, target):
    """Apply the adjoint-matrix product with the supplied eps values to the
    row vector `avec`; report the result and residual against `target`."""
    mats = a_matrices(basis, eps_values)
    v = [Fraction(x) for x in avec]
    for A in mats:
        v = vec_mat(v, A)
    residual = [a - Fraction(b) for a, b in zip(v, target)]
    return {"result": v, "residual": residual,
            "ok": all(r == 0 for r in residual)}


def paper_eps_values(avec) -> dict:
    """The published representative-mapping formulas evaluated at a vector."""
    env = {sym(f"a{i}"): Fraction(avec[i - 1]) for i in range(1, 8)}
    out = {}
    for k, e in refdata.eps_formulas().items():
        out[k] = rational_eval(e, env)
    return out
