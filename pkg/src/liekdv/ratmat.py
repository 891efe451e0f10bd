"""Small exact linear algebra over Fraction: solving, nullspaces, and the
matrix exponentials needed for adjoint actions (nilpotent series or integer
eigenvalue decompositions)."""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .expr import Expr, ExprError, ONE, ZERO, add, fun, mul, pow_, rat


class LinearAlgebraError(ExprError):
    pass


def mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][k] * B[k][j] for k in range(m)), Fraction(0))
             for j in range(p)] for i in range(n)]


def mat_vec(A, v):
    return [sum((A[i][k] * v[k] for k in range(len(v))), Fraction(0))
            for i in range(len(A))]


def vec_mat(v, A):
    return [sum((v[k] * A[k][j] for k in range(len(v))), Fraction(0))
            for j in range(len(A[0]))]


def identity(n):
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def mat_add(A, B, ca=Fraction(1), cb=Fraction(1)):
    return [[ca * A[i][j] + cb * B[i][j] for j in range(len(A[0]))]
            for i in range(len(A))]


def is_zero_matrix(A) -> bool:
    return all(x == 0 for row in A for x in row)


def rref(rows, ncols):
    """Reduced row echelon form; returns (rref rows, pivot column list)."""
    rows = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def solve_linear(A, b):
    """One solution x of A x = b, or None if inconsistent (free vars -> 0)."""
    n = len(A)
    m = len(A[0]) if A else 0
    aug = [list(map(Fraction, A[i])) + [Fraction(b[i])] for i in range(n)]
    red, pivots = rref(aug, m)
    x = [Fraction(0)] * m
    for row, c in zip(red, pivots):
        x[c] = row[m]
    # rows whose pivot landed in the augmented column are inconsistent
    for row in red:
        if all(v == 0 for v in row[:m]) and row[m] != 0:
            return None
    # verify (guards pivot bookkeeping)
    for i in range(n):
        s = sum((Fraction(A[i][j]) * x[j] for j in range(m)), Fraction(0))
        if s != Fraction(b[i]):
            return None
    return x


def nullspace(A, m):
    """Basis of the right nullspace of A (m columns)."""
    red, pivots = rref([list(r) for r in A], m)
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * m
        v[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def charpoly(A):
    """Characteristic polynomial coefficients [1, c1, ..., cn] of A
    (Faddeev-LeVerrier), for det(lambda I - A)."""
    n = len(A)
    coeffs = [Fraction(1)]
    M = identity(n)
    for k in range(1, n + 1):
        M = mat_mul(A, M)
        c = -sum((M[i][i] for i in range(n)), Fraction(0)) / k
        coeffs.append(c)
        for i in range(n):
            M[i][i] += c
    return coeffs


def integer_roots(coeffs):
    """Integer roots with multiplicity of a monic Fraction polynomial."""

    def value(cs, x):
        v = Fraction(0)
        for c in cs:
            v = v * x + c
        return v

    def deflate(cs, r):
        out = [cs[0]]
        for c in cs[1:-1]:
            out.append(c + out[-1] * r)
        return out

    from math import gcd

    roots = []
    cur = list(coeffs)
    while len(cur) > 1:
        tail = cur[-1]
        if tail == 0:
            roots.append(0)
            cur = cur[:-1]
            continue
        # integer roots divide the constant term after clearing denominators
        scale = 1
        for c in cur:
            scale = scale * c.denominator // gcd(scale, c.denominator)
        const = int(tail * scale)
        cands = set()
        a = abs(const)
        d = 1
        while d * d <= a:
            if a % d == 0:
                cands.update({d, -d, a // d, -(a // d)})
            d += 1
        found = None
        for r in sorted(cands, key=lambda v: (abs(v), v)):
            if value(cur, Fraction(r)) == 0:
                found = r
                break
        if found is None:
            return None
        roots.append(found)
        cur = deflate(cur, Fraction(found))
    return roots


def exp_scaled(M, epsilon: Expr):
    """exp(epsilon * M) as a matrix of expressions in `epsilon`.

    Handles nilpotent M by the finite series, otherwise M semisimple with
    integer eigenvalues via Lagrange projectors.  Raises for anything else.
    """
    n = len(M)
    powers = [identity(n)]
    nilpotent_at = None
    for k in range(1, n + 1):
        powers.append(mat_mul(powers[-1], M))
        if is_zero_matrix(powers[-1]):
            nilpotent_at = k
            break
    if nilpotent_at is not None:
        out = [[ZERO for _ in range(n)] for _ in range(n)]
        for k in range(nilpotent_at):
            epsk = pow_(epsilon, k) if k else ONE
            for i in range(n):
                for j in range(n):
                    if powers[k][i][j] != 0:
                        out[i][j] = add(out[i][j],
                                        mul(rat(powers[k][i][j], factorial(k)),
                                            epsk))
        return out
    roots = integer_roots(charpoly(M))
    if roots is None:
        raise LinearAlgebraError(
            "matrix exponential needs a nilpotent matrix or integer spectrum")
    distinct = sorted(set(roots))
    # semisimplicity check: product of (M - r I) over distinct roots vanishes
    prod = identity(n)
    for r in distinct:
        prod = mat_mul(prod, mat_add(M, identity(n), Fraction(1), Fraction(-r)))
    if not is_zero_matrix(prod):
        raise LinearAlgebraError(
            "matrix exponential supported only for nilpotent or semisimple "
            "integer-spectrum matrices")
    out = [[ZERO for _ in range(n)] for _ in range(n)]
    for lam in distinct:
        proj = identity(n)
        for mu in distinct:
            if mu == lam:
                continue
            proj = mat_mul(proj, mat_add(M, identity(n),
                                         Fraction(1), Fraction(-mu)))
            proj = [[x / Fraction(lam - mu) for x in row] for row in proj]
        factor = fun("exp", mul(rat(lam), epsilon)) if lam else ONE
        for i in range(n):
            for j in range(n):
                if proj[i][j] != 0:
                    out[i][j] = add(out[i][j], mul(rat(proj[i][j]), factor))
    return out
