"""Reference transcriptions used as comparison targets.

Everything here is data: the published display forms of the equation, its
symmetries, tables, reduced equations, closed-form solutions and conserved
vector components, rendered in this package's grammar.  The engine never
computes FROM these; it recomputes everything independently and diffs
against them.
"""

from __future__ import annotations

from fractions import Fraction

from .expr import Expr, add, fun, mul, pow_, rat, sym
from .jets import Generator, total_derivative, total_derivative_multi
from .parsing import Context, parse


def base_context() -> Context:
    """(x, y, z, t) with the potential q, the original u, and the adjoint v."""
    ctx = Context().add_independents("x", "y", "z", "t")
    ctx.add_dependent("q").add_dependent("u").add_dependent("v")
    return ctx


BASE = base_context()


def _p(text: str, ctx: Context = BASE) -> Expr:
    return parse(text, ctx)


# ---------------------------------------------------------------------------
# construction of the equation (display forms)
# ---------------------------------------------------------------------------

# one-dimensional flows produced by the recursion operator
FLOW_X_DISPLAY = "u_t + 6/15*u*u_x - 1/5*u_xxx"
FLOW_Y_DISPLAY = "u_t + 16/15*u*u_y - 1/5*u_xxy - 2/3*u_x*Int[u_y, x]"

def flow_x_reference() -> Expr:
    return _p(FLOW_X_DISPLAY)

def flow_y_reference() -> Expr:
    return _p(FLOW_Y_DISPLAY)

def kdv_x_reference() -> Expr:
    # y,z derivative of the first flow
    return total_derivative_multi(flow_x_reference(), "yz")

def kdv_y_reference() -> Expr:
    # x,z derivative of the second flow, tripled
    return mul(rat(3), total_derivative_multi(flow_y_reference(), "xz"))


def new_kdv_u_reference() -> Expr:
    """3u_xyt + 3u_xzt - (u_t - 6uu_x + u_xxx)_yz - 2(u_x d^-1 u_y)_xz
    - 2(u_x d^-1 u_z)_xy, expanded canonically."""
    head = _p("3*u_xyt + 3*u_xzt")
    core = total_derivative_multi(_p("u_t - 6*u*u_x + u_xxx"), "yz")
    ay = total_derivative_multi(_p("u_x*Int[u_y, x]"), "xz")
    az = total_derivative_multi(_p("u_x*Int[u_z, x]"), "xy")
    return add(head, mul(rat(-1), core), mul(rat(-2), ay), mul(rat(-2), az))


def new_kdv_q_reference() -> Expr:
    """3q_xxyt + 3q_xxzt - (q_xt - 6q_x q_xx + q_xxxx)_yz - 2(q_xx q_y)_xz
    - 2(q_xx q_z)_xy, expanded canonically."""
    head = _p("3*q_xxyt + 3*q_xxzt")
    core = total_derivative_multi(_p("q_xt - 6*q_x*q_xx + q_xxxx"), "yz")
    ay = total_derivative_multi(_p("q_xx*q_y"), "xz")
    az = total_derivative_multi(_p("q_xx*q_z"), "xy")
    return add(head, mul(rat(-1), core), mul(rat(-2), ay), mul(rat(-2), az))


def adjoint_reference() -> Expr:
    return _p("10*q_xx*v_xyz - 4*q_xy*v_xxz - 4*q_xz*v_xxy + 6*q_x*v_xxyz"
              " - 2*q_y*v_xxxz - 2*q_z*v_xxxy - v_txyz + 3*v_txxy + 3*v_txxz"
              " - v_xxxxyz")


# ---------------------------------------------------------------------------
# the seven point symmetries as printed (S5 = t d/dq)
# ---------------------------------------------------------------------------

def printed_generators(ctx: Context | None = None) -> list[Generator]:
    ctx = ctx or BASE

    def g(name, xi1="0", xi2="0", xi3="0", tau="0", eta="0"):
        return Generator(ctx, "q",
                         {"x": _p(xi1, ctx), "y": _p(xi2, ctx),
                          "z": _p(xi3, ctx), "t": _p(tau, ctx)},
                         _p(eta, ctx), name=name)

    return [
        g("S1", xi1="1"),
        g("S2", xi2="1"),
        g("S3", xi3="1"),
        g("S4", tau="1"),
        g("S5", eta="t"),
        g("S6", xi1="t", eta="-1/2*(1/3*x + 3*y + 3*z)"),
        g("S7", xi1="x", xi2="y", xi3="z", tau="3*t", eta="-q"),
    ]


def canonical_s5(ctx: Context | None = None) -> Generator:
    """The eta = 1 variant of S5 (the C7 member of the solved family)."""
    ctx = ctx or BASE
    return Generator(ctx, "q", {}, rat(1), name="S5")


# ---------------------------------------------------------------------------
# Table 1 (commutators) as printed: entry (i, j) = coeff * S_k or 0
# ---------------------------------------------------------------------------

F = Fraction
TABLE1_PRINTED: dict[tuple[int, int], tuple[Fraction, int] | None] = {
    (1, 6): (F(-1, 6), 5), (1, 7): (F(1), 1),
    (2, 6): (F(-2, 3), 5), (2, 7): (F(1), 2),
    (3, 6): (F(-2, 3), 5), (3, 7): (F(1), 3),
    (4, 6): (F(1), 1), (4, 7): (F(3), 4),
    (5, 7): (F(-1), 5),
    (6, 1): (F(1, 6), 5), (6, 2): (F(2, 3), 5), (6, 3): (F(-2, 3), 5),
    (6, 4): (F(-1), 1), (6, 7): (F(-2), 6),
    (7, 1): (F(-1), 1), (7, 2): (F(-1), 2), (7, 3): (F(-1), 3),
    (7, 4): (F(-3), 4), (7, 5): (F(1), 5), (7, 6): (F(2), 6),
}
for _i in range(1, 8):
    for _j in range(1, 8):
        TABLE1_PRINTED.setdefault((_i, _j), None)


def printed_structure_constants() -> dict[tuple[int, int], list[Fraction]]:
    """Antisymmetric tensor read from the upper cells (i < j) of the printed
    table; this is what the published Theta system and adjoint matrices used."""
    c: dict[tuple[int, int], list[Fraction]] = {}
    for i in range(1, 8):
        for j in range(i + 1, 8):
            vec = [Fraction(0)] * 7
            cell = TABLE1_PRINTED[(i, j)]
            if cell is not None:
                coeff, k = cell
                vec[k - 1] = coeff
            c[(i, j)] = vec
    return c


# ---------------------------------------------------------------------------
# Table 2 (adjoint actions) as printed, row w column j
# ---------------------------------------------------------------------------

def _adctx() -> Context:
    ctx = Context().add_independents("w")
    ctx.add_constants(*[f"eps{i}" for i in range(1, 8)], "s")
    return ctx


_AD = _adctx()

# entries: list of (coefficient text, basis index); identity entries implied
TABLE2_PRINTED_EXTRA: dict[tuple[int, int], list[tuple[str, int]]] = {
    (1, 6): [("1", 6), ("eps1/s", 5)],
    (1, 7): [("1", 7), ("-eps1", 1)],
    (2, 6): [("1", 6), ("2/3*eps2", 5)],
    (2, 7): [("1", 7), ("-eps3", 2)],
    (3, 6): [("1", 6), ("-2/3*eps3", 5)],
    (3, 7): [("1", 7), ("-eps3", 3)],
    (4, 6): [("1", 6), ("-eps4", 1)],
    (4, 7): [("1", 7), ("-3*eps4", 4)],
    (5, 7): [("1", 7), ("eps5", 5)],
    (6, 1): [("1", 1), ("-1/6*eps6", 5)],
    (6, 2): [("1", 2), ("-2/3*eps6", 5)],
    (6, 3): [("1", 3), ("-2/3*eps6", 5)],
    (6, 4): [("1", 4), ("eps6", 1)],
    (6, 7): [("1", 7), ("2*eps6", 6)],
    (7, 1): [("exp(eps7)", 1)],
    (7, 2): [("exp(eps7)", 2)],
    (7, 3): [("exp(eps7)", 3)],
    (7, 4): [("exp(3*eps7)", 4)],
    (7, 5): [("exp(-eps7)", 5)],
    (7, 6): [("exp(-2)*eps7", 6)],
}


def table2_printed() -> dict[tuple[int, int], list[Expr]]:
    """(w, j) -> coefficient vector over S1..S7, printed form."""
    out = {}
    for w in range(1, 8):
        for j in range(1, 8):
            vec = [rat(0)] * 7
            extra = TABLE2_PRINTED_EXTRA.get((w, j))
            if extra is None:
                vec[j - 1] = rat(1)
            else:
                for text, k in extra:
                    vec[k - 1] = add(vec[k - 1], parse(text, _AD))
            out[(w, j)] = vec
    return out


# adjoint matrices A1..A7 as printed (row i, column j), texts in eps1..eps7
A_MATRICES_PRINTED_EXTRA: dict[int, dict[tuple[int, int], str]] = {
    1: {(6, 5): "1/6*eps1", (7, 1): "-eps1"},
    2: {(6, 5): "2/3*eps2", (7, 2): "-eps2"},
    3: {(6, 5): "2/3*eps3", (7, 3): "-eps3"},
    4: {(6, 1): "-eps4", (7, 4): "-3*eps4"},
    5: {(7, 5): "eps5"},
    6: {(1, 5): "-1/6*eps6", (2, 5): "-2/3*eps6", (3, 5): "-2/3*eps6",
        (4, 1): "eps6", (7, 6): "2*eps6"},
    7: {},
}
A7_DIAGONAL_PRINTED = ["exp(eps7)", "exp(eps7)", "exp(eps7)", "exp(3*eps7)",
                       "exp(-eps7)", "exp(-2*eps7)", "1"]


def a_matrices_printed() -> list[list[list[Expr]]]:
    mats = []
    for w in range(1, 8):
        m = [[rat(1) if i == j else rat(0) for j in range(7)] for i in range(7)]
        if w == 7:
            for i, text in enumerate(A7_DIAGONAL_PRINTED):
                m[i][i] = parse(text, _AD)
        for (i, j), text in A_MATRICES_PRINTED_EXTRA[w].items():
            m[i - 1][j - 1] = parse(text, _AD)
        mats.append(m)
    return mats


# ---------------------------------------------------------------------------
# Theta system and the representative-mapping eps formulas
# ---------------------------------------------------------------------------

def _abctx() -> Context:
    ctx = Context().add_independents("w")
    ctx.add_constants(*[f"a{i}" for i in range(1, 8)],
                      *[f"b{i}" for i in range(1, 8)])
    return ctx


_ABC = _abctx()

THETA_PRINTED_TEXT = [
    "a1*b7 + a4*b6 - a6*b4 - b1*a7",
    "a2*b7 - b2*a7",
    "a3*b7 - b3*a7",
    "3*a4*b7 - 3*b4*a7",
    "1/6*b1*a6 + 2/3*b2*a6 + 2/3*b3*a6 + b5*a7"
    " + (-1/6*a1 - 2/3*a2 - 2/3*a3)*b6 - a5*b7",
    "-2*a6*b7 + 2*b6*a7",
    "0",
]


def theta_printed() -> list[Expr]:
    return [parse(t, _ABC) for t in THETA_PRINTED_TEXT]


EPS_FORMULAS_TEXT = {
    1: "-1/3*a4*a6 + a1",
    2: "a2",
    3: "a3",
    4: "1/3*a4",
    5: "-1/18*(-a4*a6^2 + 3*a1*a6 + 12*a2*a6 + 12*a3*a6 + 18*a5)",
    6: "-1/2*a6",
}


def eps_formulas() -> dict[int, Expr]:
    return {k: parse(t, _ABC) for k, t in EPS_FORMULAS_TEXT.items()}


# optimal system representatives for the alpha = 1 branch, as coefficient
# vectors over S1..S7
OPTIMAL_SYSTEM_VECTORS = [
    ("S1", [1, 0, 0, 0, 0, 0, 0]),
    ("S7", [0, 0, 0, 0, 0, 0, 1]),
    ("S1+S2", [1, 1, 0, 0, 0, 0, 0]),
    ("S2+S3", [0, 1, 1, 0, 0, 0, 0]),
    ("S2+S4", [0, 1, 0, 1, 0, 0, 0]),
    ("S2+S6", [0, 1, 0, 0, 0, 1, 0]),
    ("S2+S3+S4", [0, 1, 1, 1, 0, 0, 0]),
    ("S2+S3+S6", [0, 1, 1, 0, 0, 1, 0]),
    ("S2+S4+S6", [0, 1, 0, 1, 0, 1, 0]),
    ("S2+S3+S4+S6", [0, 1, 1, 1, 0, 1, 0]),
]


# ---------------------------------------------------------------------------
# reduction subalgebras and reduced-equation transcriptions
# ---------------------------------------------------------------------------

def reduction_subalgebras(ctx: Context | None = None) -> dict[str, Generator]:
    """The combinations used for the similarity reductions."""
    ctx = ctx or BASE
    gens = {g.name: g for g in printed_generators(ctx)}
    one = rat(1)

    def combo(name, *parts):
        out = gens[parts[0]]
        for p in parts[1:]:
            out = out.combine(gens[p], one, one)
        out.name = name
        return out

    return {
        "S2": gens["S2"],
        "S4": gens["S4"],
        "S8": combo("S8", "S1", "S2", "S3", "S4"),
        "S9": combo("S9", "S1", "S2"),
        "S10": combo("S10", "S2", "S3"),
        "S11": combo("S11", "S2", "S6"),
        "S12": combo("S12", "S2", "S3", "S4"),
    }


def _jetmaker(args, dep="f"):
    ctx = Context().add_independents(*args)
    ctx.add_dependent(dep)

    def J(**counts):
        return ctx.jet(dep, **counts)

    return ctx, J


def redeq_s4_reference():
    """Reduction along the time translation."""
    ctx, J = _jetmaker(("X", "Y", "Z"))
    e = ( 2*J(X=1,Y=1,Z=1)*J(X=2) + 4*J(X=1,Y=1)*J(X=2,Z=1)
        + 4*J(X=1,Z=1)*J(X=2,Y=1) + 6*J(X=1)*J(X=2,Y=1,Z=1)
        - J(X=4,Y=1,Z=1) - 2*J(X=3,Z=1)*J(Y=1)
        - 4*J(X=3)*J(Y=1,Z=1) - 2*J(X=3,Y=1)*J(Z=1))
    return ctx, e


def redeq_s9_reference():
    ctx, J = _jetmaker(("xi", "Z", "T"))
    e = ( 3*J(T=1,xi=3) + 4*J(T=1,xi=2,Z=1) - 6*J(xi=2,Z=1)*J(xi=2)
        - 4*J(xi=1)*J(xi=3,Z=1) - J(xi=5,Z=1) + 2*J(xi=4)*J(Z=1))
    return ctx, e


def redeq_s10_reference():
    ctx, J = _jetmaker(("X", "xi", "T"))
    e = ( J(X=4,xi=2) + 4*J(X=3,xi=1)*J(xi=1) + 4*J(X=3)*J(xi=2)
        - 2*J(X=1,xi=2)*J(X=2) - 8*J(X=1,xi=1)*J(X=2,xi=1)
        - 6*J(X=1)*J(X=2,xi=2) + J(T=1,X=1,xi=2))
    return ctx, e


def redeq_s12_reference():
    ctx, J = _jetmaker(("X", "xi", "zeta"))
    e = ( J(X=4,xi=2) + J(X=4,xi=1,zeta=1) - 6*J(X=1)*J(X=2,xi=1,zeta=1)
        - 6*J(X=1)*J(X=2,xi=2) - 2*J(X=2)*J(X=1,xi=1,zeta=1)
        - 8*J(X=2,xi=1)*J(X=1,xi=1) - 4*J(X=2,xi=1)*J(X=1,zeta=1)
        - 4*J(X=1,xi=1)*J(X=2,zeta=1) - 2*J(X=2)*J(X=1,xi=2)
        + 4*J(X=3)*J(xi=2) + 4*J(X=3)*J(xi=1,zeta=1)
        + 4*J(X=3,xi=1)*J(xi=1) + 2*J(X=3,xi=1)*J(zeta=1)
        + 2*J(xi=1)*J(X=3,zeta=1) - 3*J(X=2,zeta=2)
        + J(X=1,xi=2,zeta=1) + J(X=1,xi=1,zeta=2))
    return ctx, e


def redeq_s8_reference():
    ctx, J = _jetmaker(("xi", "zeta", "eta"))

    def j(**kw):
        return J(**kw)

    e = ( 2*j(zeta=1)*j(xi=4)
        + 4*j(xi=1,zeta=1)*j(eta=3)
        + 2*j(xi=1)*j(zeta=4)
        - 6*j(eta=2,xi=1,zeta=3)
        - 12*j(eta=1,xi=2,zeta=3)
        - 12*j(eta=2,xi=2,zeta=2)
        + (-6*j(eta=1) + 13)*j(eta=2,xi=1,zeta=1)
        - 4*j(eta=3,xi=2,zeta=1)
        + (2*j(zeta=1) + 3)*j(eta=3,xi=1)
        + (6*j(zeta=1) + 6)*j(eta=2,xi=2)
        + (-4*j(xi=1) - 6*j(eta=1))*j(xi=3,zeta=1)
        + (6*j(zeta=1) + 3)*j(eta=1,xi=3)
        + (-2*j(eta=2) - 4*j(xi=1,zeta=1) - 6*j(zeta=2) - 10*j(xi=2)
           - 8*j(eta=1,zeta=1) - 12*j(eta=1,xi=1))*j(xi=1,zeta=2)
        + (-2*j(eta=2) + 4*j(xi=1,zeta=1) - 12*j(eta=1,zeta=1) - 10*j(zeta=2)
           - 10*j(xi=2) - 12*j(eta=1,xi=1))*j(eta=1,xi=1,zeta=1)
        + (-2*j(eta=2) - 4*j(xi=1,zeta=1) - 12*j(eta=1,zeta=1) - 10*j(zeta=2)
           - 6*j(xi=2) - 8*j(eta=1,xi=1))*j(xi=2,zeta=1)
        + (4*j(xi=1,zeta=1) - 8*j(xi=2) - 8*j(eta=1,xi=1))*j(eta=1,zeta=2)
        + (8*j(xi=1,zeta=1) - 4*j(xi=2) - 4*j(eta=1,xi=1))*j(eta=2,zeta=1)
        + (8*j(xi=1,zeta=1) - 4*j(eta=1,zeta=1) - 4*j(zeta=2))*j(eta=2,xi=1)
        + (4*j(xi=1,zeta=1) - 8*j(eta=1,zeta=1) - 8*j(zeta=2))*j(eta=1,xi=2)
        + (-4*j(xi=2) - 4*j(eta=1,xi=1))*j(zeta=3)
        + (-4*j(eta=1,zeta=1) - 4*j(zeta=2))*j(xi=3)
        + (-6*j(eta=1) - 4*j(zeta=1))*j(xi=1,zeta=3)
        - 6*j(xi=3,zeta=3)
        + (2*j(xi=1) + 3)*j(eta=3,zeta=1)
        - 4*j(xi=2,zeta=4)
        - 4*j(eta=1,xi=4,zeta=1)
        - 6*j(eta=2,xi=3,zeta=1)
        - 4*j(eta=3,xi=1,zeta=2)
        - j(xi=1,zeta=5)
        - j(eta=4,xi=1,zeta=1)
        - 4*j(eta=1,xi=1,zeta=4)
        - j(xi=5,zeta=1)
        - 12*j(eta=1,xi=3,zeta=2)
        + (6*j(xi=1) + 6)*j(eta=2,zeta=2)
        + (10 - 6*j(zeta=1) - 12*j(eta=1))*j(eta=1,xi=1,zeta=2)
        + (-6*j(xi=1) - 6*j(zeta=1) - 12*j(eta=1))*j(xi=2,zeta=2)
        - 4*j(xi=4,zeta=2)
        + (-6*j(xi=1) - 12*j(eta=1) + 10)*j(eta=1,xi=2,zeta=1)
        + (6*j(xi=1) + 3)*j(eta=1,zeta=3))
    return ctx, e


def redeq_s11_reference():
    ctx = Context().add_independents("Z", "T", "xi")
    ctx.add_dependent("f")

    def J(**counts):
        return ctx.jet("f", **counts)

    T, xi, Z = sym("T"), sym("xi"), sym("Z")
    e = ( pow_(T, 2)*J(T=1,xi=2,Z=1)
        + T*(3*J(T=1,xi=2,Z=1) - Fraction(2,3)*J(xi=2,Z=1) + 3*J(T=1,xi=3))
        + 2*J(Z=1)*J(xi=4) - 4*J(xi=1)*J(xi=3,Z=1)
        - 9*(xi + Z)*J(xi=3,Z=1) - 6*J(xi=2,Z=1)*J(xi=2)
        - 15*J(xi=2,Z=1) - 12*J(xi=3) - pow_(T, -1)*J(xi=5,Z=1))
    return ctx, e


def redeq1_2_reference():
    ctx, J = _jetmaker(("theta", "vartheta"), dep="g")
    e = (-16*J(theta=6) + 50*J(theta=1,vartheta=3) - 160*J(theta=4,vartheta=2)
         - 80*J(theta=5,vartheta=1) - 16*J(theta=1,vartheta=5)
         - 48*J(vartheta=2)*J(theta=3) - 96*J(vartheta=2)*J(theta=2,vartheta=1)
         - 48*J(vartheta=2)*J(theta=1,vartheta=2)
         - 32*J(theta=1)*J(theta=3,vartheta=1)
         + 32*J(theta=1)*J(theta=1,vartheta=3)
         + 16*J(theta=1)*J(vartheta=4)
         - 32*J(vartheta=1)*J(theta=4)
         - 96*J(vartheta=1)*J(theta=3,vartheta=1)
         - 96*J(vartheta=1)*J(theta=2,vartheta=2)
         - 32*J(vartheta=1)*J(theta=1,vartheta=3)
         - 48*J(theta=2)*J(theta=3)
         - 96*J(theta=2)*J(theta=2,vartheta=1)
         - 192*J(theta=1,vartheta=1)*J(theta=2,vartheta=1)
         - 48*J(theta=2)*J(theta=1,vartheta=2)
         - 96*J(theta=1,vartheta=1)*J(theta=1,vartheta=2)
         + 64*J(theta=2,vartheta=2) + 12*J(vartheta=4)
         - 80*J(theta=2,vartheta=4) + 26*J(theta=3,vartheta=1)
         - 16*J(theta=1)*J(theta=4)
         - 96*J(theta=1,vartheta=1)*J(theta=3)
         - 160*J(theta=3,vartheta=3))
    return ctx, e


def redeq1_3_reference():
    ctx, J = _jetmaker(("rho",), dep="h")
    e = (-768*J(rho=2)*J(rho=3) - 256*J(rho=1)*J(rho=4) + 152*J(rho=4)
         - 512*J(rho=6))
    return ctx, e


def redeq1_4_reference():
    ctx, J = _jetmaker(("rho",), dep="h")
    e = 192*pow_(J(rho=2), 2) + 32*pow_(J(rho=1), 3) - 57*pow_(J(rho=1), 2)
    return ctx, e


# ---------------------------------------------------------------------------
# conserved-vector transcriptions (T1 in full, T5 in full)
# ---------------------------------------------------------------------------

T1_PRINTED_TEXT = {
    "t": """
  1/12*v_xz*q_xy - 1/4*v_xx*q_xy + 1/12*q_xz*v_xy - 1/12*v_x*q_xyz
  - 1/4*q_x*v_xyz + 1/12*v_yz*q_xx - 1/2*v_xz*q_xx - 1/2*v_xy*q_xx
  - 1/4*q_xz*v_xx - 1/12*v_y*q_xxz + 1/2*v_x*q_xxz + 3/4*q_x*v_xxz
  - 1/12*v_z*q_xxy + 1/2*v_x*q_xxy + 3/4*q_x*v_xxy + 1/4*v*q_xxyz
  + 1/4*v_z*q_xxx + 1/4*v_y*q_xxx - 3/4*v*q_xxxz - 3/4*v*q_xxxy
""",
    "x": """
  3*v_xyz*q_x^2 - 11/3*v_xz*q_xy*q_x - 11/3*q_xz*v_xy*q_x + 8/3*v_x*q_xyz*q_x
  + 4/3*v_yz*q_xx*q_x + q_yz*v_xx*q_x + 7/6*v_y*q_xxz*q_x - 3/2*q_y*v_xxz*q_x
  + 7/6*v_z*q_xxy*q_x - 3/2*q_z*v_xxy*q_x + v*q_xxyz*q_x - 2/3*v_xxxyz*q_x
  - 1/4*v_tyz*q_x + 3/2*v_txz*q_x + 3/2*v_txy*q_x + 8/3*v_x*q_xz*q_xy
  - 2*q_yz*v_x*q_xx + 2/3*v_y*q_xz*q_xx + q_y*v_xz*q_xx + 2/3*v_z*q_xy*q_xx
  + q_z*v_xy*q_xx + 1/2*q_y*q_xz*v_xx + 1/2*q_z*q_xy*v_xx - q_y*v_x*q_xxz
  + 1/2*v*q_xy*q_xxz - q_z*v_x*q_xxy + 1/2*v*q_xz*q_xxy - 1/5*v_xxz*q_xxy
  - 1/5*q_xxz*v_xxy + 1/5*v_xx*q_xxyz + 2/5*q_xx*v_xxyz - 1/2*v_z*q_y*q_xxx
  - 1/2*q_z*v_y*q_xxx - v*q_yz*q_xxx - 1/5*v_xyz*q_xxx - 1/15*q_xyz*v_xxx
  - 1/2*v*q_y*q_xxxz + 1/5*v_xy*q_xxxz + 2/15*q_xy*v_xxxz - 1/2*v*q_z*q_xxxy
  + 1/5*v_xz*q_xxxy + 2/15*q_xz*v_xxxy - 2/5*v_x*q_xxxyz + 1/15*v_yz*q_xxxx
  - 2/15*v_y*q_xxxxz - 2/15*v_z*q_xxxxy - 1/3*v*q_xxxxyz - 1/12*q_xyz*v_t
  + 1/2*q_xxz*v_t + 1/2*q_xxy*v_t + 1/12*q_xy*v_tz - 1/2*q_xx*v_tz
  + 1/12*q_xz*v_ty - 1/2*q_xx*v_ty + 1/12*v_yz*q_tx - 1/2*v_xz*q_tx
  - 1/2*v_xy*q_tx - 1/2*q_xz*v_tx - 1/2*q_xy*v_tx - 1/12*v_y*q_txz
  + 1/2*v_x*q_txz - 1/12*v_z*q_txy + 1/2*v_x*q_txy - 3/4*v*q_txyz
  + 1/2*v_z*q_txx + 1/2*v_y*q_txx + 3/2*v*q_txxz + 3/2*v*q_txxy
""",
    "y": """
  3/2*v_xxz*q_x^2 + 4/3*v_xz*q_xx*q_x - 11/6*q_xz*v_xx*q_x + 7/6*v_x*q_xxz*q_x
  - 2/3*v_z*q_xxx*q_x - 1/2*q_z*v_xxx*q_x - 1/2*v*q_xxxz*q_x - 1/6*v_xxxxz*q_x
  - 1/4*v_txz*q_x + 3/4*v_txx*q_x - 2/3*v_z*q_xx^2 + 2/3*v_x*q_xz*q_xx
  + 1/2*q_z*q_xx*v_xx - 1/2*v*q_xx*q_xxz - 1/2*q_z*v_x*q_xxx + 1/2*v*q_xz*q_xxx
  - 1/10*v_xxz*q_xxx - 1/15*q_xxz*v_xxx + 1/10*v_xx*q_xxxz + 2/15*q_xx*v_xxxz
  + 1/2*v*q_z*q_xxxx + 1/15*v_xz*q_xxxx + 1/30*q_xz*v_xxxx - 2/15*v_x*q_xxxxz
  - 1/30*v_z*q_xxxxx + 1/6*v*q_xxxxxz - 1/12*q_xxz*v_t + 1/4*q_xxx*v_t
  + 1/12*q_xx*v_tz + 1/12*v_xz*q_tx - 1/4*v_xx*q_tx + 1/12*q_xz*v_tx
  - 1/2*q_xx*v_tx - 1/12*v_x*q_txz - 1/12*v_z*q_txx + 1/2*v_x*q_txx
  + 1/4*v*q_txxz - 3/4*v*q_txxx
""",
    "z": """
  3/2*v_xxy*q_x^2 + 4/3*v_xy*q_xx*q_x - 11/6*q_xy*v_xx*q_x + 7/6*v_x*q_xxy*q_x
  - 2/3*v_y*q_xxx*q_x - 1/2*q_y*v_xxx*q_x - 1/2*v*q_xxxy*q_x - 1/6*v_xxxxy*q_x
  - 1/4*v_txy*q_x + 3/4*v_txx*q_x - 2/3*v_y*q_xx^2 + 2/3*v_x*q_xy*q_xx
  + 1/2*q_y*q_xx*v_xx - 1/2*v*q_xx*q_xxy - 1/2*q_y*v_x*q_xxx + 1/2*v*q_xy*q_xxx
  - 1/10*v_xxy*q_xxx - 1/15*q_xxy*v_xxx + 1/10*v_xx*q_xxxy + 2/15*q_xx*v_xxxy
  + 1/2*v*q_y*q_xxxx + 1/15*v_xy*q_xxxx + 1/30*q_xy*v_xxxx - 2/15*v_x*q_xxxxy
  - 1/30*v_y*q_xxxxx + 1/6*v*q_xxxxxy - 1/12*q_xxy*v_t + 1/4*q_xxx*v_t
  + 1/12*q_xx*v_ty + 1/12*v_xy*q_tx - 1/4*v_xx*q_tx + 1/12*q_xy*v_tx
  - 1/2*q_xx*v_tx - 1/12*v_x*q_txy - 1/12*v_y*q_txx + 1/2*v_x*q_txx
  + 1/4*v*q_txxy - 3/4*v*q_txxx
""",
}

T5_PRINTED_TEXT = {
    "t": "1/4*t*v_xyz - 3/4*t*v_xxz - 3/4*t*v_xxy",
    "x": """
  -7/3*t*q_xx*v_yz - 1/12*v_yz + 1/2*v_xz + 8/3*t*v_xz*q_xy + 8/3*t*q_xz*v_xy
  + 1/2*v_xy - 5/3*t*v_x*q_xyz - 3*t*q_x*v_xyz - t*q_yz*v_xx - 1/6*t*v_y*q_xxz
  + 3/2*t*q_y*v_xxz - 1/6*t*v_z*q_xxy + 3/2*t*q_z*v_xxy + 2*t*v*q_xxyz
  + 2/3*t*v_xxxyz + 1/4*t*v_tyz - 3/2*t*v_txz - 3/2*t*v_txy
""",
    "y": """
  -7/3*t*q_xx*v_xz - 1/12*v_xz + 4/3*t*q_xz*v_xx + 1/4*v_xx - 1/6*t*v_x*q_xxz
  - 3/2*t*q_x*v_xxz + 7/6*t*v_z*q_xxx + 1/2*t*q_z*v_xxx - t*v*q_xxxz
  + 1/6*t*v_xxxxz + 1/4*t*v_txz - 3/4*t*v_txx
""",
    "z": """
  -7/3*t*q_xx*v_xy - 1/12*v_xy + 4/3*t*q_xy*v_xx + 1/4*v_xx - 1/6*t*v_x*q_xxy
  - 3/2*t*q_x*v_xxy + 7/6*t*v_y*q_xxx + 1/2*t*q_y*v_xxx - t*v*q_xxxy
  + 1/6*t*v_xxxxy + 1/4*t*v_txy - 3/4*t*v_txx
""",
}


def t1_printed() -> dict:
    return {k: _p(v.replace("\n", " ")) for k, v in T1_PRINTED_TEXT.items()}


def t5_printed() -> dict:
    return {k: _p(v.replace("\n", " ")) for k, v in T5_PRINTED_TEXT.items()}


# ---------------------------------------------------------------------------
# closed-form solutions
# ---------------------------------------------------------------------------

def _solution_context(constants=(), funcs=()) -> Context:
    ctx = base_context()
    if constants:
        ctx.add_constants(*constants)
    for name, args in funcs:
        ctx.add_dependent(name, args)
    return ctx


SOLUTION_SPECS: dict[str, dict] = {
    "kdvsol1": {
        "mode": "symbolic",
        "constants": (),
        "funcs": (("F1", ("z", "t")), ("F2", ("z", "t")),
                  ("F3", ("x", "t")), ("F4", ("x", "z"))),
        "q": "F1*x + F2 + F3 + F4",
        "u": "F1 + F3_x + F4_x",
    },
    "kdvsol2": {
        "mode": "symbolic",
        "constants": ("alpha1", "alpha2"),
        "q": "6*(alpha1 - x + sin(y) + z)^-1 + alpha2",
        "u": "6*(alpha1 - x + sin(y) + z)^-2",
    },
    "kdvsol3": {
        "mode": "numeric",
        "constants": ("c1", "c2", "c3", "c4"),
        "q": ("-3*sqrt(19)*(1 + exp(sqrt(19)*(ln(tanh(c4*(-4*x+2*y+z+t)+c3)+1)"
              " - ln(1-tanh(c4*(-4*x+2*y+z+t)+c3)) + 2*c1)/(16*c4)))^-1 + c2"),
        "u": ("-57/2*exp(sqrt(19)*(ln(tanh(c4*(-4*x+2*y+z+t)+c3)+1)"
              " - ln(1-tanh(c4*(-4*x+2*y+z+t)+c3)) + 2*c1)/(16*c4))"
              "*(1 + exp(sqrt(19)*(ln(tanh(c4*(-4*x+2*y+z+t)+c3)+1)"
              " - ln(1-tanh(c4*(-4*x+2*y+z+t)+c3)) + 2*c1)/(16*c4)))^-2"),
        "params": ("c1", "c2", "c3", "c4"),
    },
    "kdvsol4": {
        "mode": "weierstrass",
        "constants": ("c1", "c2", "c4", "c5"),
        "q": None,
        "u": "6*WeierstrassP(-c5*(x - c5*y + c5*z) - c4 + c1, 0, c2)*c5^2",
    },
    "kdvsol5": {
        "mode": "excluded",
        "constants": ("c1", "c2", "c3", "c4", "c5", "c6"),
        "q": None,
        "u": ("-6*c3*ln(sin(-c6*cos(t) + c5*(-y+z) - c6*x + c4)"
              " + I*abs(cos(-c6*cos(t) + c5*(-y+z) - c6*x + c4)))"
              "*c6*cos(-c6*cos(t) + c5*(-y+z) - c6*x + c4)"
              " - 6*c2*c6*cos(-c6*cos(t) + c5*(-y+z) - c6*x + c4)"
              " - 1/6*abs(sin(t))"),
    },
    "kdvsol6": {
        "mode": "numeric",
        "constants": (),
        "funcs": (("F2", ("t",)), ("F3", ("t",)), ("F4", ("t",))),
        "q": ("-1/12*((x + 18*y + 18*z)*t - 9*x)*x/t^2 + F2 + F3*(y - x/t)"
              " + F4*(y - x/t)^2 - 3/4*t^2*sqrt(t)*(y - x/t)^2"
              " + 1/2*(y - x/t)*t - 9/4*(y - x/t)*z"),
        "u": ("1/(12*t^2)*(-18*t^2*sqrt(t)*x + 18*t^3*sqrt(t)*y"
              " + (-24*t*y + 24*x)*F4 - 12*F3*t - 6*t^2"
              " + (-2*x - 18*y + 9*z)*t + 18*x)"),
        "domain": "t>0",
    },
    "kdvsol7": {
        "mode": "numeric",
        "constants": ("c1", "c2"),
        "q": ("-3*sqrt(2)/2*tanh(sqrt(2)/4*(c1 + x - 2*y + z + t))"
              " - 3*sqrt(2)/4*ln(tanh(sqrt(2)/4*(c1 + x - 2*y + z + t)) - 1)"
              " + 3*sqrt(2)/4*ln(tanh(sqrt(2)/4*(c1 + x - 2*y + z + t)) + 1)"
              " - 3/4*x + 3/2*y - 3/4*z - 3/4*t + c2"),
        "u": "-3/4*cosh(sqrt(2)/4*(c1 + x - 2*y + z + t))^-2",
        "params": ("c1", "c2"),
    },
}
