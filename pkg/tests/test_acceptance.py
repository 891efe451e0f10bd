"""Acceptance criteria, one test per criterion, each printed as a pass/fail
line with its runtime.  Tolerances are fixed here and nowhere else."""

import random
import time
from fractions import Fraction

import pytest

from liekdv import (conslaw, hierarchy, liealg, reduction, refdata,
                    solutions, symmetry)
from liekdv.expr import (Rat, add, canonicalize, fun, jets_of, mul,
                         numeric_eval, rat, sym)
from liekdv.jets import (Equation, Generator, commutator, euler_operator,
                         prolonged_coefficient, total_derivative)
from liekdv.parsing import Context, parse

SEED = 20240808


class Timer:
    def __init__(self, label, limit):
        self.label = label
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, *rest):
        self.elapsed = time.perf_counter() - self.start
        status = "PASS" if exc_type is None else "FAIL"
        print(f"\n[{status}] {self.label} ({self.elapsed:.1f}s, "
              f"limit {self.limit}s)")
        if exc_type is None:
            assert self.elapsed < self.limit, \
                f"{self.label} exceeded {self.limit}s"
        return False


@pytest.fixture(scope="module")
def eq():
    return hierarchy.new_kdv_equation()


@pytest.fixture(scope="module")
def adj(eq):
    return conslaw.adjoint_equation(eq)


def test_criterion_1_derivation():
    with Timer("criterion 1: derivation", 5):
        lhs_u, scale = hierarchy.assemble_new_kdv()
        assert scale is None, "scaling discrepancy against the u-form"
        assert lhs_u == refdata.new_kdv_u_reference()
        equation = hierarchy.potential_transform(lhs_u)
        assert equation.lhs == refdata.new_kdv_q_reference()


def test_criterion_2_symmetries(eq):
    with Timer("criterion 2: symmetries", 60):
        for g in refdata.printed_generators():
            assert symmetry.invariance_residual(g, eq).is_zero, g.name
        ansatz = symmetry.InfinitesimalAnsatz.general(refdata.BASE)
        system = symmetry.extract_determining(ansatz, eq)
        ctx = ansatz.ctx.copy()
        ctx.add_dependent("F1", ("t",)).add_dependent("F2", ("t",))
        ctx.add_constants("C1", "C2", "C3", "C4")
        family = {
            "xi1": parse("C1*x + F1", ctx),
            "xi2": parse("C1*y + C2", ctx),
            "xi3": parse("C1*z + C4", ctx),
            "tau": parse("3*C1*t + C3", ctx),
            "eta": parse("-1/6*(x + 9*y + 9*z)*F1_t - C1*q + F2", ctx),
        }
        assert system.satisfied_by(family)


def test_criterion_3_commutator_table():
    with Timer("criterion 3: commutator table", 1):
        basis = liealg.canonical_basis()  # constructor proves closure+Jacobi
        for i in range(1, 8):
            for j in range(1, 8):
                vi = basis.bracket_vector(i, j)
                vj = basis.bracket_vector(j, i)
                assert all(a == -b for a, b in zip(vi, vj))
        cells = {tuple(d["cell"])
                 for d in liealg.commutator_discrepancies(basis)}
        assert cells == liealg.DOCUMENTED_TABLE1_CELLS
        assert basis.s5_variant == "eta=1"


def test_criterion_4_adjoint_table():
    with Timer("criterion 4: adjoint table", 2):
        basis = liealg.canonical_basis()
        cells = {tuple(d["cell"]) for d in liealg.adjoint_discrepancies(basis)}
        assert cells == liealg.DOCUMENTED_TABLE2_CELLS
        # the exact exponential factors of the scaling row
        eps = sym("eps7")
        table = liealg.adjoint_table(basis)
        assert table[(7, 1)][0] == fun("exp", eps)
        assert table[(7, 4)][3] == fun("exp", mul(rat(3), eps))
        assert table[(7, 5)][4] == fun("exp", mul(rat(-1), eps))
        assert table[(7, 6)][5] == fun("exp", mul(rat(-2), eps))


def test_criterion_5_optimal_system():
    with Timer("criterion 5: optimal system", 5):
        printed = liealg.printed_basis()
        recomputed = liealg.canonical_basis()
        inv = liealg.invariant_system(printed)
        assert inv["theta"] == refdata.theta_printed()
        assert inv["phi_a7_verified"]
        assert liealg.invariant_system(recomputed)["phi_a7_verified"]
        rng = random.Random(SEED)
        target = [0, 0, 0, 0, 0, 0, 1]
        for _ in range(20):
            a = [Fraction(rng.randint(-9, 9), rng.randint(1, 7))
                 for _ in range(6)] + [Fraction(1)]
            eps = liealg.paper_eps_values(a)
            rep_printed = liealg.verify_optimal_representative(
                printed, a, eps, target)
            assert rep_printed["ok"]
            rep_re = liealg.verify_optimal_representative(
                recomputed, a, eps, target)
            resid = rep_re["residual"]
            assert all(r == 0 for k, r in enumerate(resid) if k != 4)
            # the surviving component is exactly the difference induced by
            # the documented (2,6)/(3,6) cells: (3/2 - 2/3)(a2 + a3) a6
            assert resid[4] == Fraction(5, 6) * (a[1] + a[2]) * a[5]


def test_criterion_6_reductions(eq):
    with Timer("criterion 6: reductions", 120):
        rng = random.Random(SEED)
        subs = refdata.reduction_subalgebras()
        cov2 = reduction.invariants_of(subs["S2"])
        r2 = reduction.reduce_equation(eq, cov2)
        rep = reduction.compare_reduced(r2, cov2.new_jet(xi=2, zeta=1, eta=1))
        assert rep.verdict == "equal" and isinstance(rep.scale, Rat) \
            and not rep.scale.is_zero
        for name, refname in (("S4", "redeq_s4_reference"),
                              ("S9", "redeq_s9_reference"),
                              ("S10", "redeq_s10_reference")):
            cov = reduction.invariants_of(subs[name])
            red = reduction.reduce_equation(eq, cov)
            _, ref = getattr(refdata, refname)()
            rep = reduction.compare_reduced(red, ref)
            assert rep.verdict == "equal", name
            assert isinstance(rep.scale, Rat) and not rep.scale.is_zero
        for name, refname in (("S8", "redeq_s8_reference"),
                              ("S12", "redeq_s12_reference")):
            cov = reduction.invariants_of(subs[name])
            red = reduction.reduce_equation(eq, cov)
            _, ref = getattr(refdata, refname)()
            rep = reduction.compare_reduced(red, ref, rng=rng, npoints=50,
                                            tol=1e-8)
            assert rep, name
        # the chained reduction
        cov8 = reduction.invariants_of(subs["S8"])
        r8 = reduction.reduce_equation(eq, cov8)
        eq1 = Equation(r8, "f", cov8.ctx_new.jet("f", xi=5, zeta=1))
        g1 = Generator(cov8.ctx_new, "f",
                       {"xi": rat(1), "zeta": rat(-1), "eta": rat(-1)},
                       rat(0))
        cov_a = reduction.invariants_of(g1, names=("theta", "vartheta"))
        r12 = reduction.reduce_equation(eq1, cov_a)
        eq2 = Equation(r12, "g", cov_a.ctx_new.jet("g", theta=6))
        g2 = Generator(cov_a.ctx_new, "g",
                       {"theta": rat(1), "vartheta": rat(-1)}, rat(0))
        cov_b = reduction.invariants_of(g2, names=("rho",))
        r13 = reduction.reduce_equation(eq2, cov_b)
        _, ref13 = refdata.redeq1_3_reference()
        rep13 = reduction.compare_reduced(r13, ref13)
        assert rep13.verdict == "equal" and isinstance(rep13.scale, Rat)
        e = r13
        for _ in range(3):
            e = reduction.formal_integral(e, "h", "rho")
        e = reduction.formal_integral(
            mul(e, cov_b.ctx_new.jet("h", rho=2)), "h", "rho")
        _, ref14 = refdata.redeq1_4_reference()
        rep14 = reduction.compare_reduced(e, ref14)
        assert rep14.verdict == "equal" and rep14.scale == rat(Fraction(-4, 3))


def test_criterion_7_solutions(eq):
    with Timer("criterion 7: solutions", 60):
        rng = random.Random(SEED)
        for name, want_mode in (("kdvsol1", "symbolic"),
                                ("kdvsol2", "symbolic"),
                                ("kdvsol4", "weierstrass")):
            sol = solutions.get_solution(name)
            rep = solutions.verify_solution(sol, eq, rng)
            assert rep["ok"] and rep["mode"] == want_mode, name
        for name in ("kdvsol3", "kdvsol6", "kdvsol7"):
            sol = solutions.get_solution(name)
            rep = solutions.verify_solution(sol, eq, rng, npoints=100,
                                            draws=5, tol=1e-8)
            assert rep["ok"], (name, rep)
        for name in solutions.all_solution_names():
            rep = solutions.consistency_u_equals_dx_q(
                solutions.get_solution(name), rng)
            assert rep["ok"], name
        excluded = solutions.verify_solution(
            solutions.get_solution("kdvsol5"), eq, rng)
        assert excluded["mode"] == "excluded"


def test_criterion_8_conservation_laws(eq, adj):
    with Timer("criterion 8: conservation laws", 300):
        assert adj.lhs == refdata.adjoint_reference()
        rng = random.Random(SEED)
        gens = refdata.printed_generators()
        for g in gens:
            T = conslaw.conserved_vector(g, eq)
            rep = conslaw.onshell_divergence_check(T, [eq, adj])
            if not rep["ok"]:  # numeric fallback permitted for T6, T7
                assert g.name in ("S6", "S7")
                num = conslaw.onshell_numeric_check(T, [eq, adj], rng,
                                                    npoints=40, tol=1e-8)
                assert num["ok"], g.name
        T5 = conslaw.conserved_vector(gens[4], eq)
        assert T5["t"] == refdata.t5_printed()["t"]
        T1 = conslaw.conserved_vector(gens[0], eq)
        printed_t1 = refdata.t1_printed()
        exact = {k: T1[k] == printed_t1[k] for k in "txyz"}
        for k in "txyz":
            keys = sorted(jets_of(T1[k]) | jets_of(printed_t1[k]),
                          key=lambda j: j.sort_key())
            for _ in range(30):
                env = {j: complex(rng.uniform(-1, 1)) for j in keys}
                env[sym("t")] = complex(rng.uniform(-1, 1))
                v1 = numeric_eval(T1[k], env)
                v2 = numeric_eval(printed_t1[k], env)
                assert abs(v1 - v2) <= 1e-8 * max(1.0, abs(v1), abs(v2))
        # exact-form differences would be reported; here there are none
        assert all(exact.values()), f"trivial-part diffs: {exact}"


def test_criterion_9_property_suites(eq):
    with Timer("criterion 9: property suites", 60):
        rng = random.Random(SEED)
        ctx = Context().add_independents("x", "y", "z", "t")
        ctx.add_dependent("u").add_dependent("q")
        pool = ["u", "u_x", "u_yz", "q_xt", "x", "t", "u^-2", "tanh(u)",
                "3/4", "q"]

        def rand_expr():
            k = rng.randint(1, 4)
            return parse("+".join(
                f"({rng.randint(-6, 6) or 1})*" + "*".join(
                    rng.choice(pool) for _ in range(rng.randint(1, 3)))
                for _ in range(k)), ctx)

        # canonicalization idempotence
        for _ in range(100):
            e = rand_expr()
            assert canonicalize(e) == e  # constructors canonicalize

        # evaluation commutes with canonicalization (raw rebuilt trees)
        from liekdv.expr import Add, Mul, Pow
        for _ in range(100):
            e1, e2 = rand_expr(), rand_expr()
            raw = Mul((Add((e1, e2)), Pow(Add((e2, rat(1))), -1)))
            cooked = canonicalize(raw)
            keys = sorted(jets_of(raw) | jets_of(cooked) | {sym("x"), sym("t")},
                          key=lambda a: a.sort_key())
            env = {k: complex(rng.uniform(0.3, 1.4), rng.uniform(0.1, 0.8))
                   for k in keys}
            try:
                v1, v2 = numeric_eval(raw, env), numeric_eval(cooked, env)
            except Exception:
                continue
            assert abs(v1 - v2) <= 1e-12 * max(1.0, abs(v1), abs(v2))

        # total derivatives commute
        for _ in range(100):
            e = rand_expr()
            assert (total_derivative(total_derivative(e, "x"), "y")
                    == total_derivative(total_derivative(e, "y"), "x"))

        # Euler annihilates divergences
        dpool = ["u", "u_x", "u_t", "u_xx", "u_xt"]
        for _ in range(100):
            f = parse("+".join(
                f"({rng.randint(-4, 4) or 2})*" + "*".join(
                    rng.choice(dpool) for _ in range(rng.randint(1, 2)))
                for _ in range(rng.randint(1, 2))), ctx)
            g = parse("+".join(
                f"({rng.randint(-4, 4) or 3})*" + "*".join(
                    rng.choice(dpool) for _ in range(rng.randint(1, 2)))
                for _ in range(rng.randint(1, 2))), ctx)
            div = add(total_derivative(f, "x"), total_derivative(g, "t"))
            assert euler_operator(div, "u").is_zero

        # adjoint action is an automorphism (symbolic in eps)
        basis = liealg.canonical_basis()
        cases = 0
        while cases < 100:
            w = rng.randint(1, 7)
            i, j = rng.randint(1, 7), rng.randint(1, 7)
            eps = sym(f"eps{w}")
            X, Y = basis.generators[i - 1], basis.generators[j - 1]
            lhs = liealg.adjoint_action(basis, w, commutator(X, Y), eps)
            rhs = commutator(liealg.adjoint_action(basis, w, X, eps),
                             liealg.adjoint_action(basis, w, Y, eps))
            assert lhs.coefficients() == rhs.coefficients()
            cases += 1

        # prolongation linearity
        base = refdata.BASE
        for _ in range(100):
            g1 = Generator(base, "q",
                           {"x": parse(rng.choice(["t", "x", "1", "q"]), base),
                            "y": rat(rng.randint(-3, 3))},
                           parse(rng.choice(["q", "x*t", "0", "y"]), base))
            g2 = Generator(base, "q",
                           {"z": parse(rng.choice(["z", "2", "t*t"]), base)},
                           parse(rng.choice(["1", "t", "x + q"]), base))
            a, b = rat(rng.randint(-5, 5)), rat(rng.randint(-5, 5))
            comb = g1.combine(g2, a, b)
            jv = base.jet("q", x=rng.randint(0, 2), y=rng.randint(0, 1),
                          t=rng.randint(0, 1))
            lhs = prolonged_coefficient(comb, jv)
            rhs = add(mul(a, prolonged_coefficient(g1, jv)),
                      mul(b, prolonged_coefficient(g2, jv)))
            assert lhs == rhs
