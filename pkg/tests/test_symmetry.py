"""Invariance residuals, determining systems, and the restricted solver."""

import pytest

from liekdv import refdata, symmetry
from liekdv.expr import add, mul, rat, sym
from liekdv.jets import Equation, Generator
from liekdv.liealg import spans_same_space
from liekdv.parsing import Context, parse
from liekdv.symmetry import InfinitesimalAnsatz, extract_determining, \
    invariance_residual, solve_restricted


@pytest.fixture(scope="module")
def general_system(equation_module):
    ansatz = InfinitesimalAnsatz.general(refdata.BASE)
    return ansatz, extract_determining(ansatz, equation_module)


@pytest.fixture(scope="module")
def equation_module():
    from liekdv import hierarchy
    return hierarchy.new_kdv_equation()


def test_all_printed_generators_are_symmetries(equation, printed_gens):
    for g in printed_gens:
        assert invariance_residual(g, equation).is_zero, g.name


def test_eta_one_variant_is_also_a_symmetry(equation):
    assert invariance_residual(refdata.canonical_s5(), equation).is_zero


def test_x_scaling_alone_is_not_a_symmetry(equation, base_ctx):
    g = Generator(base_ctx, "q", {"x": sym("x")}, rat(0))
    assert not invariance_residual(g, equation).is_zero


def test_general_system_implies_tau_constraints(general_system):
    ansatz, system = general_system
    ctx = ansatz.ctx
    assert system.implies(ctx.jet("tau", x=1))
    assert system.implies(ctx.jet("tau", q=1))
    assert system.implies(ctx.jet("xi2", q=1))


def test_solved_family_satisfies_every_general_equation(general_system):
    ansatz, system = general_system
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


def test_perturbed_generators_fail(general_system, rng):
    # cross-consistency: violating the family must break some equation
    ansatz, system = general_system
    ctx = ansatz.ctx.copy()
    ctx.add_dependent("F1", ("t",)).add_dependent("F2", ("t",))
    ctx.add_constants("C1", "C2", "C3", "C4")
    wrong_slots = ["xi1", "xi2", "tau", "eta"]
    perturbations = ["x^2", "q*y", "t*q", "x*y", "q^2", "z*t"]
    for k in range(20):
        family = {
            "xi1": parse("C1*x + F1", ctx),
            "xi2": parse("C1*y + C2", ctx),
            "xi3": parse("C1*z + C4", ctx),
            "tau": parse("3*C1*t + C3", ctx),
            "eta": parse("-1/6*(x + 9*y + 9*z)*F1_t - C1*q + F2", ctx),
        }
        slot = wrong_slots[k % len(wrong_slots)]
        bump = parse(perturbations[rng.randrange(len(perturbations))], ctx)
        family[slot] = add(family[slot], mul(rat(rng.randint(1, 4)), bump))
        assert not system.satisfied_by(family)


def test_extraction_is_deterministic(equation_module):
    a1 = InfinitesimalAnsatz.general(refdata.BASE)
    a2 = InfinitesimalAnsatz.general(refdata.BASE)
    s1 = extract_determining(a1, equation_module)
    s2 = extract_determining(a2, equation_module)
    assert [str(m) for m in s1.members] == [str(m) for m in s2.members]
    assert len(set(s1.members)) == len(s1.members)


def test_restricted_solution_matches_printed_family(equation_module):
    ansatz = InfinitesimalAnsatz.restricted_3p1(refdata.BASE)
    system = extract_determining(ansatz, equation_module)
    family = solve_restricted(system)
    assert not family.remainder
    a = family.assignment
    ctx = ansatz.ctx
    # the printed family: with C1 = -m, F1 = b, F2 = n
    assert a["a"] == mul(rat(-1), sym("m"))
    assert a["c"] == mul(rat(-1), sym("m"))
    assert a["p"] == parse("-1/6*b_t", ctx)
    assert a["r"] == parse("-3/2*b_t", ctx)
    assert a["s"] == parse("-3/2*b_t", ctx)
    assert sorted(family.free_funcs) == ["b", "n"]


def test_specialized_basis_spans_printed_generators(equation_module,
                                                    printed_gens):
    ansatz = InfinitesimalAnsatz.restricted_3p1(refdata.BASE)
    system = extract_determining(ansatz, equation_module)
    family = solve_restricted(system)
    ctx = ansatz.ctx
    ctx.add_constants("C5", "C6", "C7")
    special = family.specialize({"b": parse("C5*t + C6", ctx),
                                 "n": parse("C7", ctx)})
    params = ["m", "d", "e", "K1", "C5", "C6", "C7"]
    basis = []
    for p in params:
        mapping = {name: (rat(1) if name == p else rat(0)) for name in params}
        g = special
        coeffs = {}
        for slot, e in [(v, g.xi[v]) for v in ctx.independents] + \
                       [("q", g.eta)]:
            for name, val in mapping.items():
                from liekdv.expr import replace_atoms
                e = replace_atoms(e, {sym(name): val})
            coeffs[slot] = e
        basis.append(Generator(refdata.BASE, "q",
                               {v: coeffs[v] for v in ctx.independents},
                               coeffs["q"]))
    basis = [g for g in basis if not g.is_zero()]
    assert len(basis) == 7
    # the C7 member is d/dq, so the family spans the adjudicated basis; the
    # printed list's t d/dq variant lies outside it (the known S5 slip)
    adjudicated = printed_gens[:4] + [refdata.canonical_s5()] + printed_gens[5:]
    assert spans_same_space(basis, adjudicated)
    assert not spans_same_space(basis, printed_gens)


def test_family_members_are_symmetries(equation_module, rng):
    ansatz = InfinitesimalAnsatz.restricted_3p1(refdata.BASE)
    system = extract_determining(ansatz, equation_module)
    family = solve_restricted(system)
    ctx = ansatz.ctx
    for _ in range(5):
        consts = {name: rat(rng.randint(-4, 4)) for name in
                  ["m", "d", "e", "K1"]}
        poly = " + ".join(f"({rng.randint(-3, 3)})*t^{k}" for k in range(3))
        inst = family.specialize({"b": parse(poly, ctx),
                                  "n": parse(f"({rng.randint(-3, 3)})*t", ctx)})
        g = inst
        coeffs = {}
        from liekdv.expr import replace_atoms
        for slot in list(ctx.independents) + ["q"]:
            e = g.eta if slot == "q" else g.xi[slot]
            e = replace_atoms(e, {sym(k): v for k, v in consts.items()})
            coeffs[slot] = e
        gen = Generator(refdata.BASE, "q",
                        {v: coeffs[v] for v in refdata.BASE.independents},
                        coeffs["q"])
        assert invariance_residual(gen, equation_module).is_zero


def test_classical_kdv_smoke():
    ctx = Context().add_independents("x", "t").add_dependent("u")
    eq = Equation(parse("u_t - 6*u*u_x + u_xxx", ctx), "u", ctx.jet("u", x=3))
    # the four classical generators satisfy the extracted system
    ansatz = InfinitesimalAnsatz.restricted_kdv(ctx)
    system = extract_determining(ansatz, eq)
    family = solve_restricted(system)
    assert not family.remainder
    assert len(family.free_consts) + len(
        [c for c in ansatz.unknown_consts
         if family.assignment[c] == sym(c)]) == 4
    for xi, tau, eta in [("1", "0", "0"), ("0", "1", "0"),
                         ("t", "0", "-1/6"), ("x", "3*t", "-2*u")]:
        g = Generator(ctx, "u", {"x": parse(xi, ctx), "t": parse(tau, ctx)},
                      parse(eta, ctx))
        assert invariance_residual(g, eq).is_zero


def test_nonlinear_member_reported_not_guessed():
    ctx = Context().add_independents("x", "t").add_dependent("u")
    ansatz = InfinitesimalAnsatz.restricted_kdv(ctx)
    fake = symmetry.DeterminingSystem(
        ansatz, [mul(sym("m"), sym("m"))])  # quadratic in an unknown
    with pytest.raises(symmetry.SolveError):
        solve_restricted(fake)


def test_unresolved_constraint_reported_as_remainder():
    ctx = Context().add_independents("x", "t").add_dependent("u")
    ansatz = InfinitesimalAnsatz.restricted_kdv(ctx)
    actx = ansatz.ctx
    # b = b' has no polynomial resolution; it must surface as a remainder
    fake = symmetry.DeterminingSystem(
        ansatz, [add(actx.jet("b"), mul(rat(-1), actx.jet("b", t=1)))])
    family = solve_restricted(fake)
    assert family.remainder
