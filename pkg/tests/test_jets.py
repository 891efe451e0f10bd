"""Jet calculus: total derivatives, Euler operator, prolongation, on-shell
reduction."""

import pytest

from liekdv.expr import (NonDifferentiableError, add, mul, rat, sym)
from liekdv.jets import (Generator, euler_operator, onshell_reduce,
                         prolong_generator, prolonged_coefficient,
                         total_derivative)
from liekdv.parsing import Context, parse


@pytest.fixture()
def ctx():
    c = Context().add_independents("x", "y", "z", "t")
    c.add_dependent("q").add_dependent("u")
    return c


def test_dx_bumps_index(ctx):
    assert total_derivative(parse("q_y", ctx), "x") == parse("q_xy", ctx)


def test_product_rule(ctx):
    got = total_derivative(parse("u*u_x", ctx), "x")
    assert got == parse("u_x^2 + u*u_xx", ctx)


def test_dx_of_int_is_identity(ctx):
    assert total_derivative(parse("Int[u_y, x]", ctx), "x") == parse("u_y", ctx)


def test_dw_commutes_into_int(ctx):
    got = total_derivative(parse("Int[u_y, x]", ctx), "z")
    assert got == parse("Int[u_yz, x]", ctx)


def test_chain_rule_through_functions(ctx):
    got = total_derivative(parse("tanh(q)", ctx), "x")
    assert got == parse("(1 - tanh(q)^2)*q_x", ctx)


def test_abs_derivative_rejected(ctx):
    with pytest.raises(NonDifferentiableError):
        total_derivative(parse("abs(q)", ctx), "x")


def test_total_derivatives_commute(ctx, rng):
    pool = ["u", "u_x", "u_yz", "q_xt", "x", "t", "tanh(u)", "u^-1"]
    for _ in range(100):
        k = rng.randint(1, 3)
        text = "+".join(
            f"{rng.randint(1, 5)}*" + "*".join(
                rng.choice(pool) for _ in range(rng.randint(1, 3)))
            for _ in range(k))
        e = parse(text, ctx)
        assert (total_derivative(total_derivative(e, "x"), "y")
                == total_derivative(total_derivative(e, "y"), "x"))


# ---------------------------------------------------------------------------
# Euler operator
# ---------------------------------------------------------------------------

def test_euler_textbook(ctx):
    got = euler_operator(parse("1/2*u_x^2", ctx), "u")
    assert got == parse("-u_xx", ctx)


def test_euler_kdv_adjoint_hand_expansion(ctx):
    # term-by-term oracle: d/du slot gives -6 v u_x, the u_t slot -D_t v,
    # the u_x slot -D_x(-6 u v), the u_xxx slot -D_xxx v
    c2 = ctx.copy().add_dependent("v")
    L = parse("v*(u_t - 6*u*u_x + u_xxx)", c2)
    by_hand = add(
        parse("-6*v*u_x", c2),
        mul(rat(-1), total_derivative(parse("v", c2), "t")),
        mul(rat(-1), total_derivative(parse("-6*u*v", c2), "x")),
        mul(rat(-1), total_derivative(total_derivative(total_derivative(
            parse("v", c2), "x"), "x"), "x")),
    )
    assert euler_operator(L, "u") == by_hand
    assert by_hand == parse("-v_t + 6*u*v_x - v_xxx", c2)


def test_euler_annihilates_divergences(ctx, rng):
    pool = ["u", "u_x", "u_t", "u_xx", "u_xt"]
    for _ in range(100):
        def rand_expr():
            k = rng.randint(1, 3)
            return parse("+".join(
                f"({rng.randint(-4, 4) or 1})*" + "*".join(
                    rng.choice(pool) for _ in range(rng.randint(1, 2)))
                for _ in range(k)), ctx)
        f, g = rand_expr(), rand_expr()
        div = add(total_derivative(f, "x"), total_derivative(g, "t"))
        assert euler_operator(div, "u").is_zero


# ---------------------------------------------------------------------------
# prolongation
# ---------------------------------------------------------------------------

def test_translation_prolongs_to_zero(ctx):
    g = Generator(ctx, "q", {"x": rat(1)}, rat(0))
    table = prolong_generator(g, 3)
    assert all(v.is_zero for v in table.values())
    assert len(table) == 35  # multi-indices of order <= 3 in 4 variables


def test_scaling_coefficient_on_qx_via_direct_formula(ctx):
    # S7 = x dx + y dy + z dz + 3t dt - q dq; oracle: eta^J = D_J(W) + xi^j q_Jj
    # with W = -q - x q_x - y q_y - z q_z - 3 t q_t written out by hand
    g = Generator(ctx, "q",
                  {"x": sym("x"), "y": sym("y"), "z": sym("z"),
                   "t": mul(rat(3), sym("t"))},
                  mul(rat(-1), ctx.jet("q")))
    W = parse("-q - x*q_x - y*q_y - z*q_z - 3*t*q_t", ctx)
    oracle = add(total_derivative(W, "x"),
                 mul(sym("x"), ctx.jet("q", x=2)),
                 mul(sym("y"), ctx.jet("q", x=1, y=1)),
                 mul(sym("z"), ctx.jet("q", x=1, z=1)),
                 mul(rat(3), sym("t"), ctx.jet("q", x=1, t=1)))
    got = prolonged_coefficient(g, ctx.jet("q", x=1))
    assert got == oracle
    assert got == parse("-2*q_x", ctx)


@pytest.mark.parametrize("eta_text", ["t", "1"])
def test_s5_variants_prolong_by_the_same_formula(ctx, eta_text):
    # adjudicates eta = t against eta = 1: both satisfy eta^J = D_J(eta)
    g = Generator(ctx, "q", {}, parse(eta_text, ctx))
    eta = parse(eta_text, ctx)
    assert prolonged_coefficient(g, ctx.jet("q", t=1)) == \
        total_derivative(eta, "t")
    assert prolonged_coefficient(g, ctx.jet("q", x=1)) == \
        total_derivative(eta, "x")


def test_prolongation_is_linear(ctx, rng):
    for _ in range(100):
        g1 = Generator(ctx, "q",
                       {"x": parse(rng.choice(["t", "x", "1", "q"]), ctx),
                        "y": rat(rng.randint(-3, 3))},
                       parse(rng.choice(["q", "x*t", "0", "y"]), ctx))
        g2 = Generator(ctx, "q",
                       {"z": parse(rng.choice(["z", "2", "t*t"]), ctx)},
                       parse(rng.choice(["1", "t", "x + q"]), ctx))
        a, b = rat(rng.randint(-5, 5)), rat(rng.randint(-5, 5))
        comb = g1.combine(g2, a, b)
        j = ctx.jet("q", x=rng.randint(0, 2), y=rng.randint(0, 1),
                    t=rng.randint(0, 1))
        lhs = prolonged_coefficient(comb, j)
        rhs = add(mul(a, prolonged_coefficient(g1, j)),
                  mul(b, prolonged_coefficient(g2, j)))
        assert lhs == rhs


def test_order_cap(ctx):
    g = Generator(ctx, "q", {"x": rat(1)}, rat(0))
    with pytest.raises(Exception):
        prolong_generator(g, 7)


# ---------------------------------------------------------------------------
# on-shell reduction
# ---------------------------------------------------------------------------

def test_onshell_maps_lhs_to_zero(equation):
    assert onshell_reduce(equation.lhs, [equation]).is_zero


def test_onshell_descendant_equals_derivative_of_solved(equation, base_ctx):
    # oracle: substituting the t-derivative descendant must equal D_t of the
    # solved form
    j = base_ctx.jet("q", x=4, y=1, z=1, t=1)
    got = onshell_reduce(j, [equation])
    want = onshell_reduce(total_derivative(equation.solved, "t"), [equation])
    assert got == want


def test_onshell_leaves_free_expressions_alone(equation, base_ctx):
    e = parse("q_x*q_yz + tanh(q_t)", base_ctx)
    assert onshell_reduce(e, [equation]) == e


def test_onshell_idempotent(equation, base_ctx):
    e = parse("q_xxxxyz^2 + q_x*q_xxxxyzt", base_ctx)
    once = onshell_reduce(e, [equation])
    assert onshell_reduce(once, [equation]) == once


def test_onshell_kills_all_total_derivatives_of_lhs(equation):
    for v in ("x", "y", "z", "t"):
        d = total_derivative(equation.lhs, v)
        assert onshell_reduce(d, [equation]).is_zero
