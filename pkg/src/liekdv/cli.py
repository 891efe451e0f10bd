"""Command line entry point.

Exit codes: 0 verified/success, 1 verification failure, 2 usage error.
All randomized probing is seeded through --seed for reproducible output.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import conslaw, hierarchy, liealg, reduction, refdata, solutions, symmetry
from .expr import Expr, as_terms, to_text
from .jets import Generator
from .parsing import parse

SCHEMA_VERSION = 1


def _emit(payload: dict, fmt: str, text_renderer) -> None:
    if fmt == "json":
        payload = dict(payload)
        payload["schema_version"] = SCHEMA_VERSION
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        text_renderer(payload)


def _term_list(e: Expr):
    out = []
    for c, factors in as_terms(e):
        out.append({"coefficient": str(c),
                    "factors": [to_text(f) for f in factors]})
    return out


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_derive(args) -> int:
    lhs_u, scale = hierarchy.assemble_new_kdv()
    eq = hierarchy.potential_transform(lhs_u)
    q_match = eq.lhs == refdata.new_kdv_q_reference()
    payload = {
        "u_form": to_text(lhs_u),
        "q_form": to_text(eq.lhs),
        "u_form_terms": _term_list(lhs_u),
        "q_form_terms": _term_list(eq.lhs),
        "u_scaling_discrepancy": None if scale is None else to_text(scale),
        "q_matches_reference": q_match,
    }

    def text(p):
        print("u-form:", p["u_form"])
        print("q-form:", p["q_form"])
        print("scaling discrepancy:", p["u_scaling_discrepancy"])
        print("q-form matches reference:", p["q_matches_reference"])

    _emit(payload, args.format, text)
    return 0 if (scale is None and q_match) else 1


def cmd_detsys(args) -> int:
    eq = hierarchy.new_kdv_equation()
    if args.mode == "general":
        ansatz = symmetry.InfinitesimalAnsatz.general(refdata.BASE)
    else:
        ansatz = symmetry.InfinitesimalAnsatz.restricted_3p1(refdata.BASE)
    system = symmetry.extract_determining(ansatz, eq)
    payload = {"mode": args.mode,
               "equations": [to_text(m) for m in system.members]}

    def text(p):
        for m in p["equations"]:
            print(m, "= 0")

    _emit(payload, args.format, text)
    return 0


def _load_generator(spec: str) -> Generator:
    gens = {g.name: g for g in refdata.printed_generators()}
    subs = refdata.reduction_subalgebras()
    if spec in gens:
        return gens[spec]
    if spec in subs:
        return subs[spec]
    if os.path.exists(spec):
        with open(spec) as fh:
            data = json.load(fh)
        ctx = refdata.BASE
        xi = {v: parse(data.get(f"xi_{v}", "0"), ctx)
              for v in ctx.independents}
        eta = parse(data.get("eta", "0"), ctx)
        return Generator(ctx, "q", xi, eta, name=data.get("name", "custom"))
    raise SystemExit(2)


def cmd_verify_sym(args) -> int:
    eq = hierarchy.new_kdv_equation()
    g = _load_generator(args.generator)
    r = symmetry.invariance_residual(g, eq)
    payload = {"generator": args.generator, "residual": to_text(r),
               "ok": r.is_zero}

    def text(p):
        print(f"{p['generator']}: residual {'0' if p['ok'] else p['residual']}")

    _emit(payload, args.format, text)
    return 0 if r.is_zero else 1


def cmd_tables(args) -> int:
    basis = liealg.canonical_basis()
    commut = liealg.commutator_table(basis)
    adj = liealg.adjoint_table(basis)
    d1 = liealg.commutator_discrepancies(basis)
    d2 = liealg.adjoint_discrepancies(basis)
    payload = {
        "s5_variant": basis.s5_variant,
        "structure_constants": {
            f"[{i},{j}]": [str(c) for c in basis.bracket_vector(i, j)]
            for i in range(1, 8) for j in range(1, 8)},
        "commutators": {f"[{i},{j}]": _vec_text(commut[(i, j)])
                        for (i, j) in sorted(commut)},
        "adjoint": {f"Ad{w}(S{j})": _advec_text(adj[(w, j)])
                    for (w, j) in sorted(adj)},
        "discrepancies": {
            "commutator_table": [
                {"cell": list(d["cell"]),
                 "printed": [str(c) for c in d["printed"]],
                 "recomputed": [str(c) for c in d["recomputed"]]}
                for d in d1],
            "adjoint_table": [
                {"cell": list(d["cell"]), "printed": d["printed"],
                 "recomputed": d["recomputed"]} for d in d2],
        },
    }

    def text(p):
        print("S5 variant selected:", p["s5_variant"])
        print("commutator table:")
        for k, v in p["commutators"].items():
            print(f"  {k} = {v}")
        print("adjoint table:")
        for k, v in p["adjoint"].items():
            print(f"  {k} = {v}")
        print(f"table discrepancies: "
              f"{len(p['discrepancies']['commutator_table'])} commutator, "
              f"{len(p['discrepancies']['adjoint_table'])} adjoint")
        for d in p["discrepancies"]["commutator_table"]:
            print("  commutator cell", d["cell"])
        for d in p["discrepancies"]["adjoint_table"]:
            print("  adjoint cell", d["cell"])

    _emit(payload, args.format, text)
    within = ({tuple(d["cell"]) for d in d1} <= liealg.DOCUMENTED_TABLE1_CELLS
              and {tuple(d["cell"]) for d in d2}
              <= liealg.DOCUMENTED_TABLE2_CELLS)
    return 0 if within else 1


def _vec_text(vec) -> str:
    parts = []
    for k, c in enumerate(vec):
        if c == 0:
            continue
        parts.append(f"({c})*S{k+1}")
    return " + ".join(parts) if parts else "0"


def _advec_text(vec) -> str:
    parts = []
    for k, c in enumerate(vec):
        if isinstance(c, Expr) and c.is_zero:
            continue
        parts.append(f"({c})*S{k+1}")
    return " + ".join(parts) if parts else "0"


def cmd_optimal(args) -> int:
    rng = random.Random(args.seed)
    cb = liealg.canonical_basis()
    pb = liealg.printed_basis()
    inv = liealg.invariant_system(pb)
    theta_match = inv["theta"] == refdata.theta_printed()
    ok_exact = True
    residual_cells = set()
    for _ in range(20):
        a = [Fraction(rng.randint(-9, 9), rng.randint(1, 7))
             for _ in range(6)] + [Fraction(1)]
        eps = liealg.paper_eps_values(a)
        target = [0, 0, 0, 0, 0, 0, 1]
        rp = liealg.verify_optimal_representative(pb, a, eps, target)
        rc = liealg.verify_optimal_representative(cb, a, eps, target)
        ok_exact &= rp["ok"]
        residual_cells.update(
            i + 1 for i, r in enumerate(rc["residual"]) if r != 0)
    payload = {
        "theta": [to_text(t) for t in inv["theta"]],
        "theta_matches_reference": theta_match,
        "phi_system": [to_text(e) for e in inv["phi_system"]],
        "phi_a7_verified": inv["phi_a7_verified"],
        "printed_tensor_mapping_exact": ok_exact,
        "recomputed_tensor_residual_components": sorted(residual_cells),
        "optimal_system": [name for name, _ in refdata.OPTIMAL_SYSTEM_VECTORS],
    }

    def text(p):
        for i, t in enumerate(p["theta"], 1):
            print(f"Theta{i} = {t}")
        print("matches reference:", p["theta_matches_reference"])
        print("Phi = a7 satisfies the generated system:",
              p["phi_a7_verified"])
        print("representative mapping exact (printed tensor):",
              p["printed_tensor_mapping_exact"])
        print("residual components with recomputed tensor:",
              p["recomputed_tensor_residual_components"])
        print("optimal system:", ", ".join(p["optimal_system"]))

    _emit(payload, args.format, text)
    ok = (theta_match and inv["phi_a7_verified"] and ok_exact
          and residual_cells <= {5})
    return 0 if ok else 1


REDUCTION_REFS = {
    "S2": None,
    "S4": "redeq_s4_reference",
    "S8": "redeq_s8_reference",
    "S9": "redeq_s9_reference",
    "S10": "redeq_s10_reference",
    "S11": "redeq_s11_reference",
    "S12": "redeq_s12_reference",
}


def cmd_reduce(args) -> int:
    eq = hierarchy.new_kdv_equation()
    subs = refdata.reduction_subalgebras()
    name = args.subalgebra
    if name not in subs:
        print(f"unknown subalgebra {name}", file=sys.stderr)
        return 2
    cov = reduction.invariants_of(subs[name])
    reduced = reduction.reduce_equation(eq, cov)
    payload = {"subalgebra": name,
               "invariants": {n: to_text(e) for n, e in cov.new_vars},
               "reduced": to_text(reduced)}
    if name == "S2":
        target = cov.ctx_new.jet(cov.dep_new, xi=2, zeta=1, eta=1)
        rep = reduction.compare_reduced(reduced, target)
    else:
        _, ref = getattr(refdata, REDUCTION_REFS[name])()
        rng = random.Random(args.seed)
        rep = reduction.compare_reduced(reduced, ref)
        if not rep:
            rep = reduction.compare_reduced(reduced, ref, rng=rng,
                                            tol=args.tolerance)
    payload["comparison"] = {"verdict": rep.verdict,
                             "scale": str(rep.scale), "detail": rep.detail}

    def text(p):
        print("invariants:", p["invariants"])
        print("reduced:", p["reduced"])
        print("comparison:", p["comparison"])

    _emit(payload, args.format, text)
    return 0 if rep else 1


def cmd_verify_solution(args) -> int:
    eq = hierarchy.new_kdv_equation()
    rng = random.Random(args.seed)
    try:
        sol = solutions.get_solution(args.name)
    except solutions.SolutionError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    fixed = {}
    for p in args.params or []:
        k, v = p.split("=", 1)
        fixed[k] = parse(v, sol.ctx)
    rep = solutions.verify_solution(sol, eq, rng, tol=args.tolerance,
                                    fixed_params=fixed or None)
    cons = solutions.consistency_u_equals_dx_q(sol, rng)
    payload = {"verification": rep, "u_dx_q_consistency": cons}

    def text(p):
        r = p["verification"]
        print(f"{r['name']}: mode={r['mode']} ok={r['ok']} "
              f"{r.get('detail', '')}")
        print(f"u = D_x q: ok={p['u_dx_q_consistency']['ok']} "
              f"{p['u_dx_q_consistency']['detail']}")

    _emit(payload, args.format, text)
    return 0 if (rep["ok"] and cons["ok"]) else 1


def cmd_conslaw(args) -> int:
    eq = hierarchy.new_kdv_equation()
    adj = conslaw.adjoint_equation(eq)
    gens = {g.name: g for g in refdata.printed_generators()}
    if args.generator not in gens:
        print(f"unknown generator {args.generator}", file=sys.stderr)
        return 2
    T = conslaw.conserved_vector(gens[args.generator], eq)
    payload = {"generator": args.generator,
               "components": {k: to_text(v) for k, v in T.items()}}
    status = 0
    if args.check or not (args.emit or args.check_reference):
        rep = conslaw.onshell_divergence_check(T, [eq, adj])
        payload["divergence_check"] = {
            "ok": rep["ok"], "residual": to_text(rep["residual"])}
        if not rep["ok"]:
            rng = random.Random(args.seed)
            num = conslaw.onshell_numeric_check(T, [eq, adj], rng,
                                                tol=args.tolerance)
            payload["numeric_check"] = {"ok": num["ok"],
                                        "worst": num["worst"]}
            status = 0 if num["ok"] else 1
    if args.check_reference:
        with open(args.check_reference) as fh:
            data = json.load(fh)
        diffs = {}
        for k in ("t", "x", "y", "z"):
            ref = parse(data[k], refdata.BASE)
            diffs[k] = "match" if ref == T[k] else "differs"
        payload["reference_comparison"] = diffs
        if any(v != "match" for v in diffs.values()):
            status = 1

    def text(p):
        if args.emit or not args.check:
            for k, v in p["components"].items():
                print(f"T^{k} = {v}")
        if "divergence_check" in p:
            print("divergence residual 0:", p["divergence_check"]["ok"])
        if "reference_comparison" in p:
            print("reference comparison:", p["reference_comparison"])

    _emit(payload, args.format, text)
    return status


def _parse_fix(text: str) -> dict:
    out = {}
    for piece in text.split(","):
        k, v = piece.split("=")
        out[k.strip()] = float(v)
    return out


def _parse_range(text: str):
    name, spec = text.split("=")
    lo, hi, n = spec.split(":")
    return name.strip(), (float(lo), float(hi), int(n))


def cmd_emit_grid(args) -> int:
    try:
        sol = solutions.get_solution(args.name)
    except solutions.SolutionError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    fixed = _parse_fix(args.fix)
    ranges = dict(_parse_range(r) for r in args.range or [])
    params = {}
    for p in args.params or []:
        k, v = p.split("=", 1)
        params[k] = parse(v, sol.ctx)
    try:
        rows = solutions.emit_grid(sol, fixed, ranges, params,
                                   complex_ok=args.complex)
    except solutions.SolutionError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    text = "\n".join(",".join(r) for r in rows) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="liekdv",
        description="Exact symbolic verification engine for a "
                    "(3+1)-dimensional KdV-type equation")
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for all randomized numeric probing")
    ap.add_argument("--tolerance", type=float, default=1e-8,
                    help="relative tolerance for numeric checks")
    ap.add_argument("--format", choices=("text", "json"),
                    default=os.environ.get("LIEKDV_FORMAT", "text"))
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("derive", help="assemble the equation and its potential "
                                  "form").set_defaults(func=cmd_derive)

    p = sub.add_parser("detsys", help="emit the symmetry determining system")
    p.add_argument("--mode", choices=("general", "restricted"),
                   default="general")
    p.set_defaults(func=cmd_detsys)

    p = sub.add_parser("verify-sym", help="check a generator's invariance "
                                          "residual")
    p.add_argument("generator", help="S1..S7, S8..S12, or a JSON file")
    p.set_defaults(func=cmd_verify_sym)

    sub.add_parser("tables", help="commutator/adjoint tables and "
                                  "discrepancy report").set_defaults(
        func=cmd_tables)

    sub.add_parser("optimal", help="invariant function and representative "
                                   "mapping checks").set_defaults(
        func=cmd_optimal)

    p = sub.add_parser("reduce", help="similarity reduction along a "
                                      "subalgebra")
    p.add_argument("--subalgebra", required=True,
                   choices=("S2", "S4", "S8", "S9", "S10", "S11", "S12"))
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify-solution", help="residual check of a "
                                               "closed-form solution")
    p.add_argument("name")
    p.add_argument("--params", nargs="*", default=None)
    p.set_defaults(func=cmd_verify_solution)

    p = sub.add_parser("conslaw", help="conserved vector generation and "
                                       "divergence check")
    p.add_argument("--generator", required=True)
    p.add_argument("--emit", action="store_true")
    p.add_argument("--check", action="store_true")
    p.add_argument("--check-reference", metavar="FILE",
                   help="JSON file with component transcriptions to compare")
    p.set_defaults(func=cmd_conslaw)

    p = sub.add_parser("emit-grid", help="numeric lattice of a solution")
    p.add_argument("name")
    p.add_argument("--fix", required=True, help="e.g. y=0,z=0")
    p.add_argument("--range", action="append",
                   help="e.g. x=-20:20:200 (repeatable)")
    p.add_argument("--complex", action="store_true")
    p.add_argument("--params", nargs="*", default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_emit_grid)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
