"""Command-line interface.

Every command reads UTF-8 JSON files, prints one finding per line as
code<TAB>location<TAB>detail followed by a summary, and exits with 0 on
success, 1 on a mathematical failure, and 2 on an input error.  All runs are
deterministic for a fixed --seed; reports are byte-stable.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from fanalg import serialize
from fanalg.algebra import (
    central,
    delta,
    matrix_unit,
    membership_report,
    mu,
    random_member,
    required_divisor,
    unit,
)
from fanalg.descent import check_cocycle, glue
from fanalg.diagram import dupont_demo, hom, relation_report, rep_check, validate
from fanalg.equivariant import ag_structure, associativity_report, inflate, validate_equivariant
from fanalg.fan import cone_key, covering_pairs, fan_report, projective_line_fan, standard_fan
from fanalg.laurent import LaurentPoly, binomial
from fanalg.report import Report

PASS, FAIL, BAD_INPUT = 0, 1, 2


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _dump_json(data, path: str | None) -> None:
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _resolve_fan(data, base: Path):
    """The "fan" slot holds either an inline fan object or a path to one."""
    if isinstance(data, str):
        return serialize.fan_from_data(_load_json(str((base / data) if not Path(data).is_absolute() else Path(data))))
    return serialize.fan_from_data(data)


def _load_fan_file(path: str):
    return serialize.fan_from_data(_load_json(path))


def _load_with_fan(path: str):
    data = _load_json(path)
    fan = _resolve_fan(data["fan"], Path(path).parent)
    return data, fan


def _emit(report: Report, label: str) -> int:
    for line in report.lines():
        print(line)
    print(f"{label}: {report.summary()}")
    return PASS if report.ok else FAIL


# ---------------------------------------------------------------------------
# fan commands


def cmd_fan_check(args) -> int:
    try:
        fan = _load_fan_file(args.fan)
    except ValueError as e:
        print(f"build\tfan\t{e}")
        print("fan check: SUMMARY: fail (1 finding)")
        return FAIL
    check = fan_report(fan)
    rep = Report()
    if not check.ok:
        sigma, tau = check.witness
        rep.add("fan", f"({cone_key(sigma)})&({cone_key(tau)})", "cones do not meet along a common face")
    code = _emit(rep, "fan check")
    if not check.verified:
        print("warning: pairwise cone intersections not fully verified at this size")
    return code


def cmd_fan_faces(args) -> int:
    fan = _load_fan_file(args.fan)
    print(f"rank {fan.rank}, {len(fan.rays)} rays, {len(fan.cones)} cones")
    for c in fan.cone_list():
        star = " max" if c in fan.maximal else ""
        print(f"cone ({cone_key(c)}) dim {len(c)}{star}")
    for tau, sigma, ray in covering_pairs(fan):
        print(f"covering ({cone_key(tau)}) < ({cone_key(sigma)}) new ray {ray} {list(fan.rays[ray])}")
    return PASS


# ---------------------------------------------------------------------------
# algebra commands


def cmd_alg_member(args) -> int:
    fan = _load_fan_file(args.fan)
    data = _load_json(args.element)
    x = serialize.element_from_data(data, fan, check=False)
    rep = membership_report(fan, x.entries)
    return _emit(rep, "alg member")


def cmd_alg_mul(args) -> int:
    fan = _load_fan_file(args.fan)
    check = args.verify == "full"
    a = serialize.element_from_data(_load_json(args.a), fan, check=check)
    b = serialize.element_from_data(_load_json(args.b), fan, check=check)
    prod = a * b
    _dump_json(serialize.element_to_data(prod), args.output)
    print("alg mul: SUMMARY: pass")
    return PASS


def cmd_alg_mudelta(args) -> int:
    fan = _load_fan_file(args.fan)
    rng = random.Random(args.seed)
    rep = Report()
    total = 0
    for sigma in fan.maximal:
        for tau in fan.maximal:
            for k in range(args.trials):
                x = random_member(fan, rng, row_cone=sigma, col_cone=tau)
                if mu(delta(x, sigma, tau)) != x:
                    rep.add(
                        "mudelta",
                        f"({cone_key(sigma)})x({cone_key(tau)})",
                        f"trial {k}: mu(delta(x)) != x",
                    )
                total += 1
    print(f"checked {total} members over {len(fan.maximal) ** 2} ordered maximal cone pairs")
    return _emit(rep, "alg mudelta")


# ---------------------------------------------------------------------------
# module commands


def cmd_mod_validate(args) -> int:
    data, fan = _load_with_fan(args.module)
    m = serialize.module_from_data(data, fan)
    return _emit(validate(m), "mod validate")


def cmd_mod_repcheck(args) -> int:
    data, fan = _load_with_fan(args.module)
    m = serialize.module_from_data(data, fan)
    out = rep_check(m, trials=args.trials, seed=args.seed)
    rep = Report()
    if not out.ok:
        rep.add("repcheck", "module", out.failure or "failure")
    print(f"checked {out.trials} random element pairs")
    return _emit(rep, "mod repcheck")


def cmd_mod_relations(args) -> int:
    fan = _load_fan_file(args.fan)
    print(relation_report(fan).render_text())
    return PASS


def cmd_mod_hom(args) -> int:
    data_a, fan_a = _load_with_fan(args.a)
    data_b, fan_b = _load_with_fan(args.b)
    if fan_a != fan_b:
        raise ValueError("fan mismatch between the two modules")
    ma = serialize.module_from_data(data_a, fan_a)
    mb = serialize.module_from_data(data_b, fan_b)
    dim, basis = hom(ma, mb)
    print(f"hom dimension {dim}")
    for i, f in enumerate(basis):
        for c in fan_a.cone_list():
            block = f.blocks[c]
            if not block.is_zero():
                flat = " ".join(str(x) for x in block.flat())
                print(f"basis {i} block ({cone_key(c)}) {block.m}x{block.n}: {flat}")
    return PASS


# ---------------------------------------------------------------------------
# descent commands


def cmd_desc_check(args) -> int:
    data, fan = _load_with_fan(args.datum)
    d = serialize.descent_from_data(data, fan)
    return _emit(check_cocycle(d), "desc check")


def cmd_desc_glue(args) -> int:
    data, fan = _load_with_fan(args.datum)
    d = serialize.descent_from_data(data, fan)
    rep = check_cocycle(d)
    if not rep.ok:
        return _emit(rep, "desc glue")
    m = glue(d)
    _dump_json(serialize.module_to_data(m), args.output)
    print("desc glue: SUMMARY: pass")
    return PASS


# ---------------------------------------------------------------------------
# equivariant commands


def cmd_equi_present(args) -> int:
    q = serialize.quotient_from_data(_load_json(args.spec))
    print(f"quotient map: {q.target_rank} x {q.source_rank}")
    for row in q.q.entries:
        print("Q " + " ".join(str(x) for x in row))
    print("invariant factors d_i: " + (" ".join(str(x) for x in q.d) if q.d else "(none)"))
    print("coordinates: z_i -> u_i^d_i after the recorded unimodular changes")
    for row in q.row_transform.entries:
        print("U " + " ".join(str(x) for x in row))
    for row in q.col_transform.entries:
        print("V " + " ".join(str(x) for x in row))
    return PASS


def cmd_equi_structure(args) -> int:
    fan = _load_fan_file(args.fan)
    q = serialize.quotient_from_data(_load_json(args.quotient))
    s = ag_structure(fan, q, check=False)
    rep = associativity_report(s, samples=None if len(fan.cones) <= 7 else 200, seed=args.seed)
    for (sigma, tau, rho), c in sorted(s.table.items()):
        print(f"f({cone_key(sigma)}|{cone_key(tau)}) f({cone_key(tau)}|{cone_key(rho)}) = [{c}] f({cone_key(sigma)}|{cone_key(rho)})")
    return _emit(rep, "equi structure")


def cmd_equi_validate(args) -> int:
    data, fan = _load_with_fan(args.eqmodule)
    m = serialize.eq_module_from_data(data, fan)
    return _emit(validate_equivariant(m), "equi validate")


def cmd_equi_inflate(args) -> int:
    data, fan = _load_with_fan(args.eqmodule)
    m = serialize.eq_module_from_data(data, fan)
    rep = validate_equivariant(m)
    if not rep.ok:
        return _emit(rep, "equi inflate")
    out = inflate(m)
    _dump_json(serialize.module_to_data(out), args.output)
    print("equi inflate: SUMMARY: pass")
    return PASS


# ---------------------------------------------------------------------------
# demos


def cmd_demo_dupont(args) -> int:
    out = dupont_demo(seed=args.seed)
    print(out.render())
    return PASS if out.ok else FAIL


def cmd_demo_c1(args) -> int:
    fan = standard_fan(1)
    e1 = matrix_unit(fan, (), ())
    e2 = matrix_unit(fan, (0,), (0,))
    u = matrix_unit(fan, (0,), (), binomial((1,)))
    v = matrix_unit(fan, (), (0,))
    one = unit(fan)
    print("generator images on the one-ray fan (zero cone first):")
    print(f"  e1 -> {e1}")
    print(f"  e2 -> {e2}")
    print(f"  u  -> {u}")
    print(f"  v  -> {v}")
    checks = {
        "e1 + e2 = 1": e1 + e2 == one,
        "e1, e2 idempotent": e1 * e1 == e1 and e2 * e2 == e2,
        "e2 u = u = u e1": e2 * u == u and u * e1 == u,
        "e1 v = v = v e2": e1 * v == v and v * e2 == v,
    }
    s = one + v * u + u * v
    t_unit = central(fan, LaurentPoly.monomial((1,)))
    checks["s = 1 + vu + uv -> t*1: unit"] = s == t_unit and all(p.is_unit() for p in s.entries.values())
    ok = True
    for name, val in checks.items():
        print(f"  {name}: {'PASS' if val else 'FAIL'}")
        ok = ok and val
    print(f"demo c1: SUMMARY: {'pass' if ok else 'fail'}")
    return PASS if ok else FAIL


def cmd_demo_p1(args) -> int:
    fan = projective_line_fan()
    cones = fan.cone_list()
    print("forced divisor pattern on the three-cone fan of the projective line:")
    for sigma in cones:
        row = []
        for tau in cones:
            d = required_divisor(fan, sigma, tau)
            row.append("free" if d == LaurentPoly.one(1) else f"({d})*free")
        print("  " + " | ".join(f"{x:>14}" for x in row))
    base = {}
    for sigma in cones:
        for tau in cones:
            base[(sigma, tau)] = required_divisor(fan, sigma, tau)
    ok = membership_report(fan, base).ok
    print(f"  matrix with every slot = its divisor: {'member' if ok else 'rejected'}")
    bad = 0
    for sigma in cones:
        for tau in cones:
            if required_divisor(fan, sigma, tau) == LaurentPoly.one(1):
                continue
            perturbed = dict(base)
            perturbed[(sigma, tau)] = LaurentPoly.one(1)
            rep = membership_report(fan, perturbed)
            witness_ok = (not rep.ok) and f"({cone_key(sigma)})x({cone_key(tau)})" in rep.findings[0].location
            print(
                f"  slot ({cone_key(sigma)})x({cone_key(tau)}) perturbed to 1: "
                f"{'rejected with witness' if witness_ok else 'NOT rejected'}"
            )
            bad += 0 if witness_ok else 1
    good = ok and bad == 0
    print(f"demo p1: SUMMARY: {'pass' if good else 'fail'}")
    return PASS if good else FAIL


# ---------------------------------------------------------------------------


def _run_flags(q: argparse.ArgumentParser) -> None:
    # also accepted after the subcommand; SUPPRESS keeps the global value
    q.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    q.add_argument("--trials", type=int, default=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fanalg", description="fan algebras, diagram modules, descent, equivariant base change")
    p.add_argument("--seed", type=int, default=0, help="seed for all randomized runs")
    p.add_argument("--trials", type=int, default=100, help="trial count for property runs")
    p.add_argument("--verify", choices=["fast", "full"], default="full", help="fast skips input membership validation")
    sub = p.add_subparsers(dest="group", required=True)

    fan_p = sub.add_parser("fan").add_subparsers(dest="cmd", required=True)
    q = fan_p.add_parser("check")
    q.add_argument("fan")
    q.set_defaults(func=cmd_fan_check)
    q = fan_p.add_parser("faces")
    q.add_argument("fan")
    q.set_defaults(func=cmd_fan_faces)

    alg_p = sub.add_parser("alg").add_subparsers(dest="cmd", required=True)
    q = alg_p.add_parser("member")
    q.add_argument("fan")
    q.add_argument("element")
    q.set_defaults(func=cmd_alg_member)
    q = alg_p.add_parser("mul")
    q.add_argument("fan")
    q.add_argument("a")
    q.add_argument("b")
    q.add_argument("-o", "--output", default=None)
    q.set_defaults(func=cmd_alg_mul)
    q = alg_p.add_parser("mudelta")
    q.add_argument("fan")
    _run_flags(q)
    q.set_defaults(func=cmd_alg_mudelta)

    mod_p = sub.add_parser("mod").add_subparsers(dest="cmd", required=True)
    q = mod_p.add_parser("validate")
    q.add_argument("module")
    q.set_defaults(func=cmd_mod_validate)
    q = mod_p.add_parser("repcheck")
    q.add_argument("module")
    _run_flags(q)
    q.set_defaults(func=cmd_mod_repcheck)
    q = mod_p.add_parser("relations")
    q.add_argument("fan")
    q.set_defaults(func=cmd_mod_relations)
    q = mod_p.add_parser("hom")
    q.add_argument("a")
    q.add_argument("b")
    q.set_defaults(func=cmd_mod_hom)

    desc_p = sub.add_parser("desc").add_subparsers(dest="cmd", required=True)
    q = desc_p.add_parser("check")
    q.add_argument("datum")
    q.set_defaults(func=cmd_desc_check)
    q = desc_p.add_parser("glue")
    q.add_argument("datum")
    q.add_argument("-o", "--output", default=None)
    q.set_defaults(func=cmd_desc_glue)

    equi_p = sub.add_parser("equi").add_subparsers(dest="cmd", required=True)
    q = equi_p.add_parser("present")
    q.add_argument("spec")
    q.set_defaults(func=cmd_equi_present)
    q = equi_p.add_parser("structure")
    q.add_argument("fan")
    q.add_argument("quotient")
    _run_flags(q)
    q.set_defaults(func=cmd_equi_structure)
    q = equi_p.add_parser("validate")
    q.add_argument("eqmodule")
    q.set_defaults(func=cmd_equi_validate)
    q = equi_p.add_parser("inflate")
    q.add_argument("eqmodule")
    q.add_argument("-o", "--output", default=None)
    q.set_defaults(func=cmd_equi_inflate)

    demo_p = sub.add_parser("demo").add_subparsers(dest="cmd", required=True)
    q = demo_p.add_parser("dupont")
    _run_flags(q)
    q.set_defaults(func=cmd_demo_dupont)
    demo_p.add_parser("c1").set_defaults(func=cmd_demo_c1)
    demo_p.add_parser("p1").set_defaults(func=cmd_demo_p1)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"ERROR\tinput\t{e}")
        print("SUMMARY: input error")
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
