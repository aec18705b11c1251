"""``monoidk`` command line.

Every subcommand prints one JSON document (sorted keys, indent 2) on
stdout and the wall time on stderr.  Exit codes: 0 success, 1 a check
that was expected to hold failed, 2 bad usage or unreadable input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import abgroup, aset, ktheory, matrix, monoid, qcat, steinberg, suites
from .errors import InvalidStructureError, NotInvertibleError, SizeGuardError, StructuralError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    """Raised for anything that should end in exit code 2."""


# --------------------------------------------------------------------------
# input parsing


def read_json(source: str, what: str):
    """Parse ``source`` as inline JSON (if it starts with ``{``) or as a file path."""
    text = source
    where = "inline JSON"
    if not source.lstrip().startswith("{"):
        path = Path(source)
        if not path.is_file():
            raise InputError(f"{what} file not found: {source}")
        text = path.read_text()
        where = str(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: invalid JSON in {where} at line {exc.lineno}, column {exc.colno}: {exc.msg}")


def parse_monoid(source: str, validate: bool = True) -> monoid.PointedMonoid:
    data = read_json(source, "monoid")
    try:
        m = monoid.PointedMonoid.from_json(data)
    except (StructuralError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"monoid: {exc}")
    if validate:
        report = monoid.validate_monoid(m)
        if not report.valid:
            raise InputError(f"monoid: not a pointed monoid: {report.violations[0].describe(m.elements)}")
    return m


def parse_aset(source: str) -> aset.FiniteASet:
    data = read_json(source, "A-set")
    base = Path(source).parent if not source.lstrip().startswith("{") else None
    try:
        return aset.FiniteASet.from_json(data, base_dir=base)
    except (StructuralError, KeyError, TypeError) as exc:
        raise InputError(f"A-set: {exc}")


def parse_group(spec: str) -> abgroup.FgAbelianGroup:
    try:
        return abgroup.parse_group_spec(spec)
    except StructuralError as exc:
        raise InputError(str(exc))


def parse_inputs(monoid_file=None, aset_file=None, group_spec=None) -> dict:
    """Validated domain values for whichever inputs were given."""
    out = {}
    if monoid_file is not None:
        out["monoid"] = parse_monoid(monoid_file)
    if aset_file is not None:
        out["aset"] = parse_aset(aset_file)
    if group_spec is not None:
        out["group"] = parse_group(group_spec)
    return out


# --------------------------------------------------------------------------
# subcommands; each returns (payload, ok)


def _group_payload(g: abgroup.FgAbelianGroup, provenance: str, **extra) -> dict:
    return {"group": g.to_json(), "provenance": provenance, **extra}


def cmd_validate(args):
    if args.monoid is not None:
        m = parse_monoid(args.monoid, validate=False)
        report = monoid.validate_monoid(m)
        violations = [{"axiom": v.axiom, "witness": [m.elements[i] for i in v.witness]} for v in report.violations]
        return {"kind": "monoid", "size": m.size, "valid": report.valid, "violations": violations}, report.valid
    if args.aset is not None:
        data = read_json(args.aset, "A-set")
        base = Path(args.aset).parent if not args.aset.lstrip().startswith("{") else None
        try:
            m = aset.FiniteASet.from_json(data, base_dir=base)
        except InvalidStructureError as exc:
            return {"kind": "aset", "valid": False, "violations": [str(v) for v in exc.violations] or [str(exc)]}, False
        except (StructuralError, KeyError, TypeError) as exc:
            raise InputError(f"A-set: {exc}")
        mon_report = monoid.validate_monoid(m.monoid)
        payload = {
            "kind": "aset",
            "size": m.size,
            "monoid_valid": mon_report.valid,
            "valid": mon_report.valid,
            "violations": [v.describe(m.monoid.elements) for v in mon_report.violations],
        }
        return payload, mon_report.valid
    g = parse_group(args.group)
    payload = {"kind": "group", "group": g.to_json(), "order": g.order}
    ok = True
    if g.order is not None:
        gm = monoid.group_monoid(monoid.abelian_group(g.torsion))
        ok = monoid.validate_monoid(gm).valid
        payload["group_monoid_size"] = gm.size
    payload["valid"] = ok
    return payload, ok


def cmd_units(args):
    a = parse_monoid(args.monoid)
    u = monoid.units(a)
    comm = monoid.commutator_subgroup(u)
    payload = {
        "order": u.order,
        "elements": [a.elements[int(p)] for p in u.parent],
        "abelian": u.is_abelian(),
        "commutator_subgroup_order": comm.order,
        "abelianization": monoid.abelianization(u).to_json(),
    }
    return payload, True


def cmd_k1(args):
    a = parse_monoid(args.monoid)
    return _group_payload(ktheory.k1(a), "Z/2 + abelianized unit group"), True


def cmd_check_k1(args):
    a = parse_monoid(args.monoid)
    res = ktheory.k1_bruteforce_check(a, args.n)
    ok = abgroup.iso_test(res.abelianization, res.k1)
    return _group_payload(res.k1, f"closed form compared with the abelianization of GL_{args.n}", check=res.to_json()), ok


def cmd_k2_ab(args):
    g = parse_group(args.group)
    summands = ktheory.k2_summands(g)
    out = ktheory.k2_abelian(g)
    names = ("Z/2", "G/2", "H_2(G;Z)")
    return _group_payload(
        out,
        "Z/2 + G/2 + H_2(G; Z)",
        summands={n: s.to_json() for n, s in zip(names, summands)},
    ), True


def cmd_pi2s(args):
    gab = parse_group(args.gab)
    h2 = parse_group(args.h2)
    return _group_payload(ktheory.pi2s_formula(gab, h2), "Z/2 + G_ab/2 + H_2(G)"), True


def cmd_check_homotopy(args):
    a = parse_monoid(args.monoid)
    rep = ktheory.homotopy_invariance_check(a)
    return _group_payload(rep.k1_poly, "Z/2 + abelianized units of A[x]", check=rep.to_json()), rep.ok


def cmd_e_membership(args):
    a = parse_monoid(args.monoid)
    data = read_json(args.matrix, "matrix")
    try:
        m = matrix.RowMonomicMatrix.from_json(data, a)
    except (StructuralError, KeyError) as exc:
        raise InputError(f"matrix: {exc}")
    dec = matrix.decompose(m, a)
    if not dec:
        raise InputError(f"matrix is not invertible: {dec.reason}" + (f" (row {dec.row})" if dec.row is not None else ""))
    member = matrix.in_elementary(m, a)
    payload = {
        "in_elementary": member,
        "permutation": list(dec.perm),
        "permutation_even": monoid.permutation_sign(dec.perm) == 1,
        "diagonal": [a.elements[x] for x in dec.diag],
        "diagonal_product": a.elements[a.product(dec.diag)],
    }
    return payload, True


def cmd_q_pi1(args):
    a = parse_monoid(args.monoid)
    report, nerve, pres = qcat.q_report(a, args.rank_bound)
    gens = [f"e{k}: {nerve.edges[k].describe()}" for k in pres.generators]
    payload = {
        "report": report.to_json(),
        "presentation": {
            "generators": gens,
            "relators": [[[g, s] for g, s in w] for w in pres.relators],
            "rank_map": list(pres.rank_map),
        },
        "invariant_factors": report.abelianization.to_json(),
    }
    return payload, report.ok


def cmd_m_nf(args):
    try:
        x = steinberg.normal_form(args.d, args.word)
    except StructuralError as exc:
        raise InputError(str(exc))
    window = steinberg.word_window(args.word)
    payload = {
        "standard_form": x.standard_form(window),
        "identity": x.is_identity,
        "element": x.to_json(),
        "alpha_order": steinberg.alpha_order(args.d),
    }
    return payload, True


def cmd_m_check(args):
    audit = steinberg.steinberg_audit(args.d, seed=args.seed)
    payload = {"audit": audit.to_json()}
    ok = audit.ok
    if 2 <= args.d <= 5:
        eg = steinberg.e_group(abgroup.cyclic(args.d), 3)
        checks = eg.verify(seed=args.seed)
        payload["e_group"] = checks
        ok = ok and all(v for k, v in checks.items() if isinstance(v, bool)) and checks["order"] == checks["expected_order"]
    return payload, ok


def cmd_verify(args):
    a = parse_monoid(args.monoid)
    names = list(suites.SUITES) if args.suite == "all" else [args.suite]
    results = suites.run_suites(names, a, seed=args.seed)
    ok = all(c.ok for cs in results.values() for c in cs)
    payload = {
        "seed": args.seed,
        "suites": {k: [c.to_json() for c in v] for k, v in results.items()},
        "failed": [f"{k}.{c.name}" for k, v in results.items() for c in v if not c.ok],
    }
    return payload, ok


# --------------------------------------------------------------------------
# wiring


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="monoidk", description="K-theory computations for finite pointed monoids.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a monoid, A-set or group spec")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--monoid")
    src.add_argument("--aset")
    src.add_argument("--group")
    s.set_defaults(func=cmd_validate)

    for name, func, help_ in (
        ("units", cmd_units, "unit group and its abelianization"),
        ("k1", cmd_k1, "closed-form K_1"),
        ("check-homotopy", cmd_check_homotopy, "compare units of A and A[x]"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--monoid", required=True)
        s.set_defaults(func=func)

    s = sub.add_parser("check-k1", help="K_1 against the abelianization of GL_n")
    s.add_argument("--monoid", required=True)
    s.add_argument("--n", type=int, default=3)
    s.set_defaults(func=cmd_check_k1)

    s = sub.add_parser("k2-ab", help="K_2 of the group monoid of an abelian group")
    s.add_argument("--group", required=True)
    s.set_defaults(func=cmd_k2_ab)

    s = sub.add_parser("pi2s", help="Z/2 + G_ab/2 + H_2")
    s.add_argument("--gab", required=True)
    s.add_argument("--h2", required=True)
    s.set_defaults(func=cmd_pi2s)

    s = sub.add_parser("e-membership", help="membership of an invertible matrix in E_n(A)")
    s.add_argument("--monoid", required=True)
    s.add_argument("--matrix", required=True, help="matrix JSON file or inline object")
    s.set_defaults(func=cmd_e_membership)

    s = sub.add_parser("q-pi1", help="edge-path group of the truncated Q-construction")
    s.add_argument("--monoid", required=True)
    s.add_argument("--rank-bound", type=int, required=True)
    s.set_defaults(func=cmd_q_pi1)

    s = sub.add_parser("m-nf", help="standard form of a word in M(Z/d)")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--word", required=True)
    s.set_defaults(func=cmd_m_nf)

    s = sub.add_parser("m-check", help="relation and action audit of M(Z/d)")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_m_check)

    s = sub.add_parser("verify", help="run self-check suites on a monoid")
    s.add_argument("--suite", choices=[*suites.SUITES, "all"], default="all")
    s.add_argument("--monoid", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify)
    return p


def _inputs_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command") and v is not None}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with exit 2
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        payload, ok = args.func(args)
    except (InputError, StructuralError, InvalidStructureError, NotInvertibleError, SizeGuardError) as exc:
        print(f"monoidk {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    doc = {"command": args.command, "inputs": _inputs_echo(args), "ok": bool(ok), **payload}
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    print(f"wall time: {time.perf_counter() - start:.3f} s", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


# Which subcommand reaches each library operation.  ``{monoid}`` stands
# for a monoid file; the coverage test substitutes fixtures.
COVERAGE = {
    "monoidk.monoid.validate_monoid": ["validate", "--monoid", "{monoid}"],
    "monoidk.monoid.group_monoid": ["validate", "--group", "free=0;torsion=2,3"],
    "monoidk.monoid.units": ["units", "--monoid", "{monoid}"],
    "monoidk.monoid.commutator_subgroup": ["units", "--monoid", "{monoid}"],
    "monoidk.monoid.abelianization": ["units", "--monoid", "{monoid}"],
    "monoidk.monoid.poly_units": ["check-homotopy", "--monoid", "{monoid}"],
    "monoidk.matrix.mat_mul": ["verify", "--suite", "matrix", "--monoid", "{monoid}"],
    "monoidk.matrix.decompose": ["e-membership", "--monoid", "{monoid}", "--matrix", "{matrix}"],
    "monoidk.matrix.enumerate_gl": ["verify", "--suite", "matrix", "--monoid", "{monoid}"],
    "monoidk.matrix.in_elementary": ["e-membership", "--monoid", "{monoid}", "--matrix", "{matrix}"],
    "monoidk.matrix.brute_elementary": ["verify", "--suite", "matrix", "--monoid", "{monoid}"],
    "monoidk.aset.free_aset": ["verify", "--suite", "aset", "--monoid", "{monoid}"],
    "monoidk.aset.kernel_cokernel": ["verify", "--suite", "aset", "--monoid", "{monoid}"],
    "monoidk.aset.coequalizer": ["verify", "--suite", "aset", "--monoid", "{monoid}"],
    "monoidk.aset.product_coproduct": ["verify", "--suite", "aset", "--monoid", "{monoid}"],
    "monoidk.aset.tensor": ["verify", "--suite", "aset", "--monoid", "{monoid}"],
    "monoidk.aset.hom_set": ["verify", "--suite", "aset", "--monoid", "{monoid}"],
    "monoidk.aset.is_admissible_exact": ["verify", "--suite", "aset", "--monoid", "{monoid}"],
    "monoidk.aset.pullback": ["verify", "--suite", "aset", "--monoid", "{monoid}"],
    "monoidk.aset.is_projective": ["verify", "--suite", "aset", "--monoid", "{monoid}"],
    "monoidk.qcat.compose_spans": ["q-pi1", "--monoid", "{monoid}", "--rank-bound", "2"],
    "monoidk.qcat.build_nerve": ["q-pi1", "--monoid", "{monoid}", "--rank-bound", "2"],
    "monoidk.qcat.pi1_presentation": ["q-pi1", "--monoid", "{monoid}", "--rank-bound", "2"],
    "monoidk.abgroup.smith_normal_form": ["verify", "--suite", "monoid", "--monoid", "{monoid}"],
    "monoidk.abgroup.tensor_tor": ["k2-ab", "--group", "free=0;torsion=4,6"],
    "monoidk.abgroup.homology": ["k2-ab", "--group", "free=0;torsion=4,6"],
    "monoidk.abgroup.iso_test": ["check-k1", "--monoid", "{monoid}", "--n", "2"],
    "monoidk.ktheory.k1": ["k1", "--monoid", "{monoid}"],
    "monoidk.ktheory.k1_bruteforce_check": ["check-k1", "--monoid", "{monoid}", "--n", "2"],
    "monoidk.ktheory.k2_abelian": ["k2-ab", "--group", "free=0;torsion=2"],
    "monoidk.ktheory.pi2s_formula": ["pi2s", "--gab", "free=0;torsion=2", "--h2", "free=0;torsion="],
    "monoidk.ktheory.free_basis": ["verify", "--suite", "aset", "--monoid", "{monoid}"],
    "monoidk.ktheory.homotopy_invariance_check": ["check-homotopy", "--monoid", "{monoid}"],
    "monoidk.steinberg.m_mul": ["m-nf", "--d", "6", "--word", "X3 X2 a X2^-1"],
    "monoidk.steinberg.alpha_order": ["m-nf", "--d", "6", "--word", "X3 X2"],
    "monoidk.steinberg.sigma_act": ["m-check", "--d", "3"],
    "monoidk.steinberg.e_group": ["m-check", "--d", "3"],
    "monoidk.steinberg.projection_kernel": ["m-check", "--d", "3"],
    "monoidk.steinberg.reduce_mod": ["m-check", "--d", "4"],
}


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
