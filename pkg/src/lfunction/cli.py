"""Command-line entry point: ``lfunction <command> [flags]``.

Exit status: 0 on success or a passing verification, 1 when a verification
fails, 2 on usage or precondition errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import mpmath

from .errors import LFunctionError, PreconditionError
from .groups import (
    ALL_LABELS, GL_GENERATORS, ML_GENERATORS, SIGMA_GENERATORS, DOUBLE_COSET_REPRESENTATIVES, builtin_matrices,
    coset_table, double_cosets, group_by_name, invariance_group, sigma_group,
)
from .numerics import DEFAULT_CONFIG, ParameterPoint, PrecisionConfig, eval_L_7F6, eval_L_barnes, eval_L_series
from .relations import (
    Relation, classify_invariance, fundamental_coherent, fundamental_incoherent, intermediate_654bar,
    invariance_catalog, three_term, three_term_catalog,
)
from .verify import SUITES, reports_to_json, reports_to_text, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
GENERATOR_NAMES = {"GL": GL_GENERATORS, "ML": ML_GENERATORS, "SIGMA": SIGMA_GENERATORS}


class UsageError(Exception):
    pass


def _config(args) -> PrecisionConfig:
    cfg = DEFAULT_CONFIG
    if getattr(args, "digits", None):
        cfg = replace(cfg, working_digits=args.digits, quadrature_halfwidth=None)
    return cfg


def _emit(args, payload, text: str) -> None:
    out = json.dumps(payload, indent=2, sort_keys=True) if args.format == "json" else text
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def _matrix_text(g) -> str:
    return "\n".join("    " + " ".join(f"{v:3d}" for v in row) for row in g.rows)


# -- commands ------------------------------------------------------------

def cmd_group(args) -> int:
    which = args.which.upper()
    group = group_by_name(which)
    names = GENERATOR_NAMES[which]
    m = builtin_matrices()
    payload = {"group": which, "order": len(group), "generators": {n: m[n].to_json() for n in names}}
    text = [f"{which}: order {len(group)}", "generators: " + ", ".join(names)]
    for n in names:
        text += [f"  {n}", _matrix_text(m[n])]
    _emit(args, payload, "\n".join(text))
    return EXIT_OK


def cmd_cosets(args) -> int:
    table = coset_table()
    m = builtin_matrices()
    phi = {n: str(table.permutation_rep(m[n])) for n in ("a1'", "a1", "a2", "a3", "a4", "a5")}
    payload = {
        "cosets": [{"label": str(lab), "size": len(table.coset_members(lab)),
                    "representative": table.representatives[lab].to_json()} for lab in ALL_LABELS],
        "permutation_representation": phi,
    }
    text = [f"{len(ALL_LABELS)} right cosets of G_L in M_L"]
    for lab in ALL_LABELS:
        text += [f"  coset {lab}: {len(table.coset_members(lab))} elements, representative mu{lab}"]
    text.append("permutation representation on the generators:")
    text += [f"  {n:<3} {p}" for n, p in phi.items()]
    _emit(args, payload, "\n".join(text))
    return EXIT_OK


def cmd_double_cosets(args) -> int:
    classes = double_cosets(invariance_group(), sigma_group())
    m = builtin_matrices()
    named = {classify_invariance(m[n]): n for n in DOUBLE_COSET_REPRESENTATIVES}
    rows = []
    for cls in classes:
        t = classify_invariance(cls.representative)
        rows.append({"type": t, "size": cls.size, "named_representative": named[t],
                     "least_representative": cls.representative.to_json()})
    text = [f"{len(classes)} double cosets of Sigma in G_L"]
    text += [f"  type {r['type']}: size {r['size']:4d} = {r['size'] // 48:2d}*48, contains {r['named_representative']}"
             for r in rows]
    _emit(args, {"double_cosets": rows}, "\n".join(text))
    return EXIT_OK


def _invariance_text(rel: Relation) -> str:
    return f"{rel.name}: {rel.terms[0].render_L()} = {rel.terms[1].render_L()}"


def cmd_invariances(args) -> int:
    catalog = invariance_catalog()
    if args.type is not None:
        if not 1 <= args.type <= 6:
            raise UsageError("--type must lie in 1..6")
        catalog = [catalog[args.type - 1]]
    _emit(args, [r.to_json() for r in catalog], "\n".join(_invariance_text(r) for r in catalog))
    return EXIT_OK


def cmd_three_term(args) -> int:
    rels = [three_term(args.triple)] if args.triple else three_term_catalog()
    _emit(args, [r.to_json() for r in rels], "\n\n".join(r.render() for r in rels))
    return EXIT_OK


def _parse_point(text: str) -> ParameterPoint:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--point is not valid JSON: {exc}") from None
    if not isinstance(data, list):
        raise UsageError("--point must be a JSON list of 6 or 7 numbers")
    vals = []
    for v in data:
        if isinstance(v, list) and len(v) == 2:
            vals.append(mpmath.mpc(mpmath.mpf(str(v[0])), mpmath.mpf(str(v[1]))))
        elif isinstance(v, (int, float, str)):
            vals.append(mpmath.mpc(mpmath.mpmathify(str(v))))
        else:
            raise UsageError(f"cannot read parameter {v!r}; use a number or [re, im]")
    return ParameterPoint.from_sequence(vals)


def cmd_eval(args) -> int:
    cfg = _config(args)
    if not args.point:
        raise UsageError("eval needs --point")
    x = _parse_point(args.point)
    methods = {"series": eval_L_series, "7f6": eval_L_7F6, "barnes": eval_L_barnes}
    chosen = list(methods) if args.method == "all" else [args.method]
    results, text = {}, [f"x = {x}"]
    status = EXIT_OK
    for name in chosen:
        try:
            r = methods[name](x, cfg)
        except LFunctionError as exc:
            results[name] = {"error": f"{type(exc).__name__}: {exc}"}
            text.append(f"  {name:<7} error: {exc}")
            if len(chosen) == 1:
                status = EXIT_USAGE
            continue
        results[name] = {"value": [mpmath.nstr(r.value.real, 30), mpmath.nstr(r.value.imag, 30)],
                         "error_estimate": mpmath.nstr(r.error_estimate, 5)}
        text.append(f"  {name:<7} {mpmath.nstr(r.value, 25)}   (error <= {mpmath.nstr(r.error_estimate, 3)})")
    _emit(args, {"point": x.to_json(), "results": results}, "\n".join(text))
    return status


def _run_reports(args, suite: str) -> int:
    cfg = _config(args)
    progress = None
    if args.format == "text" and not args.out and args.verbose:
        progress = lambda r: print(r.summary(), file=sys.stderr, flush=True)  # noqa: E731
    reports = run_suite(suite, seed=args.seed, samples=args.samples, tol=args.tol, cfg=cfg, progress=progress)
    text = reports_to_text(reports, detail=args.detail)
    if args.format == "json":
        out = reports_to_json(reports)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(out + "\n")
        else:
            print(out)
    else:
        _emit(args, None, text)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_verify(args) -> int:
    return _run_reports(args, args.suite)


def cmd_classical(args) -> int:
    return _run_reports(args, "classical")


def cmd_export(args) -> int:
    rels = invariance_catalog() + [fundamental_coherent(), intermediate_654bar(), fundamental_incoherent()]
    rels += three_term_catalog()
    payload = {"relations": [r.to_json() for r in rels]}
    text = "\n\n".join(_invariance_text(r) if len(r.terms) == 2 else r.render() for r in rels)
    _emit(args, payload, text)
    return EXIT_OK


# -- parser --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--out", help="write the result to this file instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    common.add_argument("--digits", type=int, help="working precision in decimal digits (default 60)")

    parser = argparse.ArgumentParser(prog="lfunction", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", parents=[common], help="order and generators of Sigma, G_L or M_L")
    p.add_argument("--which", type=str.upper, choices=("GL", "ML", "SIGMA"), default="GL")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("cosets", parents=[common], help="right cosets of G_L in M_L")
    p.set_defaults(func=cmd_cosets)

    p = sub.add_parser("double-cosets", parents=[common], help="double cosets of Sigma in G_L")
    p.set_defaults(func=cmd_double_cosets)

    p = sub.add_parser("invariances", parents=[common], help="the six two-term invariances")
    p.add_argument("--type", type=int)
    p.set_defaults(func=cmd_invariances)

    p = sub.add_parser("three-term", parents=[common], help="three-term relations (one triple or all 220)")
    p.add_argument("--triple", help="comma-separated labels, barred ones with suffix b, e.g. 6,5,6b")
    p.set_defaults(func=cmd_three_term)

    p = sub.add_parser("eval", parents=[common], help="evaluate L at a point")
    p.add_argument("--point", help="JSON list (a,b,c,d,f,g) or (a,...,g); complex entries as [re, im]")
    p.add_argument("--method", choices=("series", "7f6", "barnes", "all"), default="all")
    p.set_defaults(func=cmd_eval)

    for name, func, helptext in (("verify", cmd_verify, "numerical certification suites"),
                                 ("classical", cmd_classical, "Thomae, Bailey and Barnes identities")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        if name == "verify":
            p.add_argument("--suite", choices=SUITES + ("all",), default="all")
        p.add_argument("--samples", type=int, help="points per check (default depends on the suite)")
        p.add_argument("--tol", type=float, help="relative tolerance for L relations (default 1e-6)")
        p.add_argument("--detail", action="store_true", help="list every point in text output")
        p.add_argument("--verbose", action="store_true", help="print each report to stderr as it finishes")
        p.set_defaults(func=func)

    p = sub.add_parser("export", parents=[common], help="the full relation catalog")
    p.set_defaults(func=cmd_export)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if getattr(args, "digits", None) is not None and args.digits < 30:
            raise UsageError("--digits must be at least 30")
        if getattr(args, "samples", None) is not None and args.samples < 1:
            raise UsageError("--samples must be positive")
        return args.func(args)
    except (UsageError, PreconditionError, ValueError) as exc:
        print(f"lfunction {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LFunctionError as exc:
        print(f"lfunction {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
