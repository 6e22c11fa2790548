"""Command-line front-end.

Exit codes: 0 success (or a satisfied point query), 1 refuted assertion
(point query false, counterexample under --expect-valid, failed check),
2 structural/usage error, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bisim as bs
from . import classify as cl
from . import gallery as gl
from . import semantics as sm
from . import serialize as io
from .errors import SeatcheckError
from .formula import parse, parse_lines, print_formula
from .seat import check_conditions


def _load_model(path):
    with open(path, encoding="utf-8") as fh:
        return io.model_loads(fh.read())


def _emit(args, payload, text_lines):
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def cmd_check(args):
    model = _load_model(args.model)
    if args.formula is not None:
        formulas = [parse(args.formula)]
    elif args.formula_file is not None:
        with open(args.formula_file, encoding="utf-8") as fh:
            formulas = parse_lines(fh.read())
    else:
        raise SeatcheckError("check needs --formula or --formula-file")
    code = 0
    rows = []
    for f in formulas:
        extent = sm.evaluate(model, f)
        if args.state is not None:
            truth = model.seat.topology.index(args.state) in [
                model.seat.topology.index(s) for s in extent.states]
            rows.append({"formula": print_formula(f), "state": args.state, "holds": truth})
            if not truth:
                code = 1
        else:
            rows.append({"formula": print_formula(f), "extent": sorted(extent.states)})
    lines = []
    for row in rows:
        if "holds" in row:
            lines.append(f"{row['formula']}  @ {row['state']}: {'true' if row['holds'] else 'false'}")
        else:
            lines.append(f"{row['formula']}  -> {{{','.join(row['extent'])}}}")
    _emit(args, rows, lines)
    return code


def cmd_classify(args):
    model = _load_model(args.model)
    report = cl.classify(model.seat)
    payload = report.summary()
    lines = [f"{key}: {value['holds'] if isinstance(value, dict) else value}"
             + (f"  witness={value['witness']}" if isinstance(value, dict) and value["witness"] else "")
             for key, value in payload.items()]
    _emit(args, payload, lines)
    return 0


def cmd_axioms(args):
    model = _load_model(args.model)
    schemes = cl.suite_schemes(args.suite)
    if args.vars is not None:
        schemes = [sch for sch in schemes if len(sch.var_names) <= args.vars]
    extra = []
    if args.lits:
        extra = [model.seat.semiring.parse_element(t) for t in args.lits.split(",")]
    reports = [cl.check_scheme(model.seat, sch, mode=args.mode, budget=args.budget,
                               rng_seed=args.seed, samples=args.samples, probe_lits=extra)
               for sch in schemes]
    payload = [{"scheme": r.scheme, "instances": r.instances, "status": r.status,
                "counterexample": r.counterexample} for r in reports]
    width = max(len(r.scheme) for r in reports)
    lines = [f"{r.scheme:<{width}}  {r.instances:>8}  {r.status}"
             + (f"  {r.counterexample}" if r.counterexample else "")
             for r in reports]
    _emit(args, payload, lines)
    if any(r.status == "inconclusive" for r in reports):
        return 3
    if args.expect_valid and any(r.refuted for r in reports):
        return 1
    return 0


def cmd_bisim(args):
    left = _load_model(args.left)
    right = _load_model(args.right)
    extra = [left.seat.semiring.parse_element(t) for t in args.lits.split(",")] if args.lits else []
    if args.relation:
        with open(args.relation, encoding="utf-8") as fh:
            z = io.relation_from_json(json.load(fh), left, right)
        if args.global_relation:
            z = bs.BisimRelation(left, right, z.pairs, True)
    else:
        z = bs.largest_bisim(left, right, global_relation=args.global_relation, probe_lits=extra)
    report = bs.check_bisim(z, probe_lits=extra)
    payload = {"pairs": sorted([a, b] for a, b in z.pairs), "global": z.global_relation,
               "check": str(report), "ok": report.ok}
    lines = [f"pairs: {payload['pairs']}", f"check: {report}"]
    code = 0 if report.ok else 1
    if report.ok and args.depth is not None:
        eq = bs.modal_equiv_test(z, depth=args.depth, lits=extra, max_size=args.size)
        payload["formulas_checked"] = eq.formulas_checked
        payload["disagreements"] = eq.disagreements
        lines.append(f"formula agreement: {eq.formulas_checked} formulas, "
                     + ("ok" if eq.ok else f"DISAGREEMENTS {eq.disagreements}"))
        if not eq.ok:
            code = 1
    _emit(args, payload, lines)
    return code


def cmd_union(args):
    models = [_load_model(p) for p in args.models]
    combined = bs.disjoint_union(models)
    text = io.model_dumps(combined)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {args.output}")
    return 0


def cmd_gallery(args):
    if args.name == "list":
        for name in sorted(list(gl.GALLERY_BUILDERS) + list(gl.fixtures())):
            print(name)
        return 0
    if args.name in gl.GALLERY_BUILDERS:
        builder = gl.GALLERY_BUILDERS[args.name]
        model = builder(depth=args.depth) if args.name == "streams" else builder()
    else:
        named = gl.fixtures()
        if args.name not in named:
            raise SeatcheckError(f"unknown gallery name {args.name!r}")
        model = named[args.name]
    text = io.model_dumps(model)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.output}")
    else:
        print(text, end="")
    return 0


def cmd_cost(args):
    model = _load_model(args.model)
    t = model.seat.topology
    names = [n for n in args.open.split(",") if n] if args.open else []
    mask = t.mask_of(names)
    result = model.seat.cost(mask, args.state)
    value = model.seat.semiring.format_element(result.value)
    _emit(args, {"open": sorted(names), "state": args.state,
                 "cost": value, "attained": result.attained},
          [f"cost({{{','.join(names)}}}, {args.state}) = {value} "
           f"({'attained' if result.attained else 'not attained'})"])
    return 0


def cmd_validate(args):
    model = _load_model(args.model)
    problems = check_conditions(model.seat)
    payload = {"ok": not problems,
               "violations": [{"condition": c, "witness": [str(x) for x in w]} for c, w in problems]}
    lines = ["ok"] if not problems else [f"violated {c} at {w}" for c, w in problems]
    _emit(args, payload, lines)
    return 0 if not problems else 1


def _build_parser():
    top = argparse.ArgumentParser(prog="seatcheck",
                                  description="resource-annotated evidence models")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate formulas on a model")
    p.add_argument("--model", required=True)
    p.add_argument("--formula")
    p.add_argument("--formula-file")
    p.add_argument("--state")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("classify", help="seat-class report")
    p.add_argument("--model", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("axioms", help="run an axiom-scheme suite")
    p.add_argument("--model", required=True)
    p.add_argument("--suite", required=True, choices=sorted(cl.SUITES))
    p.add_argument("--mode", default="exhaustive", choices=("exhaustive", "random"))
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=500_000)
    p.add_argument("--vars", type=int, default=None)
    p.add_argument("--lits", help="comma-separated extra probe literals")
    p.add_argument("--expect-valid", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_axioms)

    p = sub.add_parser("bisim", help="check or compute bisimulations")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--relation")
    p.add_argument("--global", dest="global_relation", action="store_true")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--size", type=int, default=5)
    p.add_argument("--lits", help="comma-separated probe literals")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_bisim)

    p = sub.add_parser("union", help="disjoint union of models")
    p.add_argument("models", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=cmd_union)

    p = sub.add_parser("gallery", help="write a worked example or fixture")
    p.add_argument("name")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_gallery)

    p = sub.add_parser("cost", help="cost of one open at one state")
    p.add_argument("--model", required=True)
    p.add_argument("--open", required=True, help="comma-separated state names")
    p.add_argument("--state", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_cost)

    p = sub.add_parser("validate", help="re-run the seat structure conditions")
    p.add_argument("--model", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_validate)
    return top


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SeatcheckError as exc:
        print(f"seatcheck: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"seatcheck: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
