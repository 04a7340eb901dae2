"""Command-line front end for the scheme-plan workbench.

Exit codes: 0 pass/Safe, 1 violations/Unsafe, 2 Inconclusive, 64 usage
errors, 65 plan/model parse errors.  ``--json`` prints the same structured
report the HTTP service returns, byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import casl, classmodel, tables
from .dsl import PlanParseError, parse_plan, print_plan
from .model import SchemePlan, validate_plan
from .regions import ReleaseNotOnRoute, build_catalog
from .semantics import ReplayError, parse_trace, replay, state_to_lists
from .verify import SearchBound, verify_report
from .wire import violation_to_dict

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_PARSE = 65

BOUND_ENV = "SCHEMEPLAN_BOUND"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 64, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def _load_plan(path: str) -> SchemePlan:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_plan(fh.read())
    except FileNotFoundError:
        print(f"error: no such plan file: {path}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE) from None
    except PlanParseError as exc:
        print(f"{path}:{exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE) from None


def _bound(args) -> SearchBound:
    bound = getattr(args, "bound", None)
    if bound is None and os.environ.get(BOUND_ENV):
        bound = int(os.environ[BOUND_ENV])
    return SearchBound(max_total_regions=bound)


def cmd_check(args) -> int:
    plan = _load_plan(args.plan)
    violations = validate_plan(plan)
    if args.json:
        print(_dump({"plan": plan.name, "violations": [violation_to_dict(v) for v in violations]}))
    else:
        for v in violations:
            print(f"{v.location}: {v.code}: {v.message}")
        if not violations:
            print(f"{plan.name}: ok")
    return EXIT_FAIL if violations else EXIT_OK


def cmd_tables(args) -> int:
    plan = _load_plan(args.plan)
    try:
        generated = tables.generate_tables(plan)
    except tables.CyclicPathError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = print_plan(generated)
    if args.write:
        with open(args.plan, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.plan}")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_regions(args) -> int:
    plan = _load_plan(args.plan)
    try:
        catalog = build_catalog(plan)
    except ReleaseNotOnRoute as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.json:
        doc = {
            "plan": plan.name,
            "regions": [{"name": name, "units": list(region)} for region, name in catalog.names.items()],
            "byRoute": {rid: [catalog.names[r] for r in regs] for rid, regs in catalog.by_route.items()},
        }
        print(_dump(doc))
    else:
        for region, name in catalog.names.items():
            print(f"{name}: {' '.join(region)}")
        for rid, regs in catalog.by_route.items():
            print(f"{rid}: {' '.join(catalog.names[r] for r in regs)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    plan = _load_plan(args.plan)
    report = verify_report(plan, args.mode, _bound(args), static_mode=args.static_check)
    if args.json:
        print(_dump(report))
    else:
        _print_verify_report(report)
    return _verify_exit(report)


def _print_verify_report(report: dict) -> None:
    results = report["results"]
    if "static" in results:
        for row in results["static"]["routes"]:
            status = "pass" if row["pass"] else f"FAIL (missing: {', '.join(row['missing'])})"
            print(f"static {row['route']}: {status}")
    if "explore" in results:
        verdict = results["explore"]["verdict"]
        stats = results["explore"]["stats"]
        print(f"explore: {verdict} ({stats['states']} states)")
        if verdict == "Unsafe":
            for ev in results["explore"]["counterexample"]:
                print(f"  {_event_line(ev)}")
    if "lemma" in results:
        for row in results["lemma"]["instances"]:
            mark = "agree" if row["agree"] else ("inconclusive" if row["inconclusive"] else "DISAGREE")
            print(f"lemma {row['instance']}: {mark} (safety={row['safety']}, route-condition={row['routeCondition']})")


def _event_line(ev: dict) -> str:
    if ev["type"] == "extend":
        frm = "-" if ev["from"] is None else str(ev["from"])
        return f"extend {frm} {ev['route']}"
    return f"reduce {ev['ma']}"


def _verify_exit(report: dict) -> int:
    results = report["results"]
    worst = EXIT_OK
    if "static" in results and not results["static"]["allPass"]:
        worst = EXIT_FAIL
    if "explore" in results:
        verdict = results["explore"]["verdict"]
        if verdict == "Unsafe":
            worst = EXIT_FAIL
        elif verdict == "Inconclusive":
            worst = max(worst, EXIT_INCONCLUSIVE)
    if "lemma" in results:
        if results["lemma"]["anyInconclusive"]:
            worst = max(worst, EXIT_INCONCLUSIVE)
        if not results["lemma"]["allAgree"] and not results["lemma"]["anyInconclusive"]:
            worst = EXIT_FAIL
    return worst


def cmd_emit_casl(args) -> int:
    plan = _load_plan(args.plan)
    text = casl.emit_scheme_plan(plan)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return EXIT_OK


def cmd_compile_cm(args) -> int:
    try:
        with open(args.model, encoding="utf-8") as fh:
            model = classmodel.parse_class_model(fh.read())
    except FileNotFoundError:
        print(f"error: no such model file: {args.model}", file=sys.stderr)
        return EXIT_PARSE
    except classmodel.ClassModelError as exc:
        print(f"{args.model}:{exc}", file=sys.stderr)
        return EXIT_PARSE
    text = classmodel.emit_modal(model) if args.target == "modal" else classmodel.emit_casl(model)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return EXIT_OK


def cmd_replay(args) -> int:
    plan = _load_plan(args.plan)
    try:
        with open(args.trace, encoding="utf-8") as fh:
            trace = parse_trace(plan, fh.read())
    except FileNotFoundError:
        print(f"error: no such trace file: {args.trace}", file=sys.stderr)
        return EXIT_PARSE
    except ReplayError as exc:
        print(f"replay failed at {exc}", file=sys.stderr)
        return EXIT_FAIL
    states = replay(plan, trace)
    if args.json:
        print(_dump({"plan": plan.name, "states": [state_to_lists(s) for s in states]}))
    else:
        for i, state in enumerate(states):
            mas = state_to_lists(state)
            rendered = " | ".join("+".join("[" + " ".join(r) + "]" for r in ma) for ma in mas) or "(empty)"
            print(f"{i}: {rendered}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(data_dir=args.data_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="schemeplan", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a plan file")
    p.add_argument("plan")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("tables", help="derive routes and control/release tables")
    p.add_argument("plan")
    p.add_argument("--write", action="store_true", help="rewrite the plan file in place")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("regions", help="print the region catalog")
    p.add_argument("plan")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("verify", help="check the no-overlapping-authorities property")
    p.add_argument("plan")
    p.add_argument("--mode", choices=["static", "explore", "both", "lemma"], default="both")
    p.add_argument("--bound", type=int, default=None, help="max total assigned regions per state")
    p.add_argument("--static-check", choices=["subset", "region-overlap"], default="subset")
    p.add_argument("--threads", type=int, default=1, help="exploration worker cap")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("emit-casl", help="generate the CASL specification for a plan")
    p.add_argument("plan")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_emit_casl)

    p = sub.add_parser("compile-cm", help="compile a class model to signature text")
    p.add_argument("model")
    p.add_argument("--target", choices=["modal", "casl"], default="modal")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_compile_cm)

    p = sub.add_parser("replay", help="replay a trace file against a plan")
    p.add_argument("plan")
    p.add_argument("trace")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8234)
    p.add_argument("--data-dir", default=None, help="plan store directory (default: temp)")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
