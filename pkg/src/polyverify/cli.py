"""Command-line front end: ``polyverify list|run|trace|check|laws|compose``.

Exit codes: 0 success, 1 a check, law or monitor found a violation, 2 usage
or input errors. ``--json`` switches stdout to canonical JSON; with the same
flags the JSON output is byte-for-byte reproducible.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog
from .contracts import VerifiedImplementation, check_verified, erase
from .core import Call, Implementation, materialize, run_closed, tree_to_json
from .errors import ContractViolation, PolyError
from .laws import SUITES, run_suite
from .machines import Mealy, run_trace
from .monitors import Monitor, run_monitored_trace
from .values import parse_literal, show, to_json
from .wiring import compose_wiring, parse_wiring_file, validate

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

REGISTRIES = {"default": catalog.default_registry}


class UsageError(Exception):
    pass


def emit_json(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


# -- argument parsing -------------------------------------------------------------


def _nat(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}")
    return n


def _global_flags(parser, suppress: bool):
    # defaults are suppressed on subcommands so flags may appear before or after the subcommand
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--json", action="store_true", default=argparse.SUPPRESS if suppress else False,
                        help="print canonical JSON instead of text")
    parser.add_argument("--seed", type=_nat, default=argparse.SUPPRESS if suppress else 0, help="seed for all sampling (default 0)")
    parser.add_argument("--depth", type=_nat, default=d, help="depth budget (tree depth, or bisimulation depth for laws)")
    parser.add_argument("--samples", type=_nat, default=d, help="samples per non-enumerable domain")


def _entry_flags(parser):
    parser.add_argument("entry", help="catalog entry name (see `list`)")
    parser.add_argument("--mutation", help="apply one of the entry's named mutations")
    parser.add_argument("--alphabet", type=_nat, help="list element alphabet size (append/concat entries)")
    parser.add_argument("--max-len", type=_nat, help="list length bound (append/concat entries)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyverify", description="Compose, run and check polynomial-interface modules.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, metavar="{list,run,trace,check,laws,compose}")

    p = sub.add_parser("list", help="list catalog entries")
    _global_flags(p, True)

    p = sub.add_parser("run", help="run an entry on one value")
    _global_flags(p, True)
    _entry_flags(p)
    p.add_argument("value", help="value literal: canonical JSON or nat:5, unit, list:[1,2], pair:[a,b], tag:l[:v]")

    p = sub.add_parser("trace", help="step a machine or monitor through inputs")
    _global_flags(p, True)
    _entry_flags(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--count", type=_nat, help="feed the entry's default input this many times")
    g.add_argument("--inputs", nargs="+", metavar="VALUE", help="explicit input literals")
    p.add_argument("--monitored", action="store_true", help="run under the entry's monitor")

    p = sub.add_parser("check", help="assume-guarantee check of a verified entry")
    _global_flags(p, True)
    _entry_flags(p)
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")

    p = sub.add_parser("laws", help="run a law suite on seeded fixtures")
    _global_flags(p, True)
    p.add_argument("suite", choices=tuple(SUITES) + ("all",))

    p = sub.add_parser("compose", help="compose a wiring-diagram file against a registry")
    _global_flags(p, True)
    p.add_argument("--file", required=True, help="wiring diagram (UTF-8 JSON)")
    p.add_argument("--registry", default="default", choices=tuple(REGISTRIES))
    p.add_argument("--alphabet", type=_nat, help="alphabet size for the default registry")
    p.add_argument("--max-len", type=_nat, help="list length bound for the default registry")
    p.add_argument("--run", metavar="VALUE", help="run the composite on this value")
    p.add_argument("--compare", metavar="ENTRY", help="compare the composite with a catalog implementation on every enumerated input")
    return parser


def _payload(args):
    e = catalog.entry(args.entry)
    params = {}
    for flag, key in (("mutation", "mutation"), ("alphabet", "alphabet"), ("max_len", "max_len")):
        val = getattr(args, flag, None)
        if val is None:
            continue
        if key not in e.parameters:
            raise UsageError(f"{e.name} does not take --{flag.replace('_', '-')}")
        params[key] = val
    return e, e.payload(**params)


# -- commands ------------------------------------------------------------------------


def cmd_list(args):
    rows = [
        {"name": e.name, "kind": e.kind, "summary": e.summary,
         "parameters": dict(e.parameters), "mutations": list(e.mutations)}
        for e in catalog.CATALOG.values()
    ]
    if args.json:
        return EXIT_OK, {"entries": rows}
    width = max(len(r["name"]) for r in rows)
    lines = [f"{r['name']:<{width}}  {r['kind']:<14}  {r['summary']}" for r in rows]
    return EXIT_OK, "\n".join(lines)


def _run_implementation(f: Implementation, a, args):
    f.source.positions.require(a, "input")
    if f.target.positions.is_empty():
        result = run_closed(f, a)
        return {"result": to_json(result)}, show(result)
    e = f(a)
    tree = materialize(e, f.target, depth_budget=args.depth if args.depth is not None else 2,
                       samples=args.samples or 4, seed=args.seed)
    text = show(e.result) if not isinstance(e, Call) else json.dumps(tree_to_json(tree), sort_keys=True, ensure_ascii=False)
    return {"program": tree_to_json(tree)}, text


def cmd_run(args):
    e, obj = _payload(args)
    a = parse_literal(args.value)
    if isinstance(obj, VerifiedImplementation):
        obj = erase(obj)
    if e.kind == "diagram":
        obj = compose_wiring(obj, catalog.default_registry())
    if isinstance(obj, Implementation):
        data, text = _run_implementation(obj, a, args)
        return EXIT_OK, data if args.json else text
    if isinstance(obj, Monitor):
        t = run_monitored_trace(obj, [a])
        return _monitored_result(t, args)
    if isinstance(obj, Mealy):
        t = run_trace(obj, [a])
        return EXIT_OK, t.to_json() if args.json else show(t.outputs[0])
    raise UsageError(f"{e.name} is a {e.kind}; it cannot be run")


def _monitored_result(t, args):
    code = EXIT_OK if t.violation is None else EXIT_VIOLATION
    if args.json:
        return code, t.to_json()
    lines = []
    for k, s in enumerate(t.steps):
        if s.violation is None:
            lines.append(f"{k}: {show(s.input)} -> {show(s.output)}  evidence {show(s.evidence)}")
        else:
            lines.append(f"{k}: {show(s.input)} -> VIOLATION {s.violation}")
    return code, "\n".join(lines)


def cmd_trace(args):
    e, obj = _payload(args)
    if args.monitored and not isinstance(obj, Monitor):
        if not e.monitor:
            raise UsageError(f"{e.name} has no monitor")
        params = {"mutation": args.mutation} if args.mutation else {}
        obj = catalog.get(e.monitor, **params)
    if not isinstance(obj, (Mealy, Monitor)):
        raise UsageError(f"{e.name} is a {e.kind}, not a machine or monitor")
    if args.inputs is not None:
        inputs = [parse_literal(x) for x in args.inputs]
    else:
        if e.default_input is None:
            raise UsageError(f"{e.name} has no default input; pass --inputs")
        inputs = [e.default_input] * (10 if args.count is None else args.count)
    if isinstance(obj, Monitor):
        return _monitored_result(run_monitored_trace(obj, inputs), args)
    t = run_trace(obj, inputs)
    return EXIT_OK, t.to_json() if args.json else " ".join(show(y) for y in t.outputs)


def cmd_check(args):
    e, obj = _payload(args)
    if not isinstance(obj, VerifiedImplementation):
        raise UsageError(f"{e.name} is a {e.kind}; only verified entries can be checked")
    kw = {"mode": args.mode, "seed": args.seed}
    if args.samples is not None:
        kw["samples"] = args.samples
    if args.depth is not None:
        kw["depth_budget"] = args.depth
    report = check_verified(obj, **kw)
    code = EXIT_OK if report.passed else EXIT_VIOLATION
    if args.json:
        return code, report.to_json()
    lines = [f"verdict: {report.verdict}",
             "coverage: " + ", ".join(f"{k}={v}" for k, v in sorted(report.coverage.items()))]
    lines += [f"  {v.kind} at {list(v.path)}: {v.detail}" for v in report.violations]
    return code, "\n".join(lines)


def cmd_laws(args):
    kw = {"seed": args.seed}
    if args.depth is not None:
        kw["depth"] = args.depth
    results = run_suite(args.suite, **kw)
    ok = all(r.passed for r in results)
    code = EXIT_OK if ok else EXIT_VIOLATION
    verdict = "pass" if ok else "fail"
    if args.json:
        return code, {"suite": args.suite, "seed": args.seed, "verdict": verdict, "laws": [r.to_json() for r in results]}
    lines = [f"{'PASS' if r.passed else 'FAIL'} {r.name} ({r.cases} cases)" for r in results]
    for r in results:
        lines += [f"  {r.name}: {d}" for d in r.failures]
    lines.append(f"verdict: {verdict}")
    return code, "\n".join(lines)


def cmd_compose(args):
    params = {k: v for k, v in (("alphabet", args.alphabet), ("max_len", args.max_len)) if v is not None}
    registry = REGISTRIES[args.registry](**params)
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    d = parse_wiring_file(text, registry)
    issues = validate(d, registry)
    if issues:
        raise UsageError("diagram does not compose:\n  " + "\n  ".join(map(str, issues)))
    f = compose_wiring(d, registry)
    data = {"composite": f.name, "source": f.source.name, "target": f.target.name}
    lines = [f"composite: {f.name}", f"interface: {f.source.name} ⇒ {f.target.name}"]
    code = EXIT_OK
    if args.run is not None:
        a = parse_literal(args.run)
        out, shown = _run_implementation(f, a, args)
        data["run"] = {"in": to_json(a), **out}
        lines.append(f"run {show(a)}: {shown}")
    if args.compare is not None:
        other = catalog.get(args.compare, **{k: v for k, v in params.items() if k in catalog.entry(args.compare).parameters})
        if isinstance(other, VerifiedImplementation):
            other = erase(other)
        if not isinstance(other, Implementation):
            raise UsageError(f"{args.compare} is not an implementation")
        if other.source != f.source:
            raise UsageError(f"{args.compare} provides {other.source.name}, the diagram provides {f.source.name}")
        mismatches = []
        positions = f.source.positions.values()
        for a in positions:
            x, y = run_closed(f, a), run_closed(other, a)
            if x != y:
                mismatches.append({"in": to_json(a), "diagram": to_json(x), "entry": to_json(y)})
        verdict = "pass" if not mismatches else "fail"
        code = EXIT_OK if not mismatches else EXIT_VIOLATION
        data["compare"] = {"entry": args.compare, "inputs": len(positions), "verdict": verdict, "mismatches": mismatches[:5]}
        lines.append(f"compare with {args.compare} on {len(positions)} inputs: {verdict}")
        lines += [f"  {m}" for m in mismatches[:5]]
    return code, data if args.json else "\n".join(lines)


COMMANDS = {"list": cmd_list, "run": cmd_run, "trace": cmd_trace, "check": cmd_check, "laws": cmd_laws, "compose": cmd_compose}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        code, out = COMMANDS[args.command](args)
    except (UsageError, PolyError) as exc:
        if isinstance(exc, ContractViolation):
            print(f"polyverify: violation: {exc}", file=sys.stderr)
            return EXIT_VIOLATION
        print(f"polyverify {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(out, (dict, list)):
        sys.stdout.write(emit_json(out).decode("utf-8"))
    else:
        print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
