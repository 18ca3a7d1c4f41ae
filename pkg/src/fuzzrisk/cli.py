"""``fuzzrisk`` command line.

Exit codes: 0 success, 1 usage error, 2 parse/validation error,
3 evaluation error (no rule fired).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import dsl, profiles
from .inference import DEFAULT_GRID, EmptyAggregateError, FisDefinition, evaluate, validate_fis
from .surface import DEFAULT_STEPS, SweepError, export_csv, export_json, sweep

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_EVAL = 0, 1, 2, 3
GRID_ENV = "FUZZRISK_GRID"
MIN_GRID = 101


class UsageError(Exception):
    pass


class InvalidModel(Exception):
    def __init__(self, lines: list[str]) -> None:
        super().__init__("\n".join(lines))
        self.lines = lines


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _grid_size() -> int:
    raw = os.environ.get(GRID_ENV)
    if raw is None:
        return DEFAULT_GRID
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{GRID_ENV} must be an integer, got {raw!r}") from None
    if n < MIN_GRID:
        raise UsageError(f"{GRID_ENV} must be at least {MIN_GRID}, got {n}")
    return n


def load_model(ref: str) -> FisDefinition:
    if ref in profiles.BUILTINS:
        return profiles.builtin(ref)
    path = Path(ref)
    try:
        source = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read model {ref!r}: {exc.strerror or exc}") from None
    fis, diags = dsl.check_model(source)
    if fis is None:
        raise InvalidModel([f"{ref}:{d}" for d in diags if d.severity == "error"])
    return fis


def _assignment(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise UsageError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise UsageError(f"not a number in {text!r}") from None


def _resolve_inputs(fis: FisDefinition, pairs: list[str], flag: str) -> dict[str, float]:
    """Map NAME=VALUE pairs onto declared inputs, matching names case-insensitively."""
    by_lower = {n.lower(): n for n in fis.input_names}
    values = {}
    for text in pairs:
        name, value = _assignment(text)
        real = name if name in fis.input_names else by_lower.get(name.lower())
        if real is None:
            raise UsageError(f"unknown input {name!r} for {flag}; model inputs: {', '.join(fis.input_names)}")
        if real in values:
            raise UsageError(f"input {real} given twice")
        values[real] = value
    return values


def _warn_clamped(fis: FisDefinition, values: dict[str, float]) -> None:
    for name, x in values.items():
        lo, hi = fis.input(name).universe
        if not lo <= x <= hi:
            print(f"warning: {name}={x!r} outside [{lo!r}, {hi!r}], clamped", file=sys.stderr)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2)


def cmd_eval(args, grid: int) -> int:
    fis = load_model(args.model)
    values = _resolve_inputs(fis, args.inputs or [], "--in")
    missing = [n for n in fis.input_names if n not in values]
    if missing:
        raise UsageError(f"missing input: {missing[0]}")
    _warn_clamped(fis, values)
    crisp, trace = evaluate(fis, values, grid_size=grid)
    if args.trace:
        print(trace.to_json())
    elif args.format == "json":
        print(_dump({
            "model": fis.name,
            "output": fis.output.name,
            "crisp": crisp,
            "main_active_rule": trace.main_active_rule,
        }))
    else:
        print(f"{fis.output.name} = {crisp!r}")
        print(f"main active rule: {trace.main_active_rule}")
    return EXIT_OK


def cmd_pipeline(args, grid: int) -> int:
    stage1 = profiles.build_attacker_profile_fis()
    stage2 = profiles.build_success_rate_fis()
    _warn_clamped(stage1, {"resources": args.resources, "knowledge": args.knowledge, "motivation": args.motivation})
    _warn_clamped(stage2, {
        "protection": args.protection,
        "vulnerabilities": args.vulnerabilities,
        "restore_cost": args.restore_cost,
    })
    score, rate, (t1, t2) = profiles.pipeline(
        args.resources, args.knowledge, args.motivation,
        args.protection, args.vulnerabilities, args.restore_cost,
        grid_size=grid,
    )
    if args.format == "json":
        doc = {
            "score": score,
            "score_main_active_rule": t1.main_active_rule,
            "successrate": rate,
            "successrate_main_active_rule": t2.main_active_rule,
        }
        if args.trace:
            doc["traces"] = [t1.to_dict(), t2.to_dict()]
        print(_dump(doc))
    else:
        print(f"score = {score!r} (main active rule {t1.main_active_rule})")
        print(f"successrate = {rate!r} (main active rule {t2.main_active_rule})")
        if args.trace:
            print(_dump([t1.to_dict(), t2.to_dict()]))
    return EXIT_OK


def cmd_preset(args, grid: int) -> int:
    try:
        p = profiles.preset(args.name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    score, trace = profiles.score_attacker(*p.crisp, grid_size=grid)
    inputs = dict(zip(profiles.ATTACKER_INPUTS, p.crisp))
    if args.format == "json":
        print(_dump({
            "preset": p.name,
            "levels": dict(zip(profiles.ATTACKER_INPUTS, (lv.label for lv in p.levels))),
            "inputs": inputs,
            "score": score,
            "main_active_rule": trace.main_active_rule,
            "expected_main_rule": p.expected_main_rule,
        }))
    else:
        print(f"preset {p.name}")
        for (name, x), lv in zip(inputs.items(), p.levels):
            print(f"  {name} = {x!r} ({lv.label})")
        print(f"score = {score!r}")
        verdict = "ok" if trace.main_active_rule == p.expected_main_rule else "MISMATCH"
        print(f"main active rule: {trace.main_active_rule} (expected {p.expected_main_rule}, {verdict})")
    return EXIT_OK


def cmd_rules(args, grid: int) -> int:
    fis = load_model(args.model)
    ordered = sorted(fis.rules, key=lambda r: r.index)
    if args.format == "json":
        print(_dump([
            {"index": r.index, "antecedents": dict(r.antecedents), "consequent": r.consequent}
            for r in ordered
        ]))
    else:
        for rule in ordered:
            print(f"{rule.index}\t{dsl.format_rule(fis, rule)}")
    return EXIT_OK


def cmd_sweep(args, grid: int) -> int:
    fis = load_model(args.model)
    by_lower = {n.lower(): n for n in fis.input_names}

    def resolve(name: str) -> str:
        real = name if name in fis.input_names else by_lower.get(name.lower())
        if real is None:
            raise UsageError(f"unknown input {name!r}; model inputs: {', '.join(fis.input_names)}")
        return real

    axes = [resolve(args.x)] + ([resolve(args.y)] if args.y else [])
    fixed = _resolve_inputs(fis, args.fix or [], "--fix")
    _warn_clamped(fis, fixed)
    try:
        result = sweep(fis, axes, fixed, steps=args.steps, grid_size=grid)
    except SweepError as exc:
        raise UsageError(str(exc)) from None
    text = export_json(result) if args.format == "json" else export_csv(result)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args, grid: int) -> int:
    if args.path in profiles.BUILTINS:
        source = profiles.builtin_source(args.path)
    else:
        try:
            source = Path(args.path).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read model {args.path!r}: {exc.strerror or exc}") from None
    fis, parse_diags = dsl.check_model(source)
    rows = [
        {"severity": d.severity, "line": d.line, "column": d.column, "message": d.message}
        for d in parse_diags
    ]
    if fis is not None:
        # incompleteness is already reported by the parser, with a position
        rows += [
            {"severity": d.severity, "line": None, "column": None, "message": d.message}
            for d in validate_fis(fis)
            if not d.message.startswith("incomplete rule base")
        ]
    has_error = fis is None or any(r["severity"] == "error" for r in rows)
    if args.format == "json":
        print(_dump({"path": args.path, "valid": not has_error, "diagnostics": rows}))
    else:
        for r in rows:
            where = f"{r['line']}:{r['column']}:" if r["line"] is not None else ""
            print(f"{args.path}:{where} {r['severity']}: {r['message']}")
        if not has_error:
            print(f"{args.path}: ok ({len(fis.rules)} rules)")
    return EXIT_INVALID if has_error else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fuzzrisk", description="Fuzzy attacker profiling and attack success rate.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate a model at one input point")
    p.add_argument("--model", required=True, help="built-in name (attacker, success) or .fis path")
    p.add_argument("--in", dest="inputs", action="append", metavar="VAR=VALUE")
    p.add_argument("--trace", action="store_true", help="print the full evaluation trace as JSON")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("pipeline", help="attacker score feeding the success-rate model")
    for flag in ("resources", "knowledge", "motivation", "protection", "vulnerabilities", "restore-cost"):
        p.add_argument(f"--{flag}", type=float, required=True)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("preset", help="score one of the known attacker types")
    p.add_argument("name", help=", ".join(profiles.PRESETS))
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("rules", help="list a model's rule table")
    p.add_argument("--model", required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_rules)

    p = sub.add_parser("sweep", help="sweep one or two inputs and export the response")
    p.add_argument("--model", required=True)
    p.add_argument("--x", required=True, metavar="VAR")
    p.add_argument("--y", metavar="VAR")
    p.add_argument("--fix", action="append", metavar="VAR=VALUE")
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="check a .fis file and report diagnostics")
    p.add_argument("path")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_validate)
    return parser


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, _grid_size())
    except UsageError as exc:
        print(f"fuzzrisk: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidModel as exc:
        for line in exc.lines:
            print(line, file=sys.stderr)
        return EXIT_INVALID
    except EmptyAggregateError as exc:
        print(f"fuzzrisk: evaluation failed: {exc}", file=sys.stderr)
        return EXIT_EVAL
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK


def main() -> None:
    sys.exit(run())
