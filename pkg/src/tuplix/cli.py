"""Command line interface.

Subcommands:

  eval    normalize a budget under (possibly partial) bindings
  check   require full bindings; exit 0 iff the budget balances
  sweep   evaluate a budget across a range of one parameter
  axioms  run the randomized law suite

Exit codes: 0 success, 1 the budget is impossible (or a law failed),
2 usage, parse or binding errors. Rationals cross the boundary as exact
text ('n/d', or 'n' when the denominator is 1), never as floats.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import (
    CanonicalTuplix,
    Tuplix,
    Violation,
    apply_test_substitution,
    free_vars_tuplix,
    normalize,
)
from .dsl import BudgetProgram, DslError, elaborate, parse
from .expr import Const, pretty
from .laws import all_laws, render_results, run_suite
from .meadow import Rational, format_rational, parse_rational

_BINDING_RE = re.compile(r"([A-Za-z_]\w*(?::[A-Za-z_]\w*)*)\s*=\s*(\S+)\Z")


class CliError(Exception):
    """A usage-level problem; maps to exit code 2."""


@dataclass
class EvalReport:
    """Outcome of evaluating one budget under one set of bindings."""

    status: str  # "ok" | "null"
    entries: dict[str, Rational] | None  # present iff ok and fully closed
    residual_tests: list[str]
    violations: list[Violation]
    bindings_used: dict[str, Rational] = field(default_factory=dict)


def report_of(canonical: CanonicalTuplix, bindings: dict[str, Rational]) -> EvalReport:
    if canonical.is_null:
        return EvalReport("null", None, [], list(canonical.violations), dict(bindings))
    entries: dict[str, Rational] | None = {}
    for channel, amount in canonical.entries:
        if isinstance(amount, Const) and entries is not None:
            entries[channel] = amount.value
        else:
            entries = None
    if canonical.tests:
        entries = None
    residual = [pretty(t) for t in canonical.tests]
    return EvalReport("ok", entries, residual, [], dict(bindings))


def build_report(
    program: BudgetProgram,
    budget: str,
    bindings: dict[str, Rational],
    substitute_tests: bool = False,
) -> EvalReport:
    term = elaborate(program, budget)
    canonical = normalize(term, bindings)
    if substitute_tests and not canonical.is_null:
        canonical = apply_test_substitution(canonical)
    return report_of(canonical, bindings)


def _span_text(source: str, violation: Violation) -> str:
    if violation.span is None:
        return ""
    return f"{source}:{violation.span}"


def render_text(report: EvalReport, source: str = "") -> str:
    lines = [f"status: {report.status}"]
    if report.entries is not None:
        lines.append("entries:")
        for channel in sorted(report.entries):
            lines.append(f"  {channel}: {format_rational(report.entries[channel])}")
    if report.residual_tests:
        lines.append("residual tests:")
        for text in report.residual_tests:
            lines.append(f"  {text}")
    if report.violations:
        lines.append("violations:")
        for v in report.violations:
            where = _span_text(source, v)
            prefix = f"  {where}  " if where else "  "
            lines.append(f"{prefix}{v.label}  value {format_rational(v.value)}")
    return "\n".join(lines) + "\n"


def render_json(report: EvalReport, source: str = "") -> str:
    doc = {
        "status": report.status,
        "entries": (
            {ch: format_rational(v) for ch, v in report.entries.items()}
            if report.entries is not None
            else None
        ),
        "residual_tests": report.residual_tests,
        "violations": [
            {
                "span": _span_text(source, v),
                "test": v.label,
                "value": format_rational(v.value),
            }
            for v in report.violations
        ],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# --- bindings ---------------------------------------------------------------


def parse_bindings_text(text: str, origin: str) -> dict[str, Rational]:
    """Bindings files hold 'NAME = RATIONAL' lines, with # comments."""
    out: dict[str, Rational] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _BINDING_RE.match(line)
        if m is None:
            raise CliError(f"{origin}:{number}: expected 'NAME = RATIONAL', found {raw.strip()!r}")
        name, value = m.groups()
        try:
            out[name] = parse_rational(value)
        except ValueError as exc:
            raise CliError(f"{origin}:{number}: {exc}") from None
    return out


def _parse_set_flag(item: str) -> tuple[str, Rational]:
    m = _BINDING_RE.match(item.strip())
    if m is None:
        raise CliError(f"--set expects VAR=RATIONAL, found {item!r}")
    name, value = m.groups()
    try:
        return name, parse_rational(value)
    except ValueError as exc:
        raise CliError(f"--set {item!r}: {exc}") from None


def collect_bindings(args: argparse.Namespace, program: BudgetProgram) -> dict[str, Rational]:
    """File bindings first, then --set pairs in order; the last value wins."""
    bindings: dict[str, Rational] = {}
    if args.bindings:
        path = Path(args.bindings)
        try:
            text = path.read_text()
        except OSError as exc:
            raise CliError(str(exc)) from None
        bindings.update(parse_bindings_text(text, path.name))
    for item in args.set or []:
        name, value = _parse_set_flag(item)
        bindings[name] = value
    known = set(program.param_names())
    unknown = sorted(set(bindings) - known)
    if unknown:
        raise CliError("unknown parameter(s) in bindings: " + ", ".join(unknown))
    return bindings


def _load_program(path_text: str) -> tuple[BudgetProgram, str]:
    path = Path(path_text)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CliError(str(exc)) from None
    try:
        return parse(text), path.name
    except DslError as exc:
        raise CliError(f"{path.name}:{exc}") from None


def _pick_budget(args: argparse.Namespace, program: BudgetProgram) -> str:
    names = program.budget_names()
    if not names:
        raise CliError("the program declares no budgets")
    if args.budget is None:
        return names[-1]
    if args.budget not in names:
        raise CliError(f"no budget named {args.budget!r}; available: " + ", ".join(names))
    return args.budget


# --- subcommands -------------------------------------------------------------


def cmd_eval(args: argparse.Namespace) -> int:
    program, source = _load_program(args.file)
    budget = _pick_budget(args, program)
    bindings = collect_bindings(args, program)
    report = build_report(program, budget, bindings, substitute_tests=args.substitute_tests)
    render = render_json if args.format == "json" else render_text
    sys.stdout.write(render(report, source))
    return 0 if report.status == "ok" else 1


def cmd_check(args: argparse.Namespace) -> int:
    program, source = _load_program(args.file)
    budget = _pick_budget(args, program)
    bindings = collect_bindings(args, program)
    missing = sorted(set(program.param_names()) - set(bindings))
    if missing:
        raise CliError("check requires every parameter bound; missing: " + ", ".join(missing))
    report = build_report(program, budget, bindings)
    if report.status == "ok" and not report.residual_tests:
        return 0
    for v in report.violations:
        where = _span_text(source, v)
        prefix = f"{where}  " if where else ""
        sys.stderr.write(f"{prefix}{v.label}  value {format_rational(v.value)}\n")
    return 1


def _sweep_values(start: Rational, stop: Rational, step: Rational) -> list[Rational]:
    if step <= 0:
        raise CliError("--step must be positive")
    if stop < start:
        raise CliError("--to must not be below --from")
    values = []
    value = start
    while value <= stop:
        values.append(value)
        value = value + step
    return values


def cmd_sweep(args: argparse.Namespace) -> int:
    program, source = _load_program(args.file)
    budget = _pick_budget(args, program)
    bindings = collect_bindings(args, program)
    if args.var not in program.param_names():
        raise CliError(f"--var {args.var!r} is not a parameter of the program")
    term: Tuplix = elaborate(program, budget)
    needed = sorted(free_vars_tuplix(term) - set(bindings) - {args.var})
    if needed:
        raise CliError(
            "sweep requires every other parameter of the budget bound; missing: "
            + ", ".join(needed)
        )
    rows: list[tuple[Rational, EvalReport]] = []
    for value in _sweep_values(args.start, args.stop, args.step):
        canonical = normalize(term, {**bindings, args.var: value})
        rows.append((value, report_of(canonical, bindings)))
    if args.format == "json":
        doc = [
            {
                "value": format_rational(value),
                "status": report.status,
                "entries": (
                    {ch: format_rational(v) for ch, v in report.entries.items()}
                    if report.entries is not None
                    else None
                ),
            }
            for value, report in rows
        ]
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
        return 0
    channels: list[str] = sorted(
        {ch for _, report in rows if report.entries for ch in report.entries}
    )
    header = [args.var, "status", *channels]
    table = [header]
    for value, report in rows:
        cells = [format_rational(value), report.status]
        for channel in channels:
            if report.entries is not None and channel in report.entries:
                cells.append(format_rational(report.entries[channel]))
            else:
                cells.append("NULL" if report.status == "null" else "-")
        table.append(cells)
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    out = []
    for row in table:
        out.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
    sys.stdout.write("\n".join(out) + "\n")
    return 0


def cmd_axioms(args: argparse.Namespace) -> int:
    if args.trials < 1:
        raise CliError("--trials must be >= 1")
    results = run_suite(all_laws(), args.trials, args.seed)
    sys.stdout.write(render_results(results))
    return 0 if all(r.passed for r in results) else 1


# --- argument parsing -----------------------------------------------------------


def _rational_arg(text: str) -> Rational:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("file", help="budget program (.bgt)")
    sub.add_argument("--budget", metavar="NAME", help="budget to use (default: last declared)")
    sub.add_argument(
        "--set",
        action="append",
        metavar="VAR=RAT",
        default=[],
        help="bind one parameter (repeatable; overrides --bindings)",
    )
    sub.add_argument("--bindings", metavar="FILE", help="file of NAME = RATIONAL lines")


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tuplix",
        description="Evaluate budget programs over exact rationals.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p_eval = commands.add_parser("eval", help="normalize a budget under bindings")
    _add_common(p_eval)
    p_eval.add_argument("--format", choices=("text", "json"), default="text")
    p_eval.add_argument(
        "--substitute-tests",
        action="store_true",
        help="propagate solved residual tests into the amounts",
    )
    p_eval.set_defaults(run=cmd_eval)

    p_check = commands.add_parser("check", help="exit 0 iff the fully bound budget balances")
    _add_common(p_check)
    p_check.set_defaults(run=cmd_check)

    p_sweep = commands.add_parser("sweep", help="evaluate across a range of one parameter")
    _add_common(p_sweep)
    p_sweep.add_argument("--var", required=True, metavar="NAME", help="parameter to sweep")
    p_sweep.add_argument("--from", dest="start", required=True, type=_rational_arg, metavar="RAT")
    p_sweep.add_argument("--to", dest="stop", required=True, type=_rational_arg, metavar="RAT")
    p_sweep.add_argument("--step", required=True, type=_rational_arg, metavar="RAT")
    p_sweep.add_argument("--format", choices=("text", "json"), default="text")
    p_sweep.set_defaults(run=cmd_sweep)

    p_axioms = commands.add_parser("axioms", help="run the randomized law suite")
    p_axioms.add_argument("--trials", type=int, default=1000, metavar="N")
    p_axioms.add_argument("--seed", type=int, default=0, metavar="S")
    p_axioms.set_defaults(run=cmd_axioms)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)
    try:
        return args.run(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
