"""Command-line front end.

Four subcommands share one flow: arguments and environment become a
RunConfig, the container builds the use case, the report is rendered as an
aligned text table on stdout and written as canonical JSON to --out
("-" sends the JSON to stdout instead of the table). Every WorkbenchError
is turned into its exit code here and nowhere else.
"""

import argparse
import asyncio
import os
import sys
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any, TextIO

import structlog

from gs_workbench.container import Container
from gs_workbench.domain import (
    BracketKind,
    BracketReport,
    CohomologyReport,
    ComplexKind,
    Report,
    RunConfig,
    Suite,
    ValidationReport,
    VerificationReport,
)
from gs_workbench.errors import InputError, WorkbenchError
from gs_workbench.ports import ReportSink

log = structlog.get_logger()

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_AXIOMS = 3


def env_int(env: Mapping[str, str], name: str, default: int) -> int:
    raw = env.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"{name} must be an integer, got {raw!r}") from exc


def default_threads() -> int:
    return min(4, os.cpu_count() or 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gs-workbench",
        description="Gerstenhaber-Schack cohomology of finite-dimensional Hopf algebras.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", type=Path, help="Hopf algebra JSON file")
    common.add_argument("--out", help="write the JSON report here ('-' for stdout)")
    common.add_argument("--prime", type=int, help="reduce a rational algebra mod this prime")
    common.add_argument("--threads", type=int, help="worker thread cap (env GS_THREADS)")
    common.add_argument("--work-limit", type=int, help="propagated-term guard (env GS_WORK_LIMIT)")
    common.add_argument("--materialize-limit", type=int,
                        help="matrix size guard (env GS_MATERIALIZE_LIMIT)")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("validate", parents=[common], help="check the Hopf axioms")

    cohomology = commands.add_parser("cohomology", parents=[common], help="Betti table")
    cohomology.add_argument("--kind", choices=[k.value for k in ComplexKind], default="diag")
    cohomology.add_argument("--max-degree", type=int, default=2)
    cohomology.add_argument("--u-trunc", type=int, default=1)
    cohomology.add_argument("--with-bases", action="store_true",
                            help="include cohomology representatives (diagonal complex)")

    bracket = commands.add_parser("bracket", parents=[common], help="products of cocycles")
    bracket.add_argument("--deg", type=int, nargs=2, metavar=("P", "Q"), required=True)
    bracket.add_argument("--kind", choices=[k.value for k in BracketKind],
                         default=BracketKind.GERSTENHABER.value)
    choice = bracket.add_mutually_exclusive_group()
    choice.add_argument("--class", dest="classes", type=int, nargs=2, metavar=("I", "J"))
    choice.add_argument("--random", type=int, nargs=2, metavar=("TRIALS", "SEED"))

    verify = commands.add_parser("verify", parents=[common], help="run verification suites")
    verify.add_argument("--suite", choices=[s.value for s in Suite] + ["all"], default="all")
    verify.add_argument("--arity-cap", type=int, default=2)
    verify.add_argument("--trials", type=int, default=10)
    verify.add_argument("--seed", type=int, default=0)
    return parser


def config_from_args(args: argparse.Namespace, env: Mapping[str, str]) -> RunConfig:
    """Flags override environment values, which override the defaults."""
    threads = args.threads or env_int(env, "GS_THREADS", default_threads())
    work = args.work_limit or env_int(env, "GS_WORK_LIMIT", 200_000_000)
    materialize = args.materialize_limit or env_int(env, "GS_MATERIALIZE_LIMIT", 70_000)
    out = None if args.out in (None, "-") else Path(args.out)
    base: dict[str, Any] = {
        "command": args.command,
        "input_path": args.input,
        "prime": args.prime,
        "out": out,
        "threads": threads,
        "work_limit": work,
        "materialize_limit": materialize,
    }
    match args.command:
        case "cohomology":
            return RunConfig(**base, kind=ComplexKind(args.kind), max_degree=args.max_degree,
                             u_trunc=args.u_trunc, with_bases=args.with_bases)
        case "bracket":
            trials, seed = args.random or (10, 0)
            classes = tuple(args.classes) if args.classes else None
            return RunConfig(**base, bracket_kind=BracketKind(args.kind),
                             degrees=(args.deg[0], args.deg[1]), classes=classes,
                             trials=trials, seed=seed)
        case "verify":
            suite = None if args.suite == "all" else Suite(args.suite)
            return RunConfig(**base, suite=suite, arity_cap=args.arity_cap,
                             trials=args.trials, seed=args.seed)
        case _:
            return RunConfig(**base)


def table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    cells = [list(headers)] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[k]) for row in cells) for k in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths, strict=True)).rstrip()
             for row in cells]
    return "\n".join(lines)


def yes(flag: bool) -> str:
    return "true" if flag else "false"


def render_validation(report: ValidationReport) -> str:
    flags = report.flags
    rows = [(c.name, c.status.value, c.witness or "") for c in report.axioms]
    order = report.antipode_order if report.antipode_order is not None else "infinite or > 64"
    return "\n".join([
        f"algebra {report.algebra} over {report.field}, dim {report.dim}",
        table(("axiom", "status", "witness"), rows),
        f"involutive={yes(flags.involutive)} cocommutative={yes(flags.cocommutative)} "
        f"commutative={yes(flags.commutative)}",
        f"antipode order: {order}",
    ])


def render_cohomology(report: CohomologyReport) -> str:
    title = f"{report.kind.value} cohomology of {report.algebra} over {report.field}"
    if report.u_trunc is not None:
        title += f", u-truncation {report.u_trunc}"
    if report.heuristic:
        title += " (heuristic for characteristic 0)"
    rows = [(r.n, r.dim, r.rank_in, r.rank_out, r.betti) for r in report.degrees]
    return "\n".join([title, table(("n", "dim", "rankIn", "rankOut", "betti"), rows)])


def render_bracket(report: BracketReport) -> str:
    p, q = report.degrees
    lines = [f"{report.kind.value} of {report.algebra} in degrees ({p}, {q})"]
    for result in report.results:
        if result.nnz == 0:
            status = "zero"
        elif result.preimage is not None:
            status = "coboundary, preimage verified"
        else:
            status = "cocycle, not exact" if result.is_cocycle else "not a cocycle"
        lines.append(f"{result.label}: nnz={result.nnz}, {status}")
        if result.value is not None:
            entries = result.value["matrix"]["entries"]
            lines.extend(f"  ({r}, {c}) = {v}" for r, c, v in entries)
    return "\n".join(lines)


def render_verification(report: VerificationReport) -> str:
    rows = [(c.name, c.status.value, c.detail) for c in report.clauses]
    lines = [f"suite {report.suite} on {report.algebra} (seed {report.seed}, "
             f"{report.trials} trials): {'passed' if report.passed else 'FAILED'}",
             table(("clause", "status", "detail"), rows)]
    for clause in report.failures():
        lines.append(f"witness for {clause.name} [{clause.ref}]: {clause.witness}")
    return "\n".join(lines)


def render(report: Report) -> str:
    match report:
        case list():
            return "\n\n".join(render_verification(r) for r in report)
        case ValidationReport():
            return render_validation(report)
        case CohomologyReport():
            return render_cohomology(report)
        case BracketReport():
            return render_bracket(report)
        case VerificationReport():
            return render_verification(report)


def exit_code(report: Report) -> int:
    match report:
        case list():
            return EXIT_OK if all(r.passed for r in report) else EXIT_FAILED
        case ValidationReport():
            return EXIT_OK if report.passed else EXIT_AXIOMS
        case VerificationReport():
            return EXIT_OK if report.passed else EXIT_FAILED
        case _:
            return EXIT_OK


async def execute(config: RunConfig, container: Container) -> Report:
    match config.command:
        case "validate":
            return await container.validate_algebra().execute(config)
        case "cohomology":
            return await container.compute_cohomology().execute(config)
        case "bracket":
            return await container.evaluate_bracket().execute(config)
        case _:
            return await container.run_verification().execute(config)


async def run(config: RunConfig, stream: TextIO, json_to_stream: bool = False) -> int:
    """Execute one command and emit its report; returns the exit code."""
    container = Container(config=config, stream=stream)
    report = await execute(config, container)
    sink: ReportSink = container.report_sink()
    if json_to_stream:
        await sink.emit(report)
    else:
        stream.write(render(report) + "\n")
        if config.out is not None:
            await sink.emit(report, config.out)
    code = exit_code(report)
    await log.ainfo("command_finished", command=config.command, exit_code=code)
    return code


def run_cli(argv: Sequence[str] | None = None, env: Mapping[str, str] | None = None,
            stream: TextIO | None = None, errors: TextIO | None = None) -> int:
    out = stream or sys.stdout
    err = errors or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args, os.environ if env is None else env)
        return asyncio.run(run(config, out, json_to_stream=args.out == "-"))
    except WorkbenchError as exc:
        log.error("command_failed", command=args.command, error=type(exc).__name__,
                  message=str(exc))
        err.write(f"error: {exc}\n")
        return exc.exit_code
