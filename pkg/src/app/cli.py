from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from core.config import CompileOptions, load_config
from core.errors import NetParseError, QBCError
from core.logging_utils import setup_logging
from core.models import CompileState
from core.net_io import load_net, load_program, save_program
from graph.pipeline_builder import raise_for_error, stream_compile
from tools.chain_builder import build_all
from tools.dot_export import era_dot
from tools.era_engine import find_eras
from tools.net_model import require_valid, resolve_names
from tools.reporting import breakpoint_lines, dims_summary, era_table, program_table, repair_table, residual_table
from tools.verification import verify_program


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qbc", description="Compile QB nets into sequences of unitary matrices")
    commands = parser.add_subparsers(dest="command", required=True)

    compile_cmd = commands.add_parser("compile", help="compile a net file into a program file")
    compile_cmd.add_argument("net", type=Path, help="net file (JSON)")
    compile_cmd.add_argument("--eras", choices=["root", "external"], default="root", help="era decomposition kind")
    compile_cmd.add_argument("--measure", default="", help="comma-separated names of nodes to be measured")
    compile_cmd.add_argument("--mode", choices=["v1", "e1"], default="v1", help="start from v_1 or from e_1")
    compile_cmd.add_argument("--exact-dim", action="store_true", help="use N_S = D instead of a power of two")
    compile_cmd.add_argument("--tol", type=float, default=None, help="isometry tolerance")
    compile_cmd.add_argument("--dot", type=Path, default=None, help="also write the era graph as DOT")
    compile_cmd.add_argument("-o", "--output", type=Path, required=True, help="program file to write")

    verify_cmd = commands.add_parser("verify", help="check a program file against its net")
    verify_cmd.add_argument("net", type=Path)
    verify_cmd.add_argument("program", type=Path)
    verify_cmd.add_argument("--tol", type=float, default=None, help="acceptance tolerance for every residual")

    eras_cmd = commands.add_parser("eras", help="print the era decomposition of a net")
    eras_cmd.add_argument("net", type=Path)
    eras_cmd.add_argument("--eras", choices=["root", "external"], default="root")
    eras_cmd.add_argument("--dot", type=Path, default=None, help="write the era graph as DOT")
    return parser


def _print_table(title: str, frame) -> None:
    print(title)
    print(frame.to_string(index=False) if len(frame) else "  (none)")
    print()


def _compile(args: argparse.Namespace, config, logger) -> int:
    net = load_net(args.net, strict=config.strict_files)
    try:
        measured = resolve_names(net, args.measure.split(","))
    except KeyError as exc:
        raise NetParseError(f"--measure: {exc.args[0]}", stage="options") from exc
    options = CompileOptions.from_config(
        config,
        era_kind=args.eras,
        measured_nodes=measured,
        mode=args.mode,
        exact_dim=args.exact_dim,
        isometry_tol=args.tol,
    )

    state: CompileState = {}
    for state in stream_compile(net, options, logger=logger, config=config):
        pass
    raise_for_error(state)
    program = state["program"]

    _print_table("eras", era_table(net, state["eras"], state["deltas"], state["era_matrices"]))
    if args.dot:
        args.dot.write_text(era_dot(net, state["eras"]), encoding="utf-8")
    _print_table("segments", program_table(program))
    print(dims_summary(program))
    for line in breakpoint_lines(program):
        print(line)
    print()
    _print_table("repairs", repair_table(program.repairs))

    save_program(program, args.output, net=net)
    print(f"wrote {args.output}")
    return 0


def _verify(args: argparse.Namespace, config, logger) -> int:
    net = require_valid(load_net(args.net, strict=config.strict_files))
    program = load_program(args.program, strict=config.strict_files)
    tol = args.tol if args.tol is not None else config.oracle_tol
    report = verify_program(program, net, tol=tol, story_cap=config.story_cap, logger=logger)

    _print_table("residuals", residual_table(report, first_unitary=2 if program.mode == "v1" else 1))
    for note in report.notes:
        print(f"note: {note}")
    worst = report.worst_unitary()
    if not report.ok:
        if worst is not None and report.unitarity[worst - 1] > tol:
            print(f"[verify] U_{worst + (1 if program.mode == 'v1' else 0)} is not unitary", file=sys.stderr)
        print(f"[verify] residuals exceed tol={tol:g}", file=sys.stderr)
        return 1
    print(f"ok (tol={tol:g})")
    return 0


def _eras(args: argparse.Namespace, config, logger) -> int:
    net = require_valid(load_net(args.net, strict=config.strict_files))
    eras = find_eras(net, args.eras, logger=logger)
    build = build_all(net, eras, logger=logger)
    _print_table(f"{args.eras}-node eras", era_table(net, eras, build.deltas, build.matrices))
    if args.dot:
        args.dot.write_text(era_dot(net, eras), encoding="utf-8")
        print(f"wrote {args.dot}")
    return 0


COMMANDS = {"compile": _compile, "verify": _verify, "eras": _eras}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(list(argv) if argv is not None else None)
    config = load_config()
    logger = setup_logging(config.runtime_cache / "qbc.log", config.log_level)
    logger.info("[cli] %s %s", args.command, args.net)

    try:
        return COMMANDS[args.command](args, config, logger)
    except QBCError as exc:
        print(str(exc), file=sys.stderr)
        logger.error("%s", exc)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
