"""Command-line front end: run, analyze, sweep, oracle-check.

Exit codes: 0 success, 1 usage error, 2 I/O or parse error, 3 check failure
(oracle-check divergence). All outputs are deterministic; identical
invocations produce byte-identical files and stdout.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .analysis import classify, sweep_phase
from .oracle import conway_step, project
from .render import RenderMode, RenderOptions, render_ascii, render_csv, render_ppm
from .rules import StepConfig, step_grid
from .state import Boundary, Grid, PatternDocument, PatternError, parse_pattern

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_CHECK = 3

_FRAME_SUFFIX = {RenderMode.ASCII_ARROWS: "txt", RenderMode.IMAGE_PPM: "ppm", RenderMode.CSV: "csv"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the contract reserves 2 for I/O
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


def _add_shared(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pattern", required=True, help="path to a .sqp pattern file")
    p.add_argument(
        "--boundary",
        choices=["fixed", "torus"],
        default=None,
        help="override the pattern's boundary policy",
    )
    p.add_argument(
        "--canonicalize-dead-phase",
        action="store_true",
        help="strip the dead coefficient's phase after each step",
    )
    p.add_argument(
        "--dead-threshold",
        type=float,
        default=1e-6,
        help="alive probability below which a cell counts as dead",
    )


def build_parser() -> _Parser:
    parser = _Parser(
        prog="phasorlife",
        description="Deterministic simulator for complex two-component life grids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    run = sub.add_parser("run", formatter_class=fmt, help="step a pattern and write frames")
    _add_shared(run)
    run.add_argument("--generations", type=int, default=10, help="number of steps to run")
    run.add_argument("--output", default="frames", help="directory for frame files")
    run.add_argument("--format", choices=["ascii", "ppm", "csv"], default="ascii",
                     help="frame file format")

    analyze = sub.add_parser("analyze", formatter_class=fmt,
                             help="classify a pattern's long-run fate as JSON")
    _add_shared(analyze)
    analyze.add_argument("--generations", type=int, default=200,
                         help="maximum generations to examine")
    analyze.add_argument("--tol", type=float, default=1e-6,
                         help="recurrence tolerance on alive-probability maps")

    sweep = sub.add_parser("sweep", formatter_class=fmt,
                           help="classify across a range of phases for one cell; CSV output")
    _add_shared(sweep)
    sweep.add_argument("--cell", type=int, nargs=2, metavar=("X", "Y"), required=True,
                       help="coordinates of the cell whose phase is swept")
    sweep.add_argument("--phase-start", type=float, default=0.0, help="first phase (radians)")
    sweep.add_argument("--phase-end", type=float, default=math.pi, help="last phase (radians)")
    sweep.add_argument("--steps", type=int, default=64, help="number of sweep points, inclusive")
    sweep.add_argument("--generations", type=int, default=200,
                       help="maximum generations per classification")
    sweep.add_argument("--tol", type=float, default=1e-6,
                       help="recurrence tolerance on alive-probability maps")

    oc = sub.add_parser("oracle-check", formatter_class=fmt,
                        help="compare the engine against the classical automaton")
    _add_shared(oc)
    oc.add_argument("--generations", type=int, default=50, help="generations to compare")
    return parser


def _load(path: str, boundary_override: str | None) -> PatternDocument:
    text = Path(path).read_text(encoding="utf-8")
    doc = parse_pattern(text)
    if boundary_override is not None:
        grid = doc.grid.with_boundary(Boundary(boundary_override))
        doc = PatternDocument(grid=grid, version=doc.version, name=doc.name, comment=doc.comment)
    return doc


def _write_frame(outdir: Path, gen: int, g: Grid, mode: RenderMode) -> None:
    path = outdir / f"gen_{gen:05d}.{_FRAME_SUFFIX[mode]}"
    if mode is RenderMode.IMAGE_PPM:
        path.write_bytes(render_ppm(g, RenderOptions(mode=mode)))
    elif mode is RenderMode.CSV:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(render_csv(g))
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(render_ascii(g))


def _cmd_run(doc: PatternDocument, cfg: StepConfig, args: argparse.Namespace) -> int:
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    mode = RenderMode(args.format)
    g = doc.grid
    for gen in range(args.generations + 1):
        _write_frame(outdir, gen, g, mode)
        if gen < args.generations:
            g = step_grid(g, cfg)
    print(f"final total alive probability: {g.total_alive_probability():.17g}")
    return EXIT_OK


def _cmd_analyze(doc: PatternDocument, cfg: StepConfig, args: argparse.Namespace) -> int:
    report = classify(doc.grid, cfg, max_gen=args.generations, tol=args.tol)
    print(json.dumps(report.to_json_dict(), sort_keys=True))
    return EXIT_OK


def _cmd_sweep(doc: PatternDocument, cfg: StepConfig, args: argparse.Namespace) -> int:
    phases = np.linspace(args.phase_start, args.phase_end, args.steps).tolist()
    result = sweep_phase(
        doc,
        (args.cell[0], args.cell[1]),
        phases,
        cfg,
        max_gen=args.generations,
        tol=args.tol,
    )
    print("phase_rad,verdict,death_generation")
    for theta, rep in zip(result.phases, result.reports):
        death = "" if rep.generation is None else str(rep.generation)
        print(f"{theta:.17g},{rep.verdict},{death}")
    if result.critical_angle_estimate is not None:
        print(f"# critical_angle_estimate = {result.critical_angle_estimate:.17g}")
    return EXIT_OK


def _cmd_oracle_check(doc: PatternDocument, cfg: StepConfig, args: argparse.Namespace) -> int:
    g = doc.grid
    classical = np.all((g.a == 1.0) & (g.b == 0.0) | (g.a == 0.0) & (g.b == 1.0))
    if not classical:
        print("error: non-classical token in pattern", file=sys.stderr)
        return EXIT_IO
    semi = g
    boolean = project(g, 0.5)
    for gen in range(1, args.generations + 1):
        semi = step_grid(semi, cfg)
        boolean = conway_step(boolean)
        projected = project(semi, 0.5)
        if projected != boolean:
            diff = projected.alive != boolean.alive
            ys, xs = np.nonzero(diff)
            x, y = int(xs[0]), int(ys[0])
            print(
                f"divergence at generation {gen}: cell ({x}, {y}) "
                f"engine={bool(projected.alive[y, x])} oracle={bool(boolean.alive[y, x])}",
                file=sys.stderr,
            )
            return EXIT_CHECK
    print(f"oracle check passed: {args.generations} generations")
    return EXIT_OK


_COMMANDS = {
    "run": _cmd_run,
    "analyze": _cmd_analyze,
    "sweep": _cmd_sweep,
    "oracle-check": _cmd_oracle_check,
}


def _validate(args: argparse.Namespace) -> str | None:
    if args.generations < 0:
        return "generations must be >= 0"
    if args.command == "analyze" and args.generations < 1:
        return "analyze needs at least one generation"
    if args.command == "sweep":
        if args.steps < 1:
            return "steps must be >= 1"
        if args.steps > 1 and args.phase_end <= args.phase_start:
            return "phase-end must exceed phase-start"
    return None


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    problem = _validate(args)
    if problem is not None:
        print(f"usage error: {problem}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = StepConfig(
            canonicalize_dead_phase=args.canonicalize_dead_phase,
            dead_threshold=args.dead_threshold,
        )
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        doc = _load(args.pattern, args.boundary)
    except (OSError, PatternError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        return _COMMANDS[args.command](doc, cfg, args)
    except (IndexError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
