"""
Command-line front end.

    cyclewalk evolve   --d 4 --memory --coin hadamard --init paper --t 10
    cyclewalk limiting --d 6 --init localized:0,0,0 --with-empirical 50000
    cyclewalk average  --d 3 --no-memory --init localized:0,0 --t 100000
    cyclewalk compare  --d 5 --init paper --t 100

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numerical
residue, 5 engine comparison failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from ._parallel import thread_count
from .crosscheck import COMPARE_THRESHOLD, corrupt_mode, engine_discrepancy
from .direct import build_walk_operator, probability_history, running_time_average
from .errors import ConfigError, MemoryRequired, NumericError
from .formats import parse_coin, parse_init, render_csv, render_json
from .limiting import limiting_distribution
from .state import StateVector, WalkConfig, make_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERIC = 4
EXIT_COMPARE = 5


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_CONFIG)


@dataclass(frozen=True)
class RunSpec:
    command: str
    config: WalkConfig
    init: str
    state0: StateVector
    t: int | None
    with_empirical: int | None
    fmt: str
    out: Path | None
    include_step_zero: bool = False
    corrupt_mode_matrix: bool = False

    def parameters(self) -> dict:
        coin = self.config.coin.entries
        params = {
            "d": self.config.d,
            "memory": self.config.memory,
            "coin": [[[float(z.real), float(z.imag)] for z in row] for row in coin],
            "init": self.init,
        }
        if self.t is not None:
            params["t"] = self.t
        if self.command == "limiting":
            params["with_empirical"] = self.with_empirical
        if self.command == "average":
            params["include_step_zero"] = self.include_step_zero
        return params


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, required=True, help="number of cycle nodes (>= 3)")
    common.add_argument("--memory", action=argparse.BooleanOptionalAction, default=True,
                        help="walk with 1-step memory (default) or without")
    common.add_argument("--coin", default="hadamard",
                        help="'hadamard', 'identity' or 4 row-major entries like 0.6+0i,0.8i,0.8i,0.6+0i")
    common.add_argument("--init", default="paper",
                        help="paper | localized:c,m,n | file:PATH (JSON array of [re, im] pairs)")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    common.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")

    parser = _ArgParser(prog="cyclewalk", description="Quantum walks on cycles with and without memory.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    p = sub.add_parser("evolve", parents=[common], help="position distribution at every step 0..t")
    p.add_argument("--t", type=int, required=True)

    p = sub.add_parser("limiting", parents=[common], help="analytic time-averaged limiting distribution")
    p.add_argument("--with-empirical", type=int, default=None, metavar="T",
                   help="add a column with the direct running average over T steps")

    p = sub.add_parser("average", parents=[common], help="running time average from the direct engine")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--include-step-zero", action="store_true",
                   help="average steps 0..t-1 instead of 1..t")

    p = sub.add_parser("compare", parents=[common], help="direct vs spectral engine discrepancy")
    p.add_argument("--t", type=int, default=100)
    p.add_argument("--corrupt-mode-matrix", action="store_true", help=argparse.SUPPRESS)
    return parser


def make_spec(args: argparse.Namespace) -> RunSpec:
    """Validate everything before any engine runs; raises ConfigError."""
    thread_count()  # rejects a malformed CYCLEWALK_THREADS early
    config = make_config(args.d, args.memory, parse_coin(args.coin))
    t = getattr(args, "t", None)
    if t is not None and t < (1 if args.command == "average" else 0):
        raise ConfigError(f"--t must be >= {1 if args.command == 'average' else 0}, got {t}")
    with_empirical = getattr(args, "with_empirical", None)
    if with_empirical is not None and with_empirical < 1:
        raise ConfigError(f"--with-empirical must be >= 1, got {with_empirical}")
    if args.command in ("limiting", "compare") and not config.memory:
        raise MemoryRequired(f"'{args.command}' requires --memory")
    state0 = parse_init(args.init, config)
    return RunSpec(
        command=args.command,
        config=config,
        init=args.init,
        state0=state0,
        t=t,
        with_empirical=with_empirical,
        fmt=args.fmt,
        out=args.out,
        include_step_zero=getattr(args, "include_step_zero", False),
        corrupt_mode_matrix=getattr(args, "corrupt_mode_matrix", False),
    )


def run_evolve(spec: RunSpec):
    history = probability_history(spec.state0, build_walk_operator(spec.config), spec.t)
    rows = [(s, n, history[s, n]) for s in range(spec.t + 1) for n in range(spec.config.d)]
    return ["step", "node", "probability"], rows


def run_limiting(spec: RunSpec):
    dist = limiting_distribution(spec.state0)
    if spec.with_empirical is None:
        return ["node", "probability"], [(n, p) for n, p in enumerate(dist.probs)]
    emp = running_time_average(spec.state0, build_walk_operator(spec.config), spec.with_empirical)
    rows = [(n, p, e) for n, (p, e) in enumerate(zip(dist.probs, emp.probs))]
    return ["node", "probability", "empirical"], rows


def run_average(spec: RunSpec):
    dist = running_time_average(
        spec.state0, build_walk_operator(spec.config), spec.t, spec.include_step_zero
    )
    return ["node", "probability"], [(n, p) for n, p in enumerate(dist.probs)]


def run_compare(spec: RunSpec):
    hook = corrupt_mode if spec.corrupt_mode_matrix else None
    worst = engine_discrepancy(spec.state0, spec.t, hook)
    passed = bool(worst <= COMPARE_THRESHOLD)
    return ["d", "t", "max_abs_discrepancy", "threshold", "passed"], [
        (spec.config.d, spec.t, worst, COMPARE_THRESHOLD, passed)
    ]


RUNNERS = {
    "evolve": run_evolve,
    "limiting": run_limiting,
    "average": run_average,
    "compare": run_compare,
}


def _emit(spec: RunSpec, columns, rows) -> None:
    if spec.fmt == "json":
        text = render_json(spec.command, spec.parameters(), columns, rows)
    else:
        text = render_csv(columns, rows)
    if spec.out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(spec.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _fail(code: int, message: str) -> int:
    sys.stderr.write("cyclewalk: error: " + " ".join(message.split()) + "\n")
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else EXIT_CONFIG
    try:
        spec = make_spec(args)
    except ValueError as exc:
        return _fail(EXIT_CONFIG, str(exc))
    except OSError as exc:
        return _fail(EXIT_IO, f"{exc.strerror or exc}: {exc.filename}")

    try:
        columns, rows = RUNNERS[spec.command](spec)
    except (NumericError, np.linalg.LinAlgError) as exc:
        return _fail(EXIT_NUMERIC, str(exc))
    except ValueError as exc:
        return _fail(EXIT_CONFIG, str(exc))

    try:
        _emit(spec, columns, rows)
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write output: {exc.strerror or exc}")

    if spec.command == "compare" and not rows[0][-1]:
        return _fail(EXIT_COMPARE, f"engines disagree: max discrepancy {rows[0][2]:.3e} > {COMPARE_THRESHOLD:g}")
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
