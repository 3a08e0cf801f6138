"""Command-line front end.

Subcommands: ``eigs``, ``table``, ``validate``, ``potential`` and
``recurrence-dump``.  Exit codes: 0 success, 1 validation failure,
2 computational failure.  A ``--config`` file holds ``key = value`` lines
whose keys are option names; flags on the command line take precedence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import __version__
from .coeffs import as_params
from .errors import BOSError
from .fdspec import fd_extrapolated
from .golden import table_for_epsilon
from .liouville import BETA, branch_tag, potential_V
from .recurrence import backward_run, forward_run, recurrence_spectrum
from .shooting import EigenEstimate, Window, shooting_spectrum
from .validate import TABLE_GATE, compare_table, run_validation

log = logging.getLogger("bosspec")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_COMPUTE = 2

CSV_COLUMNS = ("epsilon", "n", "m", "method", "mu", "lambda", "bracket_lo", "bracket_hi", "tol")
METHODS = ("shooting", "fd", "recurrence")


def _float_list(text: str) -> list[float]:
    return [float(t) for t in str(text).split(",") if t.strip()]


def _int_list(text: str) -> list[int]:
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            a, b = part.split("..")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _methods(text: str) -> list[str]:
    items = [t.strip() for t in str(text).split(",") if t.strip()]
    bad = [t for t in items if t not in METHODS]
    if bad or not items:
        raise argparse.ArgumentTypeError(f"methods must be drawn from {', '.join(METHODS)}")
    return items


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("value must be positive")
    return v


def read_config(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, blank lines are ignored."""
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            cfg[key.replace("-", "_")] = value
    return cfg


@dataclass(frozen=True)
class RunConfig:
    """Validated options of one invocation, echoed into JSON output."""

    command: str
    epsilon: tuple[float, ...]
    n_max: int
    ms: tuple[int, ...]
    methods: tuple[str, ...]
    tol: float
    fmt: str
    out: str | None

    def echo(self) -> dict:
        return {"command": self.command, "epsilon": list(self.epsilon), "n": self.n_max,
                "m": list(self.ms), "method": list(self.methods), "tol": self.tol,
                "format": self.fmt}


def _common(p: argparse.ArgumentParser, *, eps_default: str, n_default: int = 5) -> None:
    p.add_argument("--epsilon", type=_float_list, default=eps_default,
                   help="comma-separated epsilon values in (0, 2)")
    p.add_argument("--n", type=int, default=n_default, help="largest eigenvalue index")
    p.add_argument("--tol", type=_positive, default=1e-8, help="eigenvalue tolerance in mu")
    p.add_argument("--format", dest="format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--workers", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bosspec", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", default=None, help="key = value file of defaults")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    verbose = argparse.ArgumentParser(add_help=False)
    verbose.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    p = sub.add_parser("eigs", parents=[verbose], help="eigenvalues by one or more methods")
    _common(p, eps_default="1")
    p.add_argument("--m", type=_int_list, default="7", help="window indices, e.g. 3..7")
    p.add_argument("--method", type=_methods, default="shooting")

    p = sub.add_parser("table", parents=[verbose], help="recompute an embedded table and compare cell by cell")
    _common(p, eps_default="1")
    p.add_argument("--m", type=_int_list, default="3..7")
    p.add_argument("--reproduce", action="store_true",
                   help="gate every cell at the comparison tolerance (exit 1 on failure)")
    p.add_argument("--gate", type=_positive, default=TABLE_GATE)

    p = sub.add_parser("validate", parents=[verbose], help="invariant suite and kernel identities")
    _common(p, eps_default="0.1,0.5,1", n_default=20)
    p.add_argument("--n-sum", type=int, default=50, help="eigenvalues in the spectral sums")
    p.add_argument("--nu", type=_positive, default=0.5, help="envelope slack")
    p.add_argument("--trace-gate", choices=("advisory", "hard"), default="advisory")

    p = sub.add_parser("potential", parents=[verbose], help="sample V(s) with branch tags")
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--format", dest="format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)

    p = sub.add_parser("recurrence-dump", parents=[verbose], help="write v_n of a recurrence run")
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--N", type=int, default=100)
    p.add_argument("--direction", choices=("forward", "backward"), default="forward")
    p.add_argument("--normalize", action="store_true", help="scale backward runs to v_1 = 1")
    p.add_argument("--format", dest="format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    return parser


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = read_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        actions = {a.dest: a for a in sub._actions}
        unknown = sorted(set(cfg) - set(actions))
        if unknown:
            parser.error(f"unknown config keys for {args.command}: {', '.join(unknown)}")
        for key, value in cfg.items():
            if actions[key].nargs == 0:  # store_true flags
                if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                    parser.error(f"config key {key} expects a boolean, got {value!r}")
                cfg[key] = value.lower() in ("true", "1", "yes")
        sub.set_defaults(**cfg)
        args = parser.parse_args(argv)
    return args


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    if isinstance(x, float):
        return repr(float(x))
    return str(x)


def _emit(rows: list[dict], columns: Sequence[str], fmt: str, out: str | None,
          meta: dict | None = None) -> None:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_fmt(r.get(c)) for c in columns])
        text = buf.getvalue()
    else:
        payload = {"metadata": {"version": __version__, **(meta or {})},
                   "columns": list(columns), "rows": rows}
        text = json.dumps(payload, indent=2, sort_keys=False, allow_nan=False,
                          default=lambda o: None) + "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _estimate_row(e: EigenEstimate) -> dict:
    return {"epsilon": e.epsilon, "n": e.n, "m": e.m, "method": e.method, "mu": e.mu,
            "lambda": e.lam, "bracket_lo": e.bracket[0], "bracket_hi": e.bracket[1], "tol": e.tol}


def _eig_job(job):
    eps, method, m, n_max, tol = job
    if method == "shooting":
        return shooting_spectrum(eps, Window(m), n_max, tol)
    if method == "recurrence":
        return recurrence_spectrum(eps, n_max, tol=min(tol, 1e-10))
    return [fd_extrapolated(eps, n) for n in range(1, n_max + 1)]


def _run_jobs(jobs, workers: int):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_eig_job, jobs))
    return [_eig_job(j) for j in jobs]


def _sort_key(row):
    return (row["epsilon"], METHODS.index(row["method"]), -1 if row["m"] is None else row["m"], row["n"])


def cmd_eigs(args) -> int:
    jobs = []
    for eps in args.epsilon:
        as_params(eps)
        for method in args.method:
            ms = args.m if method == "shooting" else [None]
            jobs.extend((eps, method, m, args.n, args.tol) for m in ms)
    results = _run_jobs(jobs, args.workers)
    rows = sorted((_estimate_row(e) for batch in results for e in batch), key=_sort_key)
    cfg = RunConfig("eigs", tuple(args.epsilon), args.n, tuple(args.m), tuple(args.method),
                    args.tol, args.format, args.out)
    _emit(rows, CSV_COLUMNS, args.format, args.out, {"config": cfg.echo()})
    return EXIT_OK


def cmd_table(args) -> int:
    failed = False
    rows = []
    for eps in args.epsilon:
        table = table_for_epsilon(eps)
        comp = compare_table(table, tol=args.tol, gate=args.gate, ms=args.m, n_max=args.n)
        for c in comp.cells:
            rows.append({"epsilon": eps, "n": c.n, "m": c.m, "golden": c.golden,
                         "computed": c.computed, "diff": c.diff,
                         "status": "PASS" if c.passed(args.gate) else "FAIL"})
        for c in comp.failures:
            print(f"FAIL {table.source} cell n={c.n} m={c.m}: computed {c.computed:.6f} "
                  f"vs {c.golden:.5f} (diff {c.diff:+.2e})", file=sys.stderr)
        failed |= not comp.passed
        print(f"{table.source}: {len(comp.cells) - len(comp.failures)}/{len(comp.cells)} cells "
              f"within {args.gate:.1e}", file=sys.stderr)
    cols = ("epsilon", "n", "m", "golden", "computed", "diff", "status")
    _emit(rows, cols, args.format, args.out,
          {"config": {"command": "table", "epsilon": list(args.epsilon), "gate": args.gate,
                      "tol": args.tol, "reproduce": args.reproduce}})
    return EXIT_VALIDATION if (failed and args.reproduce) else EXIT_OK


def cmd_validate(args) -> int:
    report = run_validation(args.epsilon, n_max=args.n, n_sum=args.n_sum, tol=args.tol,
                            nu=args.nu, trace_gate=args.trace_gate)
    cols = ("gate", "epsilon", "value", "threshold", "status", "kind", "note")
    _emit(report.rows(), cols, args.format, args.out,
          {"config": {"command": "validate", "epsilon": list(args.epsilon),
                      "trace_gate": args.trace_gate, "nu": args.nu}})
    for g in report.advisory_failures:
        log.warning("advisory gate %s failed for epsilon=%s", g.name, g.epsilon)
    return EXIT_OK if report.passed else EXIT_VALIDATION


def cmd_potential(args) -> int:
    params = as_params(args.epsilon)
    k = np.arange(1, args.points + 1)
    s = 0.5 * BETA * (1.0 - np.cos(math.pi * k / (args.points + 1)))
    v = potential_V(s, params)
    rows = [{"s": float(si), "V": float(vi), "branch": branch_tag(si)} for si, vi in zip(s, v)]
    _emit(rows, ("s", "V", "branch"), args.format, args.out,
          {"config": {"command": "potential", "epsilon": args.epsilon, "points": args.points}})
    return EXIT_OK


def cmd_recurrence_dump(args) -> int:
    params = as_params(args.epsilon)
    if args.direction == "forward":
        run = forward_run(args.lam, params, args.N)
        vals = run.values
    else:
        run = backward_run(args.lam, params, args.N)
        vals = run.normalized(1) if args.normalize else run.values
    rows = [{"n": i + 1, "v": float(x)} for i, x in enumerate(vals)]
    _emit(rows, ("n", "v"), args.format, args.out,
          {"config": {"command": "recurrence-dump", "epsilon": args.epsilon, "lam": args.lam,
                      "N": args.N, "direction": args.direction}})
    return EXIT_OK


COMMANDS = {
    "eigs": cmd_eigs,
    "table": cmd_table,
    "validate": cmd_validate,
    "potential": cmd_potential,
    "recurrence-dump": cmd_recurrence_dump,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except (OSError, ValueError) as exc:
        print(f"bosspec: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except BOSError as exc:
        print(f"bosspec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except KeyError as exc:
        print(f"bosspec: {exc.args[0]}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
