"""Command-line entry point: ``tiecop test``, ``tiecop simulate`` and ``tiecop experiment``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .copulas import parse_copula
from .errors import (
    CapabilityError,
    DegenerateInputError,
    DomainError,
    ExperimentAborted,
    FitError,
)
from .harness import ExperimentConfig, discretize, run_experiment, write_summary
from .procedures import TestKind, run_named_test
from .rng import SeedSpec

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


# ---------------------------------------------------------------- CSV input


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_csv(source) -> tuple[np.ndarray, list[str] | None]:
    """Parse a numeric CSV; a first row containing a non-numeric cell is a header."""
    text = source.read() if hasattr(source, "read") else Path(source).read_text()
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise DataError("the CSV file is empty")
    header = None
    if not all(_is_number(c) for c in rows[0]):
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
        first = 2
    else:
        first = 1
    width = len(header) if header else len(rows[0]) if rows else 0
    data = []
    for i, row in enumerate(rows, start=first):
        if len(row) != width:
            raise DataError(f"row {i}: expected {width} fields, found {len(row)}")
        vals = []
        for j, cell in enumerate(row, start=1):
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"row {i}, column {j}: {cell!r} is not a number") from None
            if not math.isfinite(v):
                raise DataError(f"row {i}, column {j}: non-finite value {cell!r}")
            vals.append(v)
        data.append(vals)
    if len(data) < 2:
        raise DataError("need at least two data rows")
    return np.array(data, dtype=float), header


def _select_columns(x, spec: str | None):
    if spec is None:
        return x
    try:
        cols = [int(c) - 1 for c in spec.split(",")]
    except ValueError:
        raise UsageError(f"--columns expects comma-separated 1-based indices, got {spec!r}") from None
    if any(c < 0 or c >= x.shape[1] for c in cols):
        raise UsageError(f"--columns {spec} out of range for {x.shape[1]} columns")
    return x[:, cols]


def _parse_k(value: str) -> float:
    if value.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        k = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"k must be a positive integer or 'inf', got {value!r}") from None
    if k < 1:
        raise argparse.ArgumentTypeError("k must be at least 1")
    return k


# ---------------------------------------------------------------- config files

_FIELD_TYPES = {
    "copula": str,
    "n": int,
    "test": str,
    "tau": float,
    "dim": int,
    "k": _parse_k,
    "t": float,
    "family": str,
    "estimator": str,
    "adapted": "bool",
    "n_boot": int,
    "reps": int,
    "alpha": float,
    "seed": int,
}

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _convert(key, value, where):
    kind = _FIELD_TYPES[key]
    try:
        if kind == "bool":
            v = value.lower()
            if v in _TRUE:
                return True
            if v in _FALSE:
                return False
            raise ValueError(value)
        return kind(value)
    except (ValueError, argparse.ArgumentTypeError):
        raise UsageError(f"{where}: bad value {value!r} for {key}") from None


def parse_config(text: str) -> list[ExperimentConfig]:
    """``key = value`` lines; each ``[cell]`` section is one experiment.

    Keys set before the first section are defaults for every cell.
    """
    defaults: dict = {}
    cells: list[dict] = []
    current = defaults
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"line {lineno}"
        if line.startswith("["):
            if line.lower() != "[cell]":
                raise UsageError(f"{where}: unknown section {line}")
            current = {}
            cells.append(current)
            continue
        if "=" not in line:
            raise UsageError(f"{where}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _FIELD_TYPES:
            raise UsageError(f"{where}: unknown key {key!r}")
        current[key] = _convert(key, value, where)
    if not cells:
        raise UsageError("the config defines no [cell] sections")
    configs = []
    for i, cell in enumerate(cells, start=1):
        merged = {**defaults, **cell}
        missing = {"copula", "n", "test"} - merged.keys()
        if missing:
            raise UsageError(f"cell {i}: missing {', '.join(sorted(missing))}")
        try:
            configs.append(ExperimentConfig(**merged))
        except (DomainError, ValueError) as exc:
            raise UsageError(f"cell {i}: {exc}") from None
    return configs


# ---------------------------------------------------------------- commands


def _print_report(report, as_json: bool, out):
    if as_json:
        json.dump(report.to_dict(), out, indent=2)
        out.write("\n")
        return
    d = report.to_dict()
    extras = d.pop("extras")
    d["seed"] = f"{report.seed.master_seed}:{report.seed.path_str()}"
    for key, val in {**d, **extras}.items():
        out.write(f"{key}: {val}\n")


def cmd_test(args, out) -> int:
    x, _ = read_csv(sys.stdin if args.csv == "-" else args.csv)
    x = _select_columns(x, args.columns)
    needs_bivariate = args.test != TestKind.RadSym.value
    if needs_bivariate and x.shape[1] != 2:
        raise UsageError(f"test {args.test} needs exactly two columns; use --columns i,j")
    if args.test == TestKind.GoF.value and not args.family:
        raise UsageError("--family is required for the gof test")
    report = run_named_test(
        x,
        args.test,
        family=args.family,
        estimator=args.estimator,
        n_boot=args.n_boot,
        seed=SeedSpec(args.seed, ()),
        adapted=args.adapted,
    )
    _print_report(report, args.json, out)
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    try:
        model = parse_copula(args.family, args.tau, args.dim)
        u = model.sample(args.n, SeedSpec(args.seed, ()).generator())
        u = discretize(u, args.k, args.t)
    except (DomainError, CapabilityError) as exc:
        raise UsageError(str(exc)) from None
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([f"u{j + 1}" for j in range(u.shape[1])])
    for row in u:
        writer.writerow([repr(float(v)) for v in row])
    return EXIT_OK


def cmd_experiment(args, out) -> int:
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    configs = parse_config(text)
    records_dir = Path(args.records_dir) if args.records_dir else None
    if records_dir is not None:
        records_dir.mkdir(parents=True, exist_ok=True)
    results = []
    for i, cfg in enumerate(configs, start=1):
        path = records_dir / f"cell{i:03d}.csv" if records_dir else None
        res = run_experiment(cfg, jobs=args.jobs, results_path=path)
        results.append(res)
        row = res.summary_row()
        out.write(
            f"cell {i}: {row['family']} tau={row['tau']} n={row['n']} k={row['k']} t={row['t']} "
            f"{row['test']} adapted={row['adapted']}: {row['rejection_pct']:.1f}% "
            f"[{row['ci_lo']:.1f}, {row['ci_hi']:.1f}]\n"
        )
    if args.summary:
        write_summary(results, args.summary)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tiecop", description="Tie-adapted copula tests.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="run one test on a CSV dataset")
    t.add_argument("csv", help="CSV file ('-' for standard input)")
    t.add_argument("--test", required=True, choices=[k.value for k in TestKind])
    t.add_argument("--family", help="hypothesized family for gof (e.g. gumbel, clayton, t4)")
    t.add_argument("--estimator", choices=["itau", "mpl"], default="mpl")
    t.add_argument("--n-boot", type=int, default=None, help="bootstrap replicates (default 1000; 50 for evdep)")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--adapted", action=argparse.BooleanOptionalAction, default=True)
    t.add_argument("--columns", help="1-based column indices to use, e.g. 1,2")
    t.add_argument("--json", action="store_true", help="emit the report as JSON")

    s = sub.add_parser("simulate", help="write a (discretized) copula sample as CSV")
    s.add_argument("--family", required=True, help="copula, e.g. clayton, surv:gumbel, khoudraji(indep,normal,0.2,0.95)")
    s.add_argument("--tau", type=float, default=None)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=_parse_k, default=math.inf)
    s.add_argument("--t", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--dim", type=int, default=2)

    e = sub.add_parser("experiment", help="run the Monte Carlo cells of a config file")
    e.add_argument("config")
    e.add_argument("--summary", help="summary CSV path")
    e.add_argument("--records-dir", help="directory for per-repetition records (enables resuming)")
    e.add_argument("--jobs", type=int, default=1)
    return p


_COMMANDS = {"test": cmd_test, "simulate": cmd_simulate, "experiment": cmd_experiment}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return _COMMANDS[args.command](args, out)
    except (UsageError, CapabilityError) as exc:
        print(f"tiecop: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, DegenerateInputError, DomainError, OSError) as exc:
        print(f"tiecop: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (FitError, ExperimentAborted, ArithmeticError) as exc:
        print(f"tiecop: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
