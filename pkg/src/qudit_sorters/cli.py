"""Command-line entry point.

Exit status: 0 on success, 1 when a check fails, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import sorters
from .multiparticle_sim import (
    SORTERS,
    NonBasisParticleError,
    get_sorter,
    histogram_from_records,
    infer_input_histogram,
    particle_from_json,
    sample_clicks,
    sort_deterministic,
)
from .photonic_oam import PhotonicLayout
from .tensor_core import DEFAULT_TOL, LOOSEST_TOL, max_residual
from .verification import run_checks

SCHEMA_VERSION = "1"
MIN_TOL = 1e-12
MAX_VERIFY_DIM = 16
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _num(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else _num(float(x))
    if isinstance(x, float):
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {k: _num(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    return x


def dumps(report: dict) -> str:
    return json.dumps(_num(report), indent=2) + "\n"


@dataclass
class RunConfig:
    command: str
    dimension: int
    sorter: str = "mqs"
    particles: list = field(default_factory=list)
    shots: int = 1
    seed: int | None = None
    tolerance: float = DEFAULT_TOL
    output_path: Path | None = None
    format: str = "json"
    measure_system: bool = False

    def __post_init__(self):
        if not isinstance(self.dimension, int) or self.dimension < 2:
            raise UsageError(f"dimension must be an integer >= 2, got {self.dimension!r}")
        if self.sorter not in SORTERS:
            raise UsageError(f"unknown sorter {self.sorter!r}; choose from {sorted(SORTERS)}")
        if not isinstance(self.shots, int) or self.shots < 1:
            raise UsageError(f"shots must be a positive integer, got {self.shots!r}")
        check_cli_tol(self.tolerance)
        if self.format not in ("json", "csv"):
            raise UsageError(f"format must be json or csv, got {self.format!r}")

    @classmethod
    def from_file(cls, command: str, path: Path, **overrides) -> "RunConfig":
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        if "dimension" not in raw:
            raise UsageError("config needs a 'dimension' field")
        kwargs = {
            "dimension": raw["dimension"],
            "sorter": raw.get("sorter", "mqs"),
            "particles": raw.get("particles", []),
            "shots": raw.get("shots", 1),
            "seed": raw.get("seed"),
            "tolerance": raw.get("tolerance", DEFAULT_TOL),
            "measure_system": bool(raw.get("measure_system", False)),
        }
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(command, **kwargs)


def check_cli_tol(tol: float) -> float:
    if not MIN_TOL <= tol <= LOOSEST_TOL:
        raise UsageError(f"tolerance must lie in [{MIN_TOL:g}, {LOOSEST_TOL:g}], got {tol!r}")
    return tol


def _histogram_csv(counts, inferred) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["port", "count", "inferred_input"])
    for port, (c, n) in enumerate(zip(counts, _num(list(inferred)))):
        writer.writerow([port, c, n])
    return buf.getvalue()


def _particles(cfg: RunConfig):
    if not cfg.particles:
        raise UsageError("config lists no particles")
    try:
        return [particle_from_json(p, cfg.dimension) for p in cfg.particles]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad particle entry: {exc}") from exc


def _sorter(cfg: RunConfig):
    try:
        return get_sorter(cfg.sorter, cfg.dimension)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def run_verify(dmin: int, dmax: int, tol: float = DEFAULT_TOL) -> tuple[int, dict]:
    if not 2 <= dmin <= dmax <= MAX_VERIFY_DIM:
        raise UsageError(f"need 2 <= dmin <= dmax <= {MAX_VERIFY_DIM}, got ({dmin}, {dmax})")
    check_cli_tol(tol)
    checks = [c for D in range(dmin, dmax + 1) for c in run_checks(D, tol)]
    failed = [c for c in checks if not c.passed]
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "dmin": dmin,
        "dmax": dmax,
        "tolerance": tol,
        "passed": not failed,
        "first_failure": None if not failed else f"D={failed[0].dimension}:{failed[0].name}",
        "max_residual": max(c.max_residual for c in checks),
        "checks": [c.to_json() for c in checks],
    }
    return (EXIT_FAIL if failed else EXIT_OK), report


def run_sort(cfg: RunConfig) -> dict:
    particles = _particles(cfg)
    try:
        records = sort_deterministic(particles, _sorter(cfg), cfg.dimension)
    except NonBasisParticleError as exc:
        raise UsageError(str(exc)) from exc
    hist = histogram_from_records(records, cfg.dimension)
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "sort",
        "dimension": cfg.dimension,
        "sorter": cfg.sorter,
        "records": [r.to_json() for r in records],
        "counts": list(hist.counts),
        "total": hist.total,
        "inferred_inputs": infer_input_histogram(hist),
    }


def run_sample(cfg: RunConfig) -> dict:
    if cfg.seed is None:
        raise UsageError("sample requires a seed")
    particles = _particles(cfg)
    try:
        hist = sample_clicks(
            particles, _sorter(cfg), cfg.dimension, cfg.shots, cfg.seed, cfg.measure_system
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "sample",
        "dimension": cfg.dimension,
        "sorter": cfg.sorter,
        "shots": cfg.shots,
        "seed": cfg.seed,
        "counts": list(hist.counts),
        "total": hist.total,
        "inferred_inputs": infer_input_histogram(hist),
    }
    if hist.joint is not None:
        report["joint_counts"] = [list(row) for row in hist.joint]
    return report


def run_classify(path: Path, tol: float = DEFAULT_TOL) -> dict:
    try:
        mapping = sorters.CandidateMapping.from_json(json.loads(Path(path).read_text()))
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise UsageError(f"cannot load mapping {path}: {exc}") from exc
    report = sorters.classify(mapping, tol).to_json()
    return {"schema_version": SCHEMA_VERSION, "command": "classify", "dimension": mapping.D, **report}


def run_decompose(D: int, tol: float = DEFAULT_TOL) -> tuple[int, dict]:
    if D < 2:
        raise UsageError(f"dimension must be >= 2, got {D}")
    try:
        sqs = sorters.build_sqs(D)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    fourier_res = max_residual(sqs, sorters.build_sqs_via_fourier(D))
    theorem_res = max_residual(sorters.build_mqs_via_theorem(D), sorters.build_mqs(D))
    ok = fourier_res <= tol and theorem_res <= tol
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "decompose",
        "dimension": D,
        "tolerance": tol,
        "sqs_fourier_residual": fourier_res,
        "mqs_theorem_residual": theorem_res,
        "passed": ok,
    }
    return (EXIT_OK if ok else EXIT_FAIL), report


def run_describe(target: str, D: int = 4) -> dict:
    layout = PhotonicLayout.standard(D)
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "describe",
        "layout": target,
        "dimension": D,
        "elements": layout.elements(),
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qudit-sorters", description="QuDit sorter simulations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def io_flags(p, with_format=False):
        p.add_argument("--output", type=Path, default=None, help="write the report here instead of stdout")
        if with_format:
            p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("verify", help="run the invariant suite over a range of dimensions")
    p.add_argument("--dmin", type=int, default=2)
    p.add_argument("--dmax", type=int, default=8)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    io_flags(p)

    for name in ("sort", "sample"):
        p = sub.add_parser(name, help=f"{name} particles described by a JSON config")
        p.add_argument("--config", type=Path, required=True)
        p.add_argument("--seed", type=int, default=None, help="overrides the config seed")
        io_flags(p, with_format=True)

    p = sub.add_parser("classify", help="classify a candidate basis mapping")
    p.add_argument("--mapping", type=Path, required=True)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    io_flags(p)

    p = sub.add_parser("decompose", help="residuals of the SQS and MQS gate decompositions")
    p.add_argument("--dimension", type=int, required=True)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    io_flags(p)

    p = sub.add_parser("describe", help="print a photonic layout")
    p.add_argument("target", choices=["photonic4"])
    io_flags(p)
    return parser


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    status = EXIT_OK
    try:
        if args.command == "verify":
            status, report = run_verify(args.dmin, args.dmax, args.tol)
        elif args.command in ("sort", "sample"):
            cfg = RunConfig.from_file(
                args.command, args.config, seed=args.seed, output_path=args.output, format=args.format
            )
            report = run_sort(cfg) if args.command == "sort" else run_sample(cfg)
            if cfg.format == "csv":
                _emit(_histogram_csv(report["counts"], report["inferred_inputs"]), args.output)
                return status
        elif args.command == "classify":
            check_cli_tol(args.tol)
            report = run_classify(args.mapping, args.tol)
        elif args.command == "decompose":
            check_cli_tol(args.tol)
            status, report = run_decompose(args.dimension, args.tol)
        else:
            report = run_describe(args.target)
    except UsageError as exc:
        print(f"qudit-sorters {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(dumps(report), args.output)
    if status == EXIT_FAIL and args.command == "verify":
        print(f"verify failed: {report['first_failure']}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
