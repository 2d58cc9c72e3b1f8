"""Macro-replication runner, metrics, and persistent result files.

An experiment runs several independently seeded optimizations of one
problem, writes a plot-ready trace file per replication plus one summary
file, and reports the optimality-gap statistics. Summary files contain only
seed-determined quantities (no wall-clock columns), so identical configs
reproduce them byte for byte whenever runs end on the iteration budget.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .driver import BofipConfig, RunRecord, run_bofip
from .errors import ConfigurationError, ParseError
from .neural import load_dataset, make_nn_problem
from .objectives import BenchmarkProblem, make_problem, problem_names

TRACE_HEADER = "wall_clock_s,total_evals,record_best_f,record_best_gap"
_FLOAT_FMT = "%.17g"  # round-trips doubles exactly


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a problem, a run configuration, and a replication plan.

    Replication ``i`` runs with seed ``base_seed + i``. ``wall_clock_limit``
    (seconds, per replication) overrides the run config's own limit when set.
    """

    problem: str
    d: int
    bofip: BofipConfig
    replications: int = 5
    wall_clock_limit: float | None = None
    outdir: str | Path = "results"
    base_seed: int = 0
    dataset: str | None = None

    def validate(self) -> None:
        if self.replications < 1:
            raise ConfigurationError("replications must be >= 1")
        if self.problem.startswith("nn_"):
            if self.dataset is None:
                raise ConfigurationError("NN problems need a dataset path")
        elif self.problem not in problem_names():
            raise ConfigurationError(
                f"unknown problem {self.problem!r}; analytic problems: "
                f"{', '.join(problem_names())}, or nn_<weights>"
            )


@dataclass(frozen=True)
class ReplicationResult:
    replication: int
    seed: int
    best_f: float
    gap: float | None
    distance: float | None
    total_evals: int


@dataclass(frozen=True)
class MetricsSummary:
    """Aggregate statistics across replications (2-standard-error bands)."""

    problem: str
    d: int
    replications: int
    mean_best_f: float
    two_se_best_f: float
    mean_gap: float | None
    two_se_gap: float | None
    mean_distance: float | None
    two_se_distance: float | None
    per_replication: tuple[ReplicationResult, ...] = field(default=())


def mean_and_two_se(values) -> tuple[float, float]:
    """Sample mean and twice the standard error of the mean."""
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    if arr.size < 2:
        return mean, 0.0
    se = float(arr.std(ddof=1)) / math.sqrt(arr.size)
    return mean, 2.0 * se


def build_problem(config: ExperimentConfig) -> BenchmarkProblem:
    """Instantiate the experiment's problem (shift and dataset fixed here)."""
    if config.problem.startswith("nn_"):
        try:
            n_weights = int(config.problem.split("_", 1)[1])
        except ValueError as exc:
            raise ConfigurationError(
                f"NN problem name must be nn_<weights>, got {config.problem!r}"
            ) from exc
        dataset = load_dataset(config.dataset)
        problem = make_nn_problem(n_weights, dataset)
    else:
        problem = make_problem(config.problem, config.d, seed=config.base_seed)
    if problem.d != config.d:
        raise ConfigurationError(
            f"problem {config.problem!r} has d={problem.d}, config says {config.d}"
        )
    return problem


def run_experiment(config: ExperimentConfig):
    """Run all replications; write trace and summary files; return the metrics.

    Returns ``(summary, paths)`` where ``paths`` lists the trace files
    followed by the summary file.
    """
    config.validate()
    outdir = Path(config.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    if not os.access(outdir, os.W_OK):
        raise OSError(f"output directory {outdir} is not writable")

    problem = build_problem(config)
    f_star = problem.f_star
    x_star = problem.x_star

    results: list[ReplicationResult] = []
    paths: list[Path] = []
    for i in range(config.replications):
        seed = config.base_seed + i
        run_config = replace(config.bofip, seed=seed)
        if config.wall_clock_limit is not None:
            run_config = replace(run_config, wall_clock_limit=config.wall_clock_limit)
        record = run_bofip(problem.evaluate, problem.bounds, problem.d, run_config)
        trace_path = outdir / f"trace_{i:03d}.csv"
        emit_trace(record, trace_path, f_star=f_star)
        paths.append(trace_path)
        if record.belief_snapshots:
            paths.append(emit_beliefs(record, outdir / f"beliefs_{i:03d}.csv"))
        gap = None if f_star is None else abs(record.best_f - f_star)
        distance = None
        if x_star is not None and record.best_x is not None:
            distance = float(np.linalg.norm(record.best_x - x_star))
        results.append(
            ReplicationResult(
                replication=i,
                seed=seed,
                best_f=record.best_f,
                gap=gap,
                distance=distance,
                total_evals=record.total_evals,
            )
        )

    summary = summarize(config, results)
    summary_path = outdir / "summary.csv"
    write_summary(summary, summary_path)
    paths.append(summary_path)
    return summary, paths


def summarize(config: ExperimentConfig, results) -> MetricsSummary:
    bests = [r.best_f for r in results]
    mean_best, two_se_best = mean_and_two_se(bests)
    gaps = [r.gap for r in results if r.gap is not None]
    dists = [r.distance for r in results if r.distance is not None]
    mean_gap = two_se_gap = mean_dist = two_se_dist = None
    if len(gaps) == len(results):
        mean_gap, two_se_gap = mean_and_two_se(gaps)
    if len(dists) == len(results):
        mean_dist, two_se_dist = mean_and_two_se(dists)
    return MetricsSummary(
        problem=config.problem,
        d=config.d,
        replications=config.replications,
        mean_best_f=mean_best,
        two_se_best_f=two_se_best,
        mean_gap=mean_gap,
        two_se_gap=two_se_gap,
        mean_distance=mean_dist,
        two_se_distance=two_se_dist,
        per_replication=tuple(results),
    )


def _fmt(value) -> str:
    return "" if value is None else _FLOAT_FMT % value


def emit_trace(record: RunRecord, path, f_star: float | None = None) -> Path:
    """Write the record-best series as CSV (header always present).

    Rows carry strictly increasing wall-clock stamps and a non-increasing
    best value; the gap column stays blank when the optimum is unknown.
    """
    path = Path(path)
    lines = [TRACE_HEADER]
    for pt in record.series:
        gap = "" if f_star is None else _FLOAT_FMT % abs(pt.best_f - f_star)
        lines.append(
            f"{_FLOAT_FMT % pt.wall_clock},{pt.total_evals},"
            f"{_FLOAT_FMT % pt.best_f},{gap}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def emit_beliefs(record: RunRecord, path) -> Path:
    """Write logged belief snapshots as (subspace_id, t, weights...) rows."""
    path = Path(path)
    lines = ["subspace_id,t,weights"]
    for snap in record.belief_snapshots:
        weights = ";".join(_FLOAT_FMT % w for w in snap["weights"])
        lines.append(f"{snap['subspace_id']},{snap['t']},{weights}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_trace(path) -> list[dict]:
    """Parse a trace file back into dict rows (inverse of :func:`emit_trace`)."""
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != TRACE_HEADER:
        raise ParseError(f"{path}:1: missing trace header")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        cells = line.split(",")
        if len(cells) != 4:
            raise ParseError(f"{path}:{lineno}: expected 4 columns")
        try:
            rows.append(
                {
                    "wall_clock_s": float(cells[0]),
                    "total_evals": int(cells[1]),
                    "record_best_f": float(cells[2]),
                    "record_best_gap": float(cells[3]) if cells[3] else None,
                }
            )
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: unreadable cell") from exc
    return rows


def write_summary(summary: MetricsSummary, path) -> Path:
    """Write the summary CSV: per-replication rows plus mean/two_se rows."""
    path = Path(path)
    lines = [
        f"# problem={summary.problem} d={summary.d} "
        f"replications={summary.replications}",
        "replication,seed,best_f,gap,distance,total_evals",
    ]
    for r in summary.per_replication:
        lines.append(
            f"{r.replication},{r.seed},{_FLOAT_FMT % r.best_f},"
            f"{_fmt(r.gap)},{_fmt(r.distance)},{r.total_evals}"
        )
    lines.append(
        f"mean,,{_FLOAT_FMT % summary.mean_best_f},"
        f"{_fmt(summary.mean_gap)},{_fmt(summary.mean_distance)},"
    )
    lines.append(
        f"two_se,,{_FLOAT_FMT % summary.two_se_best_f},"
        f"{_fmt(summary.two_se_gap)},{_fmt(summary.two_se_distance)},"
    )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
