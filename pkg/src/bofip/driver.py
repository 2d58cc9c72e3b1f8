"""Outer optimization loop: sweeps of per-sub-space search plus belief updates.

One run partitions the dimensions, builds per-sub-space grids and uniform
beliefs, then repeats for ``T`` sweeps: every sub-space draws complement
samples from the other beliefs, solves its frozen sub-problem with the
grid-restricted Bayesian optimizer, appends the winning row to its warm-start
history, and mixes that row into its belief. The reported optimum is the best
true objective value among all composite points ever evaluated.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import belief as bel
from .domain import build_grid, partition_dimensions
from .engine import BoOutcome, SubProblem, run_bo
from .errors import ConfigurationError
from .surrogate import GpConfig

_TS_EPS = 1e-9  # keeps trace timestamps strictly increasing


def _schedule(value, name: str):
    """Normalize an int, sequence, or callable into a function of the sweep."""
    if callable(value):
        return value
    if isinstance(value, (list, tuple)):
        seq = [int(v) for v in value]
        return lambda t: seq[min(t, len(seq) - 1)]
    if value is None:
        raise ConfigurationError(f"{name} must be set")
    fixed = int(value)
    return lambda t: fixed


@dataclass(frozen=True)
class BofipConfig:
    """Run parameters for one optimization.

    ``bo_budget`` counts raw black-box calls per sub-space per sweep and
    ``n_complements`` is the number of frozen complement draws, so one
    grid-row evaluation costs ``n_complements`` budget units. Both accept an
    int, a per-sweep sequence, or a callable of the sweep index. ``n_initial``
    defaults per sub-space to ``min(2 * d_i + 2, n_g_i)``.
    """

    p: int
    n_g: object  # int or per-sub-space sequence
    sweeps: int
    bo_budget: object
    n_complements: object = 1
    n_initial: int | None = None
    wall_clock_limit: float | None = None
    sweep_mode: str = "sequential"
    grid_scheme: str = "auto"
    seed: int = 0
    gp: GpConfig = field(default_factory=GpConfig)
    log_beliefs: bool = False
    log_bo_steps: bool = False

    def validate(self, d: int) -> None:
        if self.p < 1 or self.p > d:
            raise ConfigurationError(f"need 1 <= p <= d, got p={self.p}, d={d}")
        if self.sweeps < 1:
            raise ConfigurationError(f"sweeps must be >= 1, got {self.sweeps}")
        if self.sweep_mode not in ("sequential", "snapshot"):
            raise ConfigurationError(f"unknown sweep_mode {self.sweep_mode!r}")
        if self.wall_clock_limit is not None and self.wall_clock_limit < 0:
            raise ConfigurationError("wall_clock_limit must be non-negative")
        if self.n_initial is not None and self.n_initial < 2:
            raise ConfigurationError("n_initial must be at least 2")
        for i, n in enumerate(self.grid_sizes(d)):
            if n < 2:
                raise ConfigurationError(f"n_g for sub-space {i} must be >= 2")
        k0 = _schedule(self.n_complements, "n_complements")(0)
        if k0 < 1:
            raise ConfigurationError("n_complements must be >= 1")
        b0 = _schedule(self.bo_budget, "bo_budget")(0)
        if self.n_initial is not None:
            r0 = self.n_initial
        else:
            r0 = min(2 * math.ceil(d / self.p) + 2, min(self.grid_sizes(d)))
        if b0 < k0 * r0:
            warnings.warn(
                "bo_budget below the initial-design cost; sub-problems will "
                "spend their whole budget on the design (the warm-start cap "
                "of 25 rows bounds the overrun in later sweeps)",
                stacklevel=2,
            )

    def grid_sizes(self, d: int) -> list[int]:
        if isinstance(self.n_g, (list, tuple)):
            if len(self.n_g) != self.p:
                raise ConfigurationError(
                    f"n_g sequence needs {self.p} entries, got {len(self.n_g)}"
                )
            return [int(n) for n in self.n_g]
        return [int(self.n_g)] * self.p


@dataclass
class TracePoint:
    wall_clock: float
    total_evals: int
    best_f: float


@dataclass
class SweepEvent:
    t: int
    subspace_id: int
    chosen_row: int
    best_value: float
    evaluations_spent: int
    grid_exhausted: bool
    fallback_steps: int


@dataclass
class RunRecord:
    """Time-stamped trace of the best observed value and location."""

    d: int
    best_x: np.ndarray | None = None
    best_f: float = math.inf
    total_evals: int = 0
    series: list = field(default_factory=list)
    events: list = field(default_factory=list)
    belief_snapshots: list = field(default_factory=list)
    bo_steps: list = field(default_factory=list)  # (t, i, row, value, remaining)
    elapsed: float = 0.0
    truncated: bool = False
    _start: float = field(default_factory=time.perf_counter, repr=False)

    def observe(self, x: np.ndarray, value: float) -> None:
        """Account one paid-for objective evaluation; keep it iff it improves."""
        self.total_evals += 1
        if value < self.best_f:
            self.best_f = value
            self.best_x = np.array(x, dtype=float)
            now = time.perf_counter() - self._start
            if self.series and now <= self.series[-1].wall_clock:
                now = self.series[-1].wall_clock + _TS_EPS
            self.series.append(TracePoint(now, self.total_evals, value))


def record_best(run: RunRecord, candidate, value: float) -> RunRecord:
    """Fold one evaluated point into the record (kept only on improvement)."""
    run.observe(np.asarray(candidate, dtype=float), float(value))
    return run


def _spawn_rngs(seed: int) -> dict:
    """Deterministic named random streams for one run."""
    children = np.random.SeedSequence(seed).spawn(4)
    names = ("partition", "grids", "complements", "bo")
    return {n: np.random.default_rng(c) for n, c in zip(names, children)}


def run_bofip(f, bounds, d: int, config: BofipConfig) -> RunRecord:
    """Minimize black box ``f`` over the box ``bounds`` in ``R^d``.

    Deterministic for a given ``config.seed`` in sequential sweep mode, up to
    wall-clock truncation. The returned record's best value is the minimum
    over every composite point actually evaluated, not over the averaged
    sub-problem values.
    """
    config.validate(d)
    k_of = _schedule(config.n_complements, "n_complements")
    b_of = _schedule(config.bo_budget, "bo_budget")
    rngs = _spawn_rngs(config.seed)

    partition = partition_dimensions(d, config.p, rngs["partition"], bounds=bounds)
    grids = tuple(
        build_grid(partition, i, n, config.grid_scheme, rngs["grids"])
        for i, n in enumerate(config.grid_sizes(d))
    )
    beliefs = [bel.init_uniform(g) for g in grids]
    warm: list[list[int]] = [[] for _ in range(config.p)]

    record = RunRecord(d=d)
    deadline = None
    if config.wall_clock_limit is not None:
        deadline = record._start + config.wall_clock_limit

    for t in range(config.sweeps):
        view = list(beliefs)  # snapshot mode reads start-of-sweep beliefs
        pending: list[tuple[int, int]] = []
        for i in range(config.p):
            if deadline is not None and time.perf_counter() >= deadline:
                record.truncated = True
                break
            source = beliefs if config.sweep_mode == "sequential" else view
            complements = bel.sample_complement(
                source, i, k_of(t), rngs["complements"]
            )
            subproblem = SubProblem(
                subspace_id=i,
                t=t,
                partition=partition,
                grids=grids,
                complements=complements,
                objective=f,
                on_evaluation=record.observe,
            )
            on_step = None
            if config.log_bo_steps:
                on_step = lambda row, value, remaining, t=t, i=i: (
                    record.bo_steps.append((t, i, row, value, remaining))
                )
            outcome: BoOutcome = run_bo(
                subproblem,
                grids[i],
                warm[i],
                b_of(t),
                _initial_design_size(config, partition, grids, i),
                rngs["bo"],
                config.gp,
                deadline,
                on_step=on_step,
            )
            warm[i].append(outcome.best_row)
            if config.sweep_mode == "sequential":
                beliefs[i] = bel.update(beliefs[i], outcome.best_row, t)
            else:
                pending.append((i, outcome.best_row))
            record.events.append(
                SweepEvent(
                    t=t,
                    subspace_id=i,
                    chosen_row=outcome.best_row,
                    best_value=outcome.best_value,
                    evaluations_spent=outcome.evaluations_spent,
                    grid_exhausted=outcome.grid_exhausted,
                    fallback_steps=outcome.fallback_steps,
                )
            )
            if outcome.truncated:
                record.truncated = True
                break
        for i, row in pending:  # snapshot mode: apply updates in id order
            beliefs[i] = bel.update(beliefs[i], row, t)
        if config.log_beliefs:
            for b in beliefs:
                record.belief_snapshots.append(bel.serialize(b))
        if record.truncated:
            break

    record.elapsed = time.perf_counter() - record._start
    return record


def _initial_design_size(config, partition, grids, i: int) -> int:
    if config.n_initial is not None:
        return config.n_initial
    return min(2 * partition.subspace_dim(i) + 2, grids[i].n_g)


def with_seed(config: BofipConfig, seed: int) -> BofipConfig:
    """Copy of a config with only the seed replaced (replication helper)."""
    return replace(config, seed=seed)
