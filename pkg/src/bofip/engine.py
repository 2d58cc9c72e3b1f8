"""Grid-restricted Bayesian optimization of one frozen sub-problem.

A sub-problem fixes a target sub-space, a set of complement draws for all
other sub-spaces, and the black-box objective. Its deterministic objective
over the target grid is the average of the full function across the frozen
complements, so each grid-row evaluation costs ``k`` black-box calls. The
search warm-starts from previous winning rows, then alternates surrogate
refits with expected-improvement picks until the evaluation budget runs out.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .acquisition import argmax_ei_on_grid
from .domain import compose_point
from .errors import (
    BofipError,
    ConfigurationError,
    EvaluationError,
    GridExhaustedError,
    IllConditionedModelError,
)
from .surrogate import GpConfig, fit

WARM_START_CAP = 25  # most recent warm rows kept when they would eat half the budget


@dataclass
class SubProblem:
    """One sub-space's frozen objective for a single sweep.

    The ledger caches the averaged objective per grid row; re-reading a row
    is free and bit-identical because the complements never change while the
    sub-problem is alive.
    """

    subspace_id: int
    t: int
    partition: object
    grids: tuple
    complements: object  # ComplementSampleSet
    objective: object  # callable ndarray -> float
    on_evaluation: object = None  # callable (coordinates, value) or None
    ledger: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.complements.k


def evaluate_subproblem(subproblem: SubProblem, row: int) -> float:
    """Average the black box over the frozen complements at one grid row.

    Costs ``k`` full-function calls on the first visit and caches the result;
    the terms accumulate in complement order so replays are bit-identical.
    """
    if row in subproblem.ledger:
        return subproblem.ledger[row]
    grid = subproblem.grids[subproblem.subspace_id]
    grid.row(row)  # bounds check
    total = 0.0
    for h in range(subproblem.k):
        indices = subproblem.complements.full_indices(h, row)
        point = compose_point(subproblem.partition, subproblem.grids, indices)
        try:
            value = float(subproblem.objective(point.coordinates))
        except BofipError:
            raise
        except Exception as exc:
            raise EvaluationError(
                f"objective failed at sub-space {subproblem.subspace_id} "
                f"row {row}, complement {h}"
            ) from exc
        if subproblem.on_evaluation is not None:
            subproblem.on_evaluation(point.coordinates, value)
        total += value
    result = total / subproblem.k
    subproblem.ledger[row] = result
    return result


@dataclass(frozen=True)
class BoOutcome:
    """Result of one sub-problem search."""

    best_row: int
    best_value: float
    evaluations_spent: int
    sampled_rows: tuple[int, ...]
    grid_exhausted: bool = False
    truncated: bool = False
    fallback_steps: int = 0


def _dedup_recent(rows) -> list[int]:
    """Unique rows, ordered oldest-first, keeping each row's newest occurrence."""
    seen: dict[int, None] = {}
    for r in reversed([int(r) for r in rows]):
        seen.setdefault(r, None)
    return list(reversed(list(seen)))


def run_bo(
    subproblem: SubProblem,
    grid,
    warm_start,
    budget: int,
    r_0: int,
    rng,
    gp_config: GpConfig = GpConfig(),
    deadline: float | None = None,
    on_step=None,
) -> BoOutcome:
    """Minimize the sub-problem objective over the grid within a budget.

    The budget counts raw black-box calls; every grid-row evaluation charges
    ``k``. An empty warm start is replaced by ``r_0`` distinct seeded-random
    rows; a non-empty one is deduplicated and, if evaluating it would charge
    more than half the budget, capped to its most recent entries. The initial
    design is always evaluated in full even when that overruns the budget
    (the improvement loop then simply never runs). Inside the loop each step
    refits the surrogate, picks the expected-improvement maximizer among
    unsampled rows, and evaluates it; if the refit fails the step falls back
    to a uniform-random unsampled row. The wall-clock deadline is only
    checked between steps.
    """
    if budget < 0:
        raise ConfigurationError(f"budget must be non-negative, got {budget}")
    if r_0 < 2:
        raise ConfigurationError(f"initial design needs at least 2 rows, got {r_0}")
    k = subproblem.k
    n_g = grid.n_g

    warm = _dedup_recent(warm_start)
    if warm and k * len(warm) > budget / 2 and len(warm) > WARM_START_CAP:
        warm = warm[-WARM_START_CAP:]
    if warm:
        initial = warm
    else:
        initial = [int(r) for r in rng.choice(n_g, size=min(r_0, n_g), replace=False)]

    sampled: list[int] = []
    spent = 0
    for row in initial:
        value = evaluate_subproblem(subproblem, row)
        sampled.append(row)
        spent += k
        if on_step is not None:
            on_step(row, value, budget - spent)

    remaining = budget - spent
    grid_exhausted = False
    truncated = False
    fallback_steps = 0
    while remaining > 0:
        if deadline is not None and time.perf_counter() >= deadline:
            truncated = True
            break
        if len(sampled) >= n_g:
            grid_exhausted = True
            break
        row = None
        try:
            if len(sampled) >= 2:
                model = fit(
                    grid.points[sampled],
                    np.asarray([subproblem.ledger[r] for r in sampled]),
                    gp_config,
                    rng,
                )
                row = argmax_ei_on_grid(model, grid, sampled).best_row
        except IllConditionedModelError:
            row = None
        except GridExhaustedError:
            grid_exhausted = True
            break
        if row is None:
            unsampled = np.setdiff1d(np.arange(n_g), np.asarray(sampled, dtype=int))
            row = int(rng.choice(unsampled))
            fallback_steps += 1
        value = evaluate_subproblem(subproblem, row)
        sampled.append(row)
        spent += k
        remaining -= k
        if on_step is not None:
            on_step(row, value, remaining)

    best_row = min(sampled, key=lambda r: (subproblem.ledger[r], r))
    return BoOutcome(
        best_row=best_row,
        best_value=subproblem.ledger[best_row],
        evaluations_spent=spent,
        sampled_rows=tuple(sampled),
        grid_exhausted=grid_exhausted,
        truncated=truncated,
        fallback_steps=fallback_steps,
    )
