"""Expected-improvement scoring and its exact maximization over a grid.

For minimization, with incumbent ``f_best`` and predictive ``(mean, std)``,
the improvement margin is ``delta = f_best - mean`` and

    EI = max(delta * Phi(delta / std) + std * phi(delta / std), 0).

Rows that were already sampled are excluded from the arg max and carry zero
improvement by definition; at ``std -> 0`` the score degenerates to
``max(delta, 0)``, which matches that convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import GridExhaustedError, InvalidParameterError
from .surrogate import GpModel, predict_batch

SIGMA_MIN = 1e-12


@dataclass(frozen=True)
class AcquisitionResult:
    best_row: int
    ei_value: float


def expected_improvement(mean: float, std: float, f_best: float) -> float:
    """EI of one candidate; ``std <= SIGMA_MIN`` uses the limit ``max(delta, 0)``."""
    if std < 0:
        raise InvalidParameterError(f"std must be non-negative, got {std}")
    value = ei_values(np.asarray([mean]), np.asarray([std]), f_best)
    return float(value[0])


def ei_values(means: np.ndarray, stds: np.ndarray, f_best: float) -> np.ndarray:
    """Vectorized EI over candidate predictions."""
    means = np.asarray(means, dtype=float)
    stds = np.asarray(stds, dtype=float)
    delta = f_best - means
    out = np.maximum(delta, 0.0)
    live = stds > SIGMA_MIN
    if np.any(live):
        z = delta[live] / stds[live]
        raw = delta[live] * norm.cdf(z) + stds[live] * norm.pdf(z)
        out[live] = np.maximum(raw, 0.0)
    return out


def ei_profile(model: GpModel, grid, sampled_rows) -> np.ndarray:
    """EI for every grid row; sampled rows are pinned to exactly zero."""
    sampled = set(int(r) for r in sampled_rows)
    means, variances = predict_batch(model, grid.points)
    values = ei_values(means, np.sqrt(variances), float(np.min(model.y)))
    if sampled:
        values[sorted(sampled)] = 0.0
    return values


def argmax_ei_on_grid(model: GpModel, grid, sampled_rows) -> AcquisitionResult:
    """Maximize EI over the unsampled grid rows.

    The incumbent is the smallest response in the model's training set. Ties
    break toward the lowest row index so replays are deterministic. Raises
    :class:`GridExhaustedError` once every row has been sampled.
    """
    sampled = set(int(r) for r in sampled_rows)
    candidates = [r for r in range(grid.n_g) if r not in sampled]
    if not candidates:
        raise GridExhaustedError(
            f"all {grid.n_g} rows of sub-space {grid.subspace_id} sampled"
        )
    means, variances = predict_batch(model, grid.points[candidates])
    values = ei_values(means, np.sqrt(variances), float(np.min(model.y)))
    best = int(np.argmax(values))  # first max, candidates ascending
    return AcquisitionResult(best_row=candidates[best], ei_value=float(values[best]))
