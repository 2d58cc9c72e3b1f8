"""Per-sub-space belief vectors and complement sampling.

Each sub-space holds a probability distribution (its belief) over its own
grid rows. After a sub-space finds its best row for the current sweep, the
belief is pulled toward the one-hot indicator of that row with step
``1/(t+1)``, which makes the weights exactly the empirical frequencies of
past winning rows. When a sub-space needs values for all other dimensions,
it draws them from the product of the other sub-spaces' beliefs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .domain import CompositePoint, decompose_point
from .errors import BoundsIndexError, ConfigurationError, InvalidParameterError

SIMPLEX_TOL = 1e-12


def _as_readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class BeliefVector:
    """Probability mass over one sub-space's grid rows.

    ``t`` counts completed updates; weights always stay on the simplex.
    """

    subspace_id: int
    weights: np.ndarray = field(repr=False)
    t: int = 0

    def __post_init__(self):
        object.__setattr__(self, "weights", _as_readonly(self.weights))
        w = self.weights
        if w.ndim != 1 or w.size < 1:
            raise InvalidParameterError("weights must be a non-empty vector")
        if abs(float(w.sum()) - 1.0) > SIMPLEX_TOL:
            raise InvalidParameterError(
                f"weights must sum to 1 within {SIMPLEX_TOL}, got {w.sum()!r}"
            )
        if np.any(w < -SIMPLEX_TOL) or np.any(w > 1.0 + SIMPLEX_TOL):
            raise InvalidParameterError("weights must lie in [0, 1]")
        if self.t < 0:
            raise InvalidParameterError("t must be non-negative")

    @property
    def n_rows(self) -> int:
        return self.weights.size


@dataclass(frozen=True)
class ComplementSampleSet:
    """Frozen draws of all other sub-spaces' grid rows for one target.

    ``samples[h]`` is a tuple with one row index per sub-space in
    ``other_ids`` order; for a single-sub-space problem the tuples are empty.
    """

    target_subspace: int
    other_ids: tuple[int, ...]
    samples: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.samples)

    def full_indices(self, h: int, target_row: int) -> tuple[int, ...]:
        """Row-index tuple over all sub-spaces with the target row plugged in."""
        by_id = dict(zip(self.other_ids, self.samples[h]))
        by_id[self.target_subspace] = target_row
        return tuple(by_id[i] for i in sorted(by_id))


def init_uniform(grid) -> BeliefVector:
    """Uniform belief over a grid's rows, with the update counter at zero."""
    n = grid.n_g
    return BeliefVector(
        subspace_id=grid.subspace_id, weights=np.full(n, 1.0 / n), t=0
    )


def update(belief: BeliefVector, chosen_row: int, t: int) -> BeliefVector:
    """Mix the one-hot indicator of ``chosen_row`` into the belief.

    New weights are ``old + (indicator - old) / (t + 1)``. At ``t = 0`` this
    replaces the prior entirely, so after T updates every weight equals the
    empirical frequency of the rows chosen so far.
    """
    if t != belief.t:
        raise InvalidParameterError(
            f"update expected iteration {belief.t}, got {t}"
        )
    n = belief.n_rows
    if not 0 <= chosen_row < n:
        raise BoundsIndexError(f"chosen_row {chosen_row} out of range [0, {n})")
    indicator = np.zeros(n)
    indicator[chosen_row] = 1.0
    w = belief.weights + (indicator - belief.weights) / (t + 1)
    return BeliefVector(subspace_id=belief.subspace_id, weights=w, t=t + 1)


def _draw_row(cum: np.ndarray, u: float) -> int:
    idx = int(np.searchsorted(cum, u, side="right"))
    return min(idx, cum.size - 1)


def sample_complement(beliefs, target: int, k: int, rng) -> ComplementSampleSet:
    """Draw ``k`` i.i.d. joint rows from every belief except the target's.

    Each draw picks, independently per other sub-space, one grid row with
    that sub-space's current weights (inverse-CDF over the cumulative sum,
    so the result is exact and reproducible under a fixed seed).
    """
    if k < 1:
        raise ConfigurationError(f"need at least one complement draw, got {k}")
    p = len(beliefs)
    if not 0 <= target < p:
        raise BoundsIndexError(f"target sub-space {target} out of range [0, {p})")
    other_ids = tuple(j for j in range(p) if j != target)
    cums = {j: np.cumsum(beliefs[j].weights) for j in other_ids}
    samples = []
    for _ in range(k):
        samples.append(
            tuple(_draw_row(cums[j], rng.random()) for j in other_ids)
        )
    return ComplementSampleSet(
        target_subspace=target, other_ids=other_ids, samples=tuple(samples)
    )


def joint_density(beliefs, point, partition=None, grids=None) -> float:
    """Probability of a composite point under the product of all beliefs.

    Accepts a :class:`CompositePoint` or raw coordinates (the latter require
    ``partition`` and ``grids`` to recover row indices). Coordinates that
    match no grid row have probability zero rather than raising.
    """
    if isinstance(point, CompositePoint):
        indices = point.per_subspace_indices
    else:
        if partition is None or grids is None:
            raise InvalidParameterError(
                "raw coordinates need partition and grids to locate grid rows"
            )
        indices = decompose_point(partition, grids, point)
    if len(indices) != len(beliefs):
        raise InvalidParameterError("need exactly one belief per sub-space")
    density = 1.0
    for belief, idx in zip(beliefs, indices):
        if idx is None:
            return 0.0
        if not 0 <= idx < belief.n_rows:
            raise BoundsIndexError(f"row {idx} out of range for belief")
        density *= float(belief.weights[idx])
    return density


def serialize(belief: BeliefVector) -> dict:
    """Plain-dict form used by the run-trace writer."""
    return {
        "subspace_id": belief.subspace_id,
        "t": belief.t,
        "weights": [float(w) for w in belief.weights],
    }
