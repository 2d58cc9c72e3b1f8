"""Feed-forward network whose weights are the optimization variables.

No training happens here: a weight vector is scored by the mean squared
error of the network's raw output against binary labels, which turns
architecture/weight search into a pure black-box objective. Hidden layers
use tanh and the output is a single linear unit, so a node whose incoming
weights and bias are all zero emits exactly zero and is effectively pruned
from the network.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ParseError, SchemaError
from .objectives import BenchmarkProblem

logger = logging.getLogger(__name__)

MAX_WIDTH = 10
N_FEATURES = 8

# total weight count -> hidden layer count
PRESET_LAYER_COUNTS = {502: 6, 1012: 11, 10002: 92}


@dataclass(frozen=True)
class NnArchitecture:
    """Layer widths of a fully connected net with biases in the weight count."""

    n_inputs: int
    hidden: tuple[int, ...]
    n_outputs: int = 1

    def __post_init__(self):
        if self.n_inputs < 1 or self.n_outputs < 1 or not self.hidden:
            raise ConfigurationError("architecture needs inputs, hidden, outputs")
        if any(w < 1 for w in self.hidden):
            raise ConfigurationError("hidden widths must be positive")

    @property
    def n_weights(self) -> int:
        return sum(count for _, _, count in self.layer_audit())

    def layer_audit(self) -> list[tuple[int, int, int]]:
        """Per-layer (fan_in, width, parameter count) including the output."""
        widths = list(self.hidden) + [self.n_outputs]
        fan_ins = [self.n_inputs] + list(self.hidden)
        return [(fi, w, (fi + 1) * w) for fi, w in zip(fan_ins, widths)]


def solve_hidden_widths(
    n_weights: int,
    n_hidden: int,
    n_inputs: int = N_FEATURES,
    max_width: int = MAX_WIDTH,
) -> tuple[int, ...]:
    """Find hidden widths hitting an exact parameter total.

    Depth-first search, widest layers first, so the result is deterministic
    and front-loaded. Parameter count per layer is ``(fan_in + 1) * width``
    (bias included) plus the final ``(width + 1)`` output unit.
    """

    def remaining_bounds(fan_in: int, layers: int) -> tuple[int, int]:
        # Min: all remaining widths 1. Max: all remaining widths max_width.
        lo_fan, hi_fan = fan_in, fan_in
        lo = hi = 0
        for _ in range(layers):
            lo += (lo_fan + 1) * 1
            hi += (hi_fan + 1) * max_width
            lo_fan, hi_fan = 1, max_width
        lo += 1 + 1  # output from width-1 last layer
        hi += max_width + 1
        return lo, hi

    def search(fan_in: int, layers: int, target: int) -> tuple[int, ...] | None:
        if layers == 0:
            return () if target == fan_in + 1 else None
        lo, hi = remaining_bounds(fan_in, layers)
        if not lo <= target <= hi:
            return None
        for w in range(max_width, 0, -1):
            used = (fan_in + 1) * w
            tail = search(w, layers - 1, target - used)
            if tail is not None:
                return (w,) + tail
        return None

    widths = search(n_inputs, n_hidden, n_weights)
    if widths is None:
        raise ConfigurationError(
            f"no width schedule with {n_hidden} hidden layers (max width "
            f"{max_width}) reaches exactly {n_weights} parameters"
        )
    return widths


def make_architecture(n_weights: int, n_inputs: int = N_FEATURES) -> NnArchitecture:
    """Preset architecture for one of the supported total weight counts."""
    if n_weights not in PRESET_LAYER_COUNTS:
        raise ConfigurationError(
            f"no preset for {n_weights} weights; supported: "
            f"{sorted(PRESET_LAYER_COUNTS)}"
        )
    hidden = solve_hidden_widths(n_weights, PRESET_LAYER_COUNTS[n_weights], n_inputs)
    arch = NnArchitecture(n_inputs=n_inputs, hidden=hidden)
    assert arch.n_weights == n_weights
    logger.info(
        "architecture for %d weights: inputs=%d hidden=%s audit=%s",
        n_weights, n_inputs, hidden, arch.layer_audit(),
    )
    return arch


def forward(arch: NnArchitecture, weights, features) -> np.ndarray:
    """Raw network outputs for a feature matrix.

    The weight vector is consumed layer by layer; within a layer the
    ``(fan_in, width)`` matrix comes first, then the ``width`` biases.
    """
    weights = np.asarray(weights, dtype=float).ravel()
    if weights.size != arch.n_weights:
        raise ConfigurationError(
            f"expected {arch.n_weights} weights, got {weights.size}"
        )
    h = np.atleast_2d(np.asarray(features, dtype=float))
    if h.shape[1] != arch.n_inputs:
        raise ConfigurationError(
            f"expected {arch.n_inputs} features, got {h.shape[1]}"
        )
    offset = 0
    layers = arch.layer_audit()
    for idx, (fan_in, width, count) in enumerate(layers):
        w = weights[offset : offset + fan_in * width].reshape(fan_in, width)
        b = weights[offset + fan_in * width : offset + count]
        offset += count
        z = h @ w + b
        h = z if idx == len(layers) - 1 else np.tanh(z)
    return h[:, 0]


def nn_mse_objective(weights, arch: NnArchitecture, dataset) -> float:
    """Mean squared error of the raw outputs against the binary labels."""
    preds = forward(arch, weights, dataset.features)
    return float(np.mean((dataset.targets - preds) ** 2))


# ---------------------------------------------------------------------------
# Dataset ingestion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Dataset:
    """Feature matrix rescaled to [0, 1] with binary {0, 1} targets."""

    features: np.ndarray = field(repr=False)
    targets: np.ndarray = field(repr=False)
    n_imputed: int = 0
    source: str = ""

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def positive_fraction(self) -> float:
        return float(np.mean(self.targets))


def load_dataset(
    path,
    missing: str = "?",
    target_col: int = -1,
    delimiter: str = ",",
    n_features: int = N_FEATURES,
) -> Dataset:
    """Parse a delimited text file of feature rows plus a binary target column.

    Missing feature cells (the ``missing`` marker) are imputed with their
    column mean over the present values, then every feature is min-max
    rescaled to [0, 1] (constant columns collapse to zero). Targets must take
    at most two distinct values; they map onto {0, 1} by order. Raises
    :class:`ParseError` with the line number for unreadable cells and
    :class:`SchemaError` for structural problems.
    """
    raw_features: list[list[float]] = []
    raw_targets: list[float] = []
    n_missing = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cells = [c.strip() for c in line.split(delimiter)]
            if len(cells) != n_features + 1:
                raise SchemaError(
                    f"{path}:{lineno}: expected {n_features + 1} columns, "
                    f"got {len(cells)}"
                )
            tcol = target_col % len(cells)
            target_cell = cells[tcol]
            feature_cells = [c for j, c in enumerate(cells) if j != tcol]
            row = []
            for c in feature_cells:
                if c == missing:
                    row.append(np.nan)
                    n_missing += 1
                else:
                    try:
                        row.append(float(c))
                    except ValueError as exc:
                        raise ParseError(
                            f"{path}:{lineno}: unreadable feature value {c!r}"
                        ) from exc
            try:
                raw_targets.append(float(target_cell))
            except ValueError as exc:
                raise ParseError(
                    f"{path}:{lineno}: unreadable target value {target_cell!r}"
                ) from exc
            raw_features.append(row)

    if not raw_features:
        raise SchemaError(f"{path}: no data rows")
    feats = np.asarray(raw_features, dtype=float)
    targets = np.asarray(raw_targets, dtype=float)

    for j in range(feats.shape[1]):
        col = feats[:, j]
        mask = np.isnan(col)
        if mask.all():
            raise SchemaError(f"{path}: feature column {j} entirely missing")
        if mask.any():
            col[mask] = col[~mask].mean()

    lo = feats.min(axis=0)
    span = feats.max(axis=0) - lo
    span[span == 0.0] = 1.0
    feats = (feats - lo) / span

    distinct = np.unique(targets)
    if distinct.size > 2:
        raise SchemaError(
            f"{path}: target column must be binary, found {distinct.size} values"
        )
    if distinct.size == 2:
        targets = (targets == distinct[1]).astype(float)
    elif distinct[0] not in (0.0, 1.0):
        raise SchemaError(f"{path}: single target value {distinct[0]} is not 0/1")

    logger.info(
        "loaded %s: %d rows, %d imputed cells", path, len(raw_features), n_missing
    )
    return Dataset(
        features=feats, targets=targets, n_imputed=n_missing, source=str(path)
    )


def make_nn_problem(
    n_weights: int,
    dataset: Dataset,
    weight_bound: float = 1.0,
) -> BenchmarkProblem:
    """Weight-fitting problem: minimize the MSE over a symmetric weight box."""
    arch = make_architecture(n_weights)
    return BenchmarkProblem(
        name=f"nn_{n_weights}",
        d=n_weights,
        bounds=((-weight_bound, weight_bound),) * n_weights,
        evaluate=lambda w: nn_mse_objective(w, arch, dataset),
        known_optimum=None,
    )
