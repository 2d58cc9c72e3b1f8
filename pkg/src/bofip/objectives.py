"""Benchmark objectives and the named problem registry.

The repeated functions tile a classic low-dimensional test function over
consecutive disjoint coordinate blocks: each block is affine-mapped from the
working cube ``[-1, 1]^block`` onto the function's native domain and the
block values are summed, so the global minimum is the per-block minimum
times the number of blocks and the minimizer is the tiled block minimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

E = math.e


@dataclass(frozen=True)
class BenchmarkProblem:
    """A named black box with its box bounds and, when known, its optimum."""

    name: str
    d: int
    bounds: tuple[tuple[float, float], ...]
    evaluate: object  # callable ndarray -> float
    known_optimum: tuple[np.ndarray, float] | None = None
    shift: np.ndarray | None = field(default=None, repr=False)

    @property
    def f_star(self) -> float | None:
        return None if self.known_optimum is None else self.known_optimum[1]

    @property
    def x_star(self) -> np.ndarray | None:
        return None if self.known_optimum is None else self.known_optimum[0]


# ---------------------------------------------------------------------------
# Base functions on their native domains
# ---------------------------------------------------------------------------

BRANIN_MIN_VALUE = 10.0 / (8.0 * math.pi)  # exact at (pi, 2.275)
BRANIN_MINIMIZER = (math.pi, 2.275)


def branin(u: float, v: float) -> float:
    """Branin-Hoo on its native [-5, 10] x [0, 15]."""
    b = 5.1 / (4.0 * math.pi**2)
    c = 5.0 / math.pi
    t = 1.0 / (8.0 * math.pi)
    return (v - b * u * u + c * u - 6.0) ** 2 + 10.0 * (1.0 - t) * math.cos(u) + 10.0


_HARTMANN_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
_HARTMANN_A = np.array(
    [
        [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
        [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
        [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
        [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
    ]
)
_HARTMANN_P = 1e-4 * np.array(
    [
        [1312, 1696, 5569, 124, 8283, 5886],
        [2329, 4135, 8307, 3736, 1004, 9991],
        [2348, 1451, 3522, 2883, 3047, 6650],
        [4047, 8828, 8732, 5743, 1091, 381],
    ]
)

# Minimizer refined numerically; the value is hartmann6 evaluated there.
HARTMANN6_MINIMIZER = np.array(
    [0.20168952, 0.15001069, 0.47687397, 0.27533243, 0.31165162, 0.65730053]
)
HARTMANN6_MIN_VALUE = -3.3223680114155125


def hartmann6(z) -> float:
    """Hartmann-6 on its native [0, 1]^6."""
    z = np.asarray(z, dtype=float)
    inner = np.sum(_HARTMANN_A * (z[None, :] - _HARTMANN_P) ** 2, axis=1)
    return float(-np.sum(_HARTMANN_ALPHA * np.exp(-inner)))


def ackley(x) -> float:
    """Ackley with a=20, b=0.2, c=2*pi; zero at the origin."""
    x = np.asarray(x, dtype=float)
    d = x.size
    rms = math.sqrt(float(np.sum(x * x)) / d)
    cos_mean = float(np.sum(np.cos(2.0 * math.pi * x))) / d
    return -20.0 * math.exp(-0.2 * rms) - math.exp(cos_mean) + 20.0 + E


# ---------------------------------------------------------------------------
# Repeated / shifted constructions on the working cubes
# ---------------------------------------------------------------------------


def _map_block(x_block: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Affine image of [-1, 1]^m onto [lo, hi]."""
    return lo + (x_block + 1.0) * (hi - lo) / 2.0


def _unmap_block(native: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    return 2.0 * (native - lo) / (hi - lo) - 1.0


_BRANIN_LO = np.array([-5.0, 0.0])
_BRANIN_HI = np.array([10.0, 15.0])


def repeated_branin(x) -> float:
    """Sum of Branin blocks over consecutive coordinate pairs of [-1, 1]^d."""
    x = np.asarray(x, dtype=float)
    if x.size % 2 != 0:
        raise ConfigurationError(f"repeated_branin needs even d, got {x.size}")
    total = 0.0
    for j in range(0, x.size, 2):
        u, v = _map_block(x[j : j + 2], _BRANIN_LO, _BRANIN_HI)
        total += branin(u, v)
    return total


def repeated_hartmann(x) -> float:
    """Sum of Hartmann-6 blocks over consecutive 6-tuples of [-1, 1]^d."""
    x = np.asarray(x, dtype=float)
    if x.size % 6 != 0:
        raise ConfigurationError(
            f"repeated_hartmann needs d divisible by 6, got {x.size}"
        )
    lo, hi = np.zeros(6), np.ones(6)
    total = 0.0
    for j in range(0, x.size, 6):
        total += hartmann6(_map_block(x[j : j + 6], lo, hi))
    return total


def shifted_ackley(x, shift) -> float:
    """Ackley translated so its zero minimum sits at ``shift``."""
    x = np.asarray(x, dtype=float)
    shift = np.asarray(shift, dtype=float)
    if x.shape != shift.shape:
        raise ConfigurationError("x and shift must have the same length")
    return ackley(x - shift)


def sphere(x) -> float:
    """Separable quadratic with its zero minimum at the origin."""
    x = np.asarray(x, dtype=float)
    return float(np.sum(x * x))


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


def _branin_problem(d: int, rng) -> BenchmarkProblem:
    if d % 2 != 0:
        raise ConfigurationError(f"repeated_branin needs even d, got {d}")
    block_star = _unmap_block(np.asarray(BRANIN_MINIMIZER), _BRANIN_LO, _BRANIN_HI)
    x_star = np.tile(block_star, d // 2)
    return BenchmarkProblem(
        name="repeated_branin",
        d=d,
        bounds=((-1.0, 1.0),) * d,
        evaluate=repeated_branin,
        known_optimum=(x_star, (d // 2) * BRANIN_MIN_VALUE),
    )


def _hartmann_problem(d: int, rng) -> BenchmarkProblem:
    if d % 6 != 0:
        raise ConfigurationError(f"repeated_hartmann needs d divisible by 6, got {d}")
    lo, hi = np.zeros(6), np.ones(6)
    x_star = np.tile(_unmap_block(HARTMANN6_MINIMIZER, lo, hi), d // 6)
    return BenchmarkProblem(
        name="repeated_hartmann",
        d=d,
        bounds=((-1.0, 1.0),) * d,
        evaluate=repeated_hartmann,
        known_optimum=(x_star, (d // 6) * HARTMANN6_MIN_VALUE),
    )


def _ackley_problem(d: int, rng) -> BenchmarkProblem:
    shift = rng.uniform(-16.0, 16.0, size=d)
    shift.flags.writeable = False
    return BenchmarkProblem(
        name="shifted_ackley",
        d=d,
        bounds=((-32.0, 32.0),) * d,
        evaluate=lambda x: shifted_ackley(x, shift),
        known_optimum=(shift, 0.0),
        shift=shift,
    )


def _sphere_problem(d: int, rng) -> BenchmarkProblem:
    return BenchmarkProblem(
        name="sphere",
        d=d,
        bounds=((-1.0, 1.0),) * d,
        evaluate=sphere,
        known_optimum=(np.zeros(d), 0.0),
    )


_REGISTRY = {
    "repeated_branin": _branin_problem,
    "repeated_hartmann": _hartmann_problem,
    "shifted_ackley": _ackley_problem,
    "sphere": _sphere_problem,
}


def problem_names() -> tuple[str, ...]:
    """Registered analytic problems (the NN problem lives in ``neural``)."""
    return tuple(sorted(_REGISTRY))


def make_problem(name: str, d: int, seed: int = 0) -> BenchmarkProblem:
    """Instantiate a registered problem; the seed only matters for shifts."""
    if name not in _REGISTRY:
        raise ConfigurationError(
            f"unknown problem {name!r}; choose from {', '.join(problem_names())}"
        )
    return _REGISTRY[name](d, np.random.default_rng(seed))
