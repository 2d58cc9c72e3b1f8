"""Dimension partitioning and per-sub-space grids.

The search domain is a box in ``R^d``. Its dimensions are split into ``p``
disjoint index sets, one per sub-space, and each sub-space carries its own
finite grid of candidate locations. The cross product of the per-sub-space
grids defines the full search grid implicitly; it is never materialized, so
memory stays linear in the sum of the individual grid sizes rather than in
their product.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundsIndexError, ConfigurationError

GridScheme = str  # "auto" | "uniform-lattice" | "latin-hypercube"


def _as_readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


def _normalize_bounds(bounds, d: int) -> tuple[tuple[float, float], ...]:
    """Accept a single (lo, hi) pair or one pair per dimension."""
    arr = np.asarray(bounds, dtype=float)
    if arr.shape == (2,):
        arr = np.tile(arr, (d, 1))
    if arr.shape != (d, 2):
        raise ConfigurationError(
            f"bounds must be one (lo, hi) pair or {d} pairs, got shape {arr.shape}"
        )
    if not np.all(arr[:, 0] < arr[:, 1]):
        raise ConfigurationError("every bound must satisfy lo < hi")
    return tuple((float(lo), float(hi)) for lo, hi in arr)


@dataclass(frozen=True)
class SubspacePartition:
    """Disjoint split of dimension indices ``{0..d-1}`` into p ordered sets.

    Attributes
    ----------
    d : int
        Total number of dimensions.
    p : int
        Number of sub-spaces.
    index_sets : tuple of tuples
        ``index_sets[i]`` lists the dimensions owned by sub-space ``i``.
    bounds : tuple of (lo, hi)
        Closed interval per original dimension, in physical units.
    """

    d: int
    p: int
    index_sets: tuple[tuple[int, ...], ...]
    bounds: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if self.p < 1 or self.p > self.d:
            raise ConfigurationError(f"need 1 <= p <= d, got p={self.p}, d={self.d}")
        if len(self.index_sets) != self.p:
            raise ConfigurationError("index_sets must have exactly p entries")
        flat = [k for s in self.index_sets for k in s]
        if any(len(s) == 0 for s in self.index_sets):
            raise ConfigurationError("every sub-space must own at least one dimension")
        if sorted(flat) != list(range(self.d)):
            raise ConfigurationError(
                "index_sets must cover 0..d-1 exactly once (disjoint cover)"
            )
        if len(self.bounds) != self.d:
            raise ConfigurationError("need one (lo, hi) pair per dimension")

    def dims(self, subspace_id: int) -> tuple[int, ...]:
        """Dimension indices owned by one sub-space."""
        self._check_id(subspace_id)
        return self.index_sets[subspace_id]

    def subspace_dim(self, subspace_id: int) -> int:
        return len(self.dims(subspace_id))

    def subspace_bounds(self, subspace_id: int) -> tuple[tuple[float, float], ...]:
        return tuple(self.bounds[k] for k in self.dims(subspace_id))

    def _check_id(self, subspace_id: int) -> None:
        if not 0 <= subspace_id < self.p:
            raise BoundsIndexError(
                f"subspace_id {subspace_id} out of range [0, {self.p})"
            )


@dataclass(frozen=True)
class SubspaceGrid:
    """Finite candidate set for one sub-space: ``n_g`` rows of ``d_i`` coords."""

    subspace_id: int
    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "points", _as_readonly(np.atleast_2d(self.points)))
        if self.points.ndim != 2 or self.points.shape[0] < 1:
            raise ConfigurationError("grid points must form a non-empty 2-d array")
        if len(np.unique(self.points, axis=0)) != self.points.shape[0]:
            raise ConfigurationError("grid rows must be unique")

    @property
    def n_g(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def row(self, index: int) -> np.ndarray:
        if not 0 <= index < self.n_g:
            raise BoundsIndexError(
                f"row {index} out of range [0, {self.n_g}) for sub-space "
                f"{self.subspace_id}"
            )
        return self.points[index]


@dataclass(frozen=True)
class CompositePoint:
    """A full d-dimensional point assembled from one grid row per sub-space."""

    per_subspace_indices: tuple[int, ...]
    coordinates: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "coordinates", _as_readonly(self.coordinates))


def partition_dimensions(d, p, rng, bounds=(-1.0, 1.0)) -> SubspacePartition:
    """Randomly split ``{0..d-1}`` into p contiguous blocks of a permutation.

    Block sizes are ``ceil(d/p)`` or ``floor(d/p)``; the lower-numbered
    sub-spaces take the larger blocks, so sizing is deterministic and the
    only randomness is the seeded permutation.

    Parameters
    ----------
    d, p : int
        Total dimensions and number of sub-spaces, ``1 <= p <= d``.
    rng : numpy.random.Generator
        Source of the dimension permutation.
    bounds : pair or sequence of pairs
        Physical (lo, hi) per dimension; a single pair is broadcast.
    """
    if d < 1:
        raise ConfigurationError(f"d must be positive, got {d}")
    if p < 1 or p > d:
        raise ConfigurationError(f"need 1 <= p <= d, got p={p}, d={d}")
    perm = [int(k) for k in rng.permutation(d)]
    base, extra = divmod(d, p)
    sets = []
    start = 0
    for i in range(p):
        size = base + (1 if i < extra else 0)
        sets.append(tuple(perm[start : start + size]))
        start += size
    return SubspacePartition(
        d=d, p=p, index_sets=tuple(sets), bounds=_normalize_bounds(bounds, d)
    )


def _lattice_levels(n_g: int, dim: int) -> int:
    """Smallest level count L with L**dim >= n_g (exact integer arithmetic)."""
    levels = 1
    while levels**dim < n_g:
        levels += 1
    return levels


def _uniform_lattice(lo: np.ndarray, hi: np.ndarray, n_g: int) -> np.ndarray:
    dim = lo.size
    if dim == 1:
        return np.linspace(lo[0], hi[0], n_g).reshape(-1, 1)
    levels = _lattice_levels(n_g, dim)
    axes = [np.linspace(lo[j], hi[j], levels) for j in range(dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    full = np.stack([m.ravel() for m in mesh], axis=1)
    return full[:n_g]


def _latin_hypercube(lo: np.ndarray, hi: np.ndarray, n_g: int, rng) -> np.ndarray:
    dim = lo.size
    pts = np.empty((n_g, dim))
    for j in range(dim):
        strata = (rng.permutation(n_g) + rng.uniform(size=n_g)) / n_g
        pts[:, j] = lo[j] + strata * (hi[j] - lo[j])
    return pts


def build_grid(
    partition: SubspacePartition,
    subspace_id: int,
    n_g: int,
    scheme: GridScheme = "auto",
    rng=None,
) -> SubspaceGrid:
    """Construct the candidate grid for one sub-space.

    ``uniform-lattice`` places ``n_g`` equally spaced points (endpoints
    included) in one dimension; in higher dimensions it builds a full
    factorial with the smallest level count whose size reaches ``n_g`` and
    truncates to ``n_g`` rows. ``latin-hypercube`` stratifies each coordinate
    into ``n_g`` bins and pairs them through seeded permutations. ``auto``
    picks the lattice for 1-d sub-spaces and the hypercube otherwise.
    """
    if n_g < 2:
        raise ConfigurationError(f"n_g must be at least 2, got {n_g}")
    if scheme not in ("auto", "uniform-lattice", "latin-hypercube"):
        raise ConfigurationError(f"unknown grid scheme {scheme!r}")
    sub_bounds = np.asarray(partition.subspace_bounds(subspace_id))
    lo, hi = sub_bounds[:, 0], sub_bounds[:, 1]
    if scheme == "auto":
        scheme = "uniform-lattice" if lo.size == 1 else "latin-hypercube"
    if scheme == "uniform-lattice":
        pts = _uniform_lattice(lo, hi, n_g)
    else:
        if rng is None:
            raise ConfigurationError("latin-hypercube grids need an rng")
        pts = _latin_hypercube(lo, hi, n_g, rng)
    return SubspaceGrid(subspace_id=subspace_id, points=pts)


def compose_point(
    partition: SubspacePartition,
    grids,
    per_subspace_indices,
) -> CompositePoint:
    """Assemble the full point selecting one grid row per sub-space.

    The returned coordinates restricted to sub-space ``i``'s dimensions equal
    the selected row of grid ``i``; :func:`decompose_point` inverts this.
    """
    indices = tuple(int(j) for j in per_subspace_indices)
    if len(indices) != partition.p:
        raise BoundsIndexError(
            f"need one row index per sub-space ({partition.p}), got {len(indices)}"
        )
    x = np.empty(partition.d)
    for i, row_idx in enumerate(indices):
        x[list(partition.dims(i))] = grids[i].row(row_idx)
    return CompositePoint(per_subspace_indices=indices, coordinates=x)


def decompose_point(partition: SubspacePartition, grids, x) -> tuple:
    """Recover per-sub-space row indices from full coordinates.

    Returns one index per sub-space, or ``None`` in a slot whose coordinate
    slice matches no grid row exactly.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (partition.d,):
        raise BoundsIndexError(f"expected {partition.d} coordinates, got {x.shape}")
    out = []
    for i in range(partition.p):
        piece = x[list(partition.dims(i))]
        hits = np.nonzero(np.all(grids[i].points == piece, axis=1))[0]
        out.append(int(hits[0]) if hits.size else None)
    return tuple(out)


def composite_grid_size(grids) -> int:
    """Number of points in the implied full grid (product, never built)."""
    size = 1
    for g in grids:
        size *= g.n_g
    return size
