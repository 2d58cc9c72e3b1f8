"""Stationary Gaussian-process regression with a squared-exponential kernel.

The process is ``mu + Z(x)`` with constant mean, variance ``tau2`` and
correlation ``R_ij = prod_l exp(-theta_l (x_il - x_jl)^2)``. Given
length-scale rates ``theta``, the mean and variance have closed-form
maximum-likelihood estimates, so fitting reduces to maximizing the
concentrated log-likelihood over ``theta`` alone, which we do with a
multi-start Nelder-Mead search on the log scale. A small nugget keeps the
correlation matrix factorizable on dense designs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.optimize import minimize

from .errors import IllConditionedModelError, InputError, InvalidParameterError

_TAU2_FLOOR = 1e-300  # guards log() only; never reported


@dataclass(frozen=True)
class GpConfig:
    """Knobs for hyperparameter estimation.

    ``theta_bounds`` is the per-dimension search box for the length-scale
    rates (log-scale search inside); ``restarts`` counts Nelder-Mead starts,
    the first at the box's log-midpoint and the rest drawn from the rng.
    """

    theta_bounds: tuple[float, float] = (1e-3, 1e3)
    nugget: float = 1e-8
    restarts: int = 5
    maxiter: int | None = None  # per start; None lets the optimizer decide

    def __post_init__(self):
        lo, hi = self.theta_bounds
        if not (0 < lo <= hi):
            raise InvalidParameterError(f"bad theta bounds ({lo}, {hi})")
        if self.nugget <= 0:
            raise InvalidParameterError("nugget must be positive")
        if self.restarts < 1:
            raise InvalidParameterError("need at least one restart")


@dataclass(frozen=True)
class Prediction:
    mean: float
    variance: float


@dataclass(frozen=True)
class GpModel:
    """Fitted surrogate; immutable, so predictions can run concurrently."""

    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    theta: np.ndarray
    mu_hat: float
    tau2_hat: float
    nugget: float
    _chol: tuple = field(repr=False)
    _resid_solve: np.ndarray = field(repr=False)  # R^-1 (y - mu 1)
    _ones_solve: np.ndarray = field(repr=False)  # R^-1 1
    _ones_quad: float = 0.0  # 1^T R^-1 1

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def dim(self) -> int:
        return self.x.shape[1]


def correlation(x1, x2, theta) -> float:
    """Gaussian correlation ``prod_l exp(-theta_l (x1_l - x2_l)^2)``."""
    x1 = np.asarray(x1, dtype=float).ravel()
    x2 = np.asarray(x2, dtype=float).ravel()
    theta = np.asarray(theta, dtype=float).ravel()
    if x1.shape != x2.shape or theta.shape != x1.shape:
        raise InvalidParameterError("x1, x2 and theta must share one length")
    if np.any(theta <= 0):
        raise InvalidParameterError("theta must be positive componentwise")
    return float(np.exp(-np.sum(theta * (x1 - x2) ** 2)))


def _corr_matrix(x: np.ndarray, theta: np.ndarray) -> np.ndarray:
    diff = x[:, None, :] - x[None, :, :]
    return np.exp(-np.einsum("ijl,l->ij", diff**2, theta))


def _cross_corr(x: np.ndarray, q: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Correlations between query rows ``q`` (m, d) and design rows (n, d)."""
    diff = q[:, None, :] - x[None, :, :]
    return np.exp(-np.einsum("mjl,l->mj", diff**2, theta))


def _factorize(r: np.ndarray, nugget: float):
    """Cholesky of ``R + nu I`` with x10 escalation; returns (chol, nu)."""
    n = r.shape[0]
    for nu in (nugget, 10 * nugget, 100 * nugget):
        try:
            return cho_factor(r + nu * np.eye(n), lower=True), nu
        except LinAlgError:
            continue
    raise IllConditionedModelError(
        f"correlation matrix not positive definite up to nugget {100 * nugget:g}"
    )


def build_model(x, y, theta, nugget: float = 1e-8) -> GpModel:
    """Closed-form fit at fixed ``theta``: estimate mean, variance, factors."""
    x, y = _validate_design(x, y)
    theta = np.asarray(theta, dtype=float).ravel()
    if theta.size != x.shape[1] or np.any(theta <= 0):
        raise InvalidParameterError("theta must be positive, one rate per column")
    chol, nu = _factorize(_corr_matrix(x, theta), nugget)
    ones = np.ones(x.shape[0])
    rinv_y = cho_solve(chol, y)
    rinv_1 = cho_solve(chol, ones)
    ones_quad = float(ones @ rinv_1)
    mu = float(ones @ rinv_y) / ones_quad
    resid = y - mu
    tau2 = max(float(resid @ cho_solve(chol, resid)) / x.shape[0], 0.0)
    return GpModel(
        x=x,
        y=y,
        theta=theta,
        mu_hat=mu,
        tau2_hat=tau2,
        nugget=nu,
        _chol=chol,
        _resid_solve=cho_solve(chol, resid),
        _ones_solve=rinv_1,
        _ones_quad=ones_quad,
    )


def concentrated_log_likelihood(x, y, theta, nugget: float = 1e-8) -> float:
    """Profile log-likelihood of ``theta`` (mean and variance concentrated out).

    ``-(n/2) log tau2_hat(theta) - (1/2) log det R(theta)``; returns -inf when
    the correlation matrix cannot be factorized.
    """
    x, y = _validate_design(x, y)
    theta = np.asarray(theta, dtype=float).ravel()
    n = x.shape[0]
    try:
        chol, _ = _factorize(_corr_matrix(x, theta), nugget)
    except IllConditionedModelError:
        return -math.inf
    ones = np.ones(n)
    rinv_y = cho_solve(chol, y)
    rinv_1 = cho_solve(chol, ones)
    mu = float(ones @ rinv_y) / float(ones @ rinv_1)
    resid = y - mu
    tau2 = max(float(resid @ cho_solve(chol, resid)) / n, _TAU2_FLOOR)
    logdet = 2.0 * float(np.sum(np.log(np.diag(chol[0]))))
    return -0.5 * n * math.log(tau2) - 0.5 * logdet


def fit(x, y, config: GpConfig = GpConfig(), rng=None) -> GpModel:
    """Estimate ``theta`` by multi-start likelihood search, then build the model.

    The optimizer works on ``log theta`` inside the configured box. Both the
    start points and their local optima are scored, so the selected rates are
    never worse than any start. Deterministic for a given rng seed.
    """
    x, y = _validate_design(x, y)
    if rng is None:
        rng = np.random.default_rng(0)
    lo, hi = config.theta_bounds
    log_lo, log_hi = math.log(lo), math.log(hi)
    dim = x.shape[1]
    mid = np.full(dim, 0.5 * (log_lo + log_hi))

    if float(np.ptp(y)) == 0.0:
        # Constant responses: every theta gives the same (mu, 0) estimates.
        return build_model(x, y, np.exp(mid), config.nugget)

    def neg_ll(z: np.ndarray) -> float:
        theta = np.exp(np.clip(z, log_lo, log_hi))
        ll = concentrated_log_likelihood(x, y, theta, config.nugget)
        return 1e25 if not math.isfinite(ll) else -ll

    starts = [mid]
    for _ in range(config.restarts - 1):
        starts.append(rng.uniform(log_lo, log_hi, size=dim))

    options = {"xatol": 1e-3, "fatol": 1e-6}
    if config.maxiter is not None:
        options["maxiter"] = config.maxiter
    candidates = []
    for z0 in starts:
        candidates.append((neg_ll(z0), z0))
        res = minimize(neg_ll, z0, method="Nelder-Mead", options=options)
        candidates.append((float(res.fun), np.asarray(res.x)))
    best = min(candidates, key=lambda c: c[0])
    theta = np.exp(np.clip(best[1], log_lo, log_hi))
    return build_model(x, y, theta, config.nugget)


def predict(model: GpModel, x) -> Prediction:
    """Predictive mean and variance at a single location."""
    q = np.asarray(x, dtype=float).reshape(1, -1)
    if q.shape[1] != model.dim:
        raise InvalidParameterError(
            f"expected {model.dim} coordinates, got {q.shape[1]}"
        )
    means, variances = predict_batch(model, q)
    return Prediction(mean=float(means[0]), variance=float(variances[0]))


def predict_batch(model: GpModel, xs) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`predict` over query rows; variance clamped at zero."""
    q = np.atleast_2d(np.asarray(xs, dtype=float))
    r = _cross_corr(model.x, q, model.theta)  # (m, n)
    means = model.mu_hat + r @ model._resid_solve
    rinv_r = cho_solve(model._chol, r.T)  # (n, m)
    r_quad = np.einsum("mn,nm->m", r, rinv_r)
    one_r = r @ model._ones_solve
    variances = model.tau2_hat * (1.0 - r_quad + (1.0 - one_r) ** 2 / model._ones_quad)
    return means, np.maximum(variances, 0.0)


def _validate_design(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    if x.shape[0] != y.size:
        raise InputError(f"{x.shape[0]} design rows but {y.size} responses")
    if x.shape[0] < 2:
        raise InputError("need at least two design rows")
    if not np.all(np.isfinite(x)) or not np.all(np.isfinite(y)):
        raise InputError("design and responses must be finite")
    if len(np.unique(x, axis=0)) != x.shape[0]:
        raise InputError("design rows must be unique")
    return x, y
