import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bofip.errors import IllConditionedModelError, InputError, InvalidParameterError
from bofip.surrogate import (
    GpConfig,
    _factorize,
    build_model,
    concentrated_log_likelihood,
    correlation,
    fit,
    predict,
    predict_batch,
)


def gauss_corr_matrix(x, theta, nugget=0.0):
    """Dense oracle correlation matrix, independent of the fitted path."""
    n = len(x)
    r = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            r[i, j] = math.exp(-float(np.sum(theta * (x[i] - x[j]) ** 2)))
    return r + nugget * np.eye(n)


class TestCorrelation:
    def test_zero_displacement(self):
        assert correlation([0.3, -0.2], [0.3, -0.2], [1.0, 2.0]) == 1.0

    def test_unit_theta_unit_distance(self):
        assert correlation([0.0], [1.0], [1.0]) == pytest.approx(math.exp(-1))

    @given(
        a=st.lists(st.floats(-5, 5), min_size=1, max_size=4),
        data=st.data(),
    )
    @settings(max_examples=100, deadline=None)
    def test_symmetry(self, a, data):
        n = len(a)
        b = data.draw(st.lists(st.floats(-5, 5), min_size=n, max_size=n))
        th = data.draw(st.lists(st.floats(0.01, 10), min_size=n, max_size=n))
        assert correlation(a, b, th) == correlation(b, a, th)

    def test_nonpositive_theta_rejected(self):
        with pytest.raises(InvalidParameterError):
            correlation([0.0], [1.0], [0.0])


class TestFit:
    def test_constant_responses(self, rng):
        x = np.array([[0.0], [0.5], [1.0]])
        model = fit(x, np.full(3, 4.2), rng=rng)
        assert model.mu_hat == pytest.approx(4.2)
        assert model.tau2_hat == 0.0

    def test_mu_matches_dense_oracle_at_fixed_theta(self):
        # Independent dense linear algebra on the 3x3 system.
        x = np.array([[0.0], [0.4], [1.0]])
        y = np.array([1.0, -0.5, 2.0])
        theta = np.array([1.0])
        nugget = 1e-8
        model = build_model(x, y, theta, nugget)
        r = gauss_corr_matrix(x, theta, model.nugget)
        rinv = np.linalg.inv(r)
        ones = np.ones(3)
        mu_oracle = (ones @ rinv @ y) / (ones @ rinv @ ones)
        tau2_oracle = (y - mu_oracle) @ rinv @ (y - mu_oracle) / 3
        assert model.mu_hat == pytest.approx(mu_oracle, rel=1e-9)
        assert model.tau2_hat == pytest.approx(tau2_oracle, rel=1e-9)

    def test_response_shift_equivariance(self):
        x = np.array([[0.0], [0.3], [0.7], [1.0]])
        y = np.array([0.2, -1.0, 0.5, 0.1])
        c = 17.5
        m1 = fit(x, y, rng=np.random.default_rng(4))
        m2 = fit(x, y + c, rng=np.random.default_rng(4))
        assert m2.mu_hat == pytest.approx(m1.mu_hat + c, rel=1e-6)
        assert m2.tau2_hat == pytest.approx(m1.tau2_hat, rel=1e-6)
        assert np.allclose(m2.theta, m1.theta, rtol=1e-6)

    def test_duplicate_rows_rejected(self, rng):
        x = np.array([[0.0], [0.0], [1.0]])
        with pytest.raises(InputError):
            fit(x, np.array([1.0, 2.0, 3.0]), rng=rng)

    def test_single_row_rejected(self, rng):
        with pytest.raises(InputError):
            fit(np.array([[0.0]]), np.array([1.0]), rng=rng)

    def test_multistart_never_regresses(self):
        # The selected rates must score at least as well as every start the
        # optimizer was given (the first start is the log-box midpoint, the
        # rest replay from the same seed).
        x = np.linspace(0, 1, 8).reshape(-1, 1)
        y = np.sin(5 * x[:, 0]) + 0.1 * np.cos(20 * x[:, 0])
        config = GpConfig(restarts=4)
        seed_rng = np.random.default_rng(11)
        model = fit(x, y, config, seed_rng)
        best = concentrated_log_likelihood(x, y, model.theta, config.nugget)
        lo, hi = np.log(config.theta_bounds[0]), np.log(config.theta_bounds[1])
        replay = np.random.default_rng(11)
        starts = [np.array([(lo + hi) / 2])]
        starts += [replay.uniform(lo, hi, size=1) for _ in range(3)]
        for z in starts:
            assert best >= concentrated_log_likelihood(
                x, y, np.exp(z), config.nugget
            ) - 1e-9

    def test_deterministic_given_seed(self):
        x = np.linspace(-1, 1, 6).reshape(-1, 1)
        y = x[:, 0] ** 3
        m1 = fit(x, y, rng=np.random.default_rng(2))
        m2 = fit(x, y, rng=np.random.default_rng(2))
        assert np.array_equal(m1.theta, m2.theta)


class TestPredict:
    @pytest.fixture
    def model(self):
        x = np.array([[-1.0], [-0.4], [0.1], [0.6], [1.0]])
        y = np.array([0.8, -0.3, 0.2, 1.4, -0.6])
        return fit(x, y, rng=np.random.default_rng(0))

    def test_interpolates_training_rows(self, model):
        span = float(np.ptp(model.y))
        for xi, yi in zip(model.x, model.y):
            pred = predict(model, xi)
            assert abs(pred.mean - yi) <= 1e-5 * (span + model.nugget)
            assert pred.variance <= 1e-5 * model.tau2_hat

    def test_far_field_limit(self):
        # With r -> 0 the closed forms reduce to mean mu and variance
        # tau2 * (1 + 1 / (1' R^-1 1)); compare against the dense oracle.
        x = np.array([[0.0], [0.1], [0.2]])
        y = np.array([1.0, 3.0, 2.0])
        theta = np.array([800.0])
        model = build_model(x, y, theta, 1e-8)
        pred = predict(model, [50.0])
        r = gauss_corr_matrix(x, theta, model.nugget)
        ones_quad = np.ones(3) @ np.linalg.inv(r) @ np.ones(3)
        assert pred.mean == pytest.approx(model.mu_hat, abs=1e-9)
        assert pred.variance == pytest.approx(
            model.tau2_hat * (1 + 1 / ones_quad), rel=1e-9
        )

    def test_mirror_symmetry(self):
        x = np.array([[-1.0], [-0.5], [0.5], [1.0]])
        y = np.array([2.0, 1.0, 1.0, 2.0])
        model = build_model(x, y, np.array([1.3]), 1e-8)
        for a in (0.2, 0.4, 0.9):
            assert predict(model, [a]).mean == pytest.approx(
                predict(model, [-a]).mean, abs=1e-9
            )

    def test_variance_nonnegative_everywhere(self, model):
        xs = np.linspace(-1.5, 1.5, 301).reshape(-1, 1)
        _, variances = predict_batch(model, xs)
        assert np.all(variances >= 0.0)

    def test_batch_matches_scalar(self, model):
        xs = np.array([[-0.7], [0.33], [2.0]])
        means, variances = predict_batch(model, xs)
        for i, q in enumerate(xs):
            p = predict(model, q)
            assert p.mean == pytest.approx(means[i], rel=1e-12)
            assert p.variance == pytest.approx(variances[i], rel=1e-12, abs=1e-15)

    def test_shape_mismatch(self, model):
        with pytest.raises(InvalidParameterError):
            predict(model, [0.0, 1.0])


class TestFactorization:
    def test_indefinite_matrix_fails_after_escalation(self):
        bad = np.array([[1.0, 2.0], [2.0, 1.0]])
        with pytest.raises(IllConditionedModelError):
            _factorize(bad, 1e-8)

    def test_escalation_recovers_borderline_matrix(self):
        borderline = np.array([[1.0, 1.0 + 3e-8], [1.0 + 3e-8, 1.0]])
        _, nu = _factorize(borderline, 1e-8)
        assert nu > 1e-8
