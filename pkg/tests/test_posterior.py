"""Grid posterior: initialization, likelihood, updates, moments, regrid."""

import math

import numpy as np
import pytest

from bayesgrav.physics import InterferometerConfig, ideal_probability
from bayesgrav.posterior import (
    DegeneratePriorError,
    Estimate,
    GridPosterior,
    PosteriorCollapseError,
    bayes_update,
    ensemble_likelihood,
    estimate,
    init_uniform,
    regrid,
)

CFG = InterferometerConfig(k_eff=1.61e7, atom_number=50_000_000, t_min=1e-3, t_max=0.3)


def mid_fringe_control(cfg, g, t):
    return g - math.pi / (2.0 * cfg.phase_scale(t))


class TestInitUniform:
    def test_interval_is_one_fringe_period(self):
        post = init_uniform(9.8, 5.4e-3, CFG)
        assert post.g_hi - post.g_lo == pytest.approx(1.338e-2, rel=1e-3)

    def test_normalized(self):
        post = init_uniform(9.8, 0.05, CFG, n_grid=4096)
        assert post.integral() == pytest.approx(1.0, abs=1e-9)

    def test_rejects_invalid_time(self):
        with pytest.raises(ValueError):
            init_uniform(9.8, 0.5, CFG)


class TestEnsembleLikelihood:
    def test_peak_where_model_matches(self):
        t = 0.05
        g_c = mid_fringe_control(CFG, 9.8, t)
        p_e = ideal_probability(CFG, 1, 9.8, g_c, t)
        g = np.linspace(9.8 - 1e-7, 9.8 + 1e-7, 20001)
        like = ensemble_likelihood(p_e, g, g_c, t, CFG)
        assert abs(g[np.argmax(like)] - 9.8) < 2e-11

    def test_width_near_mid_fringe(self):
        # 1/(C sqrt(R) k_eff T^2) = 9.76e-11 m/s^2 at T = 0.3, C = 1, R = 5e7.
        t = 0.3
        g_c = mid_fringe_control(CFG, 9.8, t)
        sigma_expected = 1.0 / (math.sqrt(CFG.atom_number) * CFG.phase_scale(t))
        assert sigma_expected == pytest.approx(9.76e-11, rel=1e-3)
        peak = ensemble_likelihood(0.5, np.array([9.8]), g_c, t, CFG)[0]
        at_sigma = ensemble_likelihood(
            0.5, np.array([9.8 + sigma_expected]), g_c, t, CFG
        )[0]
        assert at_sigma / peak == pytest.approx(math.exp(-0.5), rel=2e-3)

    def test_rejects_degenerate_p_e(self):
        with pytest.raises(ValueError):
            ensemble_likelihood(0.0, np.array([9.8]), 9.8, 0.1, CFG)
        with pytest.raises(ValueError):
            ensemble_likelihood(1.0, np.array([9.8]), 9.8, 0.1, CFG)


class TestBayesUpdate:
    def test_uniform_prior_returns_normalized_likelihood_shape(self):
        t = 0.01
        g_c = mid_fringe_control(CFG, 9.8, t)
        post = init_uniform(9.8, t, CFG, n_grid=8192)
        updated = bayes_update(post, 0.5, g_c, t, CFG)
        like = ensemble_likelihood(0.5, post.grid, g_c, t, CFG)
        like = like / np.trapezoid(like, dx=post.spacing)
        assert np.allclose(updated.values, like, rtol=1e-9, atol=1e-9 * like.max())

    def test_normalization_after_update(self):
        t = 0.01
        g_c = mid_fringe_control(CFG, 9.8, t)
        post = init_uniform(9.8, t, CFG, n_grid=8192)
        # Consecutive fractions within a shot-noise width of each other, so
        # the updates stay mutually consistent.
        for p_e in (0.5, 0.50005, 0.49995):
            post = bayes_update(post, p_e, g_c, t, CFG)
            assert abs(post.integral() - 1.0) <= 1e-9

    def test_step_counter_increments(self):
        t = 0.01
        g_c = mid_fringe_control(CFG, 9.8, t)
        post = init_uniform(9.8, t, CFG, n_grid=2048)
        assert bayes_update(post, 0.5, g_c, t, CFG).step == 1

    def test_collapse_raises(self):
        # Posterior concentrated at a fringe extremum while the shot reports
        # mid-fringe: likelihood support is disjoint from the posterior mass.
        cfg = InterferometerConfig(
            k_eff=1.61e7, atom_number=50_000_000, contrast=0.15
        )
        t = 0.3
        center = 9.8
        half = 0.5 * cfg.fringe_period(t)
        grid = np.linspace(center - half, center + half, 4096)
        sigma = 5.0 * (grid[1] - grid[0])
        vals = np.exp(-0.5 * ((grid - center) / sigma) ** 2)
        vals /= np.trapezoid(vals, dx=grid[1] - grid[0])
        post = GridPosterior(grid[0], grid[-1], vals, t_current=t)
        with pytest.raises(PosteriorCollapseError):
            bayes_update(post, 0.5, center, t, cfg)


class TestEstimate:
    def test_uniform_moments(self):
        vals = np.ones(20001)
        post = GridPosterior(0.0, 1.0, vals / np.trapezoid(vals, dx=1 / 20000), 0.1)
        est = estimate(post)
        assert est.g_est == pytest.approx(0.5, abs=1e-9)
        assert est.dg_est == pytest.approx(1.0 / math.sqrt(12.0), rel=1e-4)

    def test_gaussian_moments_recovered(self):
        mu, sigma = 9.8 + 3.1e-9, 4.7e-10
        grid = np.linspace(mu - 6 * sigma, mu + 6 * sigma, 8192)
        vals = np.exp(-0.5 * ((grid - mu) / sigma) ** 2)
        vals /= np.trapezoid(vals, dx=grid[1] - grid[0])
        est = estimate(GridPosterior(grid[0], grid[-1], vals, 0.1))
        assert est.g_est == pytest.approx(mu, abs=1e-3 * sigma)
        assert est.dg_est == pytest.approx(sigma, rel=1e-3)

    def test_no_catastrophic_cancellation(self):
        # sigma/|mu| ~ 5e-12: the naive E[g^2]-E[g]^2 would lose the signal.
        mu, sigma = 9.8, 5e-11
        grid = np.linspace(mu - 8 * sigma, mu + 8 * sigma, 16384)
        vals = np.exp(-0.5 * ((grid - mu) / sigma) ** 2)
        vals /= np.trapezoid(vals, dx=grid[1] - grid[0])
        est = estimate(GridPosterior(grid[0], grid[-1], vals, 0.1))
        assert est.dg_est == pytest.approx(sigma, rel=1e-6)


class TestGaussianProduct:
    def test_two_gaussian_rule_exact(self):
        # Pointwise product of two Gaussians is a Gaussian of width
        # sigma_a sigma_b / sqrt(sigma_a^2 + sigma_b^2); the trapezoid moments
        # on a dense grid recover it to 1e-12 relative.
        # A centered grid keeps the coordinates free of the ~1 ulp rounding
        # that a 9.8 m/s^2 offset would impose on a 1e-10-wide feature.
        sigma_a, sigma_b = 3e-10, 1.2e-10
        expected = sigma_a * sigma_b / math.sqrt(sigma_a**2 + sigma_b**2)
        grid = np.linspace(-10 * sigma_b, 10 * sigma_b, 50_001)
        dx = grid[1] - grid[0]
        prod = np.exp(-0.5 * (grid / sigma_a) ** 2 - 0.5 * (grid / sigma_b) ** 2)
        prod /= np.trapezoid(prod, dx=dx)
        est = estimate(GridPosterior(grid[0], grid[-1], prod, 0.1))
        assert abs(est.dg_est - expected) / expected < 1e-12


class TestRegrid:
    def make_posterior(self, t=0.01):
        g_c = mid_fringe_control(CFG, 9.8, t)
        post = init_uniform(9.8, t, CFG, n_grid=65536)
        return bayes_update(post, 0.5, g_c, t, CFG)

    def test_same_time_is_noop(self):
        post = self.make_posterior()
        assert regrid(post, estimate(post), post.t_current, CFG) is post

    def test_shrinking_time_rejected(self):
        post = self.make_posterior(t=0.02)
        with pytest.raises(ValueError):
            regrid(post, estimate(post), 0.01, CFG)

    def test_degenerate_prior_rejected(self):
        post = self.make_posterior()
        with pytest.raises(DegeneratePriorError):
            regrid(post, Estimate(9.8, 0.0), 0.02, CFG)

    def test_new_interval_width(self):
        post = self.make_posterior(t=0.01)
        new = regrid(post, estimate(post), 0.02, CFG)
        assert new.g_hi - new.g_lo == pytest.approx(CFG.fringe_period(0.02), rel=1e-12)
        assert new.t_current == 0.02

    def test_moments_preserved(self):
        # An interior Gaussian much narrower than the new interval keeps its
        # summary through the regrid; a broad or multimodal posterior would
        # legitimately lose tail mass instead.
        t = 0.01
        half = 0.5 * CFG.fringe_period(t)
        grid = np.linspace(9.8 - half, 9.8 + half, 16384)
        mu, sigma = 9.8 + 1.3e-5, 2e-6
        vals = np.exp(-0.5 * ((grid - mu) / sigma) ** 2)
        vals /= np.trapezoid(vals, dx=grid[1] - grid[0])
        post = GridPosterior(grid[0], grid[-1], vals, t_current=t)
        est = estimate(post)
        new = regrid(post, est, 0.0125, CFG, n_grid=16384)
        est2 = estimate(new)
        assert est2.g_est == pytest.approx(est.g_est, abs=5e-3 * est.dg_est)
        assert est2.dg_est == pytest.approx(est.dg_est, rel=5e-3)
        assert abs(new.integral() - 1.0) <= 1e-9
