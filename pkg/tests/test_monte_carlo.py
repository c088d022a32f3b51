import math

import numpy as np
import pytest
from scipy.stats import kstest

from dysonminor.kernels import SpaceTimePoint as P, kernel_dbm
from dysonminor.monte_carlo import (EmpiricalHistogram, SimConfig, _chunk_rng,
                                    dbm_minor_samples, empirical_correlation,
                                    evolve_ou, histogram_from_samples,
                                    minor_eigenvalues, nonintersecting_density,
                                    sample_gue, simulate_warren)


class TestSampleGue:
    def test_level_one_law(self):
        rng = _chunk_rng(1, 0, 0)
        lam = minor_eigenvalues(sample_gue(1, rng, paths=100_000))[0].ravel()
        assert kstest(lam, "norm", args=(0, math.sqrt(0.5))).pvalue > 0.01

    def test_trace_moments(self):
        rng = _chunk_rng(2, 0, 0)
        st = sample_gue(4, rng, paths=100_000)
        tr = st.diag.sum(axis=1)
        se_mean = tr.std() / math.sqrt(len(tr))
        assert abs(tr.mean()) < 3 * se_mean
        # Var[Tr] = 4 * 1/2 = 2
        se_var = tr.var() * math.sqrt(2.0 / len(tr))
        assert abs(tr.var() - 2.0) < 3 * se_var

    def test_matrix_is_hermitian(self):
        rng = _chunk_rng(3, 0, 0)
        m = sample_gue(3, rng, paths=4).to_matrices()
        assert np.abs(m - np.conj(np.swapaxes(m, -1, -2))).max() < 1e-15


class TestEvolveOu:
    def test_large_step_decorrelates(self):
        rng = _chunk_rng(4, 0, 0)
        st = sample_gue(1, rng, paths=100_000)
        st2 = evolve_ou(st, 50.0, rng)
        assert kstest(st2.diag.ravel(), "norm",
                      args=(0, math.sqrt(0.5))).pvalue > 0.01
        corr = np.corrcoef(st.diag.ravel(), st2.diag.ravel())[0, 1]
        assert abs(corr) < 0.02

    def test_stationarity_of_top_eigenvalue(self):
        rng = _chunk_rng(5, 0, 0)
        st = sample_gue(2, rng, paths=100_000)
        lam0 = minor_eigenvalues(st)[1][:, 1]
        st2 = evolve_ou(st, 0.7, rng)
        lam1 = minor_eigenvalues(st2)[1][:, 1]
        # same law: two-sample KS
        from scipy.stats import ks_2samp
        assert ks_2samp(lam0, lam1).pvalue > 0.01

    def test_entry_autocovariance(self):
        rng = _chunk_rng(6, 0, 0)
        st = sample_gue(2, rng, paths=300_000)
        re0 = st.upper.real.ravel().copy()
        st2 = evolve_ou(st, 0.5, rng)
        prod = re0 * st2.upper.real.ravel()
        se = prod.std() / math.sqrt(len(prod))
        assert abs(prod.mean() - 0.25 * math.exp(-0.5)) < 3 * se

    def test_domain(self):
        rng = _chunk_rng(6, 1, 0)
        with pytest.raises(ValueError):
            evolve_ou(sample_gue(1, rng), 0.0, rng)


class TestMinorEigenvalues:
    def test_level_one_is_diagonal_entry(self):
        rng = _chunk_rng(7, 0, 0)
        st = sample_gue(1, rng, paths=16)
        assert np.allclose(minor_eigenvalues(st)[0], st.diag)

    def test_two_by_two_closed_form(self):
        rng = _chunk_rng(8, 0, 0)
        st = sample_gue(2, rng, paths=500)
        lam = minor_eigenvalues(st)[1]
        m = st.to_matrices()
        tr = np.real(m[:, 0, 0] + m[:, 1, 1])
        det = np.real(m[:, 0, 0] * m[:, 1, 1]) - np.abs(m[:, 0, 1]) ** 2
        disc = np.sqrt(tr * tr - 4 * det)
        closed = np.stack([(tr - disc) / 2, (tr + disc) / 2], axis=1)
        assert np.abs(lam - closed).max() < 1e-12

    def test_interlacing_holds(self):
        rng = _chunk_rng(9, 0, 0)
        st = sample_gue(6, rng, paths=2_000)
        lams = minor_eigenvalues(st)  # raises on violation
        for k in range(5):
            low, high = lams[k], lams[k + 1]
            assert np.all(high[:, :-1] <= low + 1e-9)
            assert np.all(low <= high[:, 1:] + 1e-9)

    def test_dimension_cap(self):
        rng = _chunk_rng(9, 1, 0)
        with pytest.raises(ValueError):
            minor_eigenvalues(sample_gue(65, rng))


class TestDeterminism:
    def test_dbm_bit_identical(self):
        cfg = SimConfig(dimension=2, times=(0.5, 1.0), paths=40_000, seed=77)
        a = dbm_minor_samples(cfg)
        b = dbm_minor_samples(cfg, threads=4)
        for t in a:
            for k in range(2):
                assert np.array_equal(a[t][k], b[t][k])

    def test_warren_bit_identical(self):
        cfg = SimConfig(dimension=0, times=(0.2,), paths=20_000, seed=5,
                        euler_step=5e-3)
        a = simulate_warren(2, cfg)
        b = simulate_warren(2, cfg, threads=3)
        assert np.array_equal(a[0.2][1], b[0.2][1])


class TestWarren:
    def test_interlacing_everywhere(self):
        cfg = SimConfig(dimension=0, times=(0.3, 0.8), paths=5_000, seed=2,
                        euler_step=2e-3)
        obs = simulate_warren(3, cfg)
        for t in (0.3, 0.8):
            l1, l2, l3 = obs[t]
            assert np.all(l2[:, 0] <= l1[:, 0]) and np.all(l1[:, 0] <= l2[:, 1])
            assert np.all(l3[:, 0] <= l2[:, 0]) and np.all(l2[:, 0] <= l3[:, 1])
            assert np.all(l3[:, 1] <= l2[:, 1]) and np.all(l2[:, 1] <= l3[:, 2])

    def test_level_one_marginal(self):
        cfg = SimConfig(dimension=0, times=(1.0,), paths=50_000, seed=3,
                        euler_step=1e-3)
        obs = simulate_warren(2, cfg)
        lvl1 = obs[1.0][0].ravel()
        assert kstest(lvl1, "norm", args=(0, math.sqrt(0.5))).pvalue > 0.01

    def test_requires_step(self):
        cfg = SimConfig(dimension=0, times=(1.0,), paths=10, seed=1)
        with pytest.raises(ValueError):
            simulate_warren(2, cfg)

    def test_step_must_fit_observation_spacing(self):
        cfg = SimConfig(dimension=0, times=(0.01,), paths=10, seed=1,
                        euler_step=0.1)
        with pytest.raises(ValueError):
            simulate_warren(2, cfg)


class TestNonintersectingDensity:
    def test_level_one_ratio(self):
        x, y, t = 0.3, 0.1, 0.7
        got = nonintersecting_density(1, t, [x], [y])
        bm = math.exp(-((y - x) ** 2) / t) / math.sqrt(math.pi * t)
        assert got / bm == pytest.approx(math.sqrt(math.pi * t), rel=1e-12)

    def test_h_transform_symmetry(self):
        # the symmetric object is Delta(x)/Delta(y) * p(x, y): exchanging
        # the argument pair flips the Vandermonde prefactor twice
        rng = np.random.default_rng(0)
        for _ in range(5):
            x = np.sort(rng.uniform(-2, 2, size=2))
            y = np.sort(rng.uniform(-2, 2, size=2))
            dx = x[1] - x[0]
            dy = y[1] - y[0]
            lhs = nonintersecting_density(2, 1.0, x, y) * dx / dy
            rhs = nonintersecting_density(2, 1.0, y, x) * dy / dx
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_positive_for_interlaced_inputs(self):
        assert nonintersecting_density(2, 1.0, [-1.0, 1.0],
                                       [-0.8, 1.1]) > 0.0

    def test_coincident_coordinates_rejected(self):
        with pytest.raises(ValueError):
            nonintersecting_density(2, 1.0, [0.5, 0.5], [0.0, 1.0])


class TestEstimators:
    def test_histogram_error_model(self):
        edges = np.array([0.0, 0.5, 1.0])
        h = EmpiricalHistogram(edges=edges, counts=np.array([8.0, 2.0]),
                               paths=100)
        assert h.density[0] == pytest.approx(8 / (100 * 0.5))
        assert h.std_error[0] == pytest.approx(
            math.sqrt(h.density[0] / (100 * 0.5)))

    def test_empirical_rho1_matches_kernel(self):
        cfg = SimConfig(dimension=2, times=(0.5,), paths=150_000, seed=11)
        samples = dbm_minor_samples(cfg)
        flat = {(1, 0.5): samples[0.5][0], (2, 0.5): samples[0.5][1]}
        for (lvl, x) in [(1, 0.0), (2, 0.6)]:
            est = empirical_correlation(flat, [(lvl, 0.5, x)], 0.1)
            ana = kernel_dbm(P(lvl, 0.5, x), P(lvl, 0.5, x))
            assert abs(est.value - ana) < 3 * est.std_error + 0.01 * ana

    def test_zero_hits_one_sided(self):
        samples = {(1, 1.0): np.zeros((100, 1))}
        est = empirical_correlation(samples, [(1, 1.0, 50.0)], 0.1)
        assert est.value == 0.0 and est.one_sided

    def test_overlapping_bins_rejected(self):
        samples = {(1, 1.0): np.zeros((10, 1))}
        with pytest.raises(ValueError):
            empirical_correlation(samples, [(1, 1.0, 0.0), (1, 1.0, 0.05)],
                                  0.2)

    def test_missing_slice_rejected(self):
        with pytest.raises(ValueError):
            empirical_correlation({}, [(1, 1.0, 0.0)], 0.1)

    def test_total_particle_count(self):
        cfg = SimConfig(dimension=2, times=(0.4,), paths=30_000, seed=9)
        samples = dbm_minor_samples(cfg)
        hist = histogram_from_samples(samples[0.4][1],
                                      np.linspace(-6, 6, 61), cfg.paths)
        total = float(np.sum(hist.density * hist.widths))
        assert total == pytest.approx(2.0, abs=0.01)
