import math

import numpy as np
import pytest

from lapcpd.detector import DetectorConfig, lad_detect
from lapcpd.generators import GenConfig, generate_experiment
from lapcpd.graphs import DynamicGraph, GraphSnapshot, normalized_laplacian
from lapcpd.multiview import (
    PowerMeanConfig,
    multilad_detect,
    power_mean_spectrum,
    scalar_power_mean,
)
from lapcpd.schedules import multiview_sbm_change_points
from lapcpd.spectral import dense_spectrum_oracle

# (2048/1025)^(1/10), evaluated with 50-digit decimal arithmetic.
POWER_MEAN_1_2_P_MINUS_10 = 1.0716688533374473


def random_graph(rng, n, p=0.3):
    upper = np.triu(rng.random((n, n)) < p, k=1).astype(float)
    return GraphSnapshot.from_dense(upper + upper.T)


class TestPowerMeanConfig:
    def test_epsilon_negative_p(self):
        assert PowerMeanConfig(-10.0).epsilon == pytest.approx(math.log(11.0), abs=0)

    def test_epsilon_positive_p(self):
        assert PowerMeanConfig(5.0).epsilon == 0.0

    def test_zero_p_rejected(self):
        with pytest.raises(ValueError):
            PowerMeanConfig(0.0)


class TestScalarPowerMean:
    def test_identical_inputs(self):
        for p in (-10.0, -1.0, 1.0, 3.0):
            assert scalar_power_mean([2.5, 2.5, 2.5], p) == 2.5

    def test_arithmetic_mean(self):
        assert scalar_power_mean([1.0, 3.0], 1.0) == 2.0

    def test_frozen_oracle_value(self):
        got = scalar_power_mean([1.0, 2.0], -10.0)
        assert got == pytest.approx(POWER_MEAN_1_2_P_MINUS_10, abs=1e-12)

    def test_zero_with_negative_p_rejected(self):
        with pytest.raises(ValueError, match="shift"):
            scalar_power_mean([0.0, 1.0], -2.0)

    def test_zero_with_positive_p_allowed(self):
        assert scalar_power_mean([0.0, 2.0], 2.0) == pytest.approx(np.sqrt(2.0))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            scalar_power_mean([], 1.0)

    def test_negative_entry_rejected(self):
        with pytest.raises(ValueError):
            scalar_power_mean([-1.0, 1.0], 2.0)

    def test_extreme_p_stability(self):
        # Large |p| must not overflow: min/max bounds still hold.
        vals = [2.4, 4.4]
        lo = scalar_power_mean(vals, -200.0)
        hi = scalar_power_mean(vals, 200.0)
        assert 2.4 <= lo <= hi <= 4.4
        assert lo == pytest.approx(2.4, rel=1e-2)
        assert hi == pytest.approx(4.4, rel=1e-2)


class TestPowerMeanSpectrum:
    def test_single_view_identity(self):
        v = np.array([3.0, 1.0, 0.5])
        out = power_mean_spectrum([v], PowerMeanConfig(-10.0))
        assert np.array_equal(out, v)
        assert out is not v  # a copy, inputs stay untouched

    def test_identical_views_idempotent(self):
        v = np.array([3.0, 1.0, 0.5])
        out = power_mean_spectrum([v, v], PowerMeanConfig(-10.0))
        assert np.array_equal(out, v)

    def test_componentwise_matches_scalar_loop(self):
        rng = np.random.default_rng(0)
        sigs = [rng.uniform(0.5, 4.0, size=6) for _ in range(3)]
        cfg = PowerMeanConfig(-10.0)
        out = power_mean_spectrum(sigs, cfg)
        for i in range(6):
            brute = scalar_power_mean([s[i] for s in sigs], cfg.p)
            assert out[i] == pytest.approx(brute, rel=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            power_mean_spectrum([np.ones(3), np.ones(4)], PowerMeanConfig(-10.0))

    def test_p1_is_exact_arithmetic_mean(self):
        rng = np.random.default_rng(1)
        sigs = [rng.uniform(0.1, 2.0, size=5) for _ in range(4)]
        out = power_mean_spectrum(sigs, PowerMeanConfig(1.0))
        assert np.array_equal(out, np.vstack(sigs).mean(axis=0))

    def test_bounds_between_min_and_max(self):
        rng = np.random.default_rng(2)
        sigs = [rng.uniform(0.5, 4.0, size=8) for _ in range(5)]
        arr = np.vstack(sigs)
        for p in (-10.0, -2.0, 1.0, 2.0, 10.0):
            out = power_mean_spectrum(sigs, PowerMeanConfig(p))
            assert np.all(out >= arr.min(axis=0) - 1e-12)
            assert np.all(out <= arr.max(axis=0) + 1e-12)


class TestShiftConsistency:
    def test_shifted_matrix_equals_shifted_values(self):
        # Adding eps*I to the (PSD) normalized Laplacian shifts every
        # singular value by eps, so shifting values directly is equivalent.
        rng = np.random.default_rng(3)
        eps = PowerMeanConfig(-10.0).epsilon
        for _ in range(10):
            g = random_graph(rng, 12)
            lap = normalized_laplacian(g).toarray()
            direct = dense_spectrum_oracle(lap + eps * np.eye(12))
            shifted = dense_spectrum_oracle(lap) + eps
            assert np.abs(direct - shifted).max() < 1e-10


class TestMultiladDetect:
    def test_rejects_unnormalized_config(self):
        schedule, gen = multiview_sbm_change_points(n_views=1)
        graph, _ = generate_experiment(schedule, GenConfig(n_nodes=30, n_views=1))
        with pytest.raises(ValueError, match="normalized"):
            multilad_detect(graph, DetectorConfig(laplacian="unnormalized"), PowerMeanConfig())

    def test_single_view_reduces_to_shifted_lad(self):
        rng = np.random.default_rng(4)
        view = [random_graph(rng, 14) for _ in range(18)]
        graph = DynamicGraph([[g] for g in view])
        pm = PowerMeanConfig(-10.0)
        det = DetectorConfig(w_short=3, w_long=6, laplacian="normalized")
        multi = multilad_detect(graph, det, pm)
        single = lad_detect(
            view,
            DetectorConfig(
                w_short=3, w_long=6, k=14, laplacian="normalized", shift=pm.epsilon
            ),
        )
        assert np.array_equal(multi.z_star, single.z_star)
        assert np.array_equal(multi.z_short, single.z_short)
        assert np.array_equal(multi.z_long, single.z_long)

    def test_identical_views_idempotent(self):
        rng = np.random.default_rng(5)
        view = [random_graph(rng, 12) for _ in range(16)]
        det = DetectorConfig(w_short=3, w_long=5, laplacian="normalized")
        pm = PowerMeanConfig(-10.0)
        one = multilad_detect(DynamicGraph([[g] for g in view]), det, pm)
        three = multilad_detect(DynamicGraph([[g, g, g] for g in view]), det, pm)
        assert np.array_equal(one.z_star, three.z_star)

    def test_empty_snapshots_handled_by_shift(self):
        rng = np.random.default_rng(6)
        view = [random_graph(rng, 10) for _ in range(12)] + [GraphSnapshot.empty(10)]
        graph = DynamicGraph([[g] for g in view])
        det = DetectorConfig(w_short=2, w_long=4, laplacian="normalized")
        series = multilad_detect(graph, det, PowerMeanConfig(-10.0))
        assert len(series) == 13
        assert np.all(series.z_star >= 0)
