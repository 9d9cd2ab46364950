import numpy as np
import pytest

from lapcpd.baselines import activity_detect, activity_vector, aggregate_scores
from lapcpd.detector import AnomalyScoreSeries
from lapcpd.graphs import GraphSnapshot


def complete(n):
    return GraphSnapshot.from_edges(
        n, [(i, j, 1.0) for i in range(n) for j in range(i + 1, n)]
    )


def star(leaves):
    return GraphSnapshot.from_edges(
        leaves + 1, [(0, i, 1.0) for i in range(1, leaves + 1)]
    )


class TestActivityVector:
    def test_complete_graph_uniform(self):
        v = activity_vector(complete(5))
        assert np.allclose(v, 1 / np.sqrt(5))

    def test_star_hub_and_leaves(self):
        # Dense-eigensolver oracle: hub entry 1/sqrt(2), leaves 1/sqrt(10).
        v = activity_vector(star(5))
        oracle_vals, oracle_vecs = np.linalg.eigh(star(5).to_dense())
        oracle = np.abs(oracle_vecs[:, np.argmax(oracle_vals)])
        assert np.allclose(v, oracle, atol=1e-10)
        assert v[0] == pytest.approx(1 / np.sqrt(2), abs=1e-12)
        assert np.allclose(v[1:], 1 / np.sqrt(10), atol=1e-12)

    def test_disjoint_edges_mass_on_heavier(self):
        g = GraphSnapshot.from_edges(4, [(0, 1, 3.0), (2, 3, 1.0)])
        v = activity_vector(g)
        assert np.allclose(np.abs(v[:2]), 1 / np.sqrt(2), atol=1e-10)
        assert np.allclose(v[2:], 0.0, atol=1e-10)

    def test_empty_graph_degenerate(self):
        with pytest.raises(ValueError):
            activity_vector(GraphSnapshot.empty(3))

    def test_weight_rescaling_invariance(self):
        rng = np.random.default_rng(0)
        upper = np.triu(rng.random((8, 8)) < 0.4, 1) * rng.uniform(0.5, 2, (8, 8))
        a = upper + upper.T
        g1 = GraphSnapshot.from_dense(a)
        g2 = GraphSnapshot.from_dense(7.0 * a)
        assert np.allclose(activity_vector(g1), activity_vector(g2), atol=1e-12)


class TestActivityDetect:
    def test_constant_sequence(self):
        view = [complete(4) for _ in range(12)]
        series = activity_detect(view, w_short=3)
        assert np.abs(series.z_star).max() < 1e-12  # zero up to cosine roundoff
        assert series.startup_len == 3

    def test_needs_enough_steps(self):
        with pytest.raises(ValueError):
            activity_detect([complete(3)] * 3, w_short=3)

    def test_detects_structural_break(self):
        view = [complete(6)] * 8 + [star(5)] * 4
        series = activity_detect(view, w_short=4)
        assert np.argmax(series.z_star) == 8


def make_series(rng, T=12, startup=4):
    z = np.abs(rng.random(T))
    z[:startup] = 0.0
    return AnomalyScoreSeries(z, z.copy(), z.copy(), startup_len=startup)


class TestAggregateScores:
    def test_single_view_identity(self):
        rng = np.random.default_rng(1)
        s = make_series(rng)
        out = aggregate_scores([s], "max")
        assert np.array_equal(out.z_star, s.z_star)

    def test_max_picks_larger(self):
        rng = np.random.default_rng(2)
        a, b = make_series(rng), make_series(rng)
        out = aggregate_scores([a, b], "max")
        t = 6
        assert out.z_star[t] == max(a.z_star[t], b.z_star[t])

    def test_mean_matches_brute_force(self):
        rng = np.random.default_rng(3)
        series = [make_series(rng) for _ in range(3)]
        out = aggregate_scores(series, "mean")
        for t in range(12):
            brute = sum(s.z_star[t] for s in series) / 3
            assert out.z_star[t] == pytest.approx(brute, abs=1e-15)

    def test_max_dominates_mean(self):
        rng = np.random.default_rng(4)
        series = [make_series(rng) for _ in range(4)]
        mx = aggregate_scores(series, "max").z_star
        mn = aggregate_scores(series, "mean").z_star
        assert np.all(mx >= mn - 1e-15)

    def test_validation(self):
        rng = np.random.default_rng(5)
        with pytest.raises(ValueError):
            aggregate_scores([make_series(rng)], "median")
        with pytest.raises(ValueError):
            aggregate_scores([make_series(rng, T=10), make_series(rng, T=12)], "max")
        with pytest.raises(ValueError):
            aggregate_scores(
                [make_series(rng, startup=3), make_series(rng, startup=4)], "max"
            )
