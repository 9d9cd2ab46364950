import numpy as np
import pytest

from lapcpd.graphs import GraphSnapshot, unnormalized_laplacian
from lapcpd.spectral import (
    ConvergenceError,
    DenseLimitError,
    dense_spectrum_oracle,
    dominant_left_singular_vector,
    fix_sign,
    top_k_singular_values,
)


def random_psd(rng, n):
    b = rng.standard_normal((n, n))
    return b @ b.T / n


def complete_graph_laplacian(n):
    g = GraphSnapshot.from_edges(
        n, [(i, j, 1.0) for i in range(n) for j in range(i + 1, n)]
    )
    return unnormalized_laplacian(g)


class TestDenseOracle:
    def test_k2_laplacian(self):
        assert np.allclose(
            dense_spectrum_oracle(np.array([[1.0, -1.0], [-1.0, 1.0]])), [2.0, 0.0]
        )

    def test_diagonal(self):
        assert np.allclose(dense_spectrum_oracle(np.diag([5.0, 3.0, 1.0])), [5, 3, 1])

    def test_frobenius_identity(self):
        # Squares of singular values sum to the squared Frobenius norm.
        rng = np.random.default_rng(2)
        m = rng.standard_normal((5, 5))
        m = m + m.T
        vals = dense_spectrum_oracle(m)
        assert np.sum(vals**2) == pytest.approx(np.sum(m**2), rel=1e-12)

    def test_dimension_refusal(self):
        with pytest.raises(DenseLimitError):
            dense_spectrum_oracle(np.eye(5), dense_limit=4)

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            dense_spectrum_oracle(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestTopK:
    def test_k3_laplacian_multiplicity(self):
        lap = complete_graph_laplacian(3)
        for method in ("dense", "lanczos"):
            vals = top_k_singular_values(lap, 3, method=method)
            assert np.allclose(vals, [3.0, 3.0, 0.0], atol=1e-8)

    def test_zero_matrix(self):
        for method in ("dense", "lanczos"):
            vals = top_k_singular_values(np.zeros((4, 4)), 2, method=method)
            assert np.allclose(vals, [0.0, 0.0])

    def test_random_psd_matches_oracle(self):
        rng = np.random.default_rng(0)
        m = random_psd(rng, 8)
        oracle = dense_spectrum_oracle(m)[:4]
        vals = top_k_singular_values(m, 4, tol=1e-10, method="lanczos")
        assert np.allclose(vals, oracle, atol=1e-8)

    def test_iterative_agrees_with_dense_many(self):
        rng = np.random.default_rng(42)
        for _ in range(30):
            n = int(rng.integers(3, 65))
            m = random_psd(rng, n)
            k = int(rng.integers(1, min(8, n) + 1))
            oracle = dense_spectrum_oracle(m)[:k]
            vals = top_k_singular_values(m, k, tol=1e-10, rng=rng, method="lanczos")
            assert np.abs(vals - oracle).max() < 1e-8

    def test_sparse_input(self):
        lap = complete_graph_laplacian(80)  # spectrum: 80 (x79), 0
        vals = top_k_singular_values(lap, 5, method="lanczos")
        assert np.allclose(vals, 80.0, atol=1e-7)

    def test_monotone_consistency(self):
        rng = np.random.default_rng(9)
        m = random_psd(rng, 20)
        v5 = top_k_singular_values(m, 5, tol=1e-10, method="lanczos")
        v6 = top_k_singular_values(m, 6, tol=1e-10, method="lanczos")
        assert np.abs(v6[:5] - v5).max() < 1e-8

    def test_descending_nonnegative(self):
        rng = np.random.default_rng(3)
        m = random_psd(rng, 30)
        vals = top_k_singular_values(m, 10, method="lanczos")
        assert np.all(np.diff(vals) <= 1e-12)
        assert np.all(vals >= 0)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            n = 20
            g = rng.random((n, n)) < 0.3
            adj = np.triu(g, 1).astype(float)
            adj = adj + adj.T
            lap = np.diag(adj.sum(1)) - adj
            perm = rng.permutation(n)
            lap_p = lap[np.ix_(perm, perm)]
            a = top_k_singular_values(lap, 6, tol=1e-10)
            b = top_k_singular_values(lap_p, 6, tol=1e-10)
            assert np.abs(a - b).max() < 1e-8

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            top_k_singular_values(np.eye(3), 4)
        with pytest.raises(ValueError):
            top_k_singular_values(np.eye(3), 0)

    def test_rejects_asymmetric(self):
        m = np.array([[0.0, 1.0], [0.5, 0.0]])
        with pytest.raises(ValueError, match="symmetric"):
            top_k_singular_values(m, 1)

    def test_convergence_error_carries_residual(self):
        rng = np.random.default_rng(1)
        m = random_psd(rng, 40)
        with pytest.raises(ConvergenceError) as exc:
            top_k_singular_values(m, 3, tol=1e-300, method="lanczos")
        assert exc.value.residual > 0

    def test_deterministic_under_fixed_seed(self):
        rng_matrix = np.random.default_rng(4)
        m = random_psd(rng_matrix, 50)
        a = top_k_singular_values(m, 4, rng=123, method="lanczos")
        b = top_k_singular_values(m, 4, rng=123, method="lanczos")
        assert np.array_equal(a, b)


class TestDominantLeftSingularVector:
    def test_repeated_column(self):
        c = np.tile(np.array([[1.0], [0.0], [0.0]]), (1, 4))
        assert np.allclose(dominant_left_singular_vector(c), [1.0, 0.0, 0.0])

    def test_tie_takes_positive_basis_vector(self):
        u = dominant_left_singular_vector(np.eye(2))
        assert np.isclose(np.linalg.norm(u), 1.0)
        assert u.max() > 0.999  # one of the basis vectors, positively oriented

    def test_matches_numpy_svd(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            c = rng.standard_normal((6, 4))
            u = dominant_left_singular_vector(c)
            ref = np.linalg.svd(c, full_matrices=False)[0][:, 0]
            assert abs(float(u @ ref)) >= 1.0 - 1e-8

    def test_zero_matrix_degenerate(self):
        with pytest.raises(ValueError):
            dominant_left_singular_vector(np.zeros((3, 2)))

    def test_sign_rule(self):
        assert np.allclose(fix_sign(np.array([-1.0, 0.0])), [1.0, 0.0])
        assert np.allclose(fix_sign(np.array([-1.0, 1.0])), [1.0, -1.0])
        with pytest.raises(ValueError):
            fix_sign(np.zeros(2))
