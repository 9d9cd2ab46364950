"""Singular values of symmetric positive semi-definite matrices.

Two routes are provided: :func:`top_k_singular_values` runs a Krylov
(Lanczos) iteration with full reorthogonalization, suitable for sparse
inputs where only the leading part of the spectrum is needed, and
:func:`dense_spectrum_oracle` computes the full spectrum with a dense
symmetric eigensolver for small matrices and tests.  For a symmetric PSD
matrix the singular values coincide with the eigenvalues, which is what
both routes exploit.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
import scipy.sparse as sp

__all__ = [
    "ConvergenceError",
    "DenseLimitError",
    "DENSE_ORACLE_LIMIT",
    "SMALL_DENSE_DIM",
    "dense_spectrum_oracle",
    "top_k_singular_values",
    "dominant_left_singular_vector",
    "fix_sign",
]

DENSE_ORACLE_LIMIT = 2000
# At or below this dimension the dense eigensolver is always used:
# correctness dominates and the cost is negligible.
SMALL_DENSE_DIM = 64

_BREAKDOWN_EPS = 1e-14


class ConvergenceError(RuntimeError):
    """Lanczos iteration exhausted its restart budget.

    ``residual`` holds the smallest relative residual achieved for the
    still-missing pairs.
    """

    def __init__(self, message, residual):
        super().__init__(f"{message} (best remaining residual {residual:.3e})")
        self.residual = residual


class DenseLimitError(ValueError):
    """Matrix too large for the dense eigensolver path."""


def _as_operator(M):
    if sp.issparse(M):
        return M.tocsr(), M.shape[0]
    M = np.asarray(M, dtype=np.float64)
    return M, M.shape[0]


def _check_symmetric(M, tol=1e-8):
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix must be square, got shape {M.shape}")
    if sp.issparse(M):
        diff = abs(M - M.T)
        asym = diff.max() if diff.nnz else 0.0
        scale = abs(M).max() if M.nnz else 0.0
    else:
        asym = np.abs(M - M.T).max() if M.size else 0.0
        scale = np.abs(M).max() if M.size else 0.0
    if asym > tol * (1.0 + scale):
        raise ValueError(f"matrix is not symmetric (asymmetry {asym:.3e})")


def dense_spectrum_oracle(M, dense_limit=DENSE_ORACLE_LIMIT):
    """Full spectrum of absolute eigenvalues, sorted descending.

    Refuses matrices above ``dense_limit`` rows; intended as the reference
    path for tests and for small inputs.
    """
    M, n = _as_operator(M)
    if n > dense_limit:
        raise DenseLimitError(f"dimension {n} exceeds dense limit {dense_limit}")
    _check_symmetric(M)
    dense = M.toarray() if sp.issparse(M) else M
    vals = np.abs(np.linalg.eigvalsh(dense))
    return np.sort(vals)[::-1].copy()


def top_k_singular_values(M, k, tol=1e-8, rng=None, method="auto"):
    """Largest ``k`` singular values of a symmetric PSD matrix, descending.

    Parameters
    ----------
    M : (n, n) symmetric PSD matrix, sparse or dense
    k : int, 1 <= k <= n
    tol : float
        Per-pair relative residual target ``||Mv - s v|| <= tol * (1 + s)``
        for the iterative route.
    rng : numpy Generator or int seed, optional
        Source of the Lanczos start vectors; a fixed default seed keeps
        repeated calls deterministic.
    method : {"auto", "dense", "lanczos"}
        "auto" takes the dense route for small matrices (dim <= 64) or
        when ``k`` is a large fraction of the dimension.

    Raises
    ------
    ValueError
        Non-symmetric input (beyond tolerance) or invalid ``k``.
    ConvergenceError
        Iterative route failed to converge within its restart budget.
    """
    M, n = _as_operator(M)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    _check_symmetric(M)
    if method not in ("auto", "dense", "lanczos"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        method = "dense" if (n <= SMALL_DENSE_DIM or k > n // 4) else "lanczos"
    if method == "dense":
        dense = M.toarray() if sp.issparse(M) else M
        vals = np.sort(np.abs(np.linalg.eigvalsh(dense)))[::-1]
        return vals[:k].copy()
    if rng is None or isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(0 if rng is None else rng)
    return _lanczos_top_k(M, n, k, tol, rng)


def _ritz_of_tridiagonal(alphas, betas):
    if len(alphas) == 1:
        return np.array([alphas[0]]), np.array([[1.0]])
    return scipy.linalg.eigh_tridiagonal(np.asarray(alphas), np.asarray(betas))


def _lanczos_pass(M, n, need, tol, rng, deflate):
    """One Lanczos sweep in the complement of ``deflate``.

    Returns converged ``(values, vectors)`` sorted descending, possibly
    fewer than ``need``, plus the best residual seen for unconverged pairs.
    """
    n_free = n - (0 if deflate is None else deflate.shape[1])
    # Clustered spectra (e.g. Laplacians of near-regular random graphs)
    # converge slowly; the budget is generous since passes end early anyway.
    m_max = min(n_free, max(12 * need + 40, 150))
    q = rng.standard_normal(n)
    if deflate is not None:
        q -= deflate @ (deflate.T @ q)
        q -= deflate @ (deflate.T @ q)
    norm_q = np.linalg.norm(q)
    if norm_q < 1e-12:
        return np.empty(0), np.empty((n, 0)), np.inf
    Q = np.empty((n, m_max))
    Q[:, 0] = q / norm_q
    alphas, betas = [], []
    theta, S = None, None
    for j in range(m_max):
        w = M @ Q[:, j]
        if deflate is not None:
            w -= deflate @ (deflate.T @ w)
        alpha = float(Q[:, j] @ w)
        alphas.append(alpha)
        w -= alpha * Q[:, j]
        if j > 0:
            w -= betas[-1] * Q[:, j - 1]
        # Full reorthogonalization, applied twice: plain Lanczos loses
        # orthogonality long before the extreme pairs converge.
        basis = Q[:, : j + 1]
        w -= basis @ (basis.T @ w)
        w -= basis @ (basis.T @ w)
        if deflate is not None:
            w -= deflate @ (deflate.T @ w)
        beta = float(np.linalg.norm(w))
        theta, S = _ritz_of_tridiagonal(alphas, betas)
        scale = max(1.0, float(np.abs(theta).max()))
        res_est = beta * np.abs(S[-1, :])
        order = np.argsort(theta)[::-1]
        top = order[: min(need, j + 1)]
        n_conv = 0
        for idx in top:
            if res_est[idx] <= tol * (1.0 + abs(theta[idx])):
                n_conv += 1
            else:
                break
        exhausted = beta <= _BREAKDOWN_EPS * scale
        if n_conv >= need or exhausted or j == m_max - 1:
            break
        betas.append(beta)
        Q[:, j + 1] = w / beta
    # Harvest the leading Ritz pairs whose true residual meets the target.
    dim = len(alphas)
    order = np.argsort(theta)[::-1]
    vals, vecs = [], []
    best_res = np.inf
    for idx in order[:need]:
        y = Q[:, :dim] @ S[:, idx]
        y /= np.linalg.norm(y)
        true_res = float(np.linalg.norm(M @ y - theta[idx] * y))
        if true_res <= tol * (1.0 + abs(theta[idx])):
            vals.append(float(theta[idx]))
            vecs.append(y)
        else:
            best_res = min(best_res, true_res / (1.0 + abs(theta[idx])))
            break  # lower pairs are even less converged
    if vals:
        return np.asarray(vals), np.column_stack(vecs), best_res
    return np.empty(0), np.empty((n, 0)), best_res


def _lanczos_top_k(M, n, k, tol, rng):
    # Deflated restarts recover multiple copies of repeated eigenvalues; a
    # pass that exhausts an invariant subspace can also harvest values below
    # undiscovered duplicates, so once k values are collected an extra
    # confirmation pass must fail to beat the current k-th before returning.
    conv_vals: list[float] = []
    conv_vecs = np.empty((n, 0))
    stagnant = 0
    best_res = np.inf
    confirmed = False
    for _ in range(2 * k + 30):
        if conv_vecs.shape[1] == n:
            confirmed = True  # the whole space is accounted for
            break
        deflate = conv_vecs if conv_vecs.shape[1] else None
        need = k - len(conv_vals) if len(conv_vals) < k else 1
        vals, vecs, res = _lanczos_pass(M, n, need, tol, rng, deflate)
        best_res = min(best_res, res)
        if vals.size == 0:
            stagnant += 1
            if stagnant >= 3:
                break
            continue
        stagnant = 0
        if len(conv_vals) >= k:
            kth = np.sort(conv_vals)[::-1][k - 1]
            if vals.max() <= kth + tol * (1.0 + abs(kth)):
                confirmed = True
                break
        conv_vals.extend(vals.tolist())
        conv_vecs = np.hstack([conv_vecs, vecs])
    if len(conv_vals) < k or not confirmed:
        raise ConvergenceError(
            f"found {len(conv_vals)} of {k} singular values"
            + ("" if len(conv_vals) < k else " but could not confirm the top set"),
            best_res,
        )
    out = np.sort(np.asarray(conv_vals))[::-1][:k]
    # PSD within tolerance: snap slightly negative Ritz values to zero.
    tiny = out < 0
    if np.any(out[tiny] < -1e-6 * (1.0 + abs(out[0]))):
        raise ValueError("matrix is not positive semi-definite within tolerance")
    out[tiny] = 0.0
    return out


def fix_sign(u):
    """Canonical sign for a singular/eigen-vector.

    The entry sum is made non-negative; an exactly zero sum falls back to
    making the first non-zero entry positive.
    """
    s = u.sum()
    if s > 0:
        return u
    if s < 0:
        return -u
    nz = np.nonzero(u)[0]
    if nz.size == 0:
        raise ValueError("cannot orient the zero vector")
    return u if u[nz[0]] > 0 else -u


def dominant_left_singular_vector(C):
    """Left singular vector for the largest singular value of ``C``.

    The result is L2-normalized and sign-fixed via :func:`fix_sign` so that
    cosine scores computed against non-negative spectra land in [0, 1].
    Raises on an all-zero input.
    """
    C = np.atleast_2d(np.asarray(C, dtype=np.float64))
    if not np.any(C):
        raise ValueError("zero matrix has no dominant singular vector")
    u, s, _ = np.linalg.svd(C, full_matrices=False)
    lead = u[:, 0]
    lead = lead / np.linalg.norm(lead)
    return fix_sign(lead)
