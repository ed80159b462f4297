"""Small dense linear-algebra helpers shared by the geometry modules."""
from __future__ import annotations

import numpy as np

from .config import TOL
from .errors import RankDeficient


def numerical_rank(mat: np.ndarray, rtol: float | None = None) -> int:
    rtol = TOL.rank if rtol is None else rtol
    if mat.size == 0:
        return 0
    s = np.linalg.svd(mat, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def null_space(mat: np.ndarray, rtol: float | None = None) -> np.ndarray:
    """Orthonormal (Euclidean) basis of ker(mat) as columns.

    Singular values below ``rtol`` times the largest one count as zero.
    """
    rtol = TOL.rank if rtol is None else rtol
    rows, cols = mat.shape
    if rows == 0:
        return np.eye(cols)
    _, s, vh = np.linalg.svd(mat, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        return np.eye(cols)
    rank = int(np.sum(s > rtol * s[0]))
    return vh[rank:].conj().T


def gram_orthonormalize(vectors: np.ndarray, gram: np.ndarray, rtol: float | None = None) -> np.ndarray:
    """Orthonormalize the columns of ``vectors`` with respect to ``gram``.

    Cholesky-based Gram-Schmidt: the output spans the same subspace, keeps
    the triangular (flag-preserving) structure, and returns already
    orthonormal input unchanged.
    """
    rtol = TOL.rank if rtol is None else rtol
    vectors = np.asarray(vectors, dtype=float)
    if vectors.ndim == 1:
        vectors = vectors[:, None]
    k = vectors.shape[1]
    if k == 0:
        return vectors.copy()
    if numerical_rank(vectors, rtol) < k:
        raise RankDeficient(f"{k} vectors span a space of dimension {numerical_rank(vectors, rtol)}")
    g = vectors.T @ gram @ vectors
    g = 0.5 * (g + g.T)
    try:
        chol = np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise RankDeficient("Gram matrix is not positive definite on the given vectors") from exc
    # V L^{-T}: columns e_j = sum_i V_i (L^{-T})_{ij}
    return np.linalg.solve(chol, vectors.T).T


def orthonormal_complement(basis: np.ndarray, gram: np.ndarray, rtol: float | None = None) -> np.ndarray:
    """Gram-orthonormal basis of the gram-orthogonal complement of span(basis)."""
    ambient = gram.shape[0]
    if basis.shape[1] == 0:
        comp = np.eye(ambient)
    else:
        comp = null_space(basis.T @ gram, rtol)
    return gram_orthonormalize(comp, gram, rtol)
