"""Compact classical Lie algebras as structure-constant objects.

Basis conventions (fixed, so coordinates are reproducible):

``so(n)``
    E_ij - E_ji for i < j in lexicographic order; n x n real matrices.
``su(n)``
    Off-diagonal pairs (E_ij - E_ji, i(E_ij + E_ji)) for i < j in
    lexicographic order, then the diagonal elements
    i sqrt(2/(k(k+1))) diag(1, ..., 1, -k, 0, ..., 0), k = 1..n-1.
    Every complex generator is realified to a 2n x 2n real matrix
    [[A, -B], [B, A]] for A + iB.
``sp(n)``
    Complex 2n x 2n matrices [[P, Q], [-conj(Q), conj(P)]] with P in u(n)
    and Q complex symmetric (so X^T J + J X = 0 for J = [[0, I], [-I, 0]]).
    The u(n) part comes first (off-diagonal pairs, then sqrt(2) i E_jj),
    then the Q part (for i < j: E_ij + E_ji and its i-multiple; then
    sqrt(2) E_ii and its i-multiple).  Realified like su(n), so the real
    matrices are 4n x 4n.

All three bases are orthogonal for the trace form, with equal norms inside a
family, which makes the Killing matrix a multiple of the identity.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

from .config import TOL, rel_scale
from .errors import DimMismatch, RankTooSmall, UnsupportedFamily
from .linalg import gram_orthonormalize


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """A real Lie algebra with a faithful real matrix realization.

    ``structure[i, j, k]`` is the coefficient of e_k in [e_i, e_j] and
    ``killing[i, j] = -trace(ad e_i ad e_j)``.
    """

    family: str
    n: int
    basis_mats: np.ndarray
    structure: np.ndarray
    killing: np.ndarray
    label: str = field(default="")

    @property
    def name(self) -> str:
        return self.label or f"{self.family}({self.n})"

    @property
    def dim(self) -> int:
        return self.basis_mats.shape[0]

    @property
    def matrix_size(self) -> int:
        return self.basis_mats.shape[1]

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name}, dim={self.dim})"


def realify(z: np.ndarray) -> np.ndarray:
    """Complex n x n (or a stack) to real 2n x 2n blocks [[A, -B], [B, A]]."""
    a, b = z.real, z.imag
    top = np.concatenate([a, -b], axis=-1)
    bottom = np.concatenate([b, a], axis=-1)
    return np.concatenate([top, bottom], axis=-2)


def complexify_blocks(m: np.ndarray) -> np.ndarray:
    """Inverse of :func:`realify`: read A + iB off the left block column."""
    n = m.shape[-1] // 2
    return m[..., :n, :n] + 1j * m[..., n:, :n]


def _so_basis(n: int) -> np.ndarray:
    mats = []
    for i, j in itertools.combinations(range(n), 2):
        e = np.zeros((n, n))
        e[i, j], e[j, i] = 1.0, -1.0
        mats.append(e)
    return np.array(mats)


def _su_complex_basis(n: int) -> np.ndarray:
    mats = []
    for i, j in itertools.combinations(range(n), 2):
        e = np.zeros((n, n), dtype=complex)
        e[i, j], e[j, i] = 1.0, -1.0
        mats.append(e)
        e = np.zeros((n, n), dtype=complex)
        e[i, j] = e[j, i] = 1j
        mats.append(e)
    for k in range(1, n):
        e = np.zeros((n, n), dtype=complex)
        diag = np.zeros(n)
        diag[:k] = 1.0
        diag[k] = -k
        e[np.arange(n), np.arange(n)] = 1j * np.sqrt(2.0 / (k * (k + 1))) * diag
        mats.append(e)
    return np.array(mats)


def _sp_complex_basis(n: int) -> np.ndarray:
    mats = []

    def from_pq(p, q):
        x = np.zeros((2 * n, 2 * n), dtype=complex)
        x[:n, :n] = p
        x[:n, n:] = q
        x[n:, :n] = -q.conj()
        x[n:, n:] = p.conj()
        return x

    zero = np.zeros((n, n), dtype=complex)
    for i, j in itertools.combinations(range(n), 2):
        p = np.zeros((n, n), dtype=complex)
        p[i, j], p[j, i] = 1.0, -1.0
        mats.append(from_pq(p, zero))
        p = np.zeros((n, n), dtype=complex)
        p[i, j] = p[j, i] = 1j
        mats.append(from_pq(p, zero))
    for i in range(n):
        p = np.zeros((n, n), dtype=complex)
        p[i, i] = 1j * np.sqrt(2.0)
        mats.append(from_pq(p, zero))
    for i, j in itertools.combinations(range(n), 2):
        q = np.zeros((n, n), dtype=complex)
        q[i, j] = q[j, i] = 1.0
        mats.append(from_pq(zero, q))
        mats.append(from_pq(zero, 1j * q))
    for i in range(n):
        q = np.zeros((n, n), dtype=complex)
        q[i, i] = np.sqrt(2.0)
        mats.append(from_pq(zero, q))
        mats.append(from_pq(zero, 1j * q))
    return np.array(mats)


def structure_from_matrices(basis_mats: np.ndarray, chunk: int = 32) -> np.ndarray:
    """Structure tensor of the matrix Lie algebra spanned by ``basis_mats``.

    Commutators are re-expanded in the basis through the Frobenius Gram
    matrix; a commutator that leaves the span raises ``ValueError``.
    """
    d, size, _ = basis_mats.shape
    flat = basis_mats.reshape(d, size * size)
    gram = flat @ flat.T
    proj = np.linalg.solve(gram, flat)  # (d, N^2): coefficients = comm_flat @ proj.T
    out = np.empty((d, d, d))
    worst = 0.0
    for start in range(0, d, chunk):
        block = basis_mats[start:start + chunk]
        comm = np.matmul(block[:, None], basis_mats[None]) - np.matmul(basis_mats[None], block[:, None])
        comm_flat = comm.reshape(block.shape[0], d, size * size)
        coeffs = comm_flat @ proj.T
        recon = coeffs @ flat
        worst = max(worst, float(np.max(np.abs(recon - comm_flat))) if comm_flat.size else 0.0)
        out[start:start + chunk] = coeffs
    if worst > TOL.structure * rel_scale(basis_mats) ** 2:
        raise ValueError(f"matrices do not close under commutators (residual {worst:.3e})")
    return out


def killing_from_structure(structure: np.ndarray) -> np.ndarray:
    """-trace(ad e_i ad e_j) with (ad e_i)[k, l] = structure[i, l, k]."""
    d = structure.shape[0]
    a = structure.reshape(d, d * d)                       # index (l, k)
    b = structure.transpose(0, 2, 1).reshape(d, d * d)    # C[j, k, l] at (l, k)
    k = -(a @ b.T)
    return 0.5 * (k + k.T)


def from_matrices(family: str, n: int, basis_mats: np.ndarray, label: str = "") -> LieAlgebra:
    basis_mats = np.ascontiguousarray(basis_mats, dtype=float)
    structure = structure_from_matrices(basis_mats)
    killing = killing_from_structure(structure)
    for arr in (basis_mats, structure, killing):
        arr.setflags(write=False)
    return LieAlgebra(family, n, basis_mats, structure, killing, label)


@functools.lru_cache(maxsize=64)
def build_classical(family: str, n: int) -> LieAlgebra:
    """Build su(n), so(n) or sp(n) with the documented basis ordering."""
    family = family.lower()
    if family == "so":
        if n < 3:
            raise RankTooSmall(f"so({n}) needs n >= 3")
        mats = _so_basis(n)
    elif family == "su":
        if n < 2:
            raise RankTooSmall(f"su({n}) needs n >= 2")
        mats = realify(_su_complex_basis(n))
    elif family == "sp":
        if n < 2:
            raise RankTooSmall(f"sp({n}) needs n >= 2")
        mats = realify(_sp_complex_basis(n))
    else:
        raise UnsupportedFamily(f"{family!r}: only su, so, sp are realized")
    return from_matrices(family, n, mats)


def _coords(alg: LieAlgebra, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (alg.dim,):
        raise DimMismatch(f"expected a vector of length {alg.dim}, got shape {x.shape}")
    return x


def bracket(alg: LieAlgebra, x, y) -> np.ndarray:
    x, y = _coords(alg, x), _coords(alg, y)
    return np.einsum("i,j,ijk->k", x, y, alg.structure)


def ad_matrix(alg: LieAlgebra, x) -> np.ndarray:
    """Matrix of ad x in the algebra basis: column j is [x, e_j]."""
    x = _coords(alg, x)
    return np.einsum("i,ijk->kj", x, alg.structure)


def minus_killing(alg: LieAlgebra, x, y) -> float:
    x, y = _coords(alg, x), _coords(alg, y)
    return float(x @ alg.killing @ y)


def orthonormalize(alg: LieAlgebra, vectors) -> list[np.ndarray]:
    """B-orthonormal basis of span(vectors), Gram-Schmidt order preserved."""
    vecs = [_coords(alg, v) for v in vectors]
    if not vecs:
        return []
    out = gram_orthonormalize(np.array(vecs).T, alg.killing)
    return [out[:, i].copy() for i in range(out.shape[1])]


def to_matrix(alg: LieAlgebra, x) -> np.ndarray:
    return np.tensordot(_coords(alg, x), alg.basis_mats, axes=1)


def from_matrix(alg: LieAlgebra, mat: np.ndarray) -> np.ndarray:
    flat = alg.basis_mats.reshape(alg.dim, -1)
    coeffs, *_ = np.linalg.lstsq(flat.T, np.asarray(mat, dtype=float).ravel(), rcond=None)
    return coeffs


# -- invariant checks -------------------------------------------------------

def antisymmetry_residual(alg: LieAlgebra) -> float:
    c = alg.structure
    return float(np.max(np.abs(c + c.transpose(1, 0, 2)))) / rel_scale(c)


def jacobi_residual(alg: LieAlgebra) -> float:
    """max |[[e_i,e_j],e_k] + cyclic| over basis triples, relative to max |C|."""
    c = alg.structure
    # [[e_i,e_j],e_k] = sum_m C_ijm [e_m, e_k] = sum_m C_ijm C_mk.
    t = np.einsum("ijm,mkn->ijkn", c, c)
    cyc = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
    return float(np.max(np.abs(cyc))) / rel_scale(c) ** 2


def commutator_residual(alg: LieAlgebra) -> float:
    """Matrix commutators of the realization versus the structure tensor."""
    m = alg.basis_mats
    comm = np.einsum("iab,jbc->ijac", m, m) - np.einsum("jab,ibc->ijac", m, m)
    recon = np.einsum("ijk,kab->ijab", alg.structure, m)
    return float(np.max(np.abs(comm - recon))) / rel_scale(m) ** 2


def ad_invariance_residual(alg: LieAlgebra) -> float:
    """max |K([e_z,e_x],e_y) + K(e_x,[e_z,e_y])| over basis triples."""
    c, k = alg.structure, alg.killing
    # K([z,x],y) = sum_m C_zxm K_my
    t = np.einsum("zxm,my->zxy", c, k)
    return float(np.max(np.abs(t + t.transpose(0, 2, 1)))) / rel_scale(k)


def is_positive_definite(alg: LieAlgebra) -> bool:
    return bool(np.linalg.eigvalsh(alg.killing)[0] > 0)
