# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batched feasibility kernel.

Each sample builds a small dense system L z = r and solves it with a
Householder QR with column pivoting; the residual norm is read off the
trailing part of Q^T r.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()


cdef void _solve(double[:, ::1] a, double[::1] r, double[::1] z, double rcond,
                 int[::1] perm, double[::1] norms, double* out_res) noexcept nogil:
    cdef int m = a.shape[0]
    cdef int n = a.shape[1]
    cdef int i, j, k, p, rank
    cdef double s, alpha, beta, vnorm, tmp, first
    for j in range(n):
        perm[j] = j
        s = 0.0
        for i in range(m):
            s += a[i, j] * a[i, j]
        norms[j] = s
    rank = 0
    first = -1.0
    for k in range(min(m, n)):
        # pivot: column with the largest remaining norm
        p = k
        for j in range(k + 1, n):
            if norms[j] > norms[p]:
                p = j
        if p != k:
            for i in range(m):
                tmp = a[i, k]
                a[i, k] = a[i, p]
                a[i, p] = tmp
            tmp = norms[k]
            norms[k] = norms[p]
            norms[p] = tmp
            j = perm[k]
            perm[k] = perm[p]
            perm[p] = j
        s = 0.0
        for i in range(k, m):
            s += a[i, k] * a[i, k]
        vnorm = sqrt(s)
        if first < 0.0:
            first = vnorm
        if vnorm <= rcond * first or vnorm == 0.0:
            break
        alpha = -vnorm if a[k, k] >= 0.0 else vnorm
        # v = a[k:, k] - alpha e_k, stored in place
        a[k, k] -= alpha
        beta = 0.0
        for i in range(k, m):
            beta += a[i, k] * a[i, k]
        if beta > 0.0:
            for j in range(k + 1, n):
                s = 0.0
                for i in range(k, m):
                    s += a[i, k] * a[i, j]
                s = 2.0 * s / beta
                for i in range(k, m):
                    a[i, j] -= s * a[i, k]
            s = 0.0
            for i in range(k, m):
                s += a[i, k] * r[i]
            s = 2.0 * s / beta
            for i in range(k, m):
                r[i] -= s * a[i, k]
        # diagonal of R is alpha; keep it in norms[k] slot-free storage
        a[k, k] = alpha
        for i in range(k + 1, m):
            a[i, k] = 0.0
        for j in range(k + 1, n):
            norms[j] = 0.0
            for i in range(k + 1, m):
                norms[j] += a[i, j] * a[i, j]
        rank = k + 1
    # back substitution on the leading rank x rank triangle
    for j in range(n):
        z[j] = 0.0
    for k in range(rank - 1, -1, -1):
        s = r[k]
        for j in range(k + 1, rank):
            s -= a[k, j] * z[perm[j]]
        z[perm[k]] = s / a[k, k]
    s = 0.0
    for i in range(rank, m):
        s += r[i] * r[i]
    out_res[0] = sqrt(s)


def feasibility_batch(c_hm, c_mm, xs, ws, double rcond=1e-10):
    """Same contract as the numpy fallback in ``_kernels_py``."""
    cdef double[:, :, ::1] chm = np.ascontiguousarray(c_hm, dtype=np.float64)
    cdef double[:, :, ::1] cmm = np.ascontiguousarray(c_mm, dtype=np.float64)
    cdef double[:, ::1] x = np.ascontiguousarray(np.atleast_2d(xs), dtype=np.float64)
    cdef double[:, ::1] w = np.ascontiguousarray(np.atleast_2d(ws), dtype=np.float64)
    cdef int dk = chm.shape[0]
    cdef int dm = chm.shape[1]
    cdef int n = chm.shape[2]
    cdef int ns = x.shape[0]
    zs_arr = np.zeros((ns, dk))
    res_arr = np.zeros(ns)
    cdef double[:, ::1] zs = zs_arr
    cdef double[::1] res = res_arr
    cdef double[:, ::1] a = np.zeros((n, dk))
    cdef double[::1] r = np.zeros(n)
    cdef double[::1] z = np.zeros(dk)
    cdef double[::1] norms = np.zeros(dk)
    cdef double[::1] xw = np.zeros(dm)
    cdef int[::1] perm = np.zeros(dk, dtype=np.intc)
    cdef int s, i, j, b, c, aa
    cdef double acc, wb, out
    with nogil:
        for s in range(ns):
            for c in range(n):
                r[c] = 0.0
                for j in range(dk):
                    a[c, j] = 0.0
            for j in range(dk):
                for b in range(dm):
                    wb = w[s, b]
                    if wb != 0.0:
                        for c in range(n):
                            a[c, j] += wb * chm[j, b, c]
            for aa in range(dm):
                acc = x[s, aa]
                if acc != 0.0:
                    for b in range(dm):
                        wb = acc * w[s, b]
                        if wb != 0.0:
                            for c in range(n):
                                r[c] -= wb * cmm[aa, b, c]
            _solve(a, r, z, rcond, perm, norms, &out)
            for j in range(dk):
                zs[s, j] = z[j]
            res[s] = out
    return zs_arr, res_arr
