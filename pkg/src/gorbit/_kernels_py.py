"""Pure numpy fallback for the batched feasibility kernel."""
from __future__ import annotations

import numpy as np


def feasibility_batch(c_hm, c_mm, xs, ws, rcond=1e-10):
    """Least-squares solve of [Z, W] = -[X, W] for a batch of (X, W) pairs.

    c_hm[j, b, :] is [h_j, m_b] and c_mm[a, b, :] is [m_a, m_b] in adapted
    coordinates.  Returns the minimizing h coordinates (one row per sample)
    and the Euclidean norm of the remaining residual.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    ws = np.atleast_2d(np.asarray(ws, dtype=float))
    lhs = np.einsum("jbc,sb->scj", c_hm, ws)
    rhs = -np.einsum("sa,sb,abc->sc", xs, ws, c_mm)
    n_s, _, dk = lhs.shape
    zs = np.zeros((n_s, dk))
    res = np.zeros(n_s)
    for s in range(n_s):
        z, *_ = np.linalg.lstsq(lhs[s], rhs[s], rcond=rcond)
        zs[s] = z
        res[s] = np.linalg.norm(lhs[s] @ z - rhs[s])
    return zs, res
