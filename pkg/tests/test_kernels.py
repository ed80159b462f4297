import importlib
import os

import numpy as np
import pytest

from gorbit import _kernels_py, kernels
from gorbit.geodesic import _kernel_tensors


def normal_equations(c_hm, c_mm, x, w):
    """Oracle: solve M^T M z = M^T r for one sample."""
    m = np.einsum("jbc,b->cj", c_hm, w)
    r = -np.einsum("a,b,abc->c", x, w, c_mm)
    z = np.linalg.solve(m.T @ m, m.T @ r)
    return z, np.linalg.norm(m @ z - r)


@pytest.fixture(scope="module")
def batch(b3_space):
    c_hm, c_mm = _kernel_tensors(b3_space)
    rng = np.random.default_rng(7)
    xs = rng.standard_normal((25, b3_space.dim_m))
    ws = xs * rng.uniform(0.5, 2.0, b3_space.dim_m)
    return c_hm, c_mm, xs, ws


def test_fallback_matches_oracle(batch):
    c_hm, c_mm, xs, ws = batch
    zs, res = _kernels_py.feasibility_batch(c_hm, c_mm, xs, ws)
    for s in range(len(xs)):
        z, r = normal_equations(c_hm, c_mm, xs[s], ws[s])
        assert np.max(np.abs(zs[s] - z)) < 1e-11
        assert abs(res[s] - r) < 1e-11


def test_selected_backend_matches_fallback(batch):
    c_hm, c_mm, xs, ws = batch
    z1, r1 = kernels.feasibility_batch(c_hm, c_mm, xs, ws)
    z2, r2 = _kernels_py.feasibility_batch(c_hm, c_mm, xs, ws)
    assert np.max(np.abs(np.asarray(z1) - z2)) < 1e-11
    assert np.max(np.abs(np.asarray(r1) - r2)) < 1e-11


def test_compiled_extension_present():
    pytest.importorskip("gorbit._kernels")
    assert kernels.BACKEND == "cython" or os.environ.get("GORBIT_PURE_PYTHON")


def test_env_forces_fallback(monkeypatch):
    monkeypatch.setenv("GORBIT_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
        assert mod.feasibility_batch is _kernels_py.feasibility_batch
    finally:
        monkeypatch.delenv("GORBIT_PURE_PYTHON")
        importlib.reload(kernels)
