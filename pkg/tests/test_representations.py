import numpy as np
import pytest

from gorbit import representations as R
from gorbit.algebra import build_classical
from gorbit.errors import AlgebraMismatch, SpecError
from gorbit.isotropy import generic_stabilizer


def commutator_check(rep, pairs=20, seed=0):
    """rho([e_i, e_j]) against the matrix commutator on random basis pairs."""
    alg = rep.algebra
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(pairs):
        i, j = rng.integers(alg.dim, size=2)
        lhs = rep.act(alg.structure[i, j])
        a, b = rep.operators[i], rep.operators[j]
        worst = max(worst, float(np.max(np.abs(lhs - (a @ b - b @ a)))))
    return worst


def test_defining_dims():
    assert R.defining_rep(build_classical("so", 4)).module_dim == 4
    assert R.defining_rep(build_classical("su", 3)).module_dim == 6
    assert R.defining_rep(build_classical("su", 3)).kind == "complex"
    assert R.defining_rep(build_classical("sp", 2)).kind == "quaternionic"


@pytest.mark.parametrize("family,n", [("so", 5), ("su", 3), ("sp", 2)])
def test_defining_and_adjoint_residuals(family, n):
    alg = build_classical(family, n)
    for rep in (R.defining_rep(alg), R.adjoint_rep(alg)):
        assert R.homomorphism_residual(rep) < 1e-9
        assert R.skew_residual(rep) < 1e-10


def test_adjoint():
    alg = build_classical("su", 3)
    rep = R.adjoint_rep(alg)
    assert rep.module_dim == 8
    x = np.random.default_rng(3).standard_normal(8)
    # in the B-orthonormal module basis X has coordinates L^T x with B = L L^T
    chol = np.linalg.cholesky(alg.killing)
    assert np.allclose(rep.act(x) @ (chol.T @ x), 0, atol=1e-12)
    assert generic_stabilizer(rep).dim == 2


@pytest.mark.parametrize("n", [4, 5, 6])
def test_alt2_dim(n):
    assert R.alt2_rep(R.defining_rep(build_classical("so", n))).module_dim == n * (n - 1) // 2


def test_traceless_sym2():
    rep = R.traceless_part(R.sym2_rep(R.defining_rep(build_classical("so", 5))))
    assert rep.module_dim == 14
    assert R.homomorphism_residual(rep) < 1e-9
    assert commutator_check(rep) < 1e-10


def test_sym2_commutators():
    rep = R.sym2_rep(R.defining_rep(build_classical("so", 4)))
    assert commutator_check(rep) < 1e-10


def test_complex_constructions():
    su3 = build_classical("su", 3)
    d = R.defining_rep(su3)
    s2 = R.sym2_rep(d, complex_linear=True)
    assert (s2.kind, s2.module_dim) == ("complex", 12)
    adj = R.real_form(R.traceless_part(R.tensor_rep(d, R.dual_rep(d), complex_linear=True)))
    assert adj.module_dim == 8
    assert R.homomorphism_residual(adj) < 1e-9


def test_so3_irreps_and_forms():
    so3 = build_classical("so", 3)
    for dim in range(1, 8):
        rep = R.so3_irrep(so3, dim)
        assert R.homomorphism_residual(rep) < 1e-9
        real = R.real_form(rep) if dim % 2 else R.quaternionic_form(rep)
        assert R.homomorphism_residual(real) < 1e-9
    assert R.real_form(R.so3_irrep(so3, 5)).module_dim == 5


def test_direct_sum_and_mismatch():
    so4 = build_classical("so", 4)
    so5 = build_classical("so", 5)
    s = R.direct_sum(R.defining_rep(so4), R.trivial_rep(so4, 2))
    assert s.module_dim == 6
    with pytest.raises(AlgebraMismatch):
        R.direct_sum(R.defining_rep(so4), R.defining_rep(so5))


def test_build_rep_trees():
    sp3 = build_classical("sp", 3)
    rep = R.build_rep(sp3, "real_form(traceless(alt2_c(defining)))")
    assert rep.module_dim == 14
    assert R.build_rep(sp3, "realify(defining)").module_dim == 12
    with pytest.raises(SpecError):
        R.build_rep(sp3, "nonsense(defining)")
    with pytest.raises(SpecError):
        R.build_rep(sp3, "defining +")


def test_weyl_reexport():
    assert R.weyl_dimension("A", 2, (1, 1)) == 8
