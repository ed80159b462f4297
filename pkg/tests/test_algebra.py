import numpy as np
import pytest

from gorbit import algebra as A
from gorbit.errors import DimMismatch, RankDeficient, RankTooSmall, UnsupportedFamily


def ad_oracle_killing(structure):
    """-trace(ad e_i ad e_j) from explicit ad matrices."""
    ads = [structure[i].T for i in range(structure.shape[0])]   # ad(e_i)[k, j] = C[i, j, k]
    n = len(ads)
    return np.array([[-np.trace(ads[i] @ ads[j]) for j in range(n)] for i in range(n)])


@pytest.mark.parametrize("family,n,dim", [("so", 3, 3), ("so", 6, 15), ("su", 3, 8), ("su", 4, 15),
                                          ("sp", 2, 10), ("sp", 3, 21)])
def test_dimensions(family, n, dim):
    assert A.build_classical(family, n).dim == dim


@pytest.mark.parametrize("family,n", [("su", 3), ("so", 5), ("sp", 2)])
def test_structure_invariants(family, n):
    alg = A.build_classical(family, n)
    assert A.antisymmetry_residual(alg) < 1e-12
    assert A.jacobi_residual(alg) < 1e-10
    assert A.commutator_residual(alg) < 1e-10
    assert A.ad_invariance_residual(alg) < 1e-10
    assert A.is_positive_definite(alg)
    assert np.allclose(alg.killing, alg.killing.T)


def test_basis_matrices_are_real_skew():
    for family, n in (("su", 3), ("sp", 2), ("so", 4)):
        mats = A.build_classical(family, n).basis_mats
        assert np.isrealobj(mats)
        assert np.max(np.abs(mats + mats.transpose(0, 2, 1))) < 1e-14


def test_realified_sizes():
    assert A.build_classical("su", 3).matrix_size == 6
    assert A.build_classical("sp", 2).matrix_size == 8


@pytest.mark.parametrize("family,n", [("sp", 2), ("so", 5)])
def test_killing_matches_ad_oracle(family, n):
    alg = A.build_classical(family, n)
    assert np.allclose(alg.killing, ad_oracle_killing(alg.structure), atol=1e-10)


def test_errors():
    with pytest.raises(UnsupportedFamily):
        A.build_classical("g", 2)
    with pytest.raises(RankTooSmall):
        A.build_classical("so", 2)
    with pytest.raises(RankTooSmall):
        A.build_classical("su", 1)
    alg = A.build_classical("so", 3)
    with pytest.raises(DimMismatch):
        A.bracket(alg, np.ones(3), np.ones(4))


def test_bracket_properties():
    alg = A.build_classical("so", 3)
    x = np.array([0.3, -1.0, 2.0])
    assert np.allclose(A.bracket(alg, x, x), 0)
    assert np.allclose(A.bracket(alg, x, np.zeros(3)), 0)


def test_bracket_matches_matrix_commutator():
    alg = A.build_classical("so", 3)
    e1, e2 = np.eye(3)[0], np.eye(3)[1]
    m1, m2 = alg.basis_mats[0], alg.basis_mats[1]
    expected = A.from_matrix(alg, m1 @ m2 - m2 @ m1)
    assert np.allclose(A.bracket(alg, e1, e2), expected)
    assert np.allclose(A.bracket(alg, e1, e2), alg.structure[0, 1])


def test_minus_killing():
    alg = A.build_classical("so", 5)
    rng = np.random.default_rng(0)
    x, y, z = rng.standard_normal((3, alg.dim))
    assert A.minus_killing(alg, x, x) > 0
    lhs = A.minus_killing(alg, A.bracket(alg, z, x), y)
    rhs = -A.minus_killing(alg, x, A.bracket(alg, z, y))
    assert abs(lhs - rhs) < 1e-10
    oracle = ad_oracle_killing(alg.structure)
    assert abs(A.minus_killing(alg, np.eye(alg.dim)[2], np.eye(alg.dim)[7]) - oracle[2, 7]) < 1e-10


def test_orthonormalize():
    alg = A.build_classical("so", 4)
    rng = np.random.default_rng(1)
    vecs = list(rng.standard_normal((3, alg.dim)))
    out = np.array(A.orthonormalize(alg, vecs))
    assert np.allclose(out @ alg.killing @ out.T, np.eye(3), atol=1e-10)
    v = vecs[0]
    single = A.orthonormalize(alg, [v])[0]
    assert np.allclose(single, v / np.sqrt(v @ alg.killing @ v))
    again = np.array(A.orthonormalize(alg, list(out)))
    assert np.allclose(np.abs(again), np.abs(out), atol=1e-10)
    with pytest.raises(RankDeficient):
        A.orthonormalize(alg, [v, 2 * v])


def test_matrix_roundtrip():
    alg = A.build_classical("su", 3)
    x = np.arange(8, dtype=float)
    assert np.allclose(A.from_matrix(alg, A.to_matrix(alg, x)), x)
