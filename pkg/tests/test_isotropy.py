import numpy as np
import pytest

from gorbit import isotropy as I
from gorbit.algebra import build_classical
from gorbit.errors import SpecError
from gorbit.representations import adjoint_rep, build_rep, defining_rep, trivial_rep


def test_stabilizer_of_basis_vector():
    rep = defining_rep(build_classical("so", 5))
    basis = I.stabilizer_at(rep, np.eye(5)[0])
    assert basis.shape[1] == 6                                 # so(4)
    assert np.allclose(basis.T @ rep.algebra.killing @ basis, np.eye(6), atol=1e-10)
    with pytest.raises(SpecError):
        I.stabilizer_at(rep, np.zeros(5))


def test_trivial_module_stabilized_by_everything():
    alg = build_classical("su", 3)
    report = I.generic_stabilizer(trivial_rep(alg, 2))
    assert report.dim == alg.dim and report.structure == "nonabelian"


def test_trials_minimum():
    with pytest.raises(SpecError):
        I.generic_stabilizer(defining_rep(build_classical("so", 4)), trials=2)


def test_report_fields():
    report = I.generic_stabilizer(adjoint_rep(build_classical("su", 3)), trials=5, seed=3)
    assert report.dims == [2] * 5 and report.attainment == 1.0
    assert report.closure_residual < 1e-9 and report.abelian_residual < 1e-9
    assert '"dim": 2' in report.to_json()


def test_generic_dimension_is_conjugation_invariant():
    rep = build_rep(build_classical("so", 7), "alt2(defining)")
    v = np.random.default_rng(4).standard_normal(rep.module_dim)
    dims = I.conjugated_dims(rep, v, moves=6)
    assert len(set(dims)) == 1 and dims[0] == I.stabilizer_at(rep, v).shape[1]


def test_classify_pair_variants():
    so5 = build_classical("so", 5)
    su3 = build_classical("su", 3)
    assert I.classify_for_space((defining_rep(so5), defining_rep(so5)))[0] == "neither"
    assert I.classify_for_space((adjoint_rep(su3), adjoint_rep(su3)))[0] == "case2"
    traceless = build_rep(so5, "traceless(sym2(defining))")
    assert I.classify_for_space((traceless, defining_rep(so5)))[0] == "case1"


def test_classify_space(b3_space):
    verdict, s1, s2 = I.classify_for_space(b3_space)
    assert verdict == "case1"
    assert (s1.dim, s2.dim) == (1, 0)
    assert s1.structure == "abelian"


def test_isotropy_module_dims(b3_space):
    assert I.isotropy_rep(b3_space, 1).module_dim == b3_space.dim_p1
    assert I.isotropy_rep(b3_space, 2).module_dim == b3_space.dim_p2
