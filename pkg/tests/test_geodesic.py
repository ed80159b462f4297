import numpy as np
import pytest

from gorbit import geodesic as G
from gorbit.errors import CoupledOnPairSpace, CoupledSpec, InvalidMetric, NotCertifiedGO, SpecError


def on_curve(space, x):
    r = space.c1 * (1 - x) / (space.c2 * x)
    return G.MetricSpec.diagonal(x, 1.0 / (1.0 - r))


def test_metric_spec_validation():
    with pytest.raises(InvalidMetric):
        G.MetricSpec.diagonal(-1.0, 1.0)
    with pytest.raises(InvalidMetric):
        G.MetricSpec.coupled(1.0, 1.0, 1.0)
    with pytest.raises(InvalidMetric):
        G.MetricSpec.diagonal(1.0, 1.0, x0=0.0)


def test_diagonal_spectrum(b3_space):
    a = G.metric_endomorphism(b3_space, G.MetricSpec.diagonal(2.0, 3.0))
    vals = np.sort(np.linalg.eigvalsh(a))
    expected = np.sort([1.0] * 3 + [2.0] * b3_space.dim_p1 + [3.0] * b3_space.dim_p2)
    assert np.allclose(vals, expected)
    assert G.equivariance_residual(b3_space, a) < 1e-12


def test_coupled_spectrum(same_space):
    a_, b_, c_ = 1.5, 0.8, 0.3
    a = G.metric_endomorphism(same_space, G.MetricSpec.coupled(a_, b_, c_))
    disc = np.sqrt((a_ - b_) ** 2 + 4 * c_ ** 2)
    lo, hi = (a_ + b_ - disc) / 2, (a_ + b_ + disc) / 2
    vals = np.linalg.eigvalsh(a)
    for lam in (1.0, lo, hi):
        assert np.any(np.abs(vals - lam) < 1e-12)
    assert G.equivariance_residual(same_space, a) < 1e-12
    with pytest.raises(CoupledSpec):
        G.ratio_condition(same_space, G.MetricSpec.coupled(a_, b_, c_))


def test_coupled_rejected_on_pair_space(b3_space):
    with pytest.raises(CoupledOnPairSpace):
        G.metric_endomorphism(b3_space, G.MetricSpec.coupled(1.0, 1.0, 0.1))


def test_bi_invariant_is_go(b3_space):
    spec = G.MetricSpec.diagonal(1.0, 1.0)
    rng = np.random.default_rng(0)
    for _ in range(5):
        xm = rng.standard_normal(b3_space.dim_m)
        z, res, _ = G.go_feasibility(b3_space, spec, xm)
        assert res < 1e-12 and np.linalg.norm(z) < 1e-10
        assert G.geodesic_vector_test(b3_space, spec, G._embed_m(b3_space, xm))[0]
    assert G.go_decision(b3_space, spec, 50).is_go


def test_graph_witness_on_curve(b3_space, b7_space):
    for space in (b3_space, b7_space):
        spec = on_curve(space, 1.7)
        xi = G.geodesic_graph_matrix(space, spec)
        rng = np.random.default_rng(1)
        a = G.metric_endomorphism(space, spec)
        for _ in range(5):
            xm = rng.standard_normal(space.dim_m)
            assert G.bracket_residual(space, a, xm, xi @ xm) < 1e-10
            assert max(G.block_conditions(space, spec, xm, xi @ xm)) < 1e-10
        report = G.go_decision(space, spec)
        assert report.is_go and report.max_residual < 1e-9


def test_off_curve_fails(b3_space):
    spec = G.MetricSpec.diagonal(1.5, 1.5)
    assert G.ratio_condition(b3_space, spec) > 0.05
    report = G.go_decision(b3_space, spec)
    assert report.decision == "NOT_GO" and report.max_residual > 1e-3
    assert not G.geodesic_graph_check(b3_space, spec)[0]
    with pytest.raises(NotCertifiedGO):
        G.eigenspace_bracket_check(b3_space, spec, report=report)


def test_same_group_locus(same_space):
    spec = G.MetricSpec.diagonal(2.0, 2.0 / 3.0)
    assert G.ratio_condition(same_space, spec) < 1e-12
    assert G.go_decision(same_space, spec).is_go
    assert G.go_decision(same_space, G.MetricSpec.coupled(1.0, 1.0, 0.3)).decision == "NOT_GO"


def test_scaling_invariance(b3_space):
    spec = on_curve(b3_space, 1.25)
    assert G.go_decision(b3_space, spec.scaled(3.7)).is_go
    off = G.MetricSpec.diagonal(0.5, 2.0)
    r1 = G.go_decision(b3_space, off).max_residual
    r2 = G.go_decision(b3_space, off.scaled(0.2)).max_residual
    assert abs(r1 - r2) < 1e-10


def test_equivalence_audit(b3_space):
    spec = G.MetricSpec.diagonal(1.5, 1.5)
    xm = np.random.default_rng(2).standard_normal(b3_space.dim_m)
    flags, res = G.equivalence_audit(b3_space, spec, np.zeros(b3_space.dim_m), np.zeros(b3_space.dim_k))
    assert all(flags)
    _, _, zh = G.go_feasibility(b3_space, spec, xm)
    flags, res = G.equivalence_audit(b3_space, spec, xm, zh)
    assert not any(flags) and min(res) > 1e-4
    good = on_curve(b3_space, 1.5)
    _, _, zh = G.go_feasibility(b3_space, good, xm)
    assert all(G.equivalence_audit(b3_space, good, xm, zh)[0])


def test_natural_reductivity(b3_space, same_space):
    assert G.natural_reductivity_direct(b3_space, G.MetricSpec.diagonal(1.0, 1.0))[0]
    assert not G.natural_reductivity_direct(b3_space, on_curve(b3_space, 1.5))[0]
    assert not G.natural_reductivity_direct(same_space, G.MetricSpec.coupled(1.0, 1.0, 0.3))[0]


def test_eigenspace_check(b3_space, same_space):
    assert G.eigenspace_bracket_check(b3_space, G.MetricSpec.diagonal(1.0, 1.0)) == (True, 0.0)
    ok, res = G.eigenspace_bracket_check(same_space, G.MetricSpec.diagonal(2.0, 2.0 / 3.0))
    assert ok and res < 1e-9


def test_eigenspaces_grouping():
    groups = G.eigenspaces(np.diag([1.0, 2.0, 1.0, 2.0 + 1e-14, 5.0]))
    assert [round(v, 6) for v, _ in groups] == [1.0, 2.0, 5.0]
    assert [b.shape[1] for _, b in groups] == [2, 2, 1]


def test_zero_vector_rejected(b3_space):
    with pytest.raises(SpecError):
        G.go_feasibility(b3_space, G.MetricSpec.diagonal(1.0, 1.0), np.zeros(b3_space.dim_m))
    with pytest.raises(SpecError):
        G.go_decision(b3_space, G.MetricSpec.diagonal(1.0, 1.0), n_samples=0)


def test_parse_grid():
    grid = G.parse_grid("x=0.5:1.5:0.5, c=-0.1|0|0.1")
    assert grid == {"x": [0.5, 1.0, 1.5], "c": [-0.1, 0.0, 0.1]}
    for bad in ("x", "q=1:2:1", "x=2:1:0.5", "x=1:2:0", "x=a|b"):
        with pytest.raises(SpecError):
            G.parse_grid(bad)


def test_grid_specs_skip_invalid():
    specs = G.grid_specs(G.parse_grid("a=1,b=1,c=-1|0|0.5|1"))
    assert [s.c for s in specs] == [0.0, 0.5]
    assert all(s.kind == "coupled" for s in specs)


def test_scan_single_point_and_csv(b3_space):
    spec = on_curve(b3_space, 1.5)
    rows = G.scan_metrics(b3_space, [spec], n_samples=30)
    assert len(rows) == 1 and rows[0]["decision"] == "GO"
    text = G.rows_to_csv(rows)
    assert text.splitlines()[0] == ",".join(G.CSV_COLUMNS)
    assert G.rows_to_csv(G.scan_metrics(b3_space, [spec], n_samples=30)) == text


def test_scan_workers_keep_order(b3_space):
    specs = G.grid_specs(G.parse_grid("x=0.5:2.0:0.5,y=0.5:2.0:0.5"))
    serial = G.scan_metrics(b3_space, specs, n_samples=20)
    threaded = G.scan_metrics(b3_space, specs, n_samples=20, workers=4)
    assert G.rows_to_csv(serial) == G.rows_to_csv(threaded)
