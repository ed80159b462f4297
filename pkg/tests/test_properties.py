import numpy as np
from hypothesis import given, settings, strategies as st

from gorbit import algebra as A
from gorbit import geodesic as G

SU3 = A.build_classical("su", 3)
vectors = st.lists(st.floats(-3, 3, allow_nan=False), min_size=SU3.dim, max_size=SU3.dim).map(np.array)
positive = st.floats(0.3, 3.0)


@given(vectors, vectors)
def test_bracket_antisymmetric(x, y):
    assert np.allclose(A.bracket(SU3, x, y), -A.bracket(SU3, y, x), atol=1e-10)


@given(vectors, vectors, vectors, st.floats(-2, 2))
def test_bracket_bilinear(x, y, z, t):
    lhs = A.bracket(SU3, x + t * z, y)
    rhs = A.bracket(SU3, x, y) + t * A.bracket(SU3, z, y)
    assert np.allclose(lhs, rhs, atol=1e-9)


@given(vectors, vectors, vectors)
def test_killing_ad_invariant(x, y, z):
    lhs = A.minus_killing(SU3, A.bracket(SU3, z, x), y)
    rhs = -A.minus_killing(SU3, x, A.bracket(SU3, z, y))
    assert abs(lhs - rhs) < 1e-8 * (1 + abs(lhs))


@settings(max_examples=25, deadline=None)
@given(positive, positive, st.floats(0.2, 5.0))
def test_decision_scale_invariant(x, y, lam):
    from conftest import SAME_SU3
    from gorbit.spaces import space_from_dict

    space = _same_space(space_from_dict, SAME_SU3)
    spec = G.MetricSpec.diagonal(x, y)
    r1 = G.go_decision(space, spec, 20).max_residual
    r2 = G.go_decision(space, spec.scaled(lam), 20).max_residual
    assert abs(r1 - r2) < 1e-9


_CACHE = {}


def _same_space(factory, desc):
    if "s" not in _CACHE:
        _CACHE["s"] = factory(desc)
    return _CACHE["s"]
