import json

import numpy as np
import pytest

from gorbit import spaces as S
from gorbit.algebra import build_classical
from gorbit.errors import NonConstantRatio, SpecError
from gorbit.representations import build_rep


def dual_ratio_oracle(emb):
    """B_k(Z, Z) / B_g(emb Z, emb Z) for one random Z."""
    z = np.random.default_rng(5).standard_normal(emb.source.dim)
    w = emb(z)
    return float(z @ emb.source.killing @ z) / float(w @ emb.target.killing @ w)


def test_identity_ratio():
    c, spread = S.killing_ratio_spread(S.identity_embedding(build_classical("su", 3)))
    assert abs(c - 1) < 1e-12 and spread < 1e-12


def test_so3_in_so4_ratio():
    so3 = build_classical("so", 3)
    emb = S.embedding_from_rep(S.block_rep(so3, "so", 4))
    c = S.killing_ratio(emb)
    assert abs(c - dual_ratio_oracle(emb)) < 1e-12
    # so(n) Killing form is (n-2) tr(XY): ratio (3-2)/(4-2)
    assert abs(c - 0.5) < 1e-10


def test_so3_in_su3_constant_ratio():
    emb = S.embedding_from_rep(build_rep(build_classical("so", 3), "defining"), "su")
    _, spread = S.killing_ratio_spread(emb)
    assert emb.target.name.lower().startswith("su")
    assert spread < 1e-8


def test_non_constant_ratio_rejected():
    so3 = build_classical("so", 3)
    emb = S.Embedding(so3, so3, np.diag([1.0, 2.0, 1.0]), "stretched")
    _, spread = S.killing_ratio_spread(emb)
    assert spread > 0.1
    with pytest.raises(NonConstantRatio):
        S.killing_ratio(emb)


def test_b3_space(b3_space):
    s = b3_space
    assert s.dim_k == 3 and s.dim == 3 + 10 + 1 and s.dim_m == 11
    assert S.block_gram_residual(s) < 1e-10
    assert S.invariance_residual(s) < 1e-10
    g = s.adapted.T @ s.killing @ s.adapted
    assert np.allclose(g, np.eye(s.dim), atol=1e-10)
    # h and m0 are B-orthogonal and so are (Z, Z), (W, -(c2/c1) W) in ambient terms
    assert np.max(np.abs(g[s.h_slice, s.m0_slice])) < 1e-10


def test_same_group(same_space):
    assert abs(same_space.c1 - same_space.c2) < 1e-12
    assert same_space.dim_k == 3 and same_space.dim_p1 == 5
    assert S.swap_residual(same_space) < 1e-10


@pytest.mark.parametrize("tree,family,n", [("alt2(defining)", "so", 10), ("adjoint", "so", 8)])
def test_embedding_targets(tree, family, n):
    fam_k, n_k = ("so", 5) if tree.startswith("alt2") else ("su", 3)
    emb = S.embedding_from_rep(build_rep(build_classical(fam_k, n_k), tree))
    assert emb.target.family == family and emb.target.n == n
    assert S.embedding_homomorphism_residual(emb) < 1e-9


def test_load_space_inline_and_file(tmp_path):
    desc = {"k": {"family": "so", "n": 3}, "g1": {"family": "so", "n": 4}, "embedding1": "defining-block",
            "g2": {"family": "so", "n": 3}, "embedding2": "identity"}
    s1 = S.load_space(json.dumps(desc))
    path = tmp_path / "space.json"
    path.write_text(json.dumps(desc))
    s2 = S.load_space(str(path))
    assert s1.dim == s2.dim == 3 + 3 + 3
    assert S.load_space(json.dumps({"case": "B.3", "n": 3})).dim_m == 11


@pytest.mark.parametrize("text", ["{not json", json.dumps({"g1": {}}),
                                  json.dumps({"k": {"family": "so"}})])
def test_load_space_errors(text):
    with pytest.raises(SpecError):
        S.load_space(text)
