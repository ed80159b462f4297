"""Generic (principal) stabilizers of representations.

The stabilizer of v is the kernel of Z -> rho(Z) v.  Its dimension is
upper semicontinuous in v, so the generic value is the minimum over random
points; structure is then read off the brackets of a kernel basis.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from . import representations as reps
from .config import TOL, rel_scale
from .errors import RepNotConstructible, SpecError
from .linalg import gram_orthonormalize, null_space
from .spaces import ReductiveSpace


def stabilizer_at(rep: reps.Representation, v, rtol: float | None = None) -> np.ndarray:
    """B-orthonormal basis (columns, algebra coordinates) of the stabilizer of v."""
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        raise SpecError("v must be nonzero")
    action = np.einsum("iab,b->ai", rep.operators, v)  # column i = rho(e_i) v
    kernel = null_space(action, TOL.rank if rtol is None else rtol)
    if kernel.shape[1] == 0:
        return kernel
    return gram_orthonormalize(kernel, rep.algebra.killing)


def _bracket_residuals(rep: reps.Representation, basis: np.ndarray) -> tuple[float, float]:
    """(largest |[u, w]|, largest component of [u, w] outside the span)."""
    s = basis.shape[1]
    if s < 2:
        return 0.0, 0.0
    c = rep.algebra.structure
    k = rep.algebra.killing
    br = np.einsum("ia,jb,ijk->abk", basis, basis, c, optimize=True).reshape(-1, c.shape[0])
    proj = (br @ k @ basis) @ basis.T
    scale = rel_scale(c)
    return float(np.max(np.abs(br))) / scale, float(np.max(np.abs(br - proj))) / scale


@dataclass
class StabilizerReport:
    rep_label: str
    trials: int
    dim: int
    basis: list
    structure: str
    abelian_residual: float
    attainment: float
    closure_residual: float
    dims: list
    seed: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def generic_stabilizer(rep: reps.Representation, trials: int = 20, seed: int = 42) -> StabilizerReport:
    if trials < 3:
        raise SpecError("need at least 3 trials")
    rng = np.random.default_rng(seed)
    dims, bases = [], []
    for _ in range(trials):
        v = rng.standard_normal(rep.module_dim)
        v /= np.linalg.norm(v)
        b = stabilizer_at(rep, v)
        dims.append(b.shape[1])
        bases.append(b)
    dim = min(dims)
    basis = bases[dims.index(dim)]
    ab, closure = _bracket_residuals(rep, basis)
    if dim == 0:
        structure = "trivial"
    elif ab < TOL.abelian:
        structure = "abelian"
    else:
        structure = "nonabelian"
    return StabilizerReport(
        rep_label=rep.label,
        trials=trials,
        dim=dim,
        basis=basis.T.tolist(),
        structure=structure,
        abelian_residual=ab,
        attainment=dims.count(dim) / trials,
        closure_residual=closure,
        dims=dims,
        seed=seed,
    )


def _expm_skew(s: np.ndarray) -> np.ndarray:
    """exp of a real skew-symmetric matrix via the Hermitian matrix i S."""
    lam, u = np.linalg.eigh(1j * s)
    return np.real((u * np.exp(-1j * lam)) @ u.conj().T)


def conjugated_dims(rep: reps.Representation, v, moves: int = 10, seed: int = 0) -> list[int]:
    """Stabilizer dimensions along v -> exp(t rho(Z)) v for random Z, t."""
    rng = np.random.default_rng(seed)
    v = np.asarray(v, dtype=float)
    out = []
    for _ in range(moves):
        z = rng.standard_normal(rep.algebra.dim)
        t = rng.uniform(-2.0, 2.0)
        v = _expm_skew(t * rep.act(z)) @ v
        out.append(stabilizer_at(rep, v).shape[1])
    return out


def isotropy_rep(space: ReductiveSpace, i: int) -> reps.Representation:
    """Isotropy module of G_i/K: Z -> ad(emb_i Z) on p_i, B_i-orthonormal basis."""
    emb, p = (space.emb1, space.p1_basis) if i == 1 else (space.emb2, space.p2_basis)
    g = emb.target
    if p.shape[1] == 0:
        raise RepNotConstructible(f"p{i} is zero")
    ad = g.structure.transpose(0, 2, 1)                # ad(e_a)[k, j]
    images = np.tensordot(emb.map.T, ad, axes=1)       # ad(emb e_i)
    ops = p.T @ g.killing @ images @ p
    ops = 0.5 * (ops - ops.transpose(0, 2, 1))
    return reps._make(space.k, ops, f"isotropy{i}({space.label or g.name})")


def classify_pair(first: StabilizerReport, second: StabilizerReport) -> str:
    """case1: some principal isotropy is trivial; case2: some is a torus; else neither."""
    if first.dim == 0 or second.dim == 0:
        return "case1"
    if first.structure == "abelian" or second.structure == "abelian":
        return "case2"
    return "neither"


def classify_for_space(obj, trials: int = 20, seed: int = 42) -> tuple[str, StabilizerReport, StabilizerReport]:
    """Classify a space (or anything with ``build_space()``) by its two isotropy modules."""
    if isinstance(obj, tuple) and len(obj) == 2:
        r1, r2 = obj
    else:
        space = obj if isinstance(obj, ReductiveSpace) else obj.build_space()
        r1, r2 = isotropy_rep(space, 1), isotropy_rep(space, 2)
    s1 = generic_stabilizer(r1, trials, seed)
    s2 = generic_stabilizer(r2, trials, seed)
    return classify_pair(s1, s2), s1, s2
