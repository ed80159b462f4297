"""Pair spaces (G1 x G2)/diag(K) at the Lie-algebra level.

The ambient algebra g = g1 + g2 carries B = B1 + B2 (block minus Killing
forms).  With B_k = c_i B_i on k, the B-orthogonal splitting is

    h  = {(Z, Z)},  m0 = {(Z, -(c2/c1) Z)},  m1 = (p1, 0),  m2 = (0, p2),

where p_i is the B_i-orthogonal complement of k in g_i.  All blocks get
B-orthonormal bases and are stacked (in that order) into an adapted basis T
of g; most downstream code works in the coordinates of T.
"""
from __future__ import annotations

import functools
import json
import os
from dataclasses import dataclass, field

import numpy as np

from . import representations as reps
from .algebra import LieAlgebra, build_classical
from .config import TOL, rel_scale
from .errors import (
    DimMismatch,
    NonConstantRatio,
    NotInTarget,
    NotSkewSymmetric,
    RankDeficient,
    SpecError,
)
from .linalg import gram_orthonormalize, null_space, numerical_rank


@dataclass(frozen=True, eq=False)
class Embedding:
    source: LieAlgebra
    target: LieAlgebra
    map: np.ndarray  # (target.dim, source.dim)
    label: str = ""

    def __call__(self, z) -> np.ndarray:
        return self.map @ np.asarray(z, dtype=float)


def embedding_homomorphism_residual(emb: Embedding) -> float:
    m = emb.map
    lhs = np.einsum("ijk,ak->ija", emb.source.structure, m)
    part = np.tensordot(m, emb.target.structure, axes=([0], [0]))   # (i, b, c)
    rhs = np.tensordot(part, m, axes=([1], [0])).transpose(0, 2, 1)
    return float(np.max(np.abs(lhs - rhs))) / rel_scale(lhs, rhs)


def check_embedding(emb: Embedding) -> None:
    if emb.map.shape != (emb.target.dim, emb.source.dim):
        raise DimMismatch(f"embedding map has shape {emb.map.shape}")
    if numerical_rank(emb.map) < emb.source.dim:
        raise RankDeficient(f"embedding {emb.label} is not injective")
    res = embedding_homomorphism_residual(emb)
    if res > TOL.homomorphism:
        raise NotInTarget(f"embedding {emb.label} is not a homomorphism (residual {res:.3e})")


def identity_embedding(alg: LieAlgebra) -> Embedding:
    return Embedding(alg, alg, np.eye(alg.dim), "identity")


_TARGET_FAMILY = {"real": "so", "complex": "su", "quaternionic": "sp"}


def _target_size(kind: str, module_dim: int) -> int:
    return {"real": module_dim, "complex": module_dim // 2, "quaternionic": module_dim // 4}[kind]


def embedding_from_rep(rep: reps.Representation, target_family: str | None = None) -> Embedding:
    """Embed k into so(N), su(N) or sp(N) through the operators of ``rep``.

    Real modules land in so, complex ones in su, quaternionic ones in sp.
    ``target_family`` overrides this: "so" uses the realification and "su"
    complexifies a real module.
    """
    if reps.skew_residual(rep) > TOL.structure:
        raise NotSkewSymmetric(f"{rep.label} has non-skew operators")
    kind = rep.kind if target_family is None else {"so": "real", "su": "complex", "sp": "quaternionic"}[target_family]
    if kind == "complex" and rep.kind == "real":
        rep = reps.complexify(rep)
    elif kind == "quaternionic" and rep.kind != "quaternionic":
        raise NotInTarget(f"{rep.label} carries no quaternionic structure")
    target = build_classical(_TARGET_FAMILY[kind], _target_size(kind, rep.module_dim))
    flat = target.basis_mats.reshape(target.dim, -1)
    ops = rep.operators.reshape(rep.algebra.dim, -1)
    coeffs, *_ = np.linalg.lstsq(flat.T, ops.T, rcond=None)
    resid = float(np.max(np.abs(coeffs.T @ flat - ops))) / rel_scale(ops)
    if resid > TOL.homomorphism:
        raise NotInTarget(f"{rep.label} does not lie in {target.name} (residual {resid:.3e})")
    emb = Embedding(rep.algebra, target, coeffs, rep.label)
    check_embedding(emb)
    return emb


def block_rep(alg: LieAlgebra, family: str, n: int) -> reps.Representation:
    """Defining module of ``alg`` padded with trivial summands to size n."""
    if family != alg.family:
        raise SpecError(f"defining-block needs the same family, got {alg.family} -> {family}")
    base = reps.defining_rep(alg)
    extra = n - alg.n
    if extra < 0:
        raise SpecError(f"cannot embed {alg.name} into {family}({n})")
    if extra == 0:
        return base
    if base.kind == "real":
        pad = reps.trivial_rep(alg, extra)
    else:
        width = extra * (2 if base.kind == "complex" else 4)
        pad = reps._from_complex(alg, np.zeros((alg.dim, width // 2, width // 2), dtype=complex),
                                 f"trivial({extra})", base.kind)
    out = reps.direct_sum(base, pad)
    return reps.Representation(alg, out.operators, f"defining-block({family}({n}))", base.kind)


def killing_ratio_spread(emb: Embedding) -> tuple[float, float]:
    """(c, spread): mean of the diagonal ratios and the worst relative deviation.

    The deviation covers both the diagonal ratios and the full matrix
    B_k - c emb^* B_target.
    """
    pulled = emb.map.T @ emb.target.killing @ emb.map
    ratios = np.diag(emb.source.killing) / np.diag(pulled)
    c = float(np.mean(ratios))
    spread = float(np.max(np.abs(ratios - c))) / abs(c)
    full = float(np.max(np.abs(emb.source.killing - c * pulled))) / rel_scale(emb.source.killing)
    return c, max(spread, full)


def killing_ratio(emb: Embedding) -> float:
    """c with B_k(Z, Z) = c B_target(emb Z, emb Z) for all Z."""
    c, spread = killing_ratio_spread(emb)
    if spread > TOL.ratio_spread:
        raise NonConstantRatio(f"Killing ratio not constant (spread {spread:.3e})")
    return c


@dataclass(frozen=True, eq=False)
class ReductiveSpace:
    k: LieAlgebra
    g1: LieAlgebra
    g2: LieAlgebra
    emb1: Embedding
    emb2: Embedding
    c1: float
    c2: float
    same_group: bool
    k_basis: np.ndarray        # B_k-orthonormal basis of k (columns)
    adapted: np.ndarray        # columns: h | m0 | m1 | m2, ambient coordinates
    p1_basis: np.ndarray       # B_1-orthonormal basis of p1 in g1 coordinates
    p2_basis: np.ndarray
    label: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    # block sizes and slices in adapted coordinates
    @property
    def dim_k(self) -> int:
        return self.k.dim

    @property
    def dim_p1(self) -> int:
        return self.p1_basis.shape[1]

    @property
    def dim_p2(self) -> int:
        return self.p2_basis.shape[1]

    @property
    def dim(self) -> int:
        return self.g1.dim + self.g2.dim

    @property
    def dim_m(self) -> int:
        return self.dim - self.dim_k

    @property
    def h_slice(self) -> slice:
        return slice(0, self.dim_k)

    @property
    def m0_slice(self) -> slice:
        return slice(self.dim_k, 2 * self.dim_k)

    @property
    def m1_slice(self) -> slice:
        return slice(2 * self.dim_k, 2 * self.dim_k + self.dim_p1)

    @property
    def m2_slice(self) -> slice:
        return slice(2 * self.dim_k + self.dim_p1, self.dim)

    @property
    def m_slice(self) -> slice:
        return slice(self.dim_k, self.dim)

    @property
    def h_norm(self) -> float:
        return float(np.sqrt(1.0 / self.c1 + 1.0 / self.c2))

    @property
    def m0_norm(self) -> float:
        return float(np.sqrt(self.c1 + self.c2) / self.c1)

    @property
    def h_basis(self) -> np.ndarray:
        return self.adapted[:, self.h_slice]

    @property
    def m0_basis(self) -> np.ndarray:
        return self.adapted[:, self.m0_slice]

    @property
    def m1_basis(self) -> np.ndarray:
        return self.adapted[:, self.m1_slice]

    @property
    def m2_basis(self) -> np.ndarray:
        return self.adapted[:, self.m2_slice]

    @property
    def killing(self) -> np.ndarray:
        """B on g = g1 + g2 in ambient coordinates."""
        d1, d2 = self.g1.dim, self.g2.dim
        b = np.zeros((d1 + d2, d1 + d2))
        b[:d1, :d1] = self.g1.killing
        b[d1:, d1:] = self.g2.killing
        return b

    @property
    def structure(self) -> np.ndarray:
        """Structure tensor in adapted coordinates (computed once)."""
        if "structure" not in self._cache:
            self._cache["structure"] = _adapted_structure(self)
        return self._cache["structure"]

    def bracket(self, x, y) -> np.ndarray:
        """Bracket of two vectors given in adapted coordinates."""
        return np.einsum("i,j,ijk->k", x, y, self.structure)

    def h_to_k(self, zh) -> np.ndarray:
        """k coordinates of Z for the h element (Z, Z) with adapted coordinates zh."""
        return self.k_basis @ np.asarray(zh, dtype=float) / self.h_norm

    def k_to_h(self, z) -> np.ndarray:
        return self.h_norm * np.linalg.solve(self.k_basis, np.asarray(z, dtype=float))

    def to_ambient(self, v) -> np.ndarray:
        return self.adapted @ v

    def summary(self) -> dict:
        return {
            "label": self.label,
            "k": self.k.name,
            "g1": self.g1.name,
            "g2": self.g2.name,
            "dim_g": self.dim,
            "dim_h": self.dim_k,
            "dim_m0": self.dim_k,
            "dim_m1": self.dim_p1,
            "dim_m2": self.dim_p2,
            "dim_m": self.dim_m,
            "c1": self.c1,
            "c2": self.c2,
            "same_group": self.same_group,
            "block_gram_residual": block_gram_residual(self),
            "invariance_residual": invariance_residual(self),
        }


def _adapted_structure(space: ReductiveSpace) -> np.ndarray:
    t = space.adapted
    d1 = space.g1.dim
    back = t.T @ space.killing  # inverse of t, since t^T B t = I
    n = t.shape[1]
    out = np.zeros((n, n, n))
    for rows, alg in ((slice(0, d1), space.g1), (slice(d1, None), space.g2)):
        ti = t[rows]
        tmp = np.tensordot(ti, alg.structure, axes=([0], [0]))   # (a, j, k)
        tmp = np.tensordot(tmp, ti, axes=([1], [0]))             # (a, k, b)
        tmp = np.tensordot(tmp, back[:, rows], axes=([1], [1]))  # (a, b, c)
        out += tmp
    return out


def _orthocomplement(emb: Embedding) -> np.ndarray:
    kt = emb.target.killing
    comp = null_space(emb.map.T @ kt, TOL.rank)
    if comp.shape[1] == 0:
        return comp
    return gram_orthonormalize(comp, kt)


def build_pair_space(emb1: Embedding, emb2: Embedding, same_group: bool = False, label: str = "") -> ReductiveSpace:
    """Assemble the B-orthogonal splitting h + m0 + m1 + m2 of g1 + g2."""
    if emb1.source is not emb2.source:
        if emb1.source.name != emb2.source.name or emb1.source.dim != emb2.source.dim:
            raise DimMismatch("both embeddings must share the subalgebra k")
    check_embedding(emb1)
    check_embedding(emb2)
    k = emb1.source
    c1, c2 = killing_ratio(emb1), killing_ratio(emb2)
    if same_group:
        if emb1.target is not emb2.target or np.max(np.abs(emb1.map - emb2.map)) > TOL.homomorphism:
            raise SpecError("same_group needs identical targets and embeddings")
    rk = gram_orthonormalize(np.eye(k.dim), k.killing)
    p1 = _orthocomplement(emb1)
    p2 = p1.copy() if same_group else _orthocomplement(emb2)
    d1, d2 = emb1.target.dim, emb2.target.dim
    if k.dim + p1.shape[1] != d1 or k.dim + p2.shape[1] != d2:
        raise DimMismatch("complement dimensions do not add up")
    n_h = np.sqrt(1.0 / c1 + 1.0 / c2)
    n_0 = np.sqrt(c1 + c2) / c1
    k1, k2 = emb1.map @ rk, emb2.map @ rk
    h = np.vstack([k1, k2]) / n_h
    m0 = np.vstack([k1, -(c2 / c1) * k2]) / n_0
    m1 = np.vstack([p1, np.zeros((d2, p1.shape[1]))])
    m2 = np.vstack([np.zeros((d1, p2.shape[1])), p2])
    adapted = np.hstack([h, m0, m1, m2])
    space = ReductiveSpace(k, emb1.target, emb2.target, emb1, emb2, c1, c2, same_group,
                           rk, adapted, p1, p2, label)
    res = block_gram_residual(space)
    if res > TOL.invariance:
        raise RankDeficient(f"adapted basis is not B-orthonormal (residual {res:.3e})")
    return space


# -- invariant checks -------------------------------------------------------

def block_gram_residual(space: ReductiveSpace) -> float:
    t = space.adapted
    gram = t.T @ space.killing @ t
    return float(np.max(np.abs(gram - np.eye(gram.shape[0]))))


def invariance_residual(space: ReductiveSpace) -> float:
    """Largest component of [h, m_j] outside m_j, j = 0, 1, 2."""
    c = space.structure
    hs = space.h_slice
    worst = 0.0
    blocks = [space.h_slice, space.m0_slice, space.m1_slice, space.m2_slice]
    for j, bj in enumerate(blocks[1:], start=1):
        for i, bi in enumerate(blocks):
            if i == j:
                continue
            part = c[hs, bj, bi]
            if part.size:
                worst = max(worst, float(np.max(np.abs(part))))
    return worst / rel_scale(c)


def isotropy_operators(space: ReductiveSpace) -> np.ndarray:
    """ad(h_j) restricted to m, in adapted m coordinates: (dim k, dim m, dim m)."""
    ms = space.m_slice
    # ad(h_j)[k, l] = C[j, l, k]
    return space.structure[space.h_slice, ms, ms].transpose(0, 2, 1)


def swap_residual(space: ReductiveSpace) -> float:
    """For same-group spaces: the factor swap sends m1 onto m2 and fixes h."""
    if not space.same_group:
        raise SpecError("factor swap only applies to same-group spaces")
    d1 = space.g1.dim
    t = space.adapted
    swapped = np.vstack([t[d1:], t[:d1]])
    coords = t.T @ space.killing @ swapped
    r1 = np.max(np.abs(coords[space.m2_slice, space.m1_slice] - np.eye(space.dim_p1)))
    r2 = np.max(np.abs(coords[space.h_slice, space.h_slice] - np.eye(space.dim_k)))
    r3 = np.max(np.abs(coords[space.m0_slice, space.m0_slice] + np.eye(space.dim_k)))
    return float(max(r1, r2, r3))


# -- space descriptions -------------------------------------------------------

def _algebra_from(desc) -> LieAlgebra:
    if not isinstance(desc, dict) or "family" not in desc or "n" not in desc:
        raise SpecError(f"algebra description needs family and n, got {desc!r}")
    return build_classical(str(desc["family"]).lower(), int(desc["n"]))


def _embedding_from_desc(k: LieAlgebra, g_desc, emb_desc) -> Embedding:
    if isinstance(g_desc, dict) and "from_rep" in g_desc:
        emb_desc = g_desc["from_rep"]
        g_desc = None
    if emb_desc in (None, "identity"):
        if g_desc is not None and _algebra_from(g_desc) is not k:
            raise SpecError("identity embedding needs g equal to k")
        return identity_embedding(k)
    if emb_desc == "defining-block":
        if g_desc is None:
            raise SpecError("defining-block needs an explicit target algebra")
        target = _algebra_from(g_desc)
        return embedding_from_rep(block_rep(k, target.family, target.n))
    rep = reps.build_rep(k, str(emb_desc))
    family = None
    if g_desc is not None:
        family = str(g_desc["family"]).lower()
    emb = embedding_from_rep(rep, family)
    if g_desc is not None and emb.target.n != int(g_desc["n"]):
        raise SpecError(f"{emb_desc} lands in {emb.target.name}, not {g_desc['family']}({g_desc['n']})")
    return emb


def space_from_dict(desc: dict) -> ReductiveSpace:
    """Build a space from its JSON description (see README for the schema)."""
    if "case" in desc:
        from .catalog import lookup
        entry = lookup(str(desc["case"]))
        return entry.build_space(desc.get("n"))
    try:
        k = _algebra_from(desc["k"])
    except KeyError as exc:
        raise SpecError("space description needs 'k'") from exc
    same = bool(desc.get("same_group", False))
    emb1 = _embedding_from_desc(k, desc.get("g1"), desc.get("embedding1"))
    if same:
        emb2 = emb1
    else:
        emb2 = _embedding_from_desc(k, desc.get("g2"), desc.get("embedding2"))
    return build_pair_space(emb1, emb2, same_group=same, label=desc.get("label", ""))


def load_space(text_or_path: str) -> ReductiveSpace:
    """Accept inline JSON or a path to a JSON file."""
    if os.path.exists(text_or_path):
        with open(text_or_path) as fh:
            text = fh.read()
    else:
        text = text_or_path
    try:
        desc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"space description is neither a file nor valid JSON: {exc}") from exc
    return _cached_space(json.dumps(desc, sort_keys=True))


@functools.lru_cache(maxsize=32)
def _cached_space(canonical: str) -> ReductiveSpace:
    return space_from_dict(json.loads(canonical))
