"""Invariant metrics on pair spaces and the geodesic orbit (GO) test.

A metric is given by its endomorphism A on m (B(Ax, y) is the inner
product).  The GO property asks for every X in m a Z in k with
[Z + X, AX] = 0; for fixed X this is a linear least-squares problem in Z,
so a positive minimum certifies that no such Z exists.

Vectors are handled in the adapted coordinates of the space (B-orthonormal
basis h | m0 | m1 | m2), where B is the Euclidean inner product.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .config import TOL, rel_scale
from .errors import CoupledOnPairSpace, CoupledSpec, InvalidMetric, NotCertifiedGO, SpecError
from .kernels import feasibility_batch
from .linalg import null_space
from .spaces import ReductiveSpace, isotropy_operators


@dataclass(frozen=True)
class MetricSpec:
    kind: str = "diagonal"
    x0: float = 1.0
    x: float = 1.0
    y: float = 1.0
    a: float = 1.0
    b: float = 1.0
    c: float = 0.0

    def __post_init__(self):
        if self.kind not in ("diagonal", "coupled"):
            raise InvalidMetric(f"unknown metric kind {self.kind!r}")
        if self.x0 <= 0:
            raise InvalidMetric("x0 must be positive")
        if self.kind == "diagonal" and (self.x <= 0 or self.y <= 0):
            raise InvalidMetric("x and y must be positive")
        if self.kind == "coupled" and (self.a <= 0 or self.b <= 0 or self.a * self.b - self.c ** 2 <= 0):
            raise InvalidMetric("coupled metric needs a > 0, b > 0, ab - c^2 > 0")

    @classmethod
    def diagonal(cls, x: float, y: float, x0: float = 1.0) -> "MetricSpec":
        return cls("diagonal", x0=x0, x=x, y=y)

    @classmethod
    def coupled(cls, a: float, b: float, c: float, x0: float = 1.0) -> "MetricSpec":
        return cls("coupled", x0=x0, a=a, b=b, c=c)

    def scaled(self, lam: float) -> "MetricSpec":
        return MetricSpec(self.kind, self.x0 * lam, self.x * lam, self.y * lam,
                          self.a * lam, self.b * lam, self.c * lam)

    def normalized_pair(self) -> tuple[float, float]:
        """(x, y) or (a, b) divided by x0."""
        if self.kind == "diagonal":
            return self.x / self.x0, self.y / self.x0
        return self.a / self.x0, self.b / self.x0


def metric_endomorphism(space: ReductiveSpace, spec: MetricSpec) -> np.ndarray:
    """Matrix of A on m in adapted m coordinates."""
    dk, p1, p2 = space.dim_k, space.dim_p1, space.dim_p2
    a = np.zeros((space.dim_m, space.dim_m))
    i0, i1, i2 = 0, dk, dk + p1
    a[i0:i1, i0:i1] = spec.x0 * np.eye(dk)
    if spec.kind == "diagonal":
        a[i1:i2, i1:i2] = spec.x * np.eye(p1)
        a[i2:, i2:] = spec.y * np.eye(p2)
        return a
    if not space.same_group:
        raise CoupledOnPairSpace("the coupled family needs m1 and m2 identified (same-group space)")
    eye = np.eye(p1)
    a[i1:i2, i1:i2] = spec.a * eye
    a[i2:, i2:] = spec.b * eye
    a[i1:i2, i2:] = spec.c * eye
    a[i2:, i1:i2] = spec.c * eye
    return a


def equivariance_residual(space: ReductiveSpace, a: np.ndarray) -> float:
    """max_j |[ad(h_j)|_m, A]|, relative to |A|."""
    ops = isotropy_operators(space)
    comm = ops @ a[None] - a[None] @ ops
    return float(np.max(np.abs(comm))) / rel_scale(a) if comm.size else 0.0


def commutant_dimension(space: ReductiveSpace, block: str = "m1") -> int:
    """Dimension of the ad(h)-equivariant endomorphisms of one m block."""
    sl = {"m0": space.m0_slice, "m1": space.m1_slice, "m2": space.m2_slice}[block]
    ops = space.structure[space.h_slice, sl, sl].transpose(0, 2, 1)
    p = ops.shape[1]
    if p == 0:
        return 0
    eye = np.eye(p)
    system = np.concatenate([np.kron(x, eye) - np.kron(eye, x.T) for x in ops])
    return null_space(system, TOL.rank).shape[1]


# -- pointwise tests ------------------------------------------------------------

def _embed_m(space: ReductiveSpace, xm: np.ndarray) -> np.ndarray:
    out = np.zeros(space.dim)
    out[space.m_slice] = xm
    return out


def _embed_h(space: ReductiveSpace, zh: np.ndarray) -> np.ndarray:
    out = np.zeros(space.dim)
    out[space.h_slice] = zh
    return out


def geodesic_vector_test(space: ReductiveSpace, spec: MetricSpec, x_full, tol: float | None = None,
                         a: np.ndarray | None = None) -> tuple[bool, float]:
    """Geodesic vector test with the A-inner product: max_Y |([X, Y]_m, X_m)_A|.

    The residual is normalized by |X| |A X_m| so it is scale free.
    """
    tol = TOL.decision if tol is None else tol
    a = metric_endomorphism(space, spec) if a is None else a
    x_full = np.asarray(x_full, dtype=float)
    ms = space.m_slice
    ax = a @ x_full[ms]
    scale = np.linalg.norm(x_full) * np.linalg.norm(ax)
    if scale == 0.0:
        return True, 0.0
    # [X, m_b] restricted to m, contracted with A X_m
    brackets = np.einsum("i,ibk->bk", x_full, space.structure[:, ms, ms])
    values = brackets @ ax
    res = float(np.max(np.abs(values))) / scale
    return bool(res < tol), res


def go_feasibility(space: ReductiveSpace, spec: MetricSpec, xm, a: np.ndarray | None = None):
    """Least-squares Z in k for [Z + X, AX] = 0.

    Returns (Z in k coordinates, residual normalized by |X| |AX|, Z in h
    coordinates).
    """
    a = metric_endomorphism(space, spec) if a is None else a
    xm = np.asarray(xm, dtype=float)
    if not np.any(xm):
        raise SpecError("X must be nonzero")
    zh, res = _batch(space, a, xm[None])
    return space.h_to_k(zh[0]), float(res[0]), zh[0]


def _kernel_tensors(space: ReductiveSpace) -> tuple[np.ndarray, np.ndarray]:
    cache = space._cache
    if "kernel" not in cache:
        c = space.structure
        ms = space.m_slice
        cache["kernel"] = (np.ascontiguousarray(c[space.h_slice, ms, :]),
                           np.ascontiguousarray(c[ms, ms, :]))
    return cache["kernel"]


def _batch(space: ReductiveSpace, a: np.ndarray, xs: np.ndarray):
    c_hm, c_mm = _kernel_tensors(space)
    ws = xs @ a.T
    zh, raw = feasibility_batch(c_hm, c_mm, xs, ws, TOL.rank)
    scale = np.linalg.norm(xs, axis=1) * np.linalg.norm(ws, axis=1)
    return zh, raw / np.where(scale > 0, scale, 1.0)


def bracket_residual(space: ReductiveSpace, a: np.ndarray, xm, zh) -> float:
    """|[Z + X, AX]| / (|X| |AX|) for Z given in h coordinates."""
    xm = np.asarray(xm, dtype=float)
    v = _embed_h(space, zh) + _embed_m(space, xm)
    w = _embed_m(space, a @ xm)
    scale = np.linalg.norm(xm) * np.linalg.norm(w)
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(space.bracket(v, w))) / scale


# -- sampling and decisions ---------------------------------------------------------

def probe_set(space: ReductiveSpace, rng: np.random.Generator) -> np.ndarray:
    """One generic probe (all blocks nonzero, equal block norms) and one per block."""
    dm = space.dim_m
    off = space.dim_k
    blocks = [space.m0_slice, space.m1_slice, space.m2_slice]
    generic = np.zeros(dm)
    probes = []
    for sl in blocks:
        width = sl.stop - sl.start
        if width == 0:
            continue
        v = rng.standard_normal(width)
        v /= np.linalg.norm(v)
        generic[sl.start - off:sl.stop - off] = v
        pure = np.zeros(dm)
        pure[sl.start - off:sl.stop - off] = v
        probes.append(pure)
    generic /= np.linalg.norm(generic)
    return np.array([generic] + probes)


def sample_sphere(space: ReductiveSpace, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform samples on the B-unit sphere of m."""
    xs = rng.standard_normal((n, space.dim_m))
    return xs / np.linalg.norm(xs, axis=1, keepdims=True)


def go_samples(space: ReductiveSpace, n_samples: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.vstack([probe_set(space, rng), sample_sphere(space, n_samples, rng)])


@dataclass
class GOReport:
    samples: int
    max_residual: float
    worst_X: list
    witnesses: list
    decision: str
    ratio_residual: float
    seed: int
    tol: float
    spec: dict = field(default_factory=dict)
    c1: float = 0.0
    c2: float = 0.0
    commutant_dim: int | None = None

    @property
    def is_go(self) -> bool:
        return self.decision == "GO"

    def to_json(self, witnesses: bool = True) -> str:
        d = asdict(self)
        if not witnesses:
            d.pop("witnesses")
        return json.dumps(d, indent=2)


def _ratio_value(space: ReductiveSpace, spec: MetricSpec) -> float:
    u, v = spec.normalized_pair()
    return abs((1 - u) / u - space.c2 * (v - 1) / (space.c1 * v))


def ratio_condition(space: ReductiveSpace, spec: MetricSpec) -> float:
    """|(1 - x)/x - c2 (y - 1)/(c1 y)| with x, y measured relative to x0."""
    if spec.kind != "diagonal":
        raise CoupledSpec("the ratio condition is stated for diagonal metrics")
    return _ratio_value(space, spec)


def go_decision(space: ReductiveSpace, spec: MetricSpec, n_samples: int = 200, seed: int = 42,
                tol: float | None = None, xs: np.ndarray | None = None) -> GOReport:
    """Sampled GO certificate: NOT_GO as soon as one X has no witness Z."""
    if n_samples < 1:
        raise SpecError("n_samples must be at least 1")
    tol = TOL.decision if tol is None else tol
    a = metric_endomorphism(space, spec)
    if xs is None:
        xs = go_samples(space, n_samples, seed)
    zh, res = _batch(space, a, xs)
    worst = int(np.argmax(res))
    zk = (space.k_basis @ zh.T / space.h_norm).T
    commutant = commutant_dimension(space) if spec.kind == "coupled" else None
    max_res = float(res[worst])
    return GOReport(
        samples=int(xs.shape[0]),
        max_residual=max_res,
        worst_X=xs[worst].tolist(),
        witnesses=zk.tolist(),
        decision="GO" if max_res < tol else "NOT_GO",
        ratio_residual=_ratio_value(space, spec),
        seed=int(seed),
        tol=float(tol),
        spec=asdict(spec),
        c1=space.c1,
        c2=space.c2,
        commutant_dim=commutant,
    )


# -- equivalent formulations ------------------------------------------------------

def equivalence_audit(space: ReductiveSpace, spec: MetricSpec, xm, zh, tol: float | None = None):
    """Evaluate the four equivalent GO conditions for (Z, X).

    (1) Z + X is a geodesic vector; (2) [Z + X, AX] lies in k;
    (3) ([Z, X], Y) = (X, [X, Y]_m) for all Y in m;
    (4) ([Z + X, Y]_m, X) = 0 for all Y in m.
    Inner products are the A-metric; each residual is the 2-norm over the
    B-orthonormal basis of m, divided by |X| |AX|.  Returns
    (four booleans, four residuals).
    """
    tol = TOL.decision if tol is None else tol
    a = metric_endomorphism(space, spec)
    xm = np.asarray(xm, dtype=float)
    zh = np.asarray(zh, dtype=float)
    ax = a @ xm
    scale = np.linalg.norm(xm) * np.linalg.norm(ax)
    if scale == 0.0:
        return (True,) * 4, (0.0,) * 4
    c = space.structure
    hs, ms = space.h_slice, space.m_slice
    v = _embed_h(space, zh) + _embed_m(space, xm)
    ad_v_m = np.einsum("i,ibk->bk", v, c[:, ms, ms])        # [Z+X, Y_b]_m
    r1 = np.linalg.norm(ad_v_m @ ax)
    w = _embed_m(space, ax)
    r2 = np.linalg.norm(space.bracket(v, w)[ms])
    zx = np.einsum("j,a,jak->k", zh, xm, c[hs, ms, ms])     # [Z, X]_m
    xy = np.einsum("a,abk->bk", xm, c[ms, ms, ms])          # [X, Y_b]_m
    r3 = np.linalg.norm(a @ zx - xy @ ax)
    zy = np.einsum("j,jbk->bk", zh, c[hs, ms, ms])          # [Z, Y_b]_m
    r4 = np.linalg.norm((zy + xy) @ ax)
    res = tuple(float(r) / scale for r in (r1, r2, r3, r4))
    return tuple(bool(r < tol) for r in res), res


def block_conditions(space: ReductiveSpace, spec: MetricSpec, xm, zh) -> tuple[float, float, float]:
    """Residuals of the three componentwise conditions for a diagonal metric.

    With X = (K0, -(c2/c1) K0) + (P1, 0) + (0, P2) and witness Z:
    [Z, K0] = 0, [Z, P1] = t1 [K0, P1], [Z, P2] = t2 [K0, P2], where
    t1 = (1 - x)/x and t2 = c2 (y - 1)/(c1 y).  Computed in g1 and g2.
    """
    u, v = spec.normalized_pair()
    t1 = (1 - u) / u
    t2 = space.c2 * (v - 1) / (space.c1 * v)
    xm = np.asarray(xm, dtype=float)
    off = space.dim_k
    x0 = xm[: space.dim_k]
    x1 = xm[space.m1_slice.start - off: space.m1_slice.stop - off]
    x2 = xm[space.m2_slice.start - off:]
    k0 = space.k_basis @ x0 / space.m0_norm
    z = space.h_to_k(zh)
    kb = space.k.structure
    r0 = np.einsum("i,j,ijk->k", z, k0, kb)
    p1 = space.p1_basis @ x1
    p2 = space.p2_basis @ x2
    z1, k1 = space.emb1(z), space.emb1(k0)
    z2, k2 = space.emb2(z), space.emb2(k0)
    g1c, g2c = space.g1.structure, space.g2.structure
    r1 = np.einsum("i,j,ijk->k", z1 - t1 * k1, p1, g1c)
    r2 = np.einsum("i,j,ijk->k", z2 - t2 * k2, p2, g2c)
    norm = max(np.linalg.norm(xm), 1e-300)
    return tuple(float(np.linalg.norm(r)) / norm for r in (r0, r1, r2))


def natural_reductivity_direct(space: ReductiveSpace, spec: MetricSpec, n_samples: int = 50,
                               seed: int = 42, tol: float | None = None) -> tuple[bool, float]:
    """([X, Y]_m, X) = 0 on the probe set for the fixed B-orthogonal m.

    Passing is sufficient evidence of natural reductivity; failing says
    nothing about other complements.
    """
    tol = TOL.decision if tol is None else tol
    a = metric_endomorphism(space, spec)
    worst = 0.0
    for xm in go_samples(space, n_samples, seed):
        _, r = geodesic_vector_test(space, spec, _embed_m(space, xm), tol, a)
        worst = max(worst, r)
    return bool(worst < tol), worst


def geodesic_graph_matrix(space: ReductiveSpace, spec: MetricSpec) -> np.ndarray:
    """xi: m -> h in adapted coordinates, X -> ((1 - x)/x) (K0, K0)."""
    if spec.kind != "diagonal":
        raise CoupledSpec("the linear geodesic graph is defined for diagonal metrics")
    u, _ = spec.normalized_pair()
    t = (1 - u) / u
    xi = np.zeros((space.dim_k, space.dim_m))
    xi[:, : space.dim_k] = t * (space.h_norm / space.m0_norm) * np.eye(space.dim_k)
    return xi


def geodesic_graph_check(space: ReductiveSpace, spec: MetricSpec, n_samples: int = 100, seed: int = 42,
                         tol: float = 1e-9, xs: np.ndarray | None = None) -> tuple[bool, float]:
    """Check the linear map xi is ad(h)-equivariant and gives [xi(X) + X, AX] = 0."""
    xi = geodesic_graph_matrix(space, spec)
    a = metric_endomorphism(space, spec)
    c = space.structure
    hs = space.h_slice
    ad_m = isotropy_operators(space)
    ad_h = c[hs, hs, hs].transpose(0, 2, 1)
    eq = ad_h @ xi[None] - xi[None] @ ad_m
    eq_res = float(np.max(np.abs(eq))) / rel_scale(xi, 1.0) if eq.size else 0.0
    if xs is None:
        xs = go_samples(space, n_samples, seed)
    worst = 0.0
    for xm in xs:
        worst = max(worst, bracket_residual(space, a, xm, xi @ xm))
    res = max(eq_res, worst)
    return bool(res < tol), res


def eigenspaces(a: np.ndarray, rtol: float | None = None) -> list[tuple[float, np.ndarray]]:
    """Group the spectrum of symmetric A into (eigenvalue, orthonormal basis)."""
    rtol = TOL.eigen_group if rtol is None else rtol
    vals, vecs = np.linalg.eigh(a)
    groups: list[tuple[float, list[int]]] = []
    scale = rel_scale(vals)
    for i, lam in enumerate(vals):
        if groups and abs(lam - groups[-1][0]) <= rtol * scale:
            groups[-1][1].append(i)
        else:
            groups.append((lam, [i]))
    return [(float(np.mean(vals[idx])), vecs[:, idx]) for _, idx in groups]


def eigenspace_bracket_check(space: ReductiveSpace, spec: MetricSpec, report: GOReport | None = None,
                             tol: float = 1e-9, n_samples: int = 200, seed: int = 42) -> tuple[bool, float]:
    """For distinct A-eigenspaces b_i, b_j: [b_i, b_j] lies in b_i + b_j.

    Only meaningful for GO metrics; a NOT_GO certificate raises
    NotCertifiedGO.  The projection is taken in all of g.
    """
    if report is None:
        report = go_decision(space, spec, n_samples, seed)
    if not report.is_go:
        raise NotCertifiedGO(f"metric {asdict(spec)} is not certified GO")
    a = metric_endomorphism(space, spec)
    spaces_ = eigenspaces(a)
    if len(spaces_) < 2:
        return True, 0.0
    ms = space.m_slice
    c = space.structure
    worst = 0.0
    for (_, bi), (_, bj) in itertools.combinations(spaces_, 2):
        ui = np.zeros((space.dim, bi.shape[1]))
        uj = np.zeros((space.dim, bj.shape[1]))
        ui[ms], uj[ms] = bi, bj
        span = np.hstack([ui, uj])
        brackets = np.einsum("ia,jb,ijk->abk", ui, uj, c, optimize=True).reshape(-1, space.dim)
        outside = brackets - (brackets @ span) @ span.T
        worst = max(worst, float(np.max(np.abs(outside))))
    worst /= rel_scale(c)
    return bool(worst < tol), worst


# -- scans ---------------------------------------------------------------------

CSV_COLUMNS = ["x0", "x", "y", "a", "b", "c", "c1", "c2", "ratio_residual", "max_residual",
               "decision", "seed", "samples"]


def parse_grid(text: str) -> dict[str, list[float]]:
    """``"x=lo:hi:step,y=..."`` or ``"c=-0.4|0|0.4"`` to value lists (inclusive)."""
    grid: dict[str, list[float]] = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "=" not in part:
            raise SpecError(f"grid entry {part!r} needs name=values")
        name, values = (s.strip() for s in part.split("=", 1))
        if name not in ("x0", "x", "y", "a", "b", "c"):
            raise SpecError(f"unknown grid parameter {name!r}")
        try:
            if ":" in values:
                lo, hi, step = (float(v) for v in values.split(":"))
                if step <= 0 or hi < lo:
                    raise SpecError(f"bad range {values!r}")
                count = int(np.floor((hi - lo) / step + 1e-9)) + 1
                grid[name] = [round(lo + i * step, 12) for i in range(count)]
            else:
                grid[name] = [float(v) for v in values.split("|")]
        except ValueError as exc:
            raise SpecError(f"cannot parse grid values {values!r}") from exc
    return grid


def grid_specs(grid: dict[str, list[float]], base: dict | None = None) -> list[MetricSpec]:
    """Cartesian product in a fixed parameter order; invalid metrics are skipped."""
    base = dict(base or {})
    coupled = any(k in grid or k in base for k in ("a", "b", "c"))
    order = [k for k in ("x0", "x", "y", "a", "b", "c") if k in grid]
    specs = []
    for combo in itertools.product(*(grid[k] for k in order)):
        params = dict(base)
        params.update(zip(order, combo))
        try:
            if coupled:
                specs.append(MetricSpec.coupled(params.get("a", 1.0), params.get("b", 1.0),
                                                params.get("c", 0.0), params.get("x0", 1.0)))
            else:
                specs.append(MetricSpec.diagonal(params.get("x", 1.0), params.get("y", 1.0),
                                                 params.get("x0", 1.0)))
        except InvalidMetric:
            continue
    return specs


def scan_metrics(space: ReductiveSpace, specs, n_samples: int = 200, seed: int = 42,
                 tol: float | None = None, workers: int = 1, keep_reports: bool = False) -> list[dict]:
    """Run go_decision over a list of specs, sharing one sample set.

    Rows come back in input order whatever the worker count.
    """
    tol = TOL.decision if tol is None else tol
    xs = go_samples(space, n_samples, seed)
    _kernel_tensors(space)
    _ = space.structure

    def one(spec: MetricSpec) -> dict:
        rep = go_decision(space, spec, n_samples, seed, tol, xs=xs)
        row = {
            "x0": spec.x0,
            "x": spec.x if spec.kind == "diagonal" else "",
            "y": spec.y if spec.kind == "diagonal" else "",
            "a": spec.a if spec.kind == "coupled" else "",
            "b": spec.b if spec.kind == "coupled" else "",
            "c": spec.c if spec.kind == "coupled" else "",
            "c1": space.c1,
            "c2": space.c2,
            "ratio_residual": rep.ratio_residual,
            "max_residual": rep.max_residual,
            "decision": rep.decision,
            "seed": seed,
            "samples": rep.samples,
        }
        if keep_reports:
            row["_report"] = rep
            row["_spec"] = spec
        return row

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, specs))
    return [one(s) for s in specs]


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (f"{v:.17g}" if isinstance(v, float) else v) for k, v in row.items()
                         if k in CSV_COLUMNS})
    return buf.getvalue()
