"""Real orthogonal representations built compositionally.

Every representation stores real skew-symmetric operators acting on R^N.
Complex and quaternionic modules are stored through their realification
[[A, -B], [B, A]] and carry ``kind`` so that complex-linear constructions
(and embeddings into su / sp) can read the complex matrices back.
"""
from __future__ import annotations

import ast
from dataclasses import dataclass

import numpy as np

from .algebra import LieAlgebra, complexify_blocks, realify
from .config import TOL, rel_scale
from .errors import AlgebraMismatch, DimMismatch, RepNotConstructible, SpecError
from .linalg import gram_orthonormalize, null_space
from .roots import weyl_dimension  # noqa: F401  (re-exported)

KINDS = ("real", "complex", "quaternionic")


@dataclass(frozen=True, eq=False)
class Representation:
    algebra: LieAlgebra
    operators: np.ndarray          # (dim algebra, N, N), real skew-symmetric
    label: str
    kind: str = "real"

    @property
    def module_dim(self) -> int:
        return self.operators.shape[1]

    @property
    def complex_operators(self) -> np.ndarray:
        if self.kind == "real":
            return self.operators.astype(complex)
        return complexify_blocks(self.operators)

    def act(self, z) -> np.ndarray:
        """rho(Z) for Z given in algebra coordinates."""
        return np.tensordot(np.asarray(z, dtype=float), self.operators, axes=1)

    def __repr__(self) -> str:
        return f"Representation({self.label}, dim={self.module_dim}, {self.kind})"


def _make(alg: LieAlgebra, ops: np.ndarray, label: str, kind: str = "real") -> Representation:
    ops = np.ascontiguousarray(np.real_if_close(ops), dtype=float)
    if ops.ndim != 3 or ops.shape[0] != alg.dim:
        raise DimMismatch(f"need {alg.dim} operators, got array of shape {ops.shape}")
    ops.setflags(write=False)
    return Representation(alg, ops, label, kind)


def _from_complex(alg: LieAlgebra, cops: np.ndarray, label: str, kind: str = "complex") -> Representation:
    return _make(alg, realify(cops), label, kind)


def _same_algebra(a: Representation, b: Representation) -> None:
    if a.algebra is not b.algebra:
        raise AlgebraMismatch(f"{a.label} and {b.label} act on different algebras")


# -- basic modules ----------------------------------------------------------

def defining_rep(alg: LieAlgebra) -> Representation:
    kind = {"so": "real", "su": "complex", "sp": "quaternionic"}.get(alg.family, "real")
    return _make(alg, alg.basis_mats, "defining", kind)


def adjoint_rep(alg: LieAlgebra) -> Representation:
    """ad e_i written in a B-orthonormal basis, hence skew-symmetric."""
    q = gram_orthonormalize(np.eye(alg.dim), alg.killing)
    qinv = np.linalg.inv(q)
    ad = alg.structure.transpose(0, 2, 1)  # ad(e_i)[k, j] = C[i, j, k]
    ops = qinv[None] @ ad @ q[None]
    return _make(alg, 0.5 * (ops - ops.transpose(0, 2, 1)), "adjoint")


def trivial_rep(alg: LieAlgebra, dim: int = 1) -> Representation:
    return _make(alg, np.zeros((alg.dim, dim, dim)), "trivial" if dim == 1 else f"trivial({dim})")


# -- constructions ------------------------------------------------------------

def _sym_alt_bases(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases (as n^2 x m matrices) of symmetric and alternating tensors."""
    sym, alt = [], []
    for i in range(n):
        for j in range(i, n):
            s = np.zeros((n, n))
            if i == j:
                s[i, i] = 1.0
                sym.append(s.ravel())
                continue
            s[i, j] = s[j, i] = np.sqrt(0.5)
            sym.append(s.ravel())
            a = np.zeros((n, n))
            a[i, j], a[j, i] = np.sqrt(0.5), -np.sqrt(0.5)
            alt.append(a.ravel())
    return np.array(sym).T, np.array(alt).reshape(-1, n * n).T


def _tensor_ops(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    na, nb = a.shape[1], b.shape[1]
    ia, ib = np.eye(na), np.eye(nb)
    return np.array([np.kron(x, ib) + np.kron(ia, y) for x, y in zip(a, b)])


def _restrict(ops: np.ndarray, basis: np.ndarray) -> np.ndarray:
    return basis.conj().T[None] @ ops @ basis[None]


def tensor_rep(a: Representation, b: Representation, complex_linear: bool = False) -> Representation:
    _same_algebra(a, b)
    if complex_linear:
        cops = _tensor_ops(a.complex_operators, b.complex_operators)
        return _from_complex(a.algebra, cops, f"tensor_c({a.label},{b.label})")
    return _make(a.algebra, _tensor_ops(a.operators, b.operators), f"tensor({a.label},{b.label})")


def _power(rep: Representation, which: str, complex_linear: bool) -> Representation:
    src = rep.complex_operators if complex_linear else rep.operators
    n = src.shape[1]
    sym, alt = _sym_alt_bases(n)
    basis = sym if which == "sym2" else alt
    ops = _restrict(_tensor_ops(src, src), basis)
    if complex_linear:
        return _from_complex(rep.algebra, ops, f"{which}_c({rep.label})")
    return _make(rep.algebra, ops, f"{which}({rep.label})")


def sym2_rep(rep: Representation, complex_linear: bool = False) -> Representation:
    """Symmetric square; X(v w) = (Xv) w + v (Xw)."""
    return _power(rep, "sym2", complex_linear)


def alt2_rep(rep: Representation, complex_linear: bool = False) -> Representation:
    return _power(rep, "alt2", complex_linear)


def dual_rep(rep: Representation) -> Representation:
    """Contragredient.  Orthogonal real modules are self-dual; complex ones conjugate."""
    if rep.kind == "real":
        return _make(rep.algebra, rep.operators, f"dual({rep.label})")
    return _from_complex(rep.algebra, rep.complex_operators.conj(), f"dual({rep.label})", rep.kind)


def direct_sum(a: Representation, b: Representation) -> Representation:
    _same_algebra(a, b)

    def blockdiag(x, y):
        d, na, nb = x.shape[0], x.shape[1], y.shape[1]
        out = np.zeros((d, na + nb, na + nb), dtype=np.result_type(x, y))
        out[:, :na, :na] = x
        out[:, na:, na:] = y
        return out

    label = f"sum({a.label},{b.label})"
    if a.kind != "real" and b.kind != "real":
        kind = a.kind if a.kind == b.kind else "complex"
        return _from_complex(a.algebra, blockdiag(a.complex_operators, b.complex_operators), label, kind)
    return _make(a.algebra, blockdiag(a.operators, b.operators), label)


def traceless_part(rep: Representation) -> Representation:
    """Drop the trivial summands (the joint kernel of all operators)."""
    complex_linear = rep.kind != "real"
    ops = rep.complex_operators if complex_linear else rep.operators
    n = ops.shape[1]
    kernel = null_space(ops.reshape(-1, n), TOL.rank)
    if kernel.shape[1] == 0:
        comp = np.eye(n, dtype=ops.dtype)
    else:
        comp = null_space(kernel.conj().T, TOL.rank)
    restricted = _restrict(ops, comp)
    label = f"traceless({rep.label})"
    if complex_linear:
        return _from_complex(rep.algebra, restricted, label)
    return _make(rep.algebra, restricted, label)


def complexify(rep: Representation) -> Representation:
    """Real module V to the complex module V (x) C (realified: two copies of V)."""
    if rep.kind != "real":
        raise SpecError(f"{rep.label} is already {rep.kind}")
    return _from_complex(rep.algebra, rep.operators.astype(complex), f"complexify({rep.label})")


def realify_rep(rep: Representation) -> Representation:
    """Forget the complex structure: same real operators, kind real."""
    return _make(rep.algebra, rep.operators, f"realify({rep.label})")


def so3_irrep(alg: LieAlgebra, dim: int) -> Representation:
    """Irreducible complex module of so(3) of complex dimension ``dim``.

    Uses spin j = (dim - 1)/2 with T_a = -i J_a; the so(3) basis
    (E12, E13, E23) is sent to (-T3, T2, -T1).
    """
    if alg.family != "so" or alg.n != 3:
        raise RepNotConstructible(f"so3_irrep needs so(3), got {alg.name}")
    if dim < 1:
        raise SpecError("dimension must be positive")
    j = (dim - 1) / 2.0
    m = j - np.arange(dim)
    jz = np.diag(m).astype(complex)
    jp = np.zeros((dim, dim), dtype=complex)
    for k in range(1, dim):
        jp[k - 1, k] = np.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    jm = jp.conj().T
    jx = 0.5 * (jp + jm)
    jy = -0.5j * (jp - jm)
    t1, t2, t3 = -1j * jx, -1j * jy, -1j * jz
    cops = np.array([-t3, t2, -t1])
    return _from_complex(alg, cops, f"so3_irrep({dim})")


# -- real and quaternionic structures -----------------------------------------

def _antilinear_structure(rep: Representation) -> tuple[np.ndarray, float]:
    """S with S conj(X) = X S for all operators, normalized so S conj(S) = sign I."""
    if rep.kind == "real":
        raise SpecError("real and quaternionic forms need a complex module")
    cops = rep.complex_operators
    n = cops.shape[1]
    # vec(X S - S conj(X)) with row-major vec: (X (x) I - I (x) conj(X)^T) vec(S)
    eye = np.eye(n)
    system = np.concatenate([np.kron(x, eye) - np.kron(eye, x.conj().T) for x in cops])
    sols = null_space(system, TOL.rank)
    if sols.shape[1] != 1:
        raise RepNotConstructible(
            f"{rep.label}: conjugate-intertwiner space has dimension {sols.shape[1]}, need 1")
    s = sols[:, 0].reshape(n, n)
    lam = np.real(np.trace(s @ s.conj())) / n
    return s / np.sqrt(abs(lam)), float(np.sign(lam))


def real_form(rep: Representation) -> Representation:
    """Real module W with W (x) C equal to the given complex module."""
    s, sign = _antilinear_structure(rep)
    if sign < 0:
        raise RepNotConstructible(f"{rep.label} is quaternionic, not real")
    n = s.shape[0]
    eye = np.eye(n)
    fixed = np.concatenate([eye + s, 1j * eye - 1j * s], axis=1)
    as_real = np.concatenate([fixed.real, fixed.imag])
    u, sv, _ = np.linalg.svd(as_real, full_matrices=False)
    basis_r = u[:, :n]
    basis = basis_r[:n] + 1j * basis_r[n:]
    ops = _restrict(rep.complex_operators, basis)
    if np.max(np.abs(ops.imag)) > 1e-8 * rel_scale(ops):
        raise RepNotConstructible(f"{rep.label}: no real form found")
    return _make(rep.algebra, ops.real, f"real_form({rep.label})")


def quaternionic_form(rep: Representation) -> Representation:
    """Change basis so every operator has the sp shape [[P, Q], [-conj Q, conj P]]."""
    s, sign = _antilinear_structure(rep)
    if sign > 0:
        raise RepNotConstructible(f"{rep.label} is real, not quaternionic")
    n = s.shape[0]
    m = n // 2
    vs, ws = [], []
    for k in range(n):
        if len(vs) == m:
            break
        v = np.zeros(n, dtype=complex)
        v[k] = 1.0
        for u in vs + ws:
            v = v - (u.conj() @ v) * u
        norm = np.linalg.norm(v)
        if norm < 1e-6:
            continue
        v = v / norm
        vs.append(v)
        ws.append(-(s @ v.conj()))
    if len(vs) != m:
        raise RepNotConstructible(f"{rep.label}: quaternionic basis construction failed")
    basis = np.array(vs + ws).T
    ops = _restrict(rep.complex_operators, basis)
    return _from_complex(rep.algebra, ops, f"quat_form({rep.label})", "quaternionic")


# -- invariant checks -----------------------------------------------------------

def homomorphism_residual(rep: Representation) -> float:
    ops = rep.operators
    c = rep.algebra.structure
    worst = 0.0
    for i in range(ops.shape[0]):
        comm = ops[i][None] @ ops - ops @ ops[i][None]
        image = np.tensordot(c[i], ops, axes=([1], [0]))
        worst = max(worst, float(np.max(np.abs(comm - image))))
    return worst / rel_scale(ops) ** 2


def skew_residual(rep: Representation) -> float:
    ops = rep.operators
    return float(np.max(np.abs(ops + ops.transpose(0, 2, 1)))) / rel_scale(ops)


def check_representation(rep: Representation) -> None:
    h, s = homomorphism_residual(rep), skew_residual(rep)
    if h > TOL.homomorphism:
        raise RepNotConstructible(f"{rep.label}: homomorphism residual {h:.3e}")
    if s > TOL.structure:
        raise RepNotConstructible(f"{rep.label}: skew residual {s:.3e}")


# -- construction trees -----------------------------------------------------------

def _tree_functions(alg: LieAlgebra) -> dict:
    return {
        "defining": lambda: defining_rep(alg),
        "adjoint": lambda: adjoint_rep(alg),
        "trivial": lambda d=1: trivial_rep(alg, int(d)),
        "so3_irrep": lambda d: so3_irrep(alg, int(d)),
        "sym2": sym2_rep,
        "alt2": alt2_rep,
        "sym2_c": lambda r: sym2_rep(r, complex_linear=True),
        "alt2_c": lambda r: alt2_rep(r, complex_linear=True),
        "tensor": tensor_rep,
        "tensor_c": lambda a, b: tensor_rep(a, b, complex_linear=True),
        "dual": dual_rep,
        "sum": direct_sum,
        "traceless": traceless_part,
        "complexify": complexify,
        "realify": realify_rep,
        "real_form": real_form,
        "quat_form": quaternionic_form,
    }


def build_rep(alg: LieAlgebra, tree: str) -> Representation:
    """Evaluate a construction tree such as ``traceless(sym2(defining))``.

    Bare names (``defining``, ``adjoint``) may omit the parentheses.
    """
    funcs = _tree_functions(alg)
    try:
        node = ast.parse(tree.strip(), mode="eval").body
    except SyntaxError as exc:
        raise SpecError(f"cannot parse representation tree {tree!r}") from exc

    def ev(n):
        if isinstance(n, ast.Constant) and isinstance(n.value, int):
            return n.value
        if isinstance(n, ast.Name):
            if n.id not in funcs:
                raise SpecError(f"unknown representation {n.id!r}")
            return funcs[n.id]()
        if isinstance(n, ast.Call) and isinstance(n.func, ast.Name) and not n.keywords:
            if n.func.id not in funcs:
                raise SpecError(f"unknown construction {n.func.id!r}")
            return funcs[n.func.id](*[ev(a) for a in n.args])
        raise SpecError(f"unsupported expression in {tree!r}")

    rep = ev(node)
    if not isinstance(rep, Representation):
        raise SpecError(f"{tree!r} does not evaluate to a representation")
    return rep
