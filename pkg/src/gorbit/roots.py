"""Root systems and the Weyl dimension formula, in exact rational arithmetic.

Simple roots are numbered along the Dynkin diagrams used by the classification
tables this package encodes:

* A_r, B_r, C_r, D_r, G_2: Bourbaki numbering (B_r: alpha_r short; C_r: alpha_r
  long; D_r: alpha_{r-1}, alpha_r are the fork; G_2: alpha_1 short).
* F_4: alpha_1, alpha_2 short and alpha_3, alpha_4 long (the reverse of
  Bourbaki), so that phi_1 is the 26-dimensional representation.
* E_6: chain alpha_5-alpha_4-alpha_3-alpha_2-alpha_1 with alpha_6 on alpha_3.
* E_7: chain alpha_6-...-alpha_1 with alpha_7 on alpha_4.
* E_8: chain alpha_7-...-alpha_1 with alpha_8 on alpha_5.

D_2 is the disconnected diagram A_1 x A_1 and D_3 is A_3 with alpha_1 in the
middle; both fall out of the D_r recipe without special cases.
"""
from __future__ import annotations

import functools
from fractions import Fraction
from typing import Sequence

from .errors import NonIntegerResult, RankTooSmall, UnsupportedFamily

FAMILIES = ("A", "B", "C", "D", "E", "F", "G")


def _diagram(family: str, rank: int) -> tuple[list[Fraction], list[tuple[int, int]]]:
    """Squared lengths of simple roots (long = 2) and the edge list (0-based)."""
    r = rank
    if family == "A":
        if r < 1:
            raise RankTooSmall(f"A_{r}")
        return [Fraction(2)] * r, [(i, i + 1) for i in range(r - 1)]
    if family == "B":
        if r < 1:
            raise RankTooSmall(f"B_{r}")
        if r == 1:
            return [Fraction(1)], []
        return [Fraction(2)] * (r - 1) + [Fraction(1)], [(i, i + 1) for i in range(r - 1)]
    if family == "C":
        if r < 1:
            raise RankTooSmall(f"C_{r}")
        if r == 1:
            return [Fraction(2)], []
        return [Fraction(1)] * (r - 1) + [Fraction(2)], [(i, i + 1) for i in range(r - 1)]
    if family == "D":
        if r < 2:
            raise RankTooSmall(f"D_{r}")
        edges = [(i, i + 1) for i in range(r - 2)]
        if r >= 3:
            edges.append((r - 3, r - 1))
        return [Fraction(2)] * r, edges
    if family == "E":
        if r not in (6, 7, 8):
            raise UnsupportedFamily(f"E_{r}")
        branch = {6: 2, 7: 3, 8: 4}[r]
        edges = [(i, i + 1) for i in range(r - 2)]
        edges.append((branch, r - 1))
        return [Fraction(2)] * r, edges
    if family == "F":
        if r != 4:
            raise UnsupportedFamily(f"F_{r}")
        return [Fraction(1), Fraction(1), Fraction(2), Fraction(2)], [(0, 1), (1, 2), (2, 3)]
    if family == "G":
        if r != 2:
            raise UnsupportedFamily(f"G_{r}")
        # triple bond: short root has squared length 2/3
        return [Fraction(2, 3), Fraction(2)], [(0, 1)]
    raise UnsupportedFamily(family)


@functools.lru_cache(maxsize=None)
def simple_root_gram(family: str, rank: int) -> tuple[tuple[Fraction, ...], ...]:
    """Inner products (alpha_i, alpha_j) of the simple roots."""
    norms, edges = _diagram(family, rank)
    gram = [[Fraction(0)] * rank for _ in range(rank)]
    for i in range(rank):
        gram[i][i] = norms[i]
    for i, j in edges:
        if norms[i] == norms[j]:
            v = -norms[i] / 2
        else:
            # unequal lengths: (alpha_s, alpha_l) = -|alpha_l|^2 / 2
            v = -max(norms[i], norms[j]) / 2
        gram[i][j] = gram[j][i] = v
    return tuple(tuple(row) for row in gram)


def cartan_matrix(family: str, rank: int) -> list[list[int]]:
    """a_ij = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i)."""
    g = simple_root_gram(family, rank)
    out = []
    for i in range(rank):
        row = []
        for j in range(rank):
            v = 2 * g[i][j] / g[i][i]
            assert v.denominator == 1
            row.append(int(v))
        out.append(row)
    return out


@functools.lru_cache(maxsize=None)
def positive_roots(family: str, rank: int) -> tuple[tuple[int, ...], ...]:
    """Positive roots as coefficient vectors over the simple roots.

    Built level by level with alpha-strings: for a positive root beta and a
    simple root alpha_i, beta + alpha_i is a root iff q > 0 where
    q = p - <beta, alpha_i^vee> and p is the length of the downward string.
    """
    cm = cartan_matrix(family, rank)
    simple = [tuple(1 if k == i else 0 for k in range(rank)) for i in range(rank)]
    roots = set(simple)
    level = list(simple)
    while level:
        nxt = []
        for beta in level:
            for i in range(rank):
                # <beta, alpha_i^vee> = sum_k beta_k a_ik
                pairing = sum(beta[k] * cm[i][k] for k in range(rank))
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        p += 1
                    else:
                        break
                q = p - pairing
                if q > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        level = nxt
    return tuple(sorted(roots, key=lambda r: (sum(r), r)))


def rank_of(family: str, n: int) -> tuple[str, int]:
    """Root system (family letter, rank) of su(n), so(n), sp(n)."""
    if family == "su":
        return "A", n - 1
    if family == "so":
        if n % 2:
            return "B", (n - 1) // 2
        return "D", n // 2
    if family == "sp":
        return "C", n
    raise UnsupportedFamily(family)


def weyl_dimension(family: str, rank: int, weight: Sequence[int]) -> int:
    """Dimension of the irreducible module with highest weight ``weight``.

    ``weight`` holds the coefficients over the fundamental weights.  The Weyl
    product over positive roots is evaluated with Fractions and must be an
    integer.
    """
    family = family.upper()
    if family not in FAMILIES:
        raise UnsupportedFamily(family)
    weight = [int(w) for w in weight]
    if len(weight) != rank:
        raise ValueError(f"weight has length {len(weight)}, expected rank {rank}")
    if any(w < 0 for w in weight):
        raise ValueError("weight coefficients must be non-negative")
    gram = simple_root_gram(family, rank)
    half = [gram[i][i] / 2 for i in range(rank)]  # (phi_i, alpha_i)
    num = Fraction(1)
    den = Fraction(1)
    for root in positive_roots(family, rank):
        # (phi_j, alpha) = c_j (alpha_j, alpha_j) / 2
        rho_pair = sum(root[j] * half[j] for j in range(rank))
        lam_pair = sum(root[j] * weight[j] * half[j] for j in range(rank))
        num *= lam_pair + rho_pair
        den *= rho_pair
    value = num / den
    if value.denominator != 1:
        raise NonIntegerResult(f"{family}{rank} {weight}: {value}")
    return int(value)


EXCEPTIONAL_DIMS = {"G2": 14, "F4": 52, "E6": 78, "E7": 133, "E8": 248}


def algebra_dimension(family: str, rank: int) -> int:
    """Dimension of the simple algebra with the given root system (= dim adjoint)."""
    return rank + 2 * len(positive_roots(family.upper(), rank))
