"""Numerical tolerances shared across modules.

Tolerances are relative: a residual is divided by the largest absolute entry
of the operands before it is compared.  Override globally with
:func:`set_tolerances` or temporarily with the :func:`tolerances` context
manager.
"""
from __future__ import annotations

import contextlib
import dataclasses
from dataclasses import dataclass


@dataclass
class Tolerances:
    structure: float = 1e-10      # antisymmetry, Jacobi, commutator closure
    homomorphism: float = 1e-9    # rep / embedding homomorphism residuals
    rank: float = 1e-10           # singular-value cut, relative to the largest
    ratio_spread: float = 1e-8    # killing_ratio constancy
    invariance: float = 1e-9      # block orthogonality, Ad(H)-invariance
    decision: float = 1e-8        # GO decision
    alarm: float = 1e-4           # off-curve separation
    abelian: float = 1e-8         # stabilizer bracket residual
    eigen_group: float = 1e-9     # grouping of metric eigenvalues


TOL = Tolerances()


def set_tolerances(**kwargs: float) -> None:
    for key, value in kwargs.items():
        if not hasattr(TOL, key):
            raise AttributeError(f"unknown tolerance {key!r}")
        setattr(TOL, key, float(value))


@contextlib.contextmanager
def tolerances(**kwargs: float):
    saved = dataclasses.asdict(TOL)
    set_tolerances(**kwargs)
    try:
        yield TOL
    finally:
        set_tolerances(**saved)


def rel_scale(*arrays) -> float:
    """Largest absolute entry among the operands, floored at 1 for zero input."""
    import numpy as np

    m = 0.0
    for a in arrays:
        a = np.asarray(a)
        if a.size:
            m = max(m, float(np.max(np.abs(a))))
    return m if m > 0 else 1.0
