"""Manufactured 1D Poisson problem, error norm, and the independent
direct-solve oracle used to calibrate every accuracy check.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_banded

from .stencils import level_of


def default_nmodes(n: int) -> int:
    """Default highest mode index for a grid of ``n`` cells: ``n/16``, at least 1."""
    return max(1, n // 16)


def cell_centers(n: int) -> np.ndarray:
    """Cell-center coordinates ``x_i = (i + 1/2) / n`` on the unit interval."""
    return (np.arange(n) + 0.5) / n


def manufactured_rhs(n: int, nmodes: int | None = None) -> np.ndarray:
    """Forcing ``f(x) = sum over odd j <= nmodes of sin(j pi x) / j``."""
    if nmodes is None:
        nmodes = default_nmodes(n)
    if nmodes < 1:
        raise ValueError(f"nmodes must be >= 1, got {nmodes}")
    x = cell_centers(n)
    f = np.zeros(n)
    for j in range(1, nmodes + 1, 2):
        f += np.sin(j * np.pi * x) / j
    return f


def exact_solution(n: int, nmodes: int | None = None) -> np.ndarray:
    """Solution of ``-u'' = f`` with u(0)=u(1)=0 for the manufactured forcing."""
    if nmodes is None:
        nmodes = default_nmodes(n)
    if nmodes < 1:
        raise ValueError(f"nmodes must be >= 1, got {nmodes}")
    x = cell_centers(n)
    u = np.zeros(n)
    for j in range(1, nmodes + 1, 2):
        u += np.sin(j * np.pi * x) / (j * (j * np.pi) ** 2)
    return u


def rel_l2_error(u: np.ndarray, u_ref: np.ndarray) -> float:
    """Plain (unweighted) relative vector 2-norm error against ``u_ref``."""
    u = np.asarray(u, dtype=np.float64)
    u_ref = np.asarray(u_ref, dtype=np.float64)
    if len(u) != len(u_ref):
        raise ValueError(f"field sizes differ: {len(u)} vs {len(u_ref)}")
    denom = float(np.linalg.norm(u_ref))
    if denom == 0.0:
        raise ValueError("reference field has zero norm")
    return float(np.linalg.norm(u - u_ref)) / denom


def direct_fine_solve(forcing: np.ndarray) -> np.ndarray:
    """Exact tridiagonal solve of the level operator at the forcing's level.

    Assembles and factorizes the band independently of the solver's own
    coarse-grid solve (general LU here, Cholesky there), so the two can
    legitimately cross-check each other.
    """
    k = level_of(forcing)
    n = len(forcing)
    inv_h2 = float(4 ** k)
    ab = np.zeros((3, n), dtype=np.float64)
    ab[0, 1:] = -inv_h2
    ab[1, :] = 2.0 * inv_h2
    ab[1, 0] = 3.0 * inv_h2
    ab[1, -1] = 3.0 * inv_h2
    ab[2, :-1] = -inv_h2
    return solve_banded((1, 1), ab, np.asarray(forcing, dtype=np.float64))
