"""Matrix-free stencil operators for the 1D cell-centered Poisson hierarchy.

The level of a field is inferred from its length (always a power of two), so
every operator is a pure function of its array arguments.  The discrete
operator on level k is the tridiagonal row ``(1/h^2) * [-1, 2, -1]`` with
homogeneous-Dirichlet boundary rows ``(1/h^2) * [3, -1]`` and
``(1/h^2) * [-1, 3]``, ``h = 2**-k``.

Boundary rows of the two prolongations are hard-coded; no attempt is made to
"improve" their accuracy near the ends.
"""

from __future__ import annotations

import numpy as np


def level_of(values: np.ndarray) -> int:
    """Level exponent of a field, validating the power-of-two length."""
    n = len(values)
    k = max(n, 1).bit_length() - 1
    if n < 2 or 2 ** k != n:
        raise ValueError(f"field length must be a power of two >= 2, got {n}")
    return k


def apply_operator(u: np.ndarray) -> np.ndarray:
    """Apply the level operator ``L_k`` to ``u`` without assembling a matrix."""
    k = level_of(u)
    inv_h2 = float(4 ** k)
    out = np.empty_like(u, dtype=np.float64)
    out[0] = 3.0 * u[0] - u[1]
    out[-1] = 3.0 * u[-1] - u[-2]
    out[1:-1] = 2.0 * u[1:-1] - u[:-2] - u[2:]
    out *= inv_h2
    return out


def restrict(u_fine: np.ndarray) -> np.ndarray:
    """Restrict a fine field by pair averaging: coarse j = mean of its children.

    The same operator serves both solution restriction and residual/RHS
    restriction.
    """
    level_of(u_fine)
    u_fine = np.asarray(u_fine, dtype=np.float64)
    return 0.5 * (u_fine[0::2] + u_fine[1::2])


def prolong_correction(c_coarse: np.ndarray) -> np.ndarray:
    """Second-order prolongation used for coarse-grid corrections.

    Interior fine cells receive the ``1/4 * [1, 3, 3, 1]`` stencil; the first
    and last fine cells receive ``1/2`` of the nearest coarse cell.
    """
    level_of(c_coarse)
    c = np.asarray(c_coarse, dtype=np.float64)
    n = len(c)
    out = np.empty(2 * n, dtype=np.float64)
    out[0] = 0.5 * c[0]
    out[-1] = 0.5 * c[-1]
    out[1:-2:2] = 0.25 * (3.0 * c[:-1] + c[1:])
    out[2:-1:2] = 0.25 * (c[:-1] + 3.0 * c[1:])
    return out


def prolong_fmg(c_coarse: np.ndarray) -> np.ndarray:
    """High-order prolongation used to seed each finer level.

    Interior fine cells use the ``1/128`` stencils ``[-5, 35, 105, -7]`` (even
    fine index) and ``[-7, 105, 35, -5]`` (odd fine index); the four cells at
    each boundary carry dedicated rows.  Interior rows sum to one, boundary
    rows do not (they encode the Dirichlet boundary).

    Requires a coarse field of at least 4 cells.
    """
    level_of(c_coarse)
    c = np.asarray(c_coarse, dtype=np.float64)
    n = len(c)
    if n < 4:
        raise ValueError(f"prolong_fmg needs a coarse field of >= 4 cells, got {n}")
    nf = 2 * n
    out = np.empty(nf, dtype=np.float64)

    out[0] = 70.0 * c[0] - 2.0 * c[1]
    out[1] = 112.0 * c[0] + 35.0 * c[1] - 5.0 * c[2]
    out[2] = 40.0 * c[0] + 105.0 * c[1] - 7.0 * c[2]
    out[3] = -7.0 * c[0] + 105.0 * c[1] + 35.0 * c[2] - 5.0 * c[3]

    # even fine rows 4, 6, ..., nf-6 sit over coarse index q = row/2
    out[4:nf - 5:2] = (
        -5.0 * c[0:n - 4] + 35.0 * c[1:n - 3] + 105.0 * c[2:n - 2] - 7.0 * c[3:n - 1]
    )
    # odd fine rows 5, 7, ..., nf-5 sit over coarse index q = (row-1)/2
    out[5:nf - 4:2] = (
        -7.0 * c[1:n - 3] + 105.0 * c[2:n - 2] + 35.0 * c[3:n - 1] - 5.0 * c[4:n]
    )

    out[nf - 4] = -7.0 * c[n - 1] + 105.0 * c[n - 2] + 35.0 * c[n - 3] - 5.0 * c[n - 4]
    out[nf - 3] = 40.0 * c[n - 1] + 105.0 * c[n - 2] - 7.0 * c[n - 3]
    out[nf - 2] = 112.0 * c[n - 1] + 35.0 * c[n - 2] - 5.0 * c[n - 3]
    out[nf - 1] = 70.0 * c[n - 1] - 2.0 * c[n - 2]

    out /= 128.0
    return out


def tau_correction(u_fine: np.ndarray) -> np.ndarray:
    """Fine-to-coarse defect correction.

    Returns ``L_coarse(restrict(u)) - restrict(L_fine(u))``: the amount by
    which the coarse equation must be shifted so that its exact solution
    coincides with the restricted fine solution.
    """
    u_coarse = restrict(u_fine)
    return apply_operator(u_coarse) - restrict(apply_operator(u_fine))


def coarse_rhs(f_fine: np.ndarray, u_fine: np.ndarray) -> np.ndarray:
    """Coarse right-hand side ``restrict(f) + tau_correction(u)``."""
    if len(f_fine) != len(u_fine):
        raise ValueError(
            f"forcing and solution sizes differ: {len(f_fine)} vs {len(u_fine)}"
        )
    return restrict(f_fine) + tau_correction(u_fine)
