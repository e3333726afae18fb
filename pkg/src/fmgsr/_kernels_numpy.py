"""Pure-numpy smoother kernels: the fallback lane.

Same contract as the numba lane (see ``_kernels_numba``), bit-identical
results.  Gauss-Seidel is inherently sequential, so its inner loop stays in
Python here; the Kaczmarz pass updates disjoint cell pairs and is vectorized.
"""

from __future__ import annotations

import numpy as np


def gs_sweep(
    u: np.ndarray,
    f: np.ndarray,
    inv_h2: float,
    start: int,
    stop: int,
    forward: bool,
    omega: float,
) -> None:
    """One Gauss-Seidel pass over ``[start, stop)``, in place on ``u``."""
    n = u.shape[0]
    rng = range(start, stop) if forward else range(stop - 1, start - 1, -1)
    for i in rng:
        if i == 0:
            resid = f[0] - inv_h2 * (3.0 * u[0] - u[1])
            diag = 3.0 * inv_h2
        elif i == n - 1:
            resid = f[i] - inv_h2 * (3.0 * u[i] - u[i - 1])
            diag = 3.0 * inv_h2
        else:
            resid = f[i] - inv_h2 * (2.0 * u[i] - u[i - 1] - u[i + 1])
            diag = 2.0 * inv_h2
        u[i] += omega * resid / diag


def kaczmarz_sweep(
    u: np.ndarray,
    u_coarse: np.ndarray,
    start: int,
    stop: int,
    forward: bool,
    proj_diag: float,
) -> None:
    """Kaczmarz row projections onto the pair-average constraints, in place.

    Cell pairs are disjoint, so the result is independent of the sweep
    direction and the pairs can be updated together.
    """
    j0, j1 = start // 2, stop // 2
    even = u[start:stop:2]
    odd = u[start + 1:stop:2]
    r = u_coarse[j0:j1] - 0.5 * (even + odd)
    t = r / proj_diag
    even += 0.5 * t
    odd += 0.5 * t


def smooth_patches(
    u_in: np.ndarray,
    f: np.ndarray,
    inv_h2: float,
    owned_lo: np.ndarray,
    owned_hi: np.ndarray,
    ext_lo: np.ndarray,
    ext_hi: np.ndarray,
    ns: int,
    omega: float,
    use_cr: bool,
    u_coarse: np.ndarray,
    proj_diag: float,
) -> np.ndarray:
    """Additive patch smoother: every patch reads the same input field.

    Each patch repeats ns times {optional Kaczmarz pass, Gauss-Seidel pass}
    over its extended window, flipping the sweep direction after each
    repetition, then writes back only its owned cells.
    """
    n = u_in.shape[0]
    u_out = np.empty_like(u_in)
    scratch = u_in.copy()
    for p in range(owned_lo.shape[0]):
        ws, we = ext_lo[p], ext_hi[p]
        lo = ws - 1 if ws > 0 else 0
        hi = we + 1 if we < n else n
        scratch[lo:hi] = u_in[lo:hi]
        forward = True
        for _ in range(ns):
            if use_cr:
                kaczmarz_sweep(scratch, u_coarse, ws, we, forward, proj_diag)
            gs_sweep(scratch, f, inv_h2, ws, we, forward, omega)
            forward = not forward
        u_out[owned_lo[p]:owned_hi[p]] = scratch[owned_lo[p]:owned_hi[p]]
    return u_out
