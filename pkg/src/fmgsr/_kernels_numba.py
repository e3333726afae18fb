"""Numba-compiled smoother kernels: the default lane.

Same contract and results as ``_kernels_numpy``.  fastmath stays off so both
lanes produce bit-identical floating point.
"""

from __future__ import annotations

import numba as nb
import numpy as np

_jit = {"nogil": True, "cache": True}


@nb.njit(**_jit)
def gs_sweep(u, f, inv_h2, start, stop, forward, omega):
    """One Gauss-Seidel pass over ``[start, stop)``, in place on ``u``."""
    n = u.shape[0]
    if forward:
        i = start
        step = 1
    else:
        i = stop - 1
        step = -1
    for _ in range(stop - start):
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
        i += step


@nb.njit(**_jit)
def kaczmarz_sweep(u, u_coarse, start, stop, forward, proj_diag):
    """Kaczmarz row projections onto the pair-average constraints, in place."""
    j0 = start // 2
    j1 = stop // 2
    if forward:
        j = j0
        step = 1
    else:
        j = j1 - 1
        step = -1
    for _ in range(j1 - j0):
        a = 2 * j
        b = a + 1
        r = u_coarse[j] - 0.5 * (u[a] + u[b])
        t = r / proj_diag
        u[a] += 0.5 * t
        u[b] += 0.5 * t
        j += step


@nb.njit(**_jit)
def smooth_patches(
    u_in,
    f,
    inv_h2,
    owned_lo,
    owned_hi,
    ext_lo,
    ext_hi,
    ns,
    omega,
    use_cr,
    u_coarse,
    proj_diag,
):
    """Additive patch smoother: every patch reads the same input field."""
    n = u_in.shape[0]
    u_out = np.empty_like(u_in)
    scratch = u_in.copy()
    for p in range(owned_lo.shape[0]):
        ws = ext_lo[p]
        we = ext_hi[p]
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
