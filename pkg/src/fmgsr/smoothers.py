"""Patch smoothers: Gauss-Seidel subdomain solves, the Kaczmarz compatible
relaxation pass, their additive assembly over a patch partition, and the
coarsest-level direct solve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np
from scipy.linalg import solveh_banded

from . import backends, stencils
from .mesh import HaloMode, Patch, _cached_patch_arrays, patch_arrays

Direction = Literal["forward", "backward"]

_EMPTY = np.empty(0, dtype=np.float64)


@dataclass(frozen=True)
class SmootherConfig:
    """Smoother parameters.

    ns is the inner sweep count per application (the nu of a V(nu,nu)
    cycle); omega is the relaxation weight, kept at 1.0 in every study
    configuration.
    """

    ns: int = 1
    halo_mode: HaloMode = HaloMode.HALO2
    omega: float = 1.0

    def __post_init__(self) -> None:
        if self.ns < 1:
            raise ValueError(f"ns must be >= 1, got {self.ns}")


@dataclass(frozen=True)
class CrContext:
    """Compatible-relaxation context for smoothing a full-update level.

    Carries the parent-level solution the fine level is constrained against,
    the (constant) diagonal of the projected restriction normal matrix, and
    the restriction operator itself.
    """

    u_coarse: np.ndarray
    proj_diag: float = 0.5
    restrict_op: Callable[[np.ndarray], np.ndarray] = field(
        default=stencils.restrict, repr=False
    )


def _check_window(window: tuple[int, int], n: int) -> tuple[int, int]:
    start, stop = window
    if not (0 <= start < stop <= n):
        raise ValueError(f"window {window} outside [0, {n})")
    return start, stop


def _check_direction(direction: str) -> bool:
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be forward or backward, got {direction!r}")
    return direction == "forward"


def patch_gs_sweep(
    u: np.ndarray,
    f: np.ndarray,
    window: tuple[int, int],
    direction: Direction = "forward",
) -> np.ndarray:
    """One Gauss-Seidel pass over ``window``; cells outside stay untouched.

    Values outside the window act as frozen boundary data, which is what
    makes a windowed sweep a subdomain solve with inexact boundary
    conditions.
    """
    k = stencils.level_of(u)
    if len(f) != len(u):
        raise ValueError(f"field sizes differ: {len(u)} vs {len(f)}")
    start, stop = _check_window(window, len(u))
    forward = _check_direction(direction)
    out = np.array(u, dtype=np.float64, copy=True)
    backends.active().gs_sweep(
        out,
        np.asarray(f, dtype=np.float64),
        float(4 ** k),
        start,
        stop,
        forward,
        1.0,
    )
    return out


def kaczmarz_pass(
    u: np.ndarray,
    cr: CrContext,
    window: tuple[int, int],
    direction: Direction = "forward",
) -> np.ndarray:
    """Project ``u`` onto the pair-average constraints under ``window``.

    For each coarse cell j under the window, the children of j are shifted
    equally so that their mean matches ``cr.u_coarse[j]``.  A full-coverage
    pass therefore restricts exactly onto the coarse solution.  The window
    must be pair-aligned (even start and stop).
    """
    stencils.level_of(u)
    start, stop = _check_window(window, len(u))
    if start % 2 or stop % 2:
        raise ValueError(f"window {window} not aligned to coarse-cell pairs")
    forward = _check_direction(direction)
    out = np.array(u, dtype=np.float64, copy=True)
    backends.active().kaczmarz_sweep(
        out,
        np.asarray(cr.u_coarse, dtype=np.float64),
        start,
        stop,
        forward,
        cr.proj_diag,
    )
    return out


def smooth_level(
    u: np.ndarray,
    f: np.ndarray,
    cfg: SmootherConfig,
    m0: int,
    cr: CrContext | None = None,
    patches: Sequence[Patch] | None = None,
) -> np.ndarray:
    """Apply the additive patch smoother on one level (direct solve at m0).

    Every patch solve reads the same input field and runs ``cfg.ns``
    repetitions of {Kaczmarz pass if ``cr`` is given, then Gauss-Seidel pass}
    over its extended window, flipping the sweep direction after each
    repetition; only owned cells are written back.  The result is independent
    of the patch processing order.

    Parameters
    ----------
    u, f : ndarray
        Current solution and right-hand side on the level.
    cfg : SmootherConfig
        Sweep count and halo mode.
    m0 : int
        Coarsest level exponent; a field of size ``2**m0`` is solved
        directly instead of smoothed.
    cr : CrContext, optional
        Present only when smoothing a full-update level.
    patches : sequence of Patch, optional
        Explicit patch list; defaults to ``partition(len(u), cfg.halo_mode)``.

    Returns
    -------
    ndarray
        The smoothed field (new array).
    """
    k = stencils.level_of(u)
    if len(f) != len(u):
        raise ValueError(f"field sizes differ: {len(u)} vs {len(f)}")
    if k < m0:
        raise ValueError(f"level {k} below the coarsest level {m0}")
    f = np.asarray(f, dtype=np.float64)
    if k == m0:
        return direct_solve(f)
    if patches is None:
        owned_lo, owned_hi, ext_lo, ext_hi = _cached_patch_arrays(
            len(u), cfg.halo_mode
        )
    else:
        owned_lo, owned_hi, ext_lo, ext_hi = patch_arrays(list(patches))
        order = np.argsort(owned_lo)
        covered = np.all(owned_lo[order][1:] == owned_hi[order][:-1])
        if not (covered and owned_lo[order][0] == 0 and owned_hi[order][-1] == len(u)):
            raise ValueError("explicit patch list does not tile the level")
    if cr is not None:
        use_cr = True
        u_coarse = np.asarray(cr.u_coarse, dtype=np.float64)
        if 2 * len(u_coarse) != len(u):
            raise ValueError(
                f"coarse context size {len(u_coarse)} does not parent {len(u)}"
            )
        proj_diag = cr.proj_diag
    else:
        use_cr = False
        u_coarse = _EMPTY
        proj_diag = 1.0
    return backends.active().smooth_patches(
        np.asarray(u, dtype=np.float64),
        f,
        float(4 ** k),
        owned_lo,
        owned_hi,
        ext_lo,
        ext_hi,
        cfg.ns,
        cfg.omega,
        use_cr,
        u_coarse,
        proj_diag,
    )


def direct_solve(f: np.ndarray) -> np.ndarray:
    """Exact tridiagonal solve of the level operator (Cholesky, banded).

    Used for the coarsest level of every cycle; the operator is symmetric
    positive definite, so the solve cannot fail.
    """
    k = stencils.level_of(f)
    n = len(f)
    inv_h2 = float(4 ** k)
    ab = np.empty((2, n), dtype=np.float64)
    ab[0, :] = -inv_h2
    ab[0, 0] = 0.0
    ab[1, :] = 2.0 * inv_h2
    ab[1, 0] = 3.0 * inv_h2
    ab[1, -1] = 3.0 * inv_h2
    return solveh_banded(ab, np.asarray(f, dtype=np.float64))
