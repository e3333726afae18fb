"""The full-multigrid driver: one FAS V-cycle per level, with the finest
levels optionally handled by segmental refinement (full updates plus
compatible relaxation instead of coarse-grid corrections).

Levels are processed whole ("horizontal" order), which has the same
semantics as a fused, memory-constrained traversal: the only field a cycle
reads from the previous one is the previous finest level.  ``debug_sr``
checks this by poisoning the stored SR-level fields between cycles, and
``expand_sr`` reconstructs the finest field from the coarsest non-SR level
alone, which is what makes the SR memory model of the harness honest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .mesh import Hierarchy
from .smoothers import CrContext, SmootherConfig, direct_solve, smooth_level
from .stencils import (
    apply_operator,
    coarse_rhs,
    prolong_correction,
    prolong_fmg,
    restrict,
)


@dataclass(frozen=True)
class SolverConfig:
    """Full solver configuration: hierarchy, SR depth, and smoother."""

    hierarchy: Hierarchy
    n_sr: int = 0
    smoother: SmootherConfig = field(default_factory=SmootherConfig)

    def __post_init__(self) -> None:
        m0, m = self.hierarchy.m0, self.hierarchy.m
        if m0 < 2:
            raise ValueError(
                f"m0 must be >= 2 (the high-order prolongation needs a coarse "
                f"field of >= 4 cells), got {m0}"
            )
        if not 0 <= self.n_sr <= m - m0 - 1:
            raise ValueError(
                f"n_sr={self.n_sr} outside [0, {m - m0 - 1}] for m0={m0}, m={m}"
            )

    def is_sr_level(self, level: int) -> bool:
        """True when ``level`` receives full updates (segmental refinement)."""
        return level > self.hierarchy.m - self.n_sr


@dataclass
class CycleState:
    """Per-level fields of one solve.

    ``f_work`` is the tau-corrected working right-hand side, rebuilt from
    scratch on every cycle; at the finest level of the running cycle it
    always equals the original restricted forcing.
    """

    u: dict[int, np.ndarray]
    f_work: dict[int, np.ndarray]
    f_orig: dict[int, np.ndarray]


@dataclass(frozen=True)
class LevelDiagnostics:
    """Measured behaviour of the V-cycle run at one FMG level.

    Errors are algebraic (against the exact discrete solution of the level's
    forcing), taken right after the high-order prolongation and again after
    the cycle; ``gamma`` is their ratio, the per-cycle error reduction.
    """

    level: int
    error_after_prolong: float
    error_after_cycle: float
    gamma: float
    residual_after_cycle: float


@dataclass
class Diagnostics:
    """Optional measurements of a solve; empty unless requested."""

    levels: list[LevelDiagnostics] = field(default_factory=list)
    rel_error: float | None = None
    state: CycleState | None = None


def down_leg(k: int, state: CycleState, cfg: SolverConfig) -> CycleState:
    """Descend from level ``k`` to the coarsest: restrict the solution, build
    the tau-corrected right-hand side, smooth (direct solve at the bottom)."""
    m0 = cfg.hierarchy.m0
    for l in range(k, m0, -1):
        u_fine = state.u[l]
        state.u[l - 1] = restrict(u_fine)
        state.f_work[l - 1] = coarse_rhs(state.f_work[l], u_fine)
        state.u[l - 1] = smooth_level(
            state.u[l - 1], state.f_work[l - 1], cfg.smoother, m0
        )
    return state


def up_leg(k: int, state: CycleState, cfg: SolverConfig) -> CycleState:
    """Ascend from the coarsest level back to ``k``.

    Non-SR levels get the classic FAS correction (prolongated difference
    against the restricted fine solution) and a plain smooth.  SR levels are
    rebuilt wholesale by the high-order prolongation and smoothed under the
    compatible-relaxation constraint against their parent.
    """
    m0, m = cfg.hierarchy.m0, cfg.hierarchy.m
    for l in range(m0, k):
        if not cfg.is_sr_level(l + 1):
            correction = state.u[l] - restrict(state.u[l + 1])
            state.u[l + 1] = state.u[l + 1] + prolong_correction(correction)
            state.u[l + 1] = smooth_level(
                state.u[l + 1], state.f_work[l + 1], cfg.smoother, m0
            )
        else:
            state.u[l + 1] = prolong_fmg(state.u[l])
            state.u[l + 1] = smooth_level(
                state.u[l + 1],
                state.f_work[l + 1],
                cfg.smoother,
                m0,
                cr=CrContext(u_coarse=state.u[l]),
            )
    return state


def fmg_solve(
    cfg: SolverConfig,
    forcing: np.ndarray,
    exact: np.ndarray | None = None,
    collect_diagnostics: bool = False,
    debug_sr: bool = False,
    keep_state: bool = False,
) -> tuple[np.ndarray, Diagnostics]:
    """One full-multigrid pass: coarsest exact solve, then per level one
    high-order prolongation, pre-smooth, and V-cycle.

    Parameters
    ----------
    cfg : SolverConfig
        Hierarchy, SR depth and smoother settings.
    forcing : ndarray
        Right-hand side on the finest level (size ``2**m``); it is restricted
        in cascade onto every level.
    exact : ndarray, optional
        Reference solution on the finest level; when given, the relative L2
        error lands in the diagnostics.
    collect_diagnostics : bool
        Measure per-level algebraic errors and residuals (extra direct
        solves; never perturbs the algorithm).
    debug_sr : bool
        Overwrite stored SR-level fields with NaN after each cycle.  A
        correct run is unaffected because the only cross-cycle read is the
        previous finest level; any illegal read would poison the result.
    keep_state : bool
        Attach the final ``CycleState`` to the diagnostics.

    Returns
    -------
    (ndarray, Diagnostics)
        Finest-level solution and the requested measurements.
    """
    m0, m = cfg.hierarchy.m0, cfg.hierarchy.m
    forcing = np.asarray(forcing, dtype=np.float64)
    if len(forcing) != 2 ** m:
        raise ValueError(f"forcing has {len(forcing)} cells, expected {2 ** m}")

    f_orig: dict[int, np.ndarray] = {m: forcing}
    for k in range(m - 1, m0 - 1, -1):
        f_orig[k] = restrict(f_orig[k + 1])

    state = CycleState(u={}, f_work={}, f_orig=f_orig)
    state.u[m0] = direct_solve(f_orig[m0])
    state.f_work[m0] = f_orig[m0]

    diag = Diagnostics()
    for k in range(m0, m):
        state.u[k + 1] = prolong_fmg(state.u[k])
        state.f_work[k + 1] = f_orig[k + 1]
        err_pre = (
            _algebraic_error(state.u[k + 1], f_orig[k + 1])
            if collect_diagnostics
            else 0.0
        )
        state.u[k + 1] = smooth_level(
            state.u[k + 1], state.f_work[k + 1], cfg.smoother, m0
        )
        down_leg(k + 1, state, cfg)
        up_leg(k + 1, state, cfg)
        if collect_diagnostics:
            err_post = _algebraic_error(state.u[k + 1], f_orig[k + 1])
            resid = float(
                np.linalg.norm(f_orig[k + 1] - apply_operator(state.u[k + 1]))
            )
            gamma = err_post / err_pre if err_pre > 0.0 else math.nan
            diag.levels.append(
                LevelDiagnostics(k + 1, err_pre, err_post, gamma, resid)
            )
        if debug_sr:
            for l in range(m0, k + 1):
                if cfg.is_sr_level(l):
                    state.u[l] = np.full(2 ** l, np.nan)

    solution = state.u[m]
    if exact is not None:
        exact = np.asarray(exact, dtype=np.float64)
        diag.rel_error = float(
            np.linalg.norm(solution - exact) / np.linalg.norm(exact)
        )
    if keep_state:
        diag.state = state
    return solution, diag


def expand_sr(state: CycleState, cfg: SolverConfig) -> np.ndarray:
    """Reconstruct the finest field from the coarsest non-SR level.

    Replays, per SR level, the full update (high-order prolongation) and the
    constrained smooth with the retained working right-hand side.  The result
    is identical to the finest field the solve produced, which is what allows
    SR levels to live as patch-window streams instead of stored arrays.
    """
    m0, m = cfg.hierarchy.m0, cfg.hierarchy.m
    v = state.u[m - cfg.n_sr]
    for l in range(m - cfg.n_sr, m):
        v_next = prolong_fmg(v)
        v = smooth_level(
            v_next,
            state.f_work[l + 1],
            cfg.smoother,
            m0,
            cr=CrContext(u_coarse=v),
        )
    return v


def _algebraic_error(u: np.ndarray, f: np.ndarray) -> float:
    """Relative error against the exact discrete solve of ``f`` on the level."""
    u_star = direct_solve(f)
    denom = float(np.linalg.norm(u_star))
    if denom == 0.0:
        return float(np.linalg.norm(u))
    return float(np.linalg.norm(u - u_star)) / denom
