"""Convergence-study harness: study sweeps, observed order, CSV emission,
the SR memory model, and the self-check suite behind ``--seed-check``.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np

from . import problem, smoothers, stencils
from .cycles import SolverConfig, fmg_solve
from .mesh import HaloMode, build_hierarchy, partition
from .smoothers import SmootherConfig

logger = logging.getLogger(__name__)

#: Canonical configuration order of the full study grid.
HALO_ORDER = (HaloMode.HALO2, HaloMode.HALO4, HaloMode.GLOBAL)
NS_VALUES = (1, 2)
NSR_VALUES = (0, 1, 2, 3)

CSV_HEADER = "n,n_sr,halo,ns,rel_error,quad_ref,runtime_ms"


@dataclass(frozen=True)
class StudyRecord:
    """One study row: finest size, configuration, and measured error."""

    n: int
    n_sr: int
    halo_mode: HaloMode
    ns: int
    rel_error: float
    quad_ref: float
    runtime_ms: float


@dataclass(frozen=True)
class MemoryModel:
    """Modeled storage of one solve, in cells.

    ``cells_stored_full`` sums the whole arrays of the non-SR levels;
    ``sr_working_set`` is the largest single patch window among the SR
    levels; ``total_modeled`` adds one window per SR level plus the
    window-sized accumulation row the fine-to-coarse pass needs on the
    finest stored level.
    """

    cells_stored_full: int
    sr_working_set: int
    total_modeled: int


def quad_ref(m: int) -> float:
    """Quadratic reference value at finest exponent ``m``.

    Anchored at ``(1/16)**2`` for m=4 and divided by 4 per refinement, the
    guide line the study charts draw alongside the measured curves.
    """
    return (1.0 / 16.0) ** 2 / 4.0 ** (m - 4)


def _coerce_halo(halo) -> HaloMode:
    if isinstance(halo, HaloMode):
        return halo
    return HaloMode(str(halo))


def run_study(
    m_min: int,
    m_max: int,
    configs: list[tuple],
    m0: int = 2,
    nmodes_div: int = 16,
) -> list[StudyRecord]:
    """Run one full-multigrid solve per (config, m) cell and record errors.

    Parameters
    ----------
    m_min, m_max : int
        Finest-level exponent range (inclusive); ``m_min`` must leave at
        least one level above ``m0``.
    configs : list of (n_sr, halo_mode, ns)
        Solver configurations; ``halo_mode`` accepts a HaloMode or one of
        the labels "2", "4", "global".
    m0 : int
        Coarsest exponent.
    nmodes_div : int
        The manufactured problem uses ``max(1, n // nmodes_div)`` modes.

    Returns
    -------
    list of StudyRecord
        One record per (config, m), in loop order.  Deterministic except
        for the runtime column.
    """
    if m_min < m0 + 1:
        raise ValueError(f"m_min={m_min} must be at least m0+1={m0 + 1}")
    if m_max < m_min:
        raise ValueError(f"empty study range: m_min={m_min}, m_max={m_max}")
    if nmodes_div < 1:
        raise ValueError(f"nmodes_div must be >= 1, got {nmodes_div}")
    records = []
    for cfg_tuple in configs:
        n_sr, halo, ns = cfg_tuple
        halo = _coerce_halo(halo)
        logger.info("study config n_sr=%d halo=%s ns=%d", n_sr, halo.label, ns)
        for m in range(m_min, m_max + 1):
            cfg = SolverConfig(
                hierarchy=build_hierarchy(m0, m),
                n_sr=n_sr,
                smoother=SmootherConfig(ns=ns, halo_mode=halo),
            )
            n = 2 ** m
            nmodes = max(1, n // nmodes_div)
            forcing = problem.manufactured_rhs(n, nmodes)
            exact = problem.exact_solution(n, nmodes)
            start = time.perf_counter()
            solution, _ = fmg_solve(cfg, forcing)
            elapsed_ms = (time.perf_counter() - start) * 1e3
            err = problem.rel_l2_error(solution, exact)
            records.append(
                StudyRecord(
                    n=n,
                    n_sr=n_sr,
                    halo_mode=halo,
                    ns=ns,
                    rel_error=err,
                    quad_ref=quad_ref(m),
                    runtime_ms=elapsed_ms,
                )
            )
    return records


def full_grid_configs() -> list[tuple[int, HaloMode, int]]:
    """The 24 study configurations: halo {2,4,global} x ns {1,2} x n_sr 0..3."""
    return [
        (n_sr, halo, ns)
        for halo in HALO_ORDER
        for ns in NS_VALUES
        for n_sr in NSR_VALUES
    ]


def run_full_study(
    m_min: int = 4,
    m_max: int = 12,
    m0: int = 2,
    nmodes_div: int = 16,
    configs: list[tuple] | None = None,
) -> list[StudyRecord]:
    """Run a study grid, clamping each curve's start to its valid range.

    A configuration with ``n_sr`` SR levels needs ``m >= m0 + 1 + n_sr``, so
    deeper-SR curves start at larger m rather than being rejected.  Records
    are sorted by (halo, ns, n_sr, n), making the output independent of any
    execution schedule.
    """
    if configs is None:
        configs = full_grid_configs()
    records = []
    for cfg_tuple in configs:
        n_sr, halo, ns = cfg_tuple
        halo = _coerce_halo(halo)
        m_lo = max(m_min, m0 + 1 + n_sr)
        if m_lo > m_max:
            logger.info(
                "skipping n_sr=%d halo=%s ns=%d: needs m >= %d",
                n_sr, halo.label, ns, m_lo,
            )
            continue
        records.extend(run_study(m_lo, m_max, [(n_sr, halo, ns)], m0, nmodes_div))
    halo_rank = {mode: i for i, mode in enumerate(HALO_ORDER)}
    records.sort(key=lambda r: (halo_rank[r.halo_mode], r.ns, r.n_sr, r.n))
    return records


def observed_order(records: list[StudyRecord]) -> float:
    """Least-squares convergence order of one configuration's error curve.

    Fits log2(rel_error) against log2(n) and negates the slope, so clean
    second-order behaviour gives approximately 2.
    """
    if len(records) < 3:
        raise ValueError(f"need at least 3 records, got {len(records)}")
    ordered = sorted(records, key=lambda r: r.n)
    errors = np.array([r.rel_error for r in ordered])
    if np.any(errors <= 0.0):
        raise ValueError("rel_error values must be positive")
    xs = np.log2([r.n for r in ordered])
    ys = np.log2(errors)
    slope = np.polyfit(xs, ys, 1)[0]
    return float(-slope)


def emit_csv(records: list[StudyRecord], path) -> None:
    """Write records as CSV: pinned header, 17-significant-digit floats, LF."""
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            f"{r.n},{r.n_sr},{r.halo_mode.label},{r.ns},"
            f"{r.rel_error:.17g},{r.quad_ref:.17g},{r.runtime_ms:.3f}"
        )
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def memory_report(cfg: SolverConfig) -> MemoryModel:
    """Model the storage a fused SR traversal of ``cfg`` would need.

    Non-SR levels are charged whole.  Each SR level is charged one extended
    patch window (its size comes from the real partition, so domain-end
    clamping is honored), and the fine-to-coarse accumulation adds one more
    window on the finest stored level.
    """
    m0, m = cfg.hierarchy.m0, cfg.hierarchy.m
    halo_mode = cfg.smoother.halo_mode
    full_levels = range(m0, m - cfg.n_sr + 1)
    cells_full = sum(2 ** k for k in full_levels)
    sr_windows = [
        _max_window(2 ** k, halo_mode) for k in range(m - cfg.n_sr + 1, m + 1)
    ]
    tau_row = _max_window(2 ** (m - cfg.n_sr), halo_mode) if cfg.n_sr else 0
    return MemoryModel(
        cells_stored_full=cells_full,
        sr_working_set=max(sr_windows, default=0),
        total_modeled=cells_full + sum(sr_windows) + tau_row,
    )


def _max_window(n: int, halo_mode: HaloMode) -> int:
    return max(p.extended[1] - p.extended[0] for p in partition(n, halo_mode))


def seed_check(verbose: bool = False) -> list[tuple[str, bool, str]]:
    """Fast self-contained oracle checks of the numerical core.

    Returns (name, passed, detail) per check; used by the CLI's
    ``--seed-check`` and handy after any kernel or backend change.
    """
    results = []
    rng = np.random.default_rng(20240817)

    worst = 0.0
    for n in (8, 16):
        f = rng.standard_normal(n)
        u_fine = problem.direct_fine_solve(f)
        u_coarse = smoothers.direct_solve(stencils.coarse_rhs(f, u_fine))
        worst = max(
            worst,
            float(np.max(np.abs(u_coarse - stencils.restrict(u_fine)))),
        )
    results.append(
        ("tau-identity", worst <= 1e-12, f"max deviation {worst:.3e} (<= 1e-12)")
    )

    n = 1024
    u = rng.standard_normal(n)
    target = rng.standard_normal(n // 2)
    cr = smoothers.CrContext(u_coarse=target)
    u_after = smoothers.kaczmarz_pass(u, cr, (0, n))
    dev = float(np.max(np.abs(stencils.restrict(u_after) - target)))
    results.append(
        ("kaczmarz-exactness", dev <= 1e-13, f"max deviation {dev:.3e} (<= 1e-13)")
    )

    n = 256
    u = rng.standard_normal(n)
    f = rng.standard_normal(n)
    cfg = SmootherConfig(ns=2, halo_mode=HaloMode.HALO2)
    cr = smoothers.CrContext(u_coarse=stencils.restrict(u))
    base = smoothers.smooth_level(u, f, cfg, 2, cr=cr)
    worst = 0.0
    patches = partition(n, HaloMode.HALO2)
    for _ in range(5):
        shuffled = list(patches)
        rng.shuffle(shuffled)
        out = smoothers.smooth_level(u, f, cfg, 2, cr=cr, patches=shuffled)
        worst = max(worst, float(np.max(np.abs(out - base))))
    results.append(
        ("patch-order-invariance", worst <= 1e-15, f"max deviation {worst:.3e}")
    )

    errs = []
    for m in range(4, 9):
        n = 2 ** m
        errs.append(
            problem.rel_l2_error(
                problem.direct_fine_solve(problem.manufactured_rhs(n)),
                problem.exact_solution(n),
            )
        )
    ratios = [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]
    ok = all(3.6 <= r <= 4.4 for r in ratios)
    results.append(
        (
            "discretization-order",
            ok,
            "ratios " + ", ".join(f"{r:.2f}" for r in ratios) + " (in [3.6, 4.4])",
        )
    )

    m = 6
    n = 2 ** m
    cfg = SolverConfig(
        hierarchy=build_hierarchy(2, m),
        smoother=SmootherConfig(ns=1, halo_mode=HaloMode.GLOBAL),
    )
    solution, _ = fmg_solve(cfg, problem.manufactured_rhs(n))
    fmg_err = problem.rel_l2_error(solution, problem.exact_solution(n))
    direct_err = problem.rel_l2_error(
        problem.direct_fine_solve(problem.manufactured_rhs(n)),
        problem.exact_solution(n),
    )
    results.append(
        (
            "fmg-accuracy",
            fmg_err <= 2.0 * direct_err,
            f"fmg {fmg_err:.3e} vs direct {direct_err:.3e} (<= 2x)",
        )
    )

    model_full = memory_report(
        SolverConfig(hierarchy=build_hierarchy(2, 12), n_sr=0)
    )
    model_sr = memory_report(
        SolverConfig(
            hierarchy=build_hierarchy(2, 12),
            n_sr=3,
            smoother=SmootherConfig(halo_mode=HaloMode.HALO4),
        )
    )
    ratio = model_full.total_modeled / model_sr.total_modeled
    ok = model_full.total_modeled == 8188 and ratio >= 7.0
    results.append(
        (
            "memory-model",
            ok,
            f"full {model_full.total_modeled} cells, ratio {ratio:.2f}x (>= 7)",
        )
    )

    if verbose:
        for name, passed, detail in results:
            logger.info("%s: %s (%s)", name, "PASS" if passed else "FAIL", detail)
    return results
