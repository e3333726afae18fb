"""Matrix-free full-multigrid Poisson solver with segmental-refinement
smoothing, plus a convergence-study harness.

The solver runs one FAS V-cycle per full-multigrid level on a 1D
cell-centered finite-volume discretization.  The finest levels can be
treated by segmental refinement: rebuilt wholesale from the parent level by
high-order prolongation and smoothed patch-by-patch under a Kaczmarz
compatible-relaxation constraint, which removes the need to ever store them
whole (quantified by the harness's memory model).
"""

from .backends import available_backends, get_backend, set_backend
from .cycles import (
    CycleState,
    Diagnostics,
    LevelDiagnostics,
    SolverConfig,
    down_leg,
    expand_sr,
    fmg_solve,
    up_leg,
)
from .harness import (
    MemoryModel,
    StudyRecord,
    emit_csv,
    full_grid_configs,
    memory_report,
    observed_order,
    quad_ref,
    run_full_study,
    run_study,
    seed_check,
)
from .mesh import HaloMode, Hierarchy, Patch, build_hierarchy, partition
from .plotting import emit_plot
from .problem import (
    cell_centers,
    direct_fine_solve,
    exact_solution,
    manufactured_rhs,
    rel_l2_error,
)
from .smoothers import (
    CrContext,
    SmootherConfig,
    direct_solve,
    kaczmarz_pass,
    patch_gs_sweep,
    smooth_level,
)
from .stencils import (
    apply_operator,
    coarse_rhs,
    prolong_correction,
    prolong_fmg,
    restrict,
    tau_correction,
)

__version__ = "0.1.0"

__all__ = [
    "HaloMode",
    "Hierarchy",
    "Patch",
    "build_hierarchy",
    "partition",
    "apply_operator",
    "restrict",
    "prolong_correction",
    "prolong_fmg",
    "tau_correction",
    "coarse_rhs",
    "SmootherConfig",
    "CrContext",
    "patch_gs_sweep",
    "kaczmarz_pass",
    "smooth_level",
    "direct_solve",
    "SolverConfig",
    "CycleState",
    "Diagnostics",
    "LevelDiagnostics",
    "fmg_solve",
    "down_leg",
    "up_leg",
    "expand_sr",
    "manufactured_rhs",
    "exact_solution",
    "cell_centers",
    "rel_l2_error",
    "direct_fine_solve",
    "StudyRecord",
    "MemoryModel",
    "run_study",
    "run_full_study",
    "full_grid_configs",
    "observed_order",
    "quad_ref",
    "emit_csv",
    "emit_plot",
    "memory_report",
    "seed_check",
    "available_backends",
    "get_backend",
    "set_backend",
    "__version__",
]
