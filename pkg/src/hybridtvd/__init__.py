"""Hybrid TVD schemes for scalar conservation laws and the Euler equations.

Per-cell selection between Lax-Wendroff, Beam-Warming and Fromm increments
under TVD bounds on the smoothness ratios, falling back to a conservative
scheme (optionally steered by a multigrid-ratio shock sensor).
"""

from hybridtvd.config import REGISTRY, RunConfig, registry_config
from hybridtvd.diagnostics import (ConvergenceTable, TVTrace, convergence_sweep, error_norms,
                                   total_variation)
from hybridtvd.errors import (ConfigurationError, DegenerateSpeedError, NoBreakingError,
                              PositivityError, TVDViolation, UnsupportedTimeError)
from hybridtvd.euler import (EulerState1D, EulerState2D, riemann_config, shock_tube,
                             step_euler_1d, step_euler_2d_strang, steger_warming_split)
from hybridtvd.kernels import BACKEND
from hybridtvd.mesh import BoundaryPolicy, Grid1D, Grid2D, TimeController
from hybridtvd.models import breaking_time, builtin_ic, builtin_model, exact_solution
from hybridtvd.runner import run_config
from hybridtvd.schemes import CellChoice, SchemeId, SchemeState, step_hybrid
from hybridtvd.sensor import SensorParams, shock_switch
from hybridtvd.tvd import bounds_bw, bounds_lxw

__version__ = "0.1.0"

__all__ = [
    "REGISTRY", "RunConfig", "registry_config", "ConvergenceTable", "TVTrace",
    "convergence_sweep", "error_norms", "total_variation", "ConfigurationError",
    "DegenerateSpeedError", "NoBreakingError", "PositivityError", "TVDViolation",
    "UnsupportedTimeError", "EulerState1D", "EulerState2D", "riemann_config", "shock_tube",
    "step_euler_1d", "step_euler_2d_strang", "steger_warming_split", "BACKEND",
    "BoundaryPolicy", "Grid1D", "Grid2D", "TimeController", "breaking_time", "builtin_ic",
    "builtin_model", "exact_solution", "run_config", "CellChoice", "SchemeId", "SchemeState",
    "step_hybrid", "SensorParams", "shock_switch", "bounds_bw", "bounds_lxw",
]
