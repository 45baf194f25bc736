"""Drive a full run from a :class:`RunConfig` and collect its diagnostics."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from hybridtvd import kernels
from hybridtvd.config import RunConfig
from hybridtvd.diagnostics import (TV_TOL, TVTrace, convergence_sweep, error_norms,
                                   lmp_violations, total_variation)
from hybridtvd.errors import TVDViolation
from hybridtvd.euler import (cfl_dt_1d, cfl_dt_2d, primitive_from_conserved,
                             riemann_config, shock_tube, step_euler_1d, step_euler_2d_strang)
from hybridtvd.mesh import Clock, Grid1D, Grid2D, TimeController, fill_ghosts
from hybridtvd.models import builtin_ic, builtin_model, exact_solution
from hybridtvd.schemes import SchemeState, max_speed, step_hybrid
from hybridtvd.tvd import interface_speed


def _backend(cfg: RunConfig):
    return None if cfg.backend == "auto" else kernels.get_backend(cfg.backend)


@dataclass
class RunResult:
    """Outcome of a run. ``fields`` holds the final solution columns."""

    config: RunConfig
    steps: int
    t: float
    wall_time: float
    fields: dict
    tv: TVTrace | None = None
    choices: list = field(default_factory=list)  # (step, t, array)
    flags: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)  # (t, fields dict)
    lmp_failures: int = 0
    tv_violations: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)


def _snapshot_times(cfg):
    return sorted(set(cfg.snapshot_times))


def _clock_stop(clock, pending):
    """Cap the next step so it lands on the next pending snapshot time."""
    if pending and clock.t < pending[0]:
        return pending[0] - clock.t
    return None


def _propose(clock, speed, dx, pending):
    dt = clock.propose(speed, dx)
    cap = _clock_stop(clock, pending)
    return min(dt, cap) if cap is not None else dt


# ---------------------------------------------------------------- scalar

def scalar_setup(cfg: RunConfig, n: int | None = None):
    spec = cfg.problem_spec
    model = builtin_model(spec.model, **dict(spec.model_params))
    ic = builtin_ic(spec.ic)
    grid = Grid1D(n or cfg.n, ic.domain[0], ic.domain[1], cfg.ghost)
    return model, ic, grid


def run_scalar(cfg: RunConfig, n: int | None = None, check_lmp: bool = False,
               record: bool = True) -> RunResult:
    """Run a scalar problem, tracking TV every step.

    With ``cfg.strict_tvd`` the first TV increase above the tolerance raises
    :class:`TVDViolation`. ``check_lmp`` counts non-CCS cells failing the
    convex-hull test.
    """
    model, ic, grid = scalar_setup(cfg, n)
    scheme, bc, backend = cfg.scheme_id, cfg.boundary_policy, _backend(cfg)
    x = grid.centers()
    state = SchemeState(ic(x))
    clock = Clock(TimeController(cfg.cfl, cfg.t_final))
    pending = _snapshot_times(cfg)
    trace = TVTrace()
    trace.append(0.0, total_variation(state.u, bc))
    res = RunResult(cfg, 0, 0.0, 0.0, {}, trace)
    lo, hi = grid.ghost, grid.ghost + grid.n_cells
    t0 = time.perf_counter()
    while not clock.done:
        dt = _propose(clock, max_speed(state.u, model), grid.dx, pending)
        old = state.u
        state, choice, flags = step_hybrid(state, model, grid, scheme, dt, bc, cfg.sensor,
                                           cfg.policy, backend)
        clock.advance(dt)
        state = SchemeState(state.u, clock.t)
        tv = total_variation(state.u, bc)
        inc = tv - trace.tv[-1]
        trace.append(clock.t, tv)
        if inc > TV_TOL:
            res.tv_violations.append(clock.steps)
            if cfg.strict_tvd:
                raise TVDViolation(f"total variation grew by {inc:.3e} at step {clock.steps}",
                                   clock.steps, inc)
        if check_lmp:
            ug = fill_ghosts(grid.with_ghosts(old), grid, bc)
            a = interface_speed(ug[:-1], ug[1:], model)
            res.lmp_failures += len(lmp_violations(state.u, ug, a, choice, lo, hi))
        if record:
            res.choices.append((clock.steps, clock.t, choice))
            if flags is not None:
                res.flags.append((clock.steps, clock.t, flags))
        if pending and clock.t >= pending[0]:
            res.snapshots.append((clock.t, {"x": x, "u": state.u.copy()}))
            pending.pop(0)
    res.wall_time = time.perf_counter() - t0
    res.steps, res.t = clock.steps, clock.t
    res.fields = {"x": x, "u": state.u}
    return res


def scalar_errors(cfg: RunConfig, n: int):
    """(L1, Linf) against the exact solution at ``cfg.t_final`` on n cells."""
    res = run_scalar(cfg, n, record=False)
    model, ic, grid = scalar_setup(cfg, n)
    exact = exact_solution(model, ic, grid.centers(), cfg.t_final)
    return error_norms(res.fields["u"], exact, grid.dx)


def convergence(cfg: RunConfig, n_list=None):
    n_list = tuple(n_list or cfg.n_list)
    if not n_list:
        raise ValueError("no N list given")
    return convergence_sweep(lambda n: scalar_errors(cfg, n), n_list)


# ---------------------------------------------------------------- 1D Euler

def _euler_columns(x, U, gamma):
    rho, u, p, _ = primitive_from_conserved(U, gamma)
    return {"x": x, "rho": rho, "u": u, "p": p}


def run_euler_1d(cfg: RunConfig, n: int | None = None, record: bool = True) -> RunResult:
    tube = shock_tube(cfg.problem_spec.tube)
    grid = Grid1D(n or cfg.n, tube.domain[0], tube.domain[1], cfg.ghost)
    state = tube.initial_state(grid)
    scheme, bc, backend = cfg.scheme_id, cfg.boundary_policy, _backend(cfg)
    clock = Clock(TimeController(cfg.cfl, cfg.t_final))
    pending = _snapshot_times(cfg)
    x = grid.centers()
    res = RunResult(cfg, 0, 0.0, 0.0, {})
    t0 = time.perf_counter()
    while not clock.done:
        dt = min(cfl_dt_1d(state, grid.dx, cfg.cfl), cfg.t_final - clock.t)
        cap = _clock_stop(clock, pending)
        dt = min(dt, cap) if cap is not None else dt
        state, choice, flags = step_euler_1d(state, grid, scheme, dt, bc, cfg.sensor,
                                             cfg.policy, backend)
        clock.advance(dt)
        if record:
            res.choices.append((clock.steps, clock.t, choice))
            if flags is not None:
                res.flags.append((clock.steps, clock.t, flags))
        if pending and clock.t >= pending[0]:
            res.snapshots.append((clock.t, _euler_columns(x, state.U, state.gamma)))
            pending.pop(0)
    res.wall_time = time.perf_counter() - t0
    res.steps, res.t = clock.steps, clock.t
    res.fields = _euler_columns(x, state.U, state.gamma)
    return res


# ---------------------------------------------------------------- 2D Euler

def run_riemann2d(cfg: RunConfig, n: int | None = None, x_first: bool = True) -> RunResult:
    conf = riemann_config(cfg.problem_spec.k, cfg.t_final)
    n = n or cfg.n
    grid = Grid2D(n, n, (0.0, 1.0), (0.0, 1.0), cfg.ghost)
    state = conf.initial_state(grid)
    scheme, bc, backend = cfg.scheme_id, cfg.boundary_policy, _backend(cfg)
    clock = Clock(TimeController(cfg.cfl, cfg.t_final))
    t0 = time.perf_counter()
    while not clock.done:
        dt = min(cfl_dt_2d(state, grid, cfg.cfl), cfg.t_final - clock.t)
        state = step_euler_2d_strang(state, grid, scheme, dt, bc, cfg.sensor, cfg.policy,
                                     backend, x_first=x_first)
        clock.advance(dt)
    rho, u, v, p, _ = primitive_from_conserved(state.U, state.gamma)
    X, Y = grid.centers()
    res = RunResult(cfg, clock.steps, clock.t, time.perf_counter() - t0,
                    {"x": X, "y": Y, "rho": rho, "u": u, "v": v, "p": p})
    res.extra["state"] = state
    return res


def mirror_residual(cfg: RunConfig, n: int | None = None) -> float:
    """max |rho(x, y) - rho'(y, x)| between x-first and y-first Strang orderings.

    For data symmetric about the diagonal the two orderings are exact mirror
    images of each other, so the residual measures loss of symmetry.
    """
    a = run_riemann2d(cfg, n, x_first=True).fields["rho"]
    b = run_riemann2d(cfg, n, x_first=False).fields["rho"]
    return float(np.max(np.abs(a - b.T)))


def run_config(cfg: RunConfig, **kw) -> RunResult:
    kind = cfg.problem_spec.kind
    if kind == "scalar":
        return run_scalar(cfg, **kw)
    if kind == "euler1d":
        return run_euler_1d(cfg, **kw)
    return run_riemann2d(cfg, **kw)
