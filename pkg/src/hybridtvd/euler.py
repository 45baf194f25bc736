"""Compressible Euler equations in 1D and 2D with the system hybrid scheme.

Conserved fields are stacked on the leading axis: ``(rho, rho u, E)`` in 1D
and ``(rho, rho u, rho v, E)`` in 2D. The 1D sweep routine works on batches
of lines shaped ``(m, R, n)`` so that 2D Strang sweeps run all rows at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from hybridtvd import kernels
from hybridtvd.errors import ConfigurationError, PositivityError
from hybridtvd.mesh import BoundaryPolicy, Grid1D, Grid2D, fill_ghosts_axis
from hybridtvd.schemes import CellChoice, SchemeId, get_limiter, policy_code
from hybridtvd.sensor import SensorParams, shock_switch
from hybridtvd.tvd import safe_ratio

GAMMA = 1.4
TOL_SPEED = 1e-10
SYSTEM_CCS = ("upwind1", "lax_wendroff", "force", "flic")


# ------------------------------------------------------------------ state

@dataclass
class EulerState1D:
    U: np.ndarray
    gamma: float = GAMMA
    t: float = 0.0

    @property
    def rho(self):
        return self.U[0]

    @property
    def mom(self):
        return self.U[1]

    @property
    def energy(self):
        return self.U[2]

    @classmethod
    def from_primitive(cls, rho, u, p, gamma=GAMMA, t=0.0):
        return cls(conserved_from_primitive(rho, u, p, gamma=gamma), gamma, t)


@dataclass
class EulerState2D:
    U: np.ndarray  # (4, ny, nx)
    gamma: float = GAMMA
    t: float = 0.0

    @property
    def rho(self):
        return self.U[0]

    @classmethod
    def from_primitive(cls, rho, u, v, p, gamma=GAMMA, t=0.0):
        return cls(conserved_from_primitive(rho, u, p, v=v, gamma=gamma), gamma, t)


def conserved_from_primitive(rho, u, p, v=None, gamma=GAMMA):
    rho, u, p = (np.asarray(q, dtype=float) for q in (rho, u, p))
    if v is None:
        return np.stack(np.broadcast_arrays(rho, rho * u, p / (gamma - 1.0) + 0.5 * rho * u * u))
    v = np.asarray(v, dtype=float)
    e = p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v)
    return np.stack(np.broadcast_arrays(rho, rho * u, rho * v, e))


def _first_bad(mask):
    idx = np.argwhere(mask)
    return tuple(int(k) for k in idx[0]) if len(idx) else None


def primitive_from_conserved(U, gamma=GAMMA, check=True):
    """(rho, u, p, c) for 3 components or (rho, u, v, p, c) for 4.

    Raises :class:`PositivityError` naming the first cell with rho <= 0 or
    p <= 0 when ``check`` is set.
    """
    U = np.asarray(U, dtype=float)
    rho = U[0]
    if check and not np.all(rho > 0.0):
        bad = _first_bad(~(rho > 0.0))
        raise PositivityError(f"non-positive density at cell {bad}", index=bad)
    u = U[1] / rho
    if U.shape[0] == 4:
        v = U[2] / rho
        p = (gamma - 1.0) * (U[3] - 0.5 * rho * (u * u + v * v))
    else:
        v = None
        p = (gamma - 1.0) * (U[2] - 0.5 * rho * u * u)
    if check and not np.all(p > 0.0):
        bad = _first_bad(~(p > 0.0))
        raise PositivityError(f"non-positive pressure at cell {bad}", index=bad)
    c = np.sqrt(gamma * np.abs(p) / rho)
    return (rho, u, p, c) if v is None else (rho, u, v, p, c)


def _unpack(U, gamma, check=True):
    prim = primitive_from_conserved(U, gamma, check)
    if len(prim) == 4:
        rho, u, p, c = prim
        return rho, u, None, p, c
    return prim


def physical_flux(U, gamma=GAMMA):
    """x-direction flux F(U)."""
    rho, u, v, p, _ = _unpack(U, gamma, check=False)
    E = U[-1]
    if v is None:
        return np.stack([rho * u, rho * u * u + p, u * (E + p)])
    return np.stack([rho * u, rho * u * u + p, rho * u * v, u * (E + p)])


def steger_warming_split(U, gamma=GAMMA):
    """Steger-Warming flux vector splitting, ``(F_plus, F_minus)``."""
    rho, u, v, _, c = _unpack(U, gamma)
    lam = (u - c, u, u + c)
    q2 = u * u if v is None else u * u + v * v
    H = c * c / (gamma - 1.0) + 0.5 * q2
    K = rho / (2.0 * gamma)
    out = []
    for sgn in (1.0, -1.0):
        l1, l2, l3 = (0.5 * (x + sgn * np.abs(x)) for x in lam)
        mass = l1 + 2.0 * (gamma - 1.0) * l2 + l3
        rows = [K * mass, K * ((u - c) * l1 + 2.0 * (gamma - 1.0) * u * l2 + (u + c) * l3)]
        if v is not None:
            rows.append(K * v * mass)
        rows.append(K * ((H - u * c) * l1 + (gamma - 1.0) * q2 * l2 + (H + u * c) * l3))
        out.append(np.stack(rows))
    return out[0], out[1]


def sigma_bounds(U, gamma=GAMMA):
    """Per-interface (sigma_max, sigma_min) of characteristic speed magnitudes."""
    _, u, _, _, c = _unpack(U, gamma)
    mags = np.stack([np.abs(u), np.abs(u - c), np.abs(u + c)])
    hi, lo = mags.max(axis=0), mags.min(axis=0)
    return (np.maximum(hi[..., :-1], hi[..., 1:]), np.maximum(lo[..., :-1], lo[..., 1:]))


def _ordered_eigs(U, gamma):
    """Eigenvalues of the Jacobian at the interface-average state, one per component."""
    Ubar = 0.5 * (U[..., :-1] + U[..., 1:])
    _, u, _, _, c = _unpack(Ubar, gamma, check=False)
    if U.shape[0] == 3:
        return np.stack([u - c, u, u + c])
    return np.stack([u - c, u, u, u + c])


def system_wave_speeds(U, gamma=GAMMA):
    """Per-component secant speeds of the full flux, magnitude clamped to [sigma_min, sigma_max]."""
    U = np.asarray(U, dtype=float)
    F = physical_flux(U, gamma)
    dU = np.diff(U, axis=-1)
    dF = np.diff(F, axis=-1)
    close = np.abs(dU) < TOL_SPEED * (1.0 + np.abs(U[..., :-1]))
    a = np.where(close, _ordered_eigs(U, gamma), dF / np.where(close, 1.0, dU))
    smax, smin = sigma_bounds(U, gamma)
    mag = np.clip(np.abs(a), smin, smax)
    return np.where(a >= 0.0, mag, -mag)


def split_wave_speeds(U, dFp, dFm, gamma=GAMMA):
    """Clamped split speeds ``(a_plus >= 0, a_minus <= 0)`` per component and interface.

    Each part uses the secant of its own split flux increment, so that
    dF+- and a+- describe the same wave family.
    """
    dU = np.diff(U, axis=-1)
    close = np.abs(dU) < TOL_SPEED * (1.0 + np.abs(U[..., :-1]))
    safe = np.where(close, 1.0, dU)
    eig = np.abs(_ordered_eigs(U, gamma))
    smax, smin = sigma_bounds(U, gamma)
    ap = np.clip(np.where(close, eig, np.abs(dFp / safe)), smin, smax)
    am = np.clip(np.where(close, eig, np.abs(dFm / safe)), smin, smax)
    return ap, -am


def max_signal_speed(U, gamma=GAMMA, axis_velocity=1):
    """max(|u| + c) using the velocity stored in component ``axis_velocity``."""
    prim = _unpack(U, gamma)
    rho, c = prim[0], prim[-1]
    vel = U[axis_velocity] / rho
    return float(np.max(np.abs(vel) + c))


# ------------------------------------------------------------- CCS fluxes

def ccs_flux(scheme: SchemeId, U, F, Fp, Fm, lam, gamma=GAMMA):
    """Conservative fallback flux at every interface of a batch of lines."""
    kind = scheme.kind
    if kind == "upwind1":
        return Fp[..., :-1] + Fm[..., 1:]
    dU = np.diff(U, axis=-1)
    U_ri = 0.5 * (U[..., :-1] + U[..., 1:]) - 0.5 * lam * np.diff(F, axis=-1)
    F_ri = physical_flux(U_ri, gamma)
    if kind == "lax_wendroff":
        return F_ri
    F_lf = 0.5 * (F[..., :-1] + F[..., 1:]) - 0.5 * dU / lam
    force = 0.5 * (F_lf + F_ri)
    if kind == "force":
        return force
    if kind == "flic":
        phi = get_limiter(scheme.limiter)
        rl = np.full(dU.shape, 0.0)
        rr = np.full(dU.shape, 0.0)
        rl[..., 1:-1] = safe_ratio(dU[..., :-2], dU[..., 1:-1])
        rr[..., 1:-1] = safe_ratio(dU[..., 2:], dU[..., 1:-1])
        lim = np.minimum(phi(rl), phi(rr)).min(axis=0, keepdims=True)
        return force + lim * (F_ri - force)
    raise ConfigurationError(f"{scheme} is not available as a system CCS")


def validate_system_scheme(scheme: SchemeId):
    base = scheme.ccs if scheme.is_hybrid else scheme
    if base.kind not in SYSTEM_CCS:
        raise ConfigurationError(
            f"{base} cannot be used for Euler; choose one of {', '.join(SYSTEM_CCS)}")


# -------------------------------------------------------------- 1D sweep

@dataclass
class SweepResult:
    U: np.ndarray
    choices: np.ndarray | None = None
    flags: np.ndarray | None = None
    extra: dict = field(default_factory=dict)


def sweep(U, lam, scheme: SchemeId, ghost: int, boundary: BoundaryPolicy, sensor=None,
          gamma=GAMMA, policy="theorem", backend=None) -> SweepResult:
    """One x-direction step on a batch of lines.

    ``U`` holds interior values ``(m, R, n)``; ghosts are added here.
    """
    U = np.asarray(U, dtype=float)
    m, R, n = U.shape
    g = ghost
    Ug = np.zeros((m, R, n + 2 * g))
    Ug[..., g:g + n] = U
    fill_ghosts_axis(Ug, g, boundary, axis=-1)
    lo, hi = g, g + n

    F = physical_flux(Ug, gamma)
    Fp, Fm = steger_warming_split(Ug, gamma)

    flags = None
    if scheme.is_hybrid:
        dFp = np.diff(Fp, axis=-1)
        dFm = np.diff(Fm, axis=-1)
        ap, am = split_wave_speeds(Ug, dFp, dFm, gamma)
        force = None
        if scheme.shock_corrected:
            if sensor is None:
                raise ConfigurationError(f"{scheme} needs sensor parameters")
            flags = shock_switch(U[0], 1.0, sensor, periodic=boundary.periodic)
            force = np.zeros((R, n + 2 * g), dtype=bool)
            force[:, lo:hi] = flags
            force = np.tile(force, (m, 1))
        update = backend or kernels.hybrid_update
        flat = lambda a: a.reshape(m * R, -1)
        unew, ccs, choice = update(flat(Ug), flat(dFp), flat(dFm), flat(ap), flat(am), float(lam),
                                   scheme.family, policy_code(policy), True, force, lo, hi)
        unew = unew.reshape(m, R, n)
        ccs = ccs.reshape(m, R, n)
        choice = choice.reshape(m, R, n)[0]
        if ccs.any():
            fc = ccs_flux(scheme.ccs, Ug, F, Fp, Fm, lam, gamma)
            ucons = Ug[..., lo:hi] - lam * (fc[..., lo:hi] - fc[..., lo - 1:hi - 1])
            unew = np.where(ccs, ucons, unew)
    else:
        fc = ccs_flux(scheme, Ug, F, Fp, Fm, lam, gamma)
        unew = Ug[..., lo:hi] - lam * (fc[..., lo:hi] - fc[..., lo - 1:hi - 1])
        choice = np.full((R, n), CellChoice.CCS, dtype=np.int8)
    if not np.all(np.isfinite(unew)):
        raise PositivityError("non-finite state produced by the sweep")
    primitive_from_conserved(unew, gamma)
    return SweepResult(unew, choice, flags)


def step_euler_1d(state: EulerState1D, grid: Grid1D, scheme: SchemeId, dt: float,
                  boundary: BoundaryPolicy, sensor: SensorParams | None = None,
                  policy="theorem", backend=None):
    """Advance a 1D Euler state by ``dt``; returns ``(state, choices, flags)``."""
    res = sweep(state.U[:, None, :], dt / grid.dx, scheme, grid.ghost, boundary, sensor,
                state.gamma, policy, backend)
    flags = None if res.flags is None else res.flags[0]
    return EulerState1D(res.U[:, 0, :], state.gamma, state.t + dt), res.choices[0], flags


def cfl_dt_1d(state: EulerState1D, dx: float, cfl: float) -> float:
    return cfl * dx / max_signal_speed(state.U, state.gamma)


# ------------------------------------------------------------------ 2D

_SWAP = [0, 2, 1, 3]


def _x_sweep_2d(U, lam, scheme, ghost, boundary, sensor, gamma, policy, backend):
    return sweep(U, lam, scheme, ghost, boundary, sensor, gamma, policy, backend).U


def _y_sweep_2d(U, lam, scheme, ghost, boundary, sensor, gamma, policy, backend):
    # transpose so columns become lines and the normal momentum sits in slot 1
    Ut = np.ascontiguousarray(U[_SWAP].transpose(0, 2, 1))
    out = sweep(Ut, lam, scheme, ghost, boundary, sensor, gamma, policy, backend).U
    return np.ascontiguousarray(out.transpose(0, 2, 1)[_SWAP])


def step_euler_2d_strang(state: EulerState2D, grid: Grid2D, scheme: SchemeId, dt: float,
                         boundary: BoundaryPolicy, sensor: SensorParams | None = None,
                         policy="theorem", backend=None, x_first: bool = True):
    """X(dt/2) Y(dt) X(dt/2); with ``x_first=False`` the roles of x and y swap."""
    args = (scheme, grid.ghost, boundary, sensor, state.gamma, policy, backend)
    outer, inner = (_x_sweep_2d, _y_sweep_2d) if x_first else (_y_sweep_2d, _x_sweep_2d)
    d_out = grid.dx if x_first else grid.dy
    d_in = grid.dy if x_first else grid.dx
    U = outer(state.U, 0.5 * dt / d_out, *args)
    U = inner(U, dt / d_in, *args)
    U = outer(U, 0.5 * dt / d_out, *args)
    return EulerState2D(U, state.gamma, state.t + dt)


def cfl_dt_2d(state: EulerState2D, grid: Grid2D, cfl: float) -> float:
    sx = max_signal_speed(state.U, state.gamma, axis_velocity=1)
    sy = max_signal_speed(state.U, state.gamma, axis_velocity=2)
    return cfl * min(grid.dx / sx, grid.dy / sy)


# ------------------------------------------------------------ problems

@dataclass(frozen=True)
class ShockTube:
    name: str
    domain: tuple
    x0: float
    left: tuple  # (rho, u, p)
    right: tuple
    t_final: float
    right_density: object = None  # optional callable rho(x) on the right

    def initial_state(self, grid: Grid1D, gamma=GAMMA) -> EulerState1D:
        x = grid.centers()
        left = x < self.x0
        rho = np.where(left, self.left[0], self.right[0])
        if self.right_density is not None:
            rho = np.where(left, self.left[0], self.right_density(x))
        u = np.where(left, self.left[1], self.right[1])
        p = np.where(left, self.left[2], self.right[2])
        return EulerState1D.from_primitive(rho, u, p, gamma)


SHOCK_TUBES = {
    "sod": ShockTube("sod", (-10.0, 10.0), 0.0, (1.0, 0.0, 100000.0), (0.125, 0.0, 10000.0), 0.01),
    "lax": ShockTube("lax", (0.0, 2.0), 1.0, (0.445, 0.698, 3.528), (0.5, 0.0, 0.571), 0.32),
    "laney": ShockTube("laney", (-10.0, 15.0), 0.0, (1.0, 0.0, 100000.0), (0.01, 0.0, 1000.0), 0.01),
    "shuosher": ShockTube("shuosher", (-5.0, 5.0), -4.0, (3.857143, 2.629369, 10.3333),
                          (1.0, 0.0, 1.0), 1.8, right_density=lambda x: 1.0 + 0.2 * np.sin(5.0 * x)),
}


def shock_tube(name: str) -> ShockTube:
    try:
        return SHOCK_TUBES[name]
    except KeyError:
        raise KeyError(f"unknown shock tube {name!r}; known: {', '.join(SHOCK_TUBES)}") from None


@dataclass(frozen=True)
class RiemannConfig2D:
    """Quadrant states as (p, rho, u, v); 1: NE, 2: NW, 3: SW, 4: SE."""

    k: int
    states: tuple
    t_final: float

    def initial_state(self, grid: Grid2D, gamma=GAMMA) -> EulerState2D:
        X, Y = grid.centers()
        east, north = X > 0.5, Y > 0.5
        quad = np.where(north, np.where(east, 0, 1), np.where(east, 3, 2))
        table = np.array(self.states)
        p, rho, u, v = (table[quad, j] for j in range(4))
        return EulerState2D.from_primitive(rho, u, v, p, gamma)


_RIEMANN = {
    1: ((1.0, 1.0, 0.0, 0.0), (0.4, 0.5197, -0.7259, 0.0),
        (0.0439, 0.1072, -0.7259, -1.4045), (0.15, 0.2579, 0.0, -1.4045)),
    2: ((1.0, 1.0, 0.0, 0.0), (0.4, 0.5197, -0.7259, 0.0),
        (1.0, 1.0, -0.7259, -0.7259), (0.4, 0.5197, 0.0, -0.7259)),
    3: ((1.5, 1.5, 0.0, 0.0), (0.3, 0.5323, 1.206, 0.0),
        (0.029, 0.138, 1.206, 1.206), (0.3, 0.5323, 0.0, 1.206)),
    4: ((1.1, 1.1, 0.0, 0.0), (0.35, 0.5065, 0.8939, 0.0),
        (1.1, 1.1, 0.8939, 0.8939), (0.35, 0.5065, 0.0, 0.8939)),
    5: ((1.0, 1.0, -0.75, -0.5), (1.0, 2.0, -0.75, 0.5),
        (1.0, 1.0, 0.75, 0.5), (1.0, 3.0, 0.75, -0.5)),
    6: ((1.0, 1.0, 0.75, -0.5), (1.0, 2.0, 0.75, 0.5),
        (1.0, 1.0, -0.75, 0.5), (1.0, 3.0, -0.75, -0.5)),
    7: ((1.0, 1.0, 0.1, 0.1), (0.4, 0.5197, -0.6259, 0.1),
        (0.4, 0.8, 0.1, 0.1), (0.4, 0.5197, 0.1, -0.6259)),
    8: ((0.4, 0.5197, 0.1, 0.1), (1.0, 1.0, -0.6259, 0.1),
        (1.0, 0.8, 0.1, 0.1), (1.0, 1.0, 0.1, -0.6259)),
    9: ((1.0, 1.0, 0.0, 0.3), (1.0, 2.0, 0.0, -0.3),
        (0.4, 1.039, 0.0, -0.8133), (0.4, 0.5197, 0.0, -0.4259)),
    10: ((1.0, 1.0, 0.0, 0.4297), (1.0, 0.5, 0.0, 0.6076),
         (0.3333, 0.2281, 0.0, -0.6076), (0.3333, 0.4562, 0.0, -0.4297)),
    11: ((1.0, 1.0, 0.1, 0.0), (0.4, 0.5313, 0.8276, 0.0),
         (0.4, 0.8, 0.1, 0.0), (0.4, 0.5313, 0.1, 0.7276)),
    12: ((0.4, 0.5313, 0.1, 0.1), (1.0, 1.0222, -0.6179, 0.1),
         (1.0, 0.8, 0.1, 0.1), (1.0, 1.0, 0.1, 0.8276)),
}
RIEMANN_T_FINAL = {k: (0.2 if k == 1 else 0.25) for k in _RIEMANN}


def riemann_config(k: int, t_final: float | None = None) -> RiemannConfig2D:
    if k not in _RIEMANN:
        raise ConfigurationError(f"configuration must be in 1..12, got {k}")
    return RiemannConfig2D(k, _RIEMANN[k], RIEMANN_T_FINAL[k] if t_final is None else t_final)
