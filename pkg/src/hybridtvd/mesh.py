"""Uniform cell-centred grids, ghost-cell filling and CFL time-step control.

Fields carry ``ghost`` layers on each side of every gridded axis. For 2D the
storage is row-major with shape ``(ny + 2g, nx + 2g)``: the first index walks
``y`` (rows), the second walks ``x`` (columns). Extra leading axes (conserved
components, batches of sweep lines) are allowed everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from hybridtvd.errors import ConfigurationError

#: Widest stencil any shipped scheme needs: BW reaches i-2 and the sensor i+-2,
#: plus one layer so split-flux increments exist at i+-3/2.
DEFAULT_GHOST = 3


@dataclass(frozen=True)
class Grid1D:
    n_cells: int
    x_min: float
    x_max: float
    ghost: int = DEFAULT_GHOST

    def __post_init__(self):
        if self.n_cells <= 0:
            raise ConfigurationError(f"n_cells must be positive, got {self.n_cells}")
        if not self.x_max > self.x_min:
            raise ConfigurationError("x_max must exceed x_min")
        if self.ghost < 0:
            raise ConfigurationError("ghost must be non-negative")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def n_total(self) -> int:
        return self.n_cells + 2 * self.ghost

    @property
    def interior(self) -> slice:
        return slice(self.ghost, self.ghost + self.n_cells)

    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx

    def with_ghosts(self, interior: np.ndarray) -> np.ndarray:
        """Embed interior values (last axis) into a zero-padded ghosted array."""
        interior = np.asarray(interior, dtype=float)
        shape = interior.shape[:-1] + (self.n_total,)
        out = np.zeros(shape)
        out[..., self.interior] = interior
        return out


@dataclass(frozen=True)
class Grid2D:
    nx: int
    ny: int
    x_bounds: tuple = (0.0, 1.0)
    y_bounds: tuple = (0.0, 1.0)
    ghost: int = DEFAULT_GHOST

    def __post_init__(self):
        if self.nx <= 0 or self.ny <= 0:
            raise ConfigurationError("nx and ny must be positive")
        if not (self.x_bounds[1] > self.x_bounds[0] and self.y_bounds[1] > self.y_bounds[0]):
            raise ConfigurationError("grid bounds must be increasing")

    @property
    def dx(self) -> float:
        return (self.x_bounds[1] - self.x_bounds[0]) / self.nx

    @property
    def dy(self) -> float:
        return (self.y_bounds[1] - self.y_bounds[0]) / self.ny

    @property
    def x_grid(self) -> Grid1D:
        return Grid1D(self.nx, self.x_bounds[0], self.x_bounds[1], self.ghost)

    @property
    def y_grid(self) -> Grid1D:
        return Grid1D(self.ny, self.y_bounds[0], self.y_bounds[1], self.ghost)

    @property
    def interior(self) -> tuple:
        g = self.ghost
        return (slice(g, g + self.ny), slice(g, g + self.nx))

    def centers(self):
        """Return ``(X, Y)`` meshes of cell centres, shape ``(ny, nx)``."""
        x = self.x_grid.centers()
        y = self.y_grid.centers()
        return np.meshgrid(x, y, indexing="xy")

    def flat_index(self, j: int, i: int) -> int:
        """Row-major index of interior cell (row ``j`` in y, column ``i`` in x)."""
        return j * self.nx + i


@dataclass(frozen=True)
class BoundaryPolicy:
    """How ghost layers are filled.

    ``kind`` is ``"periodic"``, ``"outflow"`` (zero-gradient copy of the nearest
    interior cell) or ``"fixed"``. A fixed policy stores the frozen ``left`` and
    ``right`` values; they may be scalars or per-component sequences matching
    the field's leading axis.
    """

    kind: str = "periodic"
    left: object = None
    right: object = None

    KINDS = ("periodic", "outflow", "fixed")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ConfigurationError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "fixed" and (self.left is None or self.right is None):
            raise ConfigurationError("fixed boundary needs left and right states")

    @property
    def periodic(self) -> bool:
        return self.kind == "periodic"


def _fixed_value(value, field_shape):
    value = np.asarray(value, dtype=float)
    if value.ndim == 0:
        return value
    # per-component values broadcast against the leading axis
    return value.reshape(value.shape + (1,) * (len(field_shape) - 1))


def fill_ghosts_axis(field: np.ndarray, ghost: int, policy: BoundaryPolicy, axis: int = -1):
    """Fill ``ghost`` layers at both ends of ``axis`` in place and return the field."""
    if ghost == 0:
        return field
    f = np.moveaxis(field, axis, -1)
    n = f.shape[-1] - 2 * ghost
    if n <= 0:
        raise ConfigurationError("field has no interior cells")
    g = ghost
    if policy.kind == "periodic":
        if n < g:
            raise ConfigurationError("periodic fill needs at least `ghost` interior cells")
        f[..., :g] = f[..., n:n + g]
        f[..., n + g:] = f[..., g:2 * g]
    elif policy.kind == "outflow":
        f[..., :g] = f[..., g:g + 1]
        f[..., n + g:] = f[..., n + g - 1:n + g]
    else:
        f[..., :g] = _fixed_value(policy.left, f.shape)
        f[..., n + g:] = _fixed_value(policy.right, f.shape)
    return field


def fill_ghosts(field: np.ndarray, grid, policy: BoundaryPolicy, required: int = 0) -> np.ndarray:
    """Return a copy of ``field`` with ghost layers populated per ``policy``.

    ``required`` is the stencil radius of the active scheme; a grid with fewer
    ghost layers is a configuration error. Interior values are never touched.
    """
    if grid.ghost < required:
        raise ConfigurationError(
            f"scheme needs {required} ghost layers, grid provides {grid.ghost}"
        )
    out = np.array(field, dtype=float, copy=True)
    if isinstance(grid, Grid2D):
        expected = (grid.ny + 2 * grid.ghost, grid.nx + 2 * grid.ghost)
        if out.shape[-2:] != expected:
            raise ConfigurationError(f"field shape {out.shape} does not match grid {expected}")
        fill_ghosts_axis(out, grid.ghost, policy, axis=-1)
        fill_ghosts_axis(out, grid.ghost, policy, axis=-2)
    else:
        if out.shape[-1] != grid.n_total:
            raise ConfigurationError(
                f"field length {out.shape[-1]} does not match interior + 2*ghost = {grid.n_total}"
            )
        fill_ghosts_axis(out, grid.ghost, policy, axis=-1)
    return out


@dataclass(frozen=True)
class TimeController:
    cfl: float
    t_final: float
    dt_cap: float | None = None

    def __post_init__(self):
        if not 0.0 < self.cfl < 1.0:
            raise ConfigurationError(f"cfl must lie in (0, 1), got {self.cfl}")
        if self.t_final < 0.0:
            raise ConfigurationError("t_final must be non-negative")
        if self.dt_cap is not None and self.dt_cap <= 0.0:
            raise ConfigurationError("dt_cap must be positive")

    def next_dt(self, max_speed: float, dx: float, t_now: float) -> float:
        return next_dt(self, max_speed, dx, t_now)


def next_dt(controller: TimeController, max_speed: float, dx: float, t_now: float) -> float:
    """CFL-limited step, clamped so the run lands exactly on ``t_final``."""
    if max_speed < 0.0:
        raise ValueError("max_speed must be non-negative")
    remaining = controller.t_final - t_now
    if remaining <= 0.0:
        raise ValueError("t_now has already reached t_final")
    candidates = [remaining]
    if max_speed > 0.0:
        candidates.append(controller.cfl * dx / max_speed)
    if controller.dt_cap is not None:
        candidates.append(controller.dt_cap)
    return min(candidates)


@dataclass
class Clock:
    """Accumulates accepted steps; the final step snaps ``t`` onto ``t_final``."""

    controller: TimeController
    t: float = 0.0
    steps: int = 0
    history: list = field(default_factory=list)

    @property
    def done(self) -> bool:
        return self.t >= self.controller.t_final

    def propose(self, max_speed: float, dx: float) -> float:
        return self.controller.next_dt(max_speed, dx, self.t)

    def advance(self, dt: float) -> None:
        remaining = self.controller.t_final - self.t
        self.t = self.controller.t_final if dt >= remaining else self.t + dt
        self.steps += 1
        self.history.append(dt)


def cfl_number(dt: float, dx: float, max_speed: float) -> float:
    return dt * max_speed / dx if dx > 0 else math.inf
