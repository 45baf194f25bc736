"""Multigrid-ratio / local-ratio shock detector with neighbour dilation.

Everything works along the last axis, so a stack of sweep lines ``(rows, n)``
is sensed in one call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from hybridtvd.errors import ConfigurationError

# sixth-order tridiagonal compact first derivative
ALPHA, A_COEF, B_COEF = 1.0 / 3.0, 14.0 / 9.0, 1.0 / 9.0
PAD = 3
MIN_PERIODIC, MIN_BOUNDED = 5, 8


@dataclass(frozen=True)
class SensorParams:
    epsilon: float = 1e-8
    delta: float = 0.8
    mr_threshold: float = 4.0

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ConfigurationError("sensor epsilon must lie in (0, 1)")
        if not 0.0 < self.delta <= 1.0:
            raise ConfigurationError("sensor delta must lie in (0, 1]")
        if self.mr_threshold <= 0.0:
            raise ConfigurationError("mr_threshold must be positive")


def _d1_periodic(f):
    n = f.shape[-1]
    k = 2.0 * np.pi * np.fft.rfftfreq(n)
    symbol = 1j * (A_COEF * np.sin(k) + 0.5 * B_COEF * np.sin(2.0 * k)) / (1.0 + 2.0 * ALPHA * np.cos(k))
    return np.fft.irfft(np.fft.rfft(f, axis=-1) * symbol, n=n, axis=-1)


def _bounded_system(n):
    ab = np.zeros((3, n))
    ab[0, 1:] = ALPHA
    ab[1, :] = 1.0
    ab[2, :-1] = ALPHA
    # one-sided closure at the ends, Pade-4 at the next points
    ab[0, 1] = 2.0
    ab[2, n - 2] = 2.0
    ab[2, 0] = 0.25
    ab[0, 2] = 0.25
    ab[0, n - 1] = 0.25
    ab[2, n - 3] = 0.25
    return ab


def _d1_bounded(f):
    n = f.shape[-1]
    rhs = np.empty_like(f)
    rhs[..., 2:-2] = (0.5 * A_COEF * (f[..., 3:-1] - f[..., 1:-3])
                      + 0.25 * B_COEF * (f[..., 4:] - f[..., :-4]))
    rhs[..., 0] = -2.5 * f[..., 0] + 2.0 * f[..., 1] + 0.5 * f[..., 2]
    rhs[..., -1] = 2.5 * f[..., -1] - 2.0 * f[..., -2] - 0.5 * f[..., -3]
    rhs[..., 1] = 0.75 * (f[..., 2] - f[..., 0])
    rhs[..., -2] = 0.75 * (f[..., -1] - f[..., -3])
    flat = rhs.reshape(-1, n).T
    out = solve_banded((1, 1), _bounded_system(n), flat)
    return out.T.reshape(f.shape)


def _derivatives(f, dx, orders, periodic):
    if not periodic:
        f = np.concatenate([np.repeat(f[..., :1], PAD, -1), f, np.repeat(f[..., -1:], PAD, -1)], -1)
    d1 = _d1_periodic if periodic else _d1_bounded
    out, cur = {}, f
    for k in range(1, max(orders) + 1):
        cur = d1(cur)
        if k in orders:
            val = cur / dx ** k
            out[k] = val if periodic else val[..., PAD:-PAD]
    return out


def _check_size(n, periodic):
    if n < (MIN_PERIODIC if periodic else MIN_BOUNDED):
        raise ConfigurationError(f"compact derivative needs more points, got {n}")


def compact_derivatives(field, dx: float, orders=(4, 5, 6), periodic: bool = True):
    """Derivatives of the requested orders by repeated compact differentiation.

    Non-periodic data is extended by zero-gradient padding before the
    one-sided closures are applied. Returns a dict ``order -> array``.
    """
    f = np.asarray(field, dtype=float)
    _check_size(f.shape[-1], periodic)
    return _derivatives(f, dx, orders, periodic)


def _tsum(f, periodic):
    d = _derivatives(f, 1.0, (4, 5, 6), periodic)
    return np.abs(d[4]) + np.abs(d[5]) + np.abs(d[6])


def truncation_sum(field, periodic: bool = True):
    """T = sum over k=4..6 of |h^k u^(k)|, the grid spacing scaled out."""
    f = np.asarray(field, dtype=float)
    _check_size(f.shape[-1], periodic)
    return _tsum(f, periodic)


def multigrid_ratio(field, dx: float, eps: float, periodic: bool = True):
    """MR = T_C / (T_F + eps) with the coarse grid taken as every other sample.

    Only the fine grid is subject to the minimum size; the coarse grid is
    whatever half of it remains.
    """
    f = np.asarray(field, dtype=float)
    n = f.shape[-1]
    tf = truncation_sum(f, periodic)
    coarse = f[..., ::2]
    tc = _tsum(coarse, periodic and n % 2 == 0)
    tc_fine = tc[..., np.arange(n) // 2]
    return tc_fine / (tf + eps)


def _extend(f, periodic, width=2):
    if periodic:
        return np.concatenate([f[..., -width:], f, f[..., :width]], -1)
    return np.concatenate([np.repeat(f[..., :1], width, -1), f, np.repeat(f[..., -1:], width, -1)], -1)


def local_ratio_field(field, eps: float = 1e-8, periodic: bool = True):
    """LR at every cell from one-sided second-order slopes."""
    f = _extend(np.asarray(field, dtype=float), periodic)
    u, um1, um2, up1, up2 = f[..., 2:-2], f[..., 1:-3], f[..., :-4], f[..., 3:-1], f[..., 4:]
    uL = 3.0 * u - 4.0 * um1 + um2
    uR = 3.0 * u - 4.0 * up1 + up2
    return np.abs((uR * uR - uL * uL) / (uL * uL + uR * uR + eps))


def local_ratio(field, i: int, eps: float = 1e-8) -> float:
    f = np.asarray(field, dtype=float)
    if i < 2 or i > f.shape[-1] - 3:
        raise IndexError("local ratio needs two neighbours on each side")
    uL = 3.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]
    uR = 3.0 * f[i] - 4.0 * f[i + 1] + f[i + 2]
    return abs((uR * uR - uL * uL) / (uL * uL + uR * uR + eps))


def dilate(flags, periodic: bool = True):
    flags = np.asarray(flags, dtype=bool)
    if periodic:
        return flags | np.roll(flags, 1, -1) | np.roll(flags, -1, -1)
    out = flags.copy()
    out[..., 1:] |= flags[..., :-1]
    out[..., :-1] |= flags[..., 1:]
    return out


def shock_switch(field, dx: float, params: SensorParams, periodic: bool = True):
    """Boolean shock switch per cell, after the one-cell dilation."""
    f = np.asarray(field, dtype=float)
    mr = multigrid_ratio(f, dx, params.epsilon, periodic)
    lr = local_ratio_field(f, params.epsilon, periodic)
    flags = (mr <= params.mr_threshold) & (lr >= params.delta)
    return dilate(flags, periodic)
