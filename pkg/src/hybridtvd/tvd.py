"""Interface wave speeds, flux splitting, smoothness ratios and TVD bounds.

Interface arrays are indexed so that entry ``k`` sits at ``k + 1/2``, between
cells ``k`` and ``k + 1``; a field of ``n`` cells has ``n - 1`` interfaces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hybridtvd.errors import DegenerateSpeedError

TOL_DEN = 1e-14
TOL_EQ = 1e-12
TOL_LMP = 1e-12


@dataclass(frozen=True)
class InterfaceSpeeds:
    a: np.ndarray
    a_plus: np.ndarray
    a_minus: np.ndarray


@dataclass(frozen=True)
class SplitFluxDiffs:
    dF_plus: np.ndarray
    dF_minus: np.ndarray

    @property
    def total(self):
        return self.dF_plus + self.dF_minus


@dataclass(frozen=True)
class BoundParams:
    kappa1: float
    gamma1: float
    kappa2: float
    gamma2: float

    @classmethod
    def at(cls, nu: float) -> "BoundParams":
        k1, g1 = bounds_lxw(nu)
        k2, g2 = bounds_bw(nu)
        return cls(k1, g1, k2, g2)


def signum(x):
    """Sign with sigma(0) = +1."""
    return np.where(np.asarray(x) >= 0.0, 1.0, -1.0)


def interface_speed(u_i, u_ip1, model):
    """Secant speed dF/du, falling back to f'(u_i) for (nearly) equal states."""
    u_i = np.asarray(u_i, dtype=float)
    u_ip1 = np.asarray(u_ip1, dtype=float)
    du = u_ip1 - u_i
    close = np.abs(du) <= TOL_EQ * (1.0 + np.abs(u_i))
    safe = np.where(close, 1.0, du)
    secant = (model.flux(u_ip1) - model.flux(u_i)) / safe
    out = np.where(close, model.flux_deriv(u_i), secant)
    return out[()] if out.ndim == 0 else out


def split_speeds(a) -> InterfaceSpeeds:
    a = np.asarray(a, dtype=float)
    return InterfaceSpeeds(a, np.maximum(a, 0.0), np.minimum(a, 0.0))


def split_flux_diffs(u, model):
    """Speeds and split flux increments dF+- = a+- du at every interface."""
    u = np.asarray(u, dtype=float)
    speeds = split_speeds(interface_speed(u[..., :-1], u[..., 1:], model))
    du = np.diff(u, axis=-1)
    return speeds, SplitFluxDiffs(speeds.a_plus * du, speeds.a_minus * du)


def safe_ratio(num, den):
    """num/den with 0/0 -> 1 and x/0 -> signed infinity."""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    small = np.abs(den) < TOL_DEN
    with np.errstate(divide="ignore", invalid="ignore"):
        r = num / np.where(small, 1.0, den)
    r = np.where(small, np.where(np.abs(num) < TOL_DEN, 1.0, np.copysign(np.inf, num)), r)
    return r[()] if r.ndim == 0 else r


def smoothness_ratio(diffs: SplitFluxDiffs, speeds: InterfaceSpeeds, lam: float, i: int, sign: str):
    """r+_i or r-_i at cell ``i`` (needs interfaces i-1/2 and i+1/2)."""
    left, right = i - 1, i
    if left < 0 or right >= len(speeds.a):
        raise IndexError(f"cell {i} lacks both neighbouring interfaces")
    if sign == "+":
        ap, dfp = speeds.a_plus, diffs.dF_plus
        num = (1.0 - lam * ap[left]) * dfp[left]
        den = (1.0 - lam * ap[right]) * dfp[right]
    elif sign == "-":
        am, dfm = speeds.a_minus, diffs.dF_minus
        num = (1.0 + lam * am[right]) * dfm[right]
        den = (1.0 + lam * am[left]) * dfm[left]
    else:
        raise ValueError("sign must be '+' or '-'")
    return float(safe_ratio(num, den))


def ratio_fields(diffs: SplitFluxDiffs, speeds: InterfaceSpeeds, lam: float):
    """All four ratios used by the hybrids, per cell; NaN where the stencil is short.

    Returns ``(rp_i, rp_im1, rm_i, rm_ip1)`` shaped like the cell array.
    """
    ap, am = speeds.a_plus, speeds.a_minus
    fp, fm = diffs.dF_plus, diffs.dF_minus
    n = ap.shape[-1] + 1
    shape = ap.shape[:-1] + (n,)
    wp = (1.0 - lam * ap) * fp
    wm = (1.0 + lam * am) * fm
    rp_i = np.full(shape, np.nan)
    rm_i = np.full(shape, np.nan)
    rp_i[..., 1:-1] = safe_ratio(wp[..., :-1], wp[..., 1:])
    rm_i[..., 1:-1] = safe_ratio(wm[..., 1:], wm[..., :-1])
    rp_im1 = np.full(shape, np.nan)
    rm_ip1 = np.full(shape, np.nan)
    rp_im1[..., 2:] = rp_i[..., 1:-1]
    rm_ip1[..., :-2] = rm_i[..., 1:-1]
    return rp_i, rp_im1, rm_i, rm_ip1


def bounds_lxw(nu):
    """(kappa1, gamma1) of the Lax-Wendroff bound set at CFL number ``nu``."""
    x = np.abs(np.asarray(nu, dtype=float))
    k1 = -(1.0 - x) / (1.0 + x)
    g1 = x / (2.0 + x)
    if k1.ndim == 0:
        return float(k1), float(g1)
    return k1, g1


def bounds_bw(nu):
    """(kappa2, gamma2) of the Beam-Warming bound set; nu = 0 is degenerate."""
    x = np.abs(np.asarray(nu, dtype=float))
    if np.any(x == 0.0):
        raise DegenerateSpeedError("Beam-Warming bounds undefined at zero CFL number")
    with np.errstate(divide="ignore"):
        k2 = -(2.0 - x) / x
        g2 = np.where(x >= 1.0, np.inf, (3.0 - x) / np.where(x >= 1.0, 0.5, 1.0 - x))
    if k2.ndim == 0:
        return float(k2), float(g2)
    return k2, g2


def lmp_check(u_new_i: float, u_old, speed_sign: float) -> bool:
    """Convex-hull test of u_new_i against (u_i, upwind neighbour).

    ``u_old`` is the stencil (u_{i-1}, u_i, u_{i+1}).
    """
    if speed_sign == 0:
        raise ValueError("speed_sign must be non-zero")
    u_im1, u_i, u_ip1 = (float(v) for v in u_old)
    up = u_im1 if speed_sign > 0 else u_ip1
    tol = TOL_LMP * (1.0 + abs(u_i))
    return min(u_i, up) - tol <= u_new_i <= max(u_i, up) + tol


def lmp_mask(u_new, u_old, a_left, a_right):
    """Vectorised lmp_check over interior cells; cells with mixed wind pass trivially."""
    u_old = np.asarray(u_old, dtype=float)
    u_new = np.asarray(u_new, dtype=float)
    ui = u_old[1:-1]
    plus = (a_left > 0) & (a_right > 0)
    minus = (a_left < 0) & (a_right < 0)
    up = np.where(plus, u_old[:-2], np.where(minus, u_old[2:], ui))
    tol = TOL_LMP * (1.0 + np.abs(ui))
    un = u_new[1:-1]
    return (np.minimum(ui, up) - tol <= un) & (un <= np.maximum(ui, up) + tol)


def cfl_max(u, model, lam: float) -> float:
    a = interface_speed(u[:-1], u[1:], model)
    return lam * max(float(np.max(np.abs(a))), model.max_speed(u))
