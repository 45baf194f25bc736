"""Base numerical fluxes, limiters, scheme identifiers and the scalar hybrid step."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

import numpy as np

from hybridtvd import kernels
from hybridtvd.errors import ConfigurationError
from hybridtvd.mesh import BoundaryPolicy, Grid1D, fill_ghosts
from hybridtvd.tvd import interface_speed, safe_ratio


class CellChoice(enum.IntEnum):
    FROMM = kernels.FROMM
    LXW = kernels.LXW
    BW = kernels.BWC
    CCS = kernels.CCS


# ---------------------------------------------------------------- limiters

def minbee(r):
    return np.maximum(0.0, np.minimum(1.0, r))


def superbee(r):
    r = np.asarray(r, dtype=float)
    return np.maximum(0.0, np.maximum(np.minimum(2.0 * r, 1.0), np.minimum(r, 2.0)))


LIMITERS = {"minbee": minbee, "superbee": superbee}


def get_limiter(name):
    try:
        return LIMITERS[name]
    except KeyError:
        raise ConfigurationError(f"unknown limiter {name!r}; known: {', '.join(LIMITERS)}") from None


# ------------------------------------------------------- pointwise fluxes

def flux_lxw(F_i, F_ip1, a_half, lam, du):
    return 0.5 * (F_ip1 + F_i) - 0.5 * lam * a_half * a_half * du


def flux_lf(F_i, F_ip1, lam, du):
    return 0.5 * (F_ip1 + F_i) - 0.5 * du / lam


def flux_upwind(F_i, F_ip1, a_half, du):
    return 0.5 * (F_ip1 + F_i) - 0.5 * np.abs(a_half) * du


def flux_force(F_i, F_ip1, u_i, u_ip1, lam, a_half):
    """Average of the Lax-Friedrichs and Lax-Wendroff fluxes."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    du = u_ip1 - u_i
    return 0.5 * (flux_lf(F_i, F_ip1, lam, du) + flux_lxw(F_i, F_ip1, a_half, lam, du))


def flux_bw(u, F, a, lam, i, wind_sign):
    """Beam-Warming flux at interface i+1/2 from cell, flux and speed arrays.

    ``a[k]`` is the speed at ``k + 1/2``.
    """
    if wind_sign >= 0:
        return F[i] + 0.5 * a[i - 1] * (1.0 - lam * a[i - 1]) * (u[i] - u[i - 1])
    return F[i + 1] - 0.5 * a[i + 1] * (1.0 + lam * a[i + 1]) * (u[i + 2] - u[i + 1])


def flux_fromm(u, F, a, lam, i, wind_sign):
    lxw = flux_lxw(F[i], F[i + 1], a[i], lam, u[i + 1] - u[i])
    return 0.5 * (lxw + flux_bw(u, F, a, lam, i, wind_sign))


def upwind_ratio(du, a):
    """Classical limiter argument: upwind jump over local jump, per interface."""
    r = np.full(du.shape, np.nan)
    r[..., 1:-1] = np.where(a[..., 1:-1] >= 0.0,
                            safe_ratio(du[..., :-2], du[..., 1:-1]),
                            safe_ratio(du[..., 2:], du[..., 1:-1]))
    return r


def flux_flic(u, F, a, lam, i, limiter="minbee"):
    """FORCE blended toward Lax-Wendroff by phi(r) at interface i+1/2."""
    phi = get_limiter(limiter) if isinstance(limiter, str) else limiter
    du = np.diff(np.asarray(u, dtype=float))
    r = upwind_ratio(du, np.asarray(a, dtype=float))[i]
    lxw = flux_lxw(F[i], F[i + 1], a[i], lam, du[i])
    force = flux_force(F[i], F[i + 1], u[i], u[i + 1], lam, a[i])
    return force + phi(r) * (lxw - force)


# ------------------------------------------------------------ scheme ids

BASE_KINDS = ("upwind1", "lax_wendroff", "beam_warming", "fromm", "force", "flic", "tvd_lw")
HYBRID_KINDS = ("hybrid_lw", "hybrid_bw", "hybrid_flwbw")
_FAMILY = {"hybrid_lw": kernels.LW, "hybrid_bw": kernels.BW, "hybrid_flwbw": kernels.FLWBW}
_ALIASES = {"lw": "hybrid_lw", "bw": "hybrid_bw", "flwbw": "hybrid_flwbw",
            "lxw": "lax_wendroff", "upwind": "upwind1"}


@dataclass(frozen=True)
class SchemeId:
    """A scheme: a base flux, a hybrid with a CCS, or a shock-corrected hybrid.

    Text form: ``upwind1``, ``flic(minbee)``, ``hybrid_flwbw(force)``,
    ``shock_corrected(hybrid_flwbw(flic(minbee)))``.
    """

    kind: str
    limiter: str | None = None
    ccs: "SchemeId | None" = None
    shock_corrected: bool = False

    def __post_init__(self):
        if self.kind not in BASE_KINDS + HYBRID_KINDS:
            raise ConfigurationError(f"unknown scheme kind {self.kind!r}")
        if self.kind in ("flic", "tvd_lw"):
            get_limiter(self.limiter)
        elif self.limiter is not None:
            raise ConfigurationError(f"{self.kind} takes no limiter")
        if self.kind in HYBRID_KINDS:
            if self.ccs is None:
                raise ConfigurationError(f"{self.kind} needs a CCS")
            if self.ccs.is_hybrid or self.ccs.shock_corrected:
                raise ConfigurationError("the CCS of a hybrid must be a base scheme")
        elif self.ccs is not None:
            raise ConfigurationError(f"{self.kind} does not take a CCS")
        if self.shock_corrected and self.kind not in HYBRID_KINDS:
            raise ConfigurationError("shock correction wraps a hybrid scheme")

    @property
    def is_hybrid(self) -> bool:
        return self.kind in HYBRID_KINDS

    @property
    def family(self) -> int:
        return _FAMILY[self.kind]

    def __str__(self) -> str:
        if self.kind in ("flic", "tvd_lw"):
            s = f"{self.kind}({self.limiter})"
        elif self.is_hybrid:
            s = f"{self.kind}({self.ccs})"
        else:
            s = self.kind
        return f"shock_corrected({s})" if self.shock_corrected else s

    @classmethod
    def parse(cls, text: str) -> "SchemeId":
        text = re.sub(r"\s+", "", text)
        m = re.fullmatch(r"([a-z_0-9]+)(?:\((.*)\))?", text)
        if not m:
            raise ConfigurationError(f"cannot parse scheme {text!r}")
        head, arg = m.group(1), m.group(2)
        head = _ALIASES.get(head, head)
        if head == "shock_corrected":
            if not arg:
                raise ConfigurationError("shock_corrected needs an inner hybrid")
            inner, _, ccs = _split_top(arg)
            inner_id = cls.parse(inner if not ccs else f"{inner}({ccs})")
            if not inner_id.is_hybrid:
                raise ConfigurationError("shock_corrected wraps a hybrid scheme")
            return cls(inner_id.kind, ccs=inner_id.ccs, shock_corrected=True)
        if head in ("flic", "tvd_lw"):
            return cls(head, limiter=arg or "minbee")
        if head in HYBRID_KINDS:
            if not arg:
                raise ConfigurationError(f"{head} needs a CCS argument")
            return cls(head, ccs=cls.parse(arg))
        if arg:
            raise ConfigurationError(f"{head} takes no argument")
        return cls(head)


def _split_top(arg):
    depth = 0
    for k, ch in enumerate(arg):
        depth += ch == "("
        depth -= ch == ")"
        if ch == "," and depth == 0:
            return arg[:k], ",", arg[k + 1:]
    return arg, "", ""


_BASE_CHOICE = {"lax_wendroff": CellChoice.LXW, "beam_warming": CellChoice.BW,
                "fromm": CellChoice.FROMM}

POLICIES = {"theorem": kernels.THEOREM, "accept-all": kernels.ACCEPT_ALL,
            "reject-all": kernels.REJECT_ALL}


def policy_code(policy) -> int:
    if isinstance(policy, int):
        return policy
    try:
        return POLICIES[policy]
    except KeyError:
        raise ConfigurationError(f"unknown bound policy {policy!r}") from None


# ----------------------------------------------------- interface fluxes

def interface_fluxes(scheme: SchemeId, u, F, a, lam):
    """Numerical flux of a base scheme at every interface; NaN where the stencil is short."""
    u = np.asarray(u, dtype=float)
    du = np.diff(u, axis=-1)
    Fi, Fip1 = F[..., :-1], F[..., 1:]
    kind = scheme.kind
    if kind == "upwind1":
        return flux_upwind(Fi, Fip1, a, du)
    lxw = flux_lxw(Fi, Fip1, a, lam, du)
    if kind == "lax_wendroff":
        return lxw
    if kind == "force":
        return 0.5 * (flux_lf(Fi, Fip1, lam, du) + lxw)
    if kind in ("beam_warming", "fromm"):
        bw = np.full(du.shape, np.nan)
        c = a[..., 1:-1]
        pos = F[..., 1:-2] + 0.5 * a[..., :-2] * (1.0 - lam * a[..., :-2]) * du[..., :-2]
        neg = F[..., 2:-1] - 0.5 * a[..., 2:] * (1.0 + lam * a[..., 2:]) * du[..., 2:]
        bw[..., 1:-1] = np.where(c >= 0.0, pos, neg)
        return bw if kind == "beam_warming" else 0.5 * (lxw + bw)
    phi = get_limiter(scheme.limiter)(upwind_ratio(du, a))
    if kind == "flic":
        force = 0.5 * (flux_lf(Fi, Fip1, lam, du) + lxw)
        return force + phi * (lxw - force)
    if kind == "tvd_lw":
        upw = flux_upwind(Fi, Fip1, a, du)
        return upw + phi * (lxw - upw)
    raise ConfigurationError(f"{scheme} has no single interface flux")


def conservative_update(u, flux, lam, lo, hi):
    """u_i - lam (F_{i+1/2} - F_{i-1/2}) for cells lo..hi-1."""
    return u[..., lo:hi] - lam * (flux[..., lo:hi] - flux[..., lo - 1:hi - 1])


# ------------------------------------------------------------- stepping

@dataclass(frozen=True)
class SchemeState:
    """Interior cell values and the time they belong to."""

    u: np.ndarray
    t: float = 0.0


def max_speed(u, model) -> float:
    """max over cells of |f'(u)| and over interfaces of |a|."""
    a = interface_speed(u[:-1], u[1:], model)
    return max(model.max_speed(u), float(np.max(np.abs(a))) if a.size else 0.0)


def hybrid_cells(u, F, a, lam, scheme: SchemeId, lo, hi, force_ccs=None,
                 policy="theorem", backend=None):
    """Hybrid update of scalar cells lo..hi-1 including the CCS merge.

    ``u``, ``F`` are ghosted cell arrays, ``a`` the interface speeds.
    Returns ``(unew, choices)`` for those cells.
    """
    du = np.diff(u)
    ap, am = np.maximum(a, 0.0), np.minimum(a, 0.0)
    update = backend or kernels.hybrid_update
    unew, ccs, choice = update(u[None, :], (ap * du)[None, :], (am * du)[None, :],
                               ap[None, :], am[None, :], float(lam), scheme.family,
                               policy_code(policy), False, force_ccs, lo, hi)
    unew, ccs, choice = unew[0], ccs[0], choice[0]
    if ccs.any():
        fc = interface_fluxes(scheme.ccs, u, F, a, lam)
        unew = np.where(ccs, conservative_update(u, fc, lam, lo, hi), unew)
    return unew, choice


def step_hybrid(state: SchemeState, model, grid: Grid1D, scheme: SchemeId, dt: float,
                boundary: BoundaryPolicy, sensor=None, policy="theorem", backend=None):
    """Advance one step of size ``dt``; returns ``(new_state, choices, flags)``.

    ``sensor`` is a :class:`hybridtvd.sensor.SensorParams`; it is required for
    shock-corrected schemes and ignored otherwise. ``flags`` is the shock
    switch (or None).
    """
    from hybridtvd.sensor import shock_switch

    g, n = grid.ghost, grid.n_cells
    u = fill_ghosts(grid.with_ghosts(state.u), grid, boundary, required=3)
    lam = dt / grid.dx
    F = model.flux(u)
    a = interface_speed(u[:-1], u[1:], model)
    lo, hi = g, g + n
    flags = None
    if scheme.is_hybrid:
        force = None
        if scheme.shock_corrected:
            if sensor is None:
                raise ConfigurationError(f"{scheme} needs sensor parameters")
            flags = shock_switch(state.u, grid.dx, sensor, periodic=boundary.periodic)
            force = np.zeros(u.shape, dtype=bool)
            force[lo:hi] = flags
        unew, choice = hybrid_cells(u, F, a, lam, scheme, lo, hi, force, policy, backend)
    else:
        flux = interface_fluxes(scheme, u, F, a, lam)
        unew = conservative_update(u, flux, lam, lo, hi)
        choice = np.full(n, _BASE_CHOICE.get(scheme.kind, CellChoice.CCS), dtype=np.int8)
    if not np.all(np.isfinite(unew)):
        raise FloatingPointError("non-finite values produced by the step")
    return SchemeState(unew, state.t + dt), choice, flags
