"""Scalar flux models, the initial-condition registry and exact solutions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from hybridtvd.errors import NoBreakingError, UnsupportedTimeError


@dataclass(frozen=True)
class ScalarModel:
    name: str
    flux: Callable[[np.ndarray], np.ndarray]
    flux_deriv: Callable[[np.ndarray], np.ndarray]
    params: dict = field(default_factory=dict)
    sonic_points: tuple = ()

    def max_speed(self, u: np.ndarray) -> float:
        return float(np.max(np.abs(self.flux_deriv(np.asarray(u, dtype=float)))))


def advection(a: float = 1.0) -> ScalarModel:
    a = float(a)
    return ScalarModel(
        name="advection",
        flux=lambda u: a * np.asarray(u, dtype=float),
        flux_deriv=lambda u: np.full_like(np.asarray(u, dtype=float), a),
        params={"a": a},
    )


def burgers() -> ScalarModel:
    return ScalarModel(
        name="burgers",
        flux=lambda u: 0.5 * np.asarray(u, dtype=float) ** 2,
        flux_deriv=lambda u: np.asarray(u, dtype=float) * 1.0,
        sonic_points=(0.0,),
    )


def buckley(alpha: float = 0.5) -> ScalarModel:
    """Buckley-Leverett flux u^2 / (u^2 + alpha (1-u)^2)."""
    alpha = float(alpha)

    def flux(u):
        u = np.asarray(u, dtype=float)
        return u * u / (u * u + alpha * (1.0 - u) ** 2)

    def flux_deriv(u):
        u = np.asarray(u, dtype=float)
        den = u * u + alpha * (1.0 - u) ** 2
        return 2.0 * alpha * u * (1.0 - u) / (den * den)

    return ScalarModel("buckley", flux, flux_deriv, {"alpha": alpha}, sonic_points=(0.0, 1.0))


_MODELS = {"advection": advection, "burgers": burgers, "buckley": buckley}
MODEL_NAMES = tuple(_MODELS)


def builtin_model(name: str, **params) -> ScalarModel:
    try:
        factory = _MODELS[name]
    except KeyError:
        raise KeyError(f"unknown model {name!r}; known: {', '.join(MODEL_NAMES)}") from None
    return factory(**params)


@dataclass(frozen=True)
class InitialCondition:
    """u0 on ``domain``; ``t_breaking`` is the value printed with the data, if any."""

    name: str
    eval: Callable[[np.ndarray], np.ndarray]
    domain: tuple
    t_breaking: float | None = None
    description: str = ""

    def __call__(self, x):
        return self.eval(np.asarray(x, dtype=float))

    @property
    def length(self) -> float:
        return self.domain[1] - self.domain[0]

    def wrap(self, x):
        a, _ = self.domain
        return a + np.mod(np.asarray(x, dtype=float) - a, self.length)


def _lin_ic3(x):
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - x[inside] ** 2))
    return out


def _harten(x):
    # printed piece boundaries overlap; resolved to four contiguous pieces
    s = x - 0.5
    return np.select(
        [x <= -0.5, x <= 1.0 / 6.0, x <= 5.0 / 6.0],
        [
            2.0 * x + 2.0 - np.sin(3.0 * np.pi * s) / 6.0,
            -s * np.sin(1.5 * np.pi * s * s),
            np.abs(np.sin(2.0 * np.pi * s)),
        ],
        2.0 * x - 2.0 - np.sin(3.0 * np.pi * s) / 6.0,
    )


_ICS = {
    "lin-ic1": InitialCondition("lin-ic1", lambda x: np.sin(np.pi * x), (-1.0, 1.0),
                                description="sin(pi x), smooth extrema"),
    "lin-ic2": InitialCondition("lin-ic2", lambda x: np.sin(np.pi * x) ** 4, (0.0, 1.0),
                                description="sin^4(pi x), extremum with flat monotone wings"),
    "lin-ic3": InitialCondition("lin-ic3", _lin_ic3, (-1.0, 1.0),
                                description="exp(-1/(1-x^2)) bump, steep monotone flanks"),
    "harten": InitialCondition("harten", _harten, (-1.0, 1.0),
                               description="smooth pieces, jumps and kinks"),
    "burgers-ic2": InitialCondition(
        "burgers-ic2", lambda x: np.where(np.abs(x) <= 1.0 / 3.0, 1.0, 0.0), (-1.0, 1.0),
        description="top hat: rarefaction plus moving shock"),
    "burgers-ic2a": InitialCondition(
        "burgers-ic2a", lambda x: 0.1 + np.sin(np.pi * x) ** 4, (0.0, 1.0), t_breaking=0.27803225,
        description="0.1 + sin^4(pi x)"),
    "burgers-ic2b": InitialCondition(
        "burgers-ic2b", lambda x: 0.1 + np.exp(-x ** 4), (-2.0, 3.0), t_breaking=0.65669683,
        description="0.1 + exp(-x^4)"),
    "burgers-ic2c": InitialCondition(
        "burgers-ic2c", lambda x: 0.25 * (1.0 + np.sin(np.pi * x)), (-1.0, 1.0),
        t_breaking=4.0 / math.pi, description="(1 + sin(pi x))/4, sonic point at x=-0.5"),
    "buckley-1": InitialCondition(
        "buckley-1", lambda x: np.where(x < 0.0, 1.0, 0.0), (-0.5, 1.5),
        description="single moving shock, alpha=1/2"),
    "buckley-2": InitialCondition(
        "buckley-2", lambda x: np.where((x >= -0.5) & (x <= 0.0), 1.0, 0.0), (-1.0, 1.0),
        description="two moving shocks, alpha=1/4"),
}
IC_NAMES = tuple(_ICS)


def builtin_ic(name: str) -> InitialCondition:
    try:
        return _ICS[name]
    except KeyError:
        raise KeyError(f"unknown initial condition {name!r}; known: {', '.join(IC_NAMES)}") from None


def _derivative(fn, x, h):
    # fourth-order central difference
    return (fn(x - 2 * h) - 8 * fn(x - h) + 8 * fn(x + h) - fn(x + 2 * h)) / (12 * h)


def breaking_time(ic: InitialCondition, sample_n: int = 20001) -> float:
    """-1 / min u0' by dense sampling followed by golden-section refinement."""
    a, b = ic.domain
    h = 1e-4 * (b - a)
    x = np.linspace(a, b, sample_n)
    d = _derivative(ic, x, h)
    k = int(np.argmin(d))
    if d[k] >= 0.0:
        raise NoBreakingError(f"{ic.name}: u0' is never negative")
    lo, hi = x[max(k - 1, 0)], x[min(k + 1, sample_n - 1)]
    slope = lambda s: float(_derivative(ic, np.array([s]), h)[0])
    if lo < x[k] < hi:
        res = optimize.minimize_scalar(slope, bracket=(lo, x[k], hi), method="golden",
                                       options={"xtol": 1e-12})
        dmin = min(res.fun, d[k])
    else:
        dmin = d[k]
    return -1.0 / dmin


def exact_solution(model: ScalarModel, ic: InitialCondition, x, t: float):
    """Exact solution at points ``x`` on the periodic domain of ``ic``.

    Advection shifts the data; Burgers solves u = u0(x - u t) by bisection on
    [min u0, max u0], valid only before the breaking time.
    """
    x = np.asarray(x, dtype=float)
    if model.name == "advection":
        return ic(ic.wrap(x - model.params["a"] * t))
    if model.name != "burgers":
        raise UnsupportedTimeError(f"no exact oracle for model {model.name!r}")
    if t == 0.0:
        return ic(x)
    try:
        tb = breaking_time(ic)
    except NoBreakingError:
        tb = math.inf
    if t >= tb:
        raise UnsupportedTimeError(f"t={t} is not before the breaking time {tb:.8g}")
    samples = ic(np.linspace(ic.domain[0], ic.domain[1], 4001))
    lo = np.full_like(x, samples.min() - 1e-9)
    hi = np.full_like(x, samples.max() + 1e-9)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        g = mid - ic(ic.wrap(x - mid * t))
        below = g < 0.0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= 4e-16 * np.maximum(1.0, np.abs(hi))):
            break
    u = 0.5 * (lo + hi)
    residual = np.abs(u - ic(ic.wrap(x - u * t)))
    if np.any(residual > 1e-12):
        raise UnsupportedTimeError("characteristic equation not resolved to 1e-12")
    return u
