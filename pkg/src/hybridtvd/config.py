"""Run configuration files and the registry of built-in experiments.

A config is an INI file with four sections::

    [run]
    problem = lin-ic1          ; registry problem id
    n = 80                     ; cells (nx = ny = n for riemann2d problems)
    cfl = 0.5
    t_final = 2.0
    boundary = periodic        ; periodic | outflow
    policy = theorem           ; theorem | accept-all | reject-all
    n_list = 20 40 80          ; optional, used by the convergence command
    backend = auto             ; auto | numpy | cython

    [scheme]
    name = hybrid_flwbw(upwind1)

    [sensor]                   ; present iff the scheme is shock_corrected
    epsilon = 1e-8
    delta = 0.8
    mr_threshold = 4.0

    [output]
    channels = solution tv choices shock_switch
    snapshot_times =           ; extra output times, the final time is always written
    strict_tvd = false
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from hybridtvd.errors import ConfigurationError
from hybridtvd.euler import RIEMANN_T_FINAL, SHOCK_TUBES, validate_system_scheme
from hybridtvd.mesh import DEFAULT_GHOST, BoundaryPolicy
from hybridtvd.models import builtin_ic
from hybridtvd.schemes import POLICIES, SchemeId
from hybridtvd.sensor import SensorParams

CHANNELS = ("solution", "tv", "choices", "shock_switch")
BACKENDS = ("auto", "numpy", "cython")
REQUIRED_GHOST = 3
CONFIG_DIR = Path(__file__).with_name("configs")


@dataclass(frozen=True)
class Problem:
    kind: str  # "scalar", "euler1d" or "euler2d"
    model: str | None = None
    model_params: tuple = ()
    ic: str | None = None
    tube: str | None = None
    k: int | None = None


PROBLEMS = {
    "lin-ic1": Problem("scalar", "advection", (("a", 1.0),), "lin-ic1"),
    "lin-ic2": Problem("scalar", "advection", (("a", 1.0),), "lin-ic2"),
    "lin-ic3": Problem("scalar", "advection", (("a", 1.0),), "lin-ic3"),
    "harten": Problem("scalar", "advection", (("a", 1.0),), "harten"),
    "burgers-ic2": Problem("scalar", "burgers", (), "burgers-ic2"),
    "burgers-ic2a": Problem("scalar", "burgers", (), "burgers-ic2a"),
    "burgers-ic2b": Problem("scalar", "burgers", (), "burgers-ic2b"),
    "burgers-ic2c": Problem("scalar", "burgers", (), "burgers-ic2c"),
    "buckley-1": Problem("scalar", "buckley", (("alpha", 0.5),), "buckley-1"),
    "buckley-2": Problem("scalar", "buckley", (("alpha", 0.25),), "buckley-2"),
}
PROBLEMS.update({name: Problem("euler1d", tube=name) for name in SHOCK_TUBES})
PROBLEMS.update({f"riemann2d-{k}": Problem("euler2d", k=k) for k in RIEMANN_T_FINAL})


@dataclass(frozen=True)
class RunConfig:
    problem: str
    scheme: str
    n: int
    cfl: float
    t_final: float
    boundary: str = "periodic"
    policy: str = "theorem"
    sensor: SensorParams | None = None
    n_list: tuple = ()
    channels: tuple = CHANNELS
    snapshot_times: tuple = ()
    strict_tvd: bool = False
    backend: str = "auto"
    ghost: int = DEFAULT_GHOST

    @property
    def problem_spec(self) -> Problem:
        return PROBLEMS[self.problem]

    @property
    def scheme_id(self) -> SchemeId:
        return SchemeId.parse(self.scheme)

    @property
    def boundary_policy(self) -> BoundaryPolicy:
        return BoundaryPolicy(self.boundary)

    def validate(self) -> "RunConfig":
        """Raise :class:`ConfigurationError` on any inconsistency; return self."""
        if self.problem not in PROBLEMS:
            raise ConfigurationError(f"unknown problem {self.problem!r}")
        scheme = self.scheme_id
        if scheme.shock_corrected and self.sensor is None:
            raise ConfigurationError(f"{scheme} needs a [sensor] section")
        if self.sensor is not None and not scheme.shock_corrected:
            raise ConfigurationError("a [sensor] section requires a shock_corrected scheme")
        if self.ghost < REQUIRED_GHOST:
            raise ConfigurationError(f"ghost width {self.ghost} < required {REQUIRED_GHOST}")
        if self.problem_spec.kind != "scalar":
            validate_system_scheme(scheme)
        if not 0.0 < self.cfl < 1.0:
            raise ConfigurationError(f"cfl must lie in (0, 1), got {self.cfl}")
        if not (math.isfinite(self.t_final) and self.t_final > 0.0):
            raise ConfigurationError("t_final must be positive")
        if self.n < 8:
            raise ConfigurationError("n must be at least 8")
        if self.boundary not in ("periodic", "outflow"):
            raise ConfigurationError(f"unsupported boundary {self.boundary!r}")
        if self.policy not in POLICIES:
            raise ConfigurationError(f"unknown policy {self.policy!r}")
        if self.backend not in BACKENDS:
            raise ConfigurationError(f"unknown backend {self.backend!r}")
        bad = set(self.channels) - set(CHANNELS)
        if bad:
            raise ConfigurationError(f"unknown output channels {sorted(bad)}")
        for a, b in zip(self.n_list, self.n_list[1:]):
            if b != 2 * a:
                raise ConfigurationError("n_list must double between entries")
        if any(not 0.0 < t < self.t_final for t in self.snapshot_times):
            raise ConfigurationError("snapshot times must lie strictly inside (0, t_final)")
        return self

    # ------------------------------------------------------- serialisation

    def to_ini(self) -> str:
        cp = configparser.ConfigParser(interpolation=None)
        cp["run"] = {
            "problem": self.problem,
            "n": str(self.n),
            "cfl": repr(self.cfl),
            "t_final": repr(self.t_final),
            "boundary": self.boundary,
            "policy": self.policy,
            "n_list": " ".join(str(v) for v in self.n_list),
            "backend": self.backend,
            "ghost": str(self.ghost),
        }
        cp["scheme"] = {"name": self.scheme}
        if self.sensor is not None:
            cp["sensor"] = {
                "epsilon": repr(self.sensor.epsilon),
                "delta": repr(self.sensor.delta),
                "mr_threshold": repr(self.sensor.mr_threshold),
            }
        cp["output"] = {
            "channels": " ".join(self.channels),
            "snapshot_times": " ".join(repr(t) for t in self.snapshot_times),
            "strict_tvd": "true" if self.strict_tvd else "false",
        }
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()

    @classmethod
    def from_ini(cls, text: str) -> "RunConfig":
        cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
        try:
            cp.read_string(text)
            run = cp["run"]
            problem = run["problem"]
            base = REGISTRY.get(problem)
            spec = PROBLEMS.get(problem)
            if spec is None:
                raise ConfigurationError(f"unknown problem {problem!r}")
            scheme = cp["scheme"]["name"] if cp.has_section("scheme") else base.scheme
            sensor = None
            if cp.has_section("sensor"):
                s = cp["sensor"]
                sensor = SensorParams(s.getfloat("epsilon", 1e-8), s.getfloat("delta", 0.8),
                                      s.getfloat("mr_threshold", 4.0))
            out = cp["output"] if cp.has_section("output") else {}
            cfg = cls(
                problem=problem,
                scheme=scheme,
                n=run.getint("n", base.n),
                cfl=run.getfloat("cfl", base.cfl),
                t_final=run.getfloat("t_final", base.t_final),
                boundary=run.get("boundary", base.boundary),
                policy=run.get("policy", "theorem"),
                sensor=sensor,
                n_list=tuple(int(v) for v in run.get("n_list", "").split()),
                channels=tuple(out.get("channels", " ".join(CHANNELS)).split()),
                snapshot_times=tuple(float(v) for v in out.get("snapshot_times", "").split()),
                strict_tvd=_boolean(out.get("strict_tvd", "false")),
                backend=run.get("backend", "auto"),
                ghost=run.getint("ghost", DEFAULT_GHOST),
            )
        except (configparser.Error, KeyError, ValueError) as exc:
            if isinstance(exc, ConfigurationError):
                raise
            raise ConfigurationError(f"malformed config: {exc}") from exc
        return cfg.validate()

    @classmethod
    def load(cls, path) -> "RunConfig":
        return cls.from_ini(Path(path).read_text())

    def with_overrides(self, **kw) -> "RunConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw).validate()


def _boolean(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off", ""):
        return False
    raise ConfigurationError(f"not a boolean: {text!r}")


# --------------------------------------------------------------- registry

_SC_FORCE = "shock_corrected(hybrid_flwbw(force))"
_SC_FLIC = "shock_corrected(hybrid_flwbw(flic(minbee)))"
_SC_TVDLW = "shock_corrected(hybrid_flwbw(tvd_lw(minbee)))"
_LIN = "hybrid_flwbw(upwind1)"
_DOUBLING = (10, 20, 40, 80, 160, 320, 640)


def _entry(problem, scheme, n, cfl, t_final, boundary="periodic", sensor=None, n_list=()):
    return RunConfig(problem, scheme, n, cfl, t_final, boundary, sensor=sensor,
                     n_list=tuple(n_list))


def _half_breaking(name):
    return builtin_ic(name).t_breaking / 2.0


REGISTRY = {
    "lin-ic1": _entry("lin-ic1", _LIN, 80, 0.5, 2.0, n_list=_DOUBLING[1:]),
    "lin-ic2": _entry("lin-ic2", _LIN, 80, 0.95, 20.0, n_list=_DOUBLING[1:]),
    "lin-ic3": _entry("lin-ic3", _LIN, 100, 0.95, 6.0, n_list=(25, 50, 100, 200, 400, 800)),
    "harten": _entry("harten", _LIN, 160, 0.95, 2.0),
    "burgers-ic2": _entry("burgers-ic2", _SC_FORCE, 80, 0.8, 0.8, sensor=SensorParams(1e-8, 0.8)),
    "burgers-ic2a": _entry("burgers-ic2a", _SC_FORCE, 50, 0.9, _half_breaking("burgers-ic2a"),
                           sensor=SensorParams(1e-8, 0.8), n_list=_DOUBLING),
    "burgers-ic2b": _entry("burgers-ic2b", _SC_FORCE, 80, 0.8, _half_breaking("burgers-ic2b"),
                           sensor=SensorParams(1e-8, 0.8), n_list=_DOUBLING),
    "burgers-ic2c": _entry("burgers-ic2c", _SC_FORCE, 80, 0.6, _half_breaking("burgers-ic2c"),
                           sensor=SensorParams(1e-8, 0.8), n_list=_DOUBLING),
    "buckley-1": _entry("buckley-1", _SC_TVDLW, 80, 0.8, 0.75, "outflow",
                        sensor=SensorParams(1e-8, 0.8)),
    "buckley-2": _entry("buckley-2", _SC_TVDLW, 100, 0.8, 0.4, "outflow",
                        sensor=SensorParams(1e-8, 0.8)),
    "shuosher": _entry("shuosher", _SC_FLIC, 800, 0.8, 1.8, "outflow",
                       sensor=SensorParams(1e-8, 0.8)),
    "sod": _entry("sod", _SC_FLIC, 100, 0.5, 0.01, "outflow", sensor=SensorParams(1e-8, 0.4)),
    "lax": _entry("lax", _SC_FLIC, 200, 0.8, 0.32, "outflow", sensor=SensorParams(1e-8, 0.8)),
    "laney": _entry("laney", _SC_FLIC, 200, 0.8, 0.01, "outflow", sensor=SensorParams(1e-8, 0.6)),
}
REGISTRY.update({
    f"riemann2d-{k}": _entry(f"riemann2d-{k}", _SC_FORCE, 100, 0.5, t, "outflow",
                             sensor=SensorParams(1e-8, 0.6))
    for k, t in RIEMANN_T_FINAL.items()
})


def registry_config(name: str) -> RunConfig:
    try:
        return REGISTRY[name].validate()
    except KeyError:
        raise ConfigurationError(
            f"unknown registry id {name!r}; see `hybridtvd list`") from None


def shipped_config_path(name: str) -> Path:
    return CONFIG_DIR / f"{name}.ini"


def write_shipped_configs(directory=CONFIG_DIR) -> list:
    """Regenerate the INI files shipped with the package from REGISTRY."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, cfg in REGISTRY.items():
        p = directory / f"{name}.ini"
        p.write_text(cfg.to_ini())
        paths.append(p)
    return paths
