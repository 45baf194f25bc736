"""Command line driver: ``hybridtvd {run,convergence,bounds,riemann2d,list}``.

Exit codes: 0 success, 2 invalid configuration, 3 positivity failure,
4 total-variation increase under ``--strict-tvd``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from hybridtvd.config import REGISTRY, RunConfig, registry_config
from hybridtvd.errors import ConfigurationError, PositivityError, TVDViolation
from hybridtvd.tvd import bounds_bw, bounds_lxw

EXIT_OK, EXIT_CONFIG, EXIT_POSITIVITY, EXIT_TVD = 0, 2, 3, 4
OUT_ENV = "HYBRIDTVD_OUT"
INF_SENTINEL = 1e300
FMT = "%.17g"


# ------------------------------------------------------------------ output

def out_dir(arg) -> Path:
    base = arg or os.environ.get(OUT_ENV) or "hybridtvd_out"
    return Path(base)


def _sha(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_columns(path: Path, columns: dict) -> Path:
    """CSV with a header row and every value at 17 significant digits."""
    names = list(columns)
    data = np.column_stack([np.ravel(columns[k]) for k in names])
    np.savetxt(path, data, fmt=FMT, delimiter=",", header=",".join(names), comments="")
    return path


def write_grid(path: Path, grid) -> Path:
    np.savetxt(path, np.asarray(grid), fmt=FMT, delimiter=",")
    return path


def write_codes(path: Path, records, name: str) -> Path:
    """One row per step: ``step,t,<name>`` with the per-cell codes as a digit string."""
    with open(path, "w") as fh:
        fh.write(f"step,t,{name}\n")
        for step, t, codes in records:
            digits = "".join(str(int(c)) for c in np.ravel(codes))
            fh.write(f"{step},{t:.17g},{digits}\n")
    return path


def _solution_columns(fields: dict) -> dict:
    keys = [k for k in ("x", "y", "rho", "u", "v", "p") if k in fields]
    return {k: fields[k] for k in keys}


def write_run_outputs(res, directory: Path) -> dict:
    cfg = res.config
    directory.mkdir(parents=True, exist_ok=True)
    files = {}
    if "solution" in cfg.channels:
        files["solution"] = write_columns(directory / "solution.csv", _solution_columns(res.fields))
        for t, snap in res.snapshots:
            key = f"solution_t{t:.6g}"
            files[key] = write_columns(directory / f"{key}.csv", _solution_columns(snap))
    if "tv" in cfg.channels and res.tv is not None:
        p = directory / "tv.csv"
        p.write_text(res.tv.to_csv())
        files["tv"] = p
    if "choices" in cfg.channels and res.choices:
        files["choices"] = write_codes(directory / "choices.csv", res.choices, "choices")
    if "shock_switch" in cfg.channels and res.flags:
        files["shock_switch"] = write_codes(directory / "shock_switch.csv", res.flags, "flags")
    return files


def write_record(res, files: dict, directory: Path, extra=None) -> Path:
    state = np.concatenate([np.ravel(v) for k, v in sorted(res.fields.items())])
    record = {
        "config": res.config.to_ini(),
        "steps": res.steps,
        "t_final": res.t,
        "wall_time": res.wall_time,
        "state_digest": hashlib.sha256(np.ascontiguousarray(state).tobytes()).hexdigest(),
        "files": {k: {"path": str(p), "sha256": _sha(p)} for k, p in sorted(files.items())},
    }
    if res.tv is not None:
        record["tv_violations"] = res.tv_violations
    record.update(extra or {})
    path = directory / "record.json"
    path.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
    return path


# ----------------------------------------------------------------- configs

def load_config(ref: str) -> RunConfig:
    """A path to an INI file, or a registry id."""
    p = Path(ref)
    if p.is_file():
        return RunConfig.load(p)
    if ref in REGISTRY:
        return registry_config(ref)
    raise ConfigurationError(f"{ref!r} is neither a config file nor a registry id")


def _overrides(cfg: RunConfig, args) -> RunConfig:
    kw = {
        "n": getattr(args, "n", None),
        "cfl": getattr(args, "cfl", None),
        "t_final": getattr(args, "t_final", None),
        "backend": getattr(args, "backend", None),
    }
    if getattr(args, "strict_tvd", False):
        kw["strict_tvd"] = True
    return cfg.with_overrides(**kw)


# ---------------------------------------------------------------- commands

def cmd_run(args) -> int:
    from hybridtvd.runner import run_config

    cfg = _overrides(load_config(args.config), args)
    res = run_config(cfg)
    directory = out_dir(args.out) / cfg.problem
    files = write_run_outputs(res, directory)
    rec = write_record(res, files, directory)
    print(f"{cfg.problem}: {cfg.scheme} N={cfg.n} cfl={cfg.cfl} t={res.t:.6g} "
          f"steps={res.steps} wall={res.wall_time:.2f}s")
    if res.tv is not None:
        print(f"  TV {res.tv.tv[0]:.6g} -> {res.tv.tv[-1]:.6g}, "
              f"increases above tolerance: {len(res.tv_violations)}")
    print(f"  record: {rec}")
    return EXIT_OK


def cmd_convergence(args) -> int:
    from hybridtvd.runner import convergence

    cfg = load_config(args.config)
    if cfg.problem_spec.kind != "scalar":
        raise ConfigurationError("convergence tables are available for scalar problems only")
    cfls = args.cfl or [cfg.cfl]
    directory = out_dir(args.out) / cfg.problem
    directory.mkdir(parents=True, exist_ok=True)
    status = EXIT_OK
    for cfl in cfls:
        c = cfg.with_overrides(cfl=cfl, t_final=args.t_final, backend=args.backend)
        table = convergence(c, args.n_list or c.n_list)
        name = f"convergence_cfl{cfl:g}.csv" if len(cfls) > 1 else "convergence.csv"
        (directory / name).write_text(table.to_csv())
        print(f"# {c.problem} {c.scheme} cfl={cfl:g} T={c.t_final:.8g}")
        print(table.to_csv(), end="")
        if not table.complete:
            status = EXIT_POSITIVITY if any("Positivity" in m for m in table.failed.values()) \
                else EXIT_CONFIG
    return status


def bounds_table(steps: int, nu_min: float = 0.0, nu_max: float = 1.0) -> np.ndarray:
    """Rows (nu, kappa1, gamma1, kappa2, gamma2); infinities become +-INF_SENTINEL."""
    if steps < 1:
        raise ConfigurationError("steps must be positive")
    if not 0.0 <= nu_min < nu_max <= 1.0:
        raise ConfigurationError("need 0 <= nu_min < nu_max <= 1")
    nu = np.linspace(nu_min, nu_max, steps) if steps > 1 else np.array([nu_max])
    k1, g1 = bounds_lxw(nu)
    k2 = np.empty_like(nu)
    g2 = np.empty_like(nu)
    pos = nu > 0.0
    k2[~pos], g2[~pos] = -np.inf, 3.0  # limits as nu -> 0+
    if pos.any():
        k2[pos], g2[pos] = bounds_bw(nu[pos])
    table = np.column_stack([nu, k1, g1, k2, g2])
    return np.clip(table, -INF_SENTINEL, INF_SENTINEL)


def cmd_bounds(args) -> int:
    table = bounds_table(args.steps, args.nu_min, args.nu_max)
    header = "nu,kappa1,gamma1,kappa2,gamma2"
    if args.out_file:
        np.savetxt(args.out_file, table, fmt=FMT, delimiter=",", header=header, comments="")
    else:
        np.savetxt(sys.stdout, table, fmt=FMT, delimiter=",", header=header, comments="")
    return EXIT_OK


def cmd_riemann2d(args) -> int:
    from hybridtvd.runner import mirror_residual, run_riemann2d

    if not 1 <= args.k <= 12:
        raise ConfigurationError(f"configuration must be in 1..12, got {args.k}")
    cfg = _overrides(registry_config(f"riemann2d-{args.k}"), args)
    res = run_riemann2d(cfg)
    directory = out_dir(args.out) / cfg.problem
    directory.mkdir(parents=True, exist_ok=True)
    files = {
        "density": write_grid(directory / "density.csv", res.fields["rho"]),
        "pressure": write_grid(directory / "pressure.csv", res.fields["p"]),
    }
    extra = {"grid": {"nx": cfg.n, "ny": cfg.n, "x": [0.0, 1.0], "y": [0.0, 1.0],
                      "layout": "row j holds y_j, column i holds x_i"},
             "density_range": [float(res.fields["rho"].min()), float(res.fields["rho"].max())]}
    if args.k == 4 or args.symmetry:
        resid = mirror_residual(cfg)
        extra["mirror_residual"] = resid
        report = directory / "symmetry.txt"
        report.write_text(f"max |rho_xfirst(x,y) - rho_yfirst(y,x)| = {resid:.17g}\n")
        files["symmetry"] = report
    write_record(res, files, directory, extra)
    print(f"riemann2d-{args.k}: {cfg.n}x{cfg.n} t={res.t:.6g} steps={res.steps} "
          f"rho in [{extra['density_range'][0]:.6g}, {extra['density_range'][1]:.6g}]")
    if "mirror_residual" in extra:
        print(f"  mirror-symmetry residual: {extra['mirror_residual']:.3e}")
    return EXIT_OK


def cmd_list(args) -> int:
    for name, cfg in REGISTRY.items():
        sensor = "" if cfg.sensor is None else f" eps={cfg.sensor.epsilon:g} delta={cfg.sensor.delta:g}"
        print(f"{name:14s} {cfg.scheme:45s} N={cfg.n:<4d} cfl={cfg.cfl:<5g} "
              f"T={cfg.t_final:<10.8g} {cfg.boundary}{sensor}")
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hybridtvd", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./hybridtvd_out)")
        p.add_argument("--backend", choices=("auto", "numpy", "cython"))

    p = sub.add_parser("run", help="run one configuration")
    p.add_argument("config", help="INI file or registry id")
    p.add_argument("--n", type=int)
    p.add_argument("--cfl", type=float)
    p.add_argument("--t-final", type=float)
    p.add_argument("--strict-tvd", action="store_true", help="exit 4 on any TV increase")
    common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("convergence", help="grid-refinement table for a scalar problem")
    p.add_argument("config", help="INI file or registry id")
    p.add_argument("--n-list", type=int, nargs="+")
    p.add_argument("--cfl", type=float, nargs="+", help="one table per CFL number")
    p.add_argument("--t-final", type=float)
    common(p)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("bounds", help="TVD bound functions over a CFL range")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--nu-min", type=float, default=0.0)
    p.add_argument("--nu-max", type=float, default=1.0)
    p.add_argument("--out-file")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("riemann2d", help="2D Riemann configuration k")
    p.add_argument("k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--cfl", type=float)
    p.add_argument("--t-final", type=float)
    p.add_argument("--symmetry", action="store_true", help="also report the mirror residual")
    common(p)
    p.set_defaults(func=cmd_riemann2d)

    p = sub.add_parser("list", help="show the experiment registry")
    p.set_defaults(func=cmd_list)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PositivityError as exc:
        print(f"positivity failure: {exc}", file=sys.stderr)
        return EXIT_POSITIVITY
    except TVDViolation as exc:
        print(f"TVD violation: {exc}", file=sys.stderr)
        return EXIT_TVD


if __name__ == "__main__":
    sys.exit(main())
