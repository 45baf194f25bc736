"""Time the compiled and numpy hybrid kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--rows 300] [--n 400] [--repeat 20]

Also times a full scalar run and a 2D Riemann step with each backend.
"""

import argparse
import time

import numpy as np

from hybridtvd import kernels
from hybridtvd.config import registry_config
from hybridtvd.runner import run_riemann2d, run_scalar


def _inputs(rows, n, seed=0):
    rng = np.random.default_rng(seed)
    x = np.linspace(0, 2 * np.pi, n)
    u = np.sin(x)[None, :] + 0.05 * rng.standard_normal((rows, n))
    a = rng.uniform(-1.0, 1.0, (rows, n - 1))
    du = np.diff(u, axis=1)
    ap, am = np.maximum(a, 0), np.minimum(a, 0)
    return u, ap * du, am * du, ap, am


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=300)
    ap.add_argument("--n", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)

    backends = ["numpy"] + (["cython"] if kernels.compiled_available() else [])
    u, dfp, dfm, ap_, am_ = _inputs(args.rows, args.n)
    lo, hi = 3, args.n - 3
    ref = None
    print(f"kernel: {args.rows} rows x {args.n} cells, best of {args.repeat}")
    for name in backends:
        fn = kernels.get_backend(name)
        call = lambda: fn(u, dfp, dfm, ap_, am_, 0.8, kernels.FLWBW, kernels.THEOREM, True,
                          None, lo, hi)
        t = best_of(call, args.repeat)
        out = call()
        if ref is None:
            ref = out
        diff = float(np.max(np.abs(out[0] - ref[0])))
        same = bool(np.array_equal(out[2], ref[2]))
        cells = args.rows * (hi - lo)
        print(f"  {name:7s} {t * 1e3:8.3f} ms  {cells / t / 1e6:7.2f} Mcell/s  "
              f"max|du| vs numpy {diff:.1e}  choices equal {same}")

    print("full runs:")
    for name in backends:
        cfg = registry_config("lin-ic2").with_overrides(n=640, backend=name)
        t_scalar = best_of(lambda: run_scalar(cfg, record=False), 1)
        cfg2 = registry_config("riemann2d-3").with_overrides(n=64, t_final=0.05, backend=name)
        t_2d = best_of(lambda: run_riemann2d(cfg2), 1)
        print(f"  {name:7s} lin-ic2 N=640 T=20: {t_scalar:6.2f} s   "
              f"riemann2d-3 64x64 T=0.05: {t_2d:6.2f} s")


if __name__ == "__main__":
    main()
