"""Total variation, error norms and convergence tables."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from hybridtvd.errors import UnsupportedTimeError
from hybridtvd.mesh import BoundaryPolicy
from hybridtvd.tvd import lmp_mask

TV_TOL = 1e-11
TABLE_HEADER = ("N", "L1", "L1_rate", "Linf", "Linf_rate")


def total_variation(field, boundary: BoundaryPolicy | None = None) -> float:
    """Sum of |u_{i+1} - u_i| over the interior, wrapping for periodic domains."""
    u = np.asarray(field, dtype=float).ravel()
    if u.size < 2:
        return 0.0
    tv = float(np.sum(np.abs(np.diff(u))))
    if boundary is not None and boundary.periodic:
        tv += abs(u[0] - u[-1])
    return tv


@dataclass
class TVTrace:
    t: list = field(default_factory=list)
    tv: list = field(default_factory=list)

    def append(self, t: float, tv: float) -> None:
        if tv < 0:
            raise ValueError("total variation cannot be negative")
        self.t.append(float(t))
        self.tv.append(float(tv))

    def increments(self) -> np.ndarray:
        return np.diff(np.asarray(self.tv, dtype=float))

    def max_increase(self) -> float:
        inc = self.increments()
        return float(inc.max()) if inc.size else 0.0

    def violations(self, tol: float = TV_TOL):
        """Step indices (1-based) where TV grew by more than ``tol``."""
        return [int(k) + 1 for k in np.flatnonzero(self.increments() > tol)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("t", "tv"))
        for t, v in zip(self.t, self.tv):
            w.writerow((f"{t:.17g}", f"{v:.17g}"))
        return buf.getvalue()


def error_norms(numeric, exact, dx: float):
    """Return ``(L1, Linf)``; L1 is weighted by the cell width.

    ``exact`` is an array of reference samples or a zero-argument callable
    producing them. Unsupported reference times propagate as
    :class:`UnsupportedTimeError`.
    """
    ref = exact() if callable(exact) else exact
    err = np.abs(np.asarray(numeric, dtype=float) - np.asarray(ref, dtype=float))
    if not np.all(np.isfinite(err)):
        raise UnsupportedTimeError("reference or numeric solution is not finite")
    return float(np.sum(err) * dx), float(np.max(err))


def rates(errors) -> np.ndarray:
    """log2 ratios of consecutive errors; NaN for the first row and for zero errors."""
    e = np.asarray(errors, dtype=float)
    out = np.full(e.shape, np.nan)
    if e.size > 1:
        prev, cur = e[:-1], e[1:]
        ok = (prev > 0) & (cur > 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[1:] = np.where(ok, np.log2(prev / cur), np.nan)
    return out


@dataclass
class ConvergenceTable:
    N: list = field(default_factory=list)
    L1: list = field(default_factory=list)
    Linf: list = field(default_factory=list)
    failed: dict = field(default_factory=dict)

    def add(self, n: int, l1: float, linf: float) -> None:
        self.N.append(int(n))
        self.L1.append(float(l1))
        self.Linf.append(float(linf))

    @property
    def L1_rate(self) -> np.ndarray:
        return rates(self.L1)

    @property
    def Linf_rate(self) -> np.ndarray:
        return rates(self.Linf)

    @property
    def complete(self) -> bool:
        return not self.failed

    def rows(self):
        return list(zip(self.N, self.L1, self.L1_rate, self.Linf, self.Linf_rate))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TABLE_HEADER)
        fmt = lambda v: "nan" if np.isnan(v) else f"{v:.17g}"
        for n, l1, r1, li, ri in self.rows():
            w.writerow((n, fmt(l1), fmt(r1), fmt(li), fmt(ri)))
        for n, msg in self.failed.items():
            w.writerow((n, "FAILED", "", msg, ""))
        return buf.getvalue()


def convergence_sweep(run_fn, n_list) -> ConvergenceTable:
    """Call ``run_fn(N) -> (L1, Linf)`` for each N.

    N must double between entries. The first failure stops the sweep and is
    recorded in ``table.failed``; rows computed so far are kept.
    """
    n_list = [int(n) for n in n_list]
    for a, b in zip(n_list, n_list[1:]):
        if b != 2 * a:
            raise ValueError("convergence sweeps need doubling N")
    table = ConvergenceTable()
    for n in n_list:
        try:
            l1, linf = run_fn(n)
        except Exception as exc:  # noqa: BLE001 - any run failure ends the table
            table.failed[n] = f"{type(exc).__name__}: {exc}"
            break
        table.add(n, l1, linf)
    return table


def lmp_violations(u_new, u_old, a, choices, lo: int, hi: int):
    """Indices (relative to ``lo``) of non-CCS cells failing the convex-hull check.

    ``u_old`` and ``a`` are ghosted arrays (cells and interfaces), ``u_new``
    and ``choices`` cover cells ``lo..hi-1``.
    """
    from hybridtvd.schemes import CellChoice

    idx = np.arange(lo, hi)
    old = np.asarray(u_old, dtype=float)
    stencil_new = np.zeros(hi - lo + 2)
    stencil_new[1:-1] = u_new
    ok = lmp_mask(stencil_new, old[lo - 1:hi + 1], a[idx - 1], a[idx])
    bad = ~ok & (np.asarray(choices) != CellChoice.CCS)
    return np.flatnonzero(bad)
