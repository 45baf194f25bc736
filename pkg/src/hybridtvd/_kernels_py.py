"""Numpy implementation of the hybrid per-cell selection and update.

This is the fallback for the compiled ``_kernels`` module and must agree with
it to rounding. Layout: cell arrays are ``(R, n)``, interface arrays
``(R, n - 1)`` with entry ``k`` at ``k + 1/2``. Only cells ``lo <= i < hi`` are
processed; the stencil needs ``2 <= lo`` and ``hi <= n - 2``.
"""

import numpy as np

# families
LW, BW, FLWBW = 0, 1, 2
# bound policies
THEOREM, ACCEPT_ALL, REJECT_ALL = 0, 1, 2
# cell choices
FROMM, LXW, BWC, CCS = 0, 1, 2, 3

TOL_DEN = 1e-14


def _ratio(num, den):
    small = np.abs(den) < TOL_DEN
    with np.errstate(divide="ignore", invalid="ignore"):
        r = num / np.where(small, 1.0, den)
    return np.where(small, np.where(np.abs(num) < TOL_DEN, 1.0, np.copysign(np.inf, num)), r)


def _select(lw_ok, bw_ok, family, lw_inc, bw_inc):
    if family == LW:
        bw_ok = np.zeros_like(bw_ok)
    elif family == BW:
        lw_ok = np.zeros_like(lw_ok)
    choice = np.where(lw_ok & bw_ok, FROMM, np.where(lw_ok, LXW, np.where(bw_ok, BWC, CCS)))
    inc = np.where(choice == FROMM, 0.5 * (lw_inc + bw_inc),
                   np.where(choice == LXW, lw_inc, np.where(choice == BWC, bw_inc, 0.0)))
    return choice.astype(np.int8), inc


def _tests(r_lw, r_bw, nu, speed_lw, speed_bw, policy):
    if policy == ACCEPT_ALL:
        return speed_lw, speed_bw
    if policy == REJECT_ALL:
        return np.zeros_like(speed_lw), np.zeros_like(speed_bw)
    x = np.abs(nu)
    k1 = -(1.0 - x) / (1.0 + x)
    g1 = x / (2.0 + x)
    with np.errstate(divide="ignore", invalid="ignore"):
        xs = np.where(x > 0.0, x, 1.0)
        k2 = -(2.0 - xs) / xs
        g2 = np.where(x >= 1.0, np.inf, (3.0 - x) / np.where(x >= 1.0, 1.0, 1.0 - x))
    lw_ok = speed_lw & ((r_lw <= k1) | (r_lw >= g1))
    bw_ok = speed_bw & (k2 <= r_bw) & (r_bw <= g2)
    return lw_ok, bw_ok


def hybrid_update(u, dfp, dfm, ap, am, lam, family, policy, system, force_ccs, lo, hi):
    """Half-incremental hybrid update of cells ``lo..hi-1``.

    ``force_ccs`` is None or a boolean mask broadcastable to ``u`` (cells
    flagged by the shock sensor). Returns ``(unew, ccs, choice)`` each shaped
    ``(R, hi - lo)``. Where ``ccs`` is set the caller must apply the
    conservative CCS update instead.
    """
    u = np.asarray(u, dtype=float)
    i = np.arange(lo, hi)
    im2, im1, ip1 = i - 2, i - 1, i + 1
    # + part, interfaces i-3/2, i-1/2, i+1/2 -> columns im2, im1, i
    nLL, nL, nR = lam * ap[:, im2], lam * ap[:, im1], lam * ap[:, i]
    fLL, fL, fR = dfp[:, im2], dfp[:, im1], dfp[:, i]
    rp = _ratio((1.0 - nL) * fL, (1.0 - nR) * fR)
    rp1 = _ratio((1.0 - nLL) * fLL, (1.0 - nL) * fL)
    lw_p = lam * (0.5 * (1.0 + nL) * fL + 0.5 * (1.0 - nR) * fR)
    bw_p = lam * (0.5 * (3.0 - nL) * fL - 0.5 * (1.0 - nLL) * fLL)
    s_lw = (nL > 0.0) & (nR > 0.0)
    s_bw = s_lw & (nLL > 0.0)
    ok_lw, ok_bw = _tests(rp, rp1, nL, s_lw, s_bw, policy)
    ch_p, inc_p = _select(ok_lw, ok_bw, family, lw_p, bw_p)

    # - part, interfaces i-1/2, i+1/2, i+3/2 -> columns im1, i, ip1
    mL, mR, mRR = lam * am[:, im1], lam * am[:, i], lam * am[:, ip1]
    gL, gR, gRR = dfm[:, im1], dfm[:, i], dfm[:, ip1]
    rm = _ratio((1.0 + mR) * gR, (1.0 + mL) * gL)
    rm1 = _ratio((1.0 + mRR) * gRR, (1.0 + mR) * gR)
    lw_m = lam * (0.5 * (1.0 - mR) * gR + 0.5 * (1.0 + mL) * gL)
    bw_m = lam * (0.5 * (3.0 + mR) * gR - 0.5 * (1.0 + mRR) * gRR)
    t_lw = (mL < 0.0) & (mR < 0.0)
    t_bw = t_lw & (mRR < 0.0)
    ok_lw, ok_bw = _tests(rm, rm1, mR, t_lw, t_bw, policy)
    ch_m, inc_m = _select(ok_lw, ok_bw, family, lw_m, bw_m)

    if system:
        ccs = (ch_p == CCS) | (ch_m == CCS)
        choice = np.where(ccs, CCS, ch_p).astype(np.int8)
        inc = inc_p + inc_m
    else:
        plus = s_lw
        minus = t_lw & ~plus
        choice = np.where(plus, ch_p, np.where(minus, ch_m, CCS)).astype(np.int8)
        ccs = choice == CCS
        inc = np.where(plus, inc_p, inc_m)
    if force_ccs is not None:
        forced = np.broadcast_to(np.asarray(force_ccs, dtype=bool), u.shape)[:, lo:hi]
        ccs = ccs | forced
        choice = np.where(forced, CCS, choice).astype(np.int8)
    unew = np.where(ccs, u[:, lo:hi], u[:, lo:hi] - inc)
    return unew, ccs, choice
