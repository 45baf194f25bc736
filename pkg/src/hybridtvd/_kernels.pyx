# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hybrid per-cell selection and update (see ``_kernels_py``)."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, INFINITY, copysign

cnp.import_array()

cdef int LW = 0, BW = 1, FLWBW = 2
cdef int THEOREM = 0, ACCEPT_ALL = 1, REJECT_ALL = 2
cdef int FROMM = 0, LXW = 1, BWC = 2, CCS = 3
cdef double TOL_DEN = 1e-14


cdef inline double _ratio(double num, double den) noexcept nogil:
    if fabs(den) < TOL_DEN:
        if fabs(num) < TOL_DEN:
            return 1.0
        return copysign(INFINITY, num)
    return num / den


cdef inline int _pick(bint lw_ok, bint bw_ok, int family) noexcept nogil:
    if family == LW:
        bw_ok = 0
    elif family == BW:
        lw_ok = 0
    if lw_ok and bw_ok:
        return FROMM
    if lw_ok:
        return LXW
    if bw_ok:
        return BWC
    return CCS


cdef inline void _tests(double r_lw, double r_bw, double nu, bint s_lw, bint s_bw,
                        int policy, bint* lw_ok, bint* bw_ok) noexcept nogil:
    cdef double x, k1, g1, k2, g2
    if policy == ACCEPT_ALL:
        lw_ok[0] = s_lw
        bw_ok[0] = s_bw
        return
    if policy == REJECT_ALL:
        lw_ok[0] = 0
        bw_ok[0] = 0
        return
    x = fabs(nu)
    k1 = -(1.0 - x) / (1.0 + x)
    g1 = x / (2.0 + x)
    lw_ok[0] = s_lw and (r_lw <= k1 or r_lw >= g1)
    if not s_bw:
        bw_ok[0] = 0
        return
    k2 = -(2.0 - x) / x
    if x >= 1.0:
        g2 = INFINITY
    else:
        g2 = (3.0 - x) / (1.0 - x)
    bw_ok[0] = k2 <= r_bw and r_bw <= g2


cdef inline double _inc(int choice, double lw, double bw) noexcept nogil:
    if choice == FROMM:
        return 0.5 * (lw + bw)
    if choice == LXW:
        return lw
    if choice == BWC:
        return bw
    return 0.0


def hybrid_update(u, dfp, dfm, ap, am, double lam, int family, int policy,
                  bint system, force_ccs, Py_ssize_t lo, Py_ssize_t hi):
    cdef double[:, ::1] U = np.ascontiguousarray(u, dtype=np.float64)
    cdef double[:, ::1] FP = np.ascontiguousarray(dfp, dtype=np.float64)
    cdef double[:, ::1] FM = np.ascontiguousarray(dfm, dtype=np.float64)
    cdef double[:, ::1] AP = np.ascontiguousarray(ap, dtype=np.float64)
    cdef double[:, ::1] AM = np.ascontiguousarray(am, dtype=np.float64)
    cdef Py_ssize_t R = U.shape[0], m = hi - lo, r, j, i
    out_u = np.empty((R, m), dtype=np.float64)
    out_c = np.empty((R, m), dtype=np.bool_)
    out_k = np.empty((R, m), dtype=np.int8)
    cdef double[:, ::1] UN = out_u
    cdef cnp.npy_bool[:, ::1] CC = out_c
    cdef cnp.int8_t[:, ::1] KK = out_k
    cdef cnp.npy_bool[:, ::1] FORCED
    cdef bint has_forced = force_ccs is not None
    if has_forced:
        FORCED = np.array(np.broadcast_to(np.asarray(force_ccs, dtype=np.bool_), (R, U.shape[1])),
                          order="C")
    cdef double nLL, nL, nR, fLL, fL, fR, rp, rp1, lw_p, bw_p
    cdef double mL, mR, mRR, gL, gR, gRR, rm, rm1, lw_m, bw_m
    cdef double inc_p, inc_m, inc
    cdef bint s_lw, s_bw, t_lw, t_bw, ok_lw, ok_bw, ccs
    cdef int ch_p, ch_m, choice

    with nogil:
        for r in range(R):
            for j in range(m):
                i = lo + j
                nLL = lam * AP[r, i - 2]
                nL = lam * AP[r, i - 1]
                nR = lam * AP[r, i]
                fLL = FP[r, i - 2]
                fL = FP[r, i - 1]
                fR = FP[r, i]
                rp = _ratio((1.0 - nL) * fL, (1.0 - nR) * fR)
                rp1 = _ratio((1.0 - nLL) * fLL, (1.0 - nL) * fL)
                lw_p = lam * (0.5 * (1.0 + nL) * fL + 0.5 * (1.0 - nR) * fR)
                bw_p = lam * (0.5 * (3.0 - nL) * fL - 0.5 * (1.0 - nLL) * fLL)
                s_lw = nL > 0.0 and nR > 0.0
                s_bw = s_lw and nLL > 0.0
                _tests(rp, rp1, nL, s_lw, s_bw, policy, &ok_lw, &ok_bw)
                ch_p = _pick(ok_lw, ok_bw, family)
                inc_p = _inc(ch_p, lw_p, bw_p)

                mL = lam * AM[r, i - 1]
                mR = lam * AM[r, i]
                mRR = lam * AM[r, i + 1]
                gL = FM[r, i - 1]
                gR = FM[r, i]
                gRR = FM[r, i + 1]
                rm = _ratio((1.0 + mR) * gR, (1.0 + mL) * gL)
                rm1 = _ratio((1.0 + mRR) * gRR, (1.0 + mR) * gR)
                lw_m = lam * (0.5 * (1.0 - mR) * gR + 0.5 * (1.0 + mL) * gL)
                bw_m = lam * (0.5 * (3.0 + mR) * gR - 0.5 * (1.0 + mRR) * gRR)
                t_lw = mL < 0.0 and mR < 0.0
                t_bw = t_lw and mRR < 0.0
                _tests(rm, rm1, mR, t_lw, t_bw, policy, &ok_lw, &ok_bw)
                ch_m = _pick(ok_lw, ok_bw, family)
                inc_m = _inc(ch_m, lw_m, bw_m)

                if system:
                    ccs = ch_p == CCS or ch_m == CCS
                    choice = CCS if ccs else ch_p
                    inc = inc_p + inc_m
                elif s_lw:
                    choice = ch_p
                    inc = inc_p
                elif t_lw:
                    choice = ch_m
                    inc = inc_m
                else:
                    choice = CCS
                    inc = 0.0
                ccs = choice == CCS
                if has_forced and FORCED[r, i]:
                    ccs = 1
                    choice = CCS
                CC[r, j] = ccs
                KK[r, j] = choice
                if ccs:
                    UN[r, j] = U[r, i]
                else:
                    UN[r, j] = U[r, i] - inc
    return out_u, out_c, out_k
