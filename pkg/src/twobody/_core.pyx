# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled integration core: C re-implementation of the kernel in
``twobody._kernels``.  Formula changes there must be mirrored here; the
backend-equivalence test keeps the two in lock step."""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan, atanh, cos, cosh, fabs, isfinite, sin, sinh

cnp.import_array()

EXIT_COMPLETED = 0
EXIT_BOUNDARY = 3
EXIT_NONFINITE = 4

DEF SERIES_SWITCH = 1e-4


cdef double _pot_value(int kind, double coeff, double sigma, double r,
                       double[::1] sx, double[:, ::1] sc) noexcept:
    cdef Py_ssize_t i
    cdef double t
    if kind == 0:
        return 0.0
    if kind == 1:
        return -coeff * (1.0 - sigma * r * r) / (2.0 * r)
    if kind == 2:
        return 0.5 * coeff * r * r
    i = _spline_interval(sx, r)
    t = r - sx[i]
    return ((sc[0, i] * t + sc[1, i]) * t + sc[2, i]) * t + sc[3, i]


cdef double _pot_deriv(int kind, double coeff, double sigma, double r,
                       double[::1] sx, double[:, ::1] sc) noexcept:
    cdef Py_ssize_t i
    cdef double t
    if kind == 0:
        return 0.0
    if kind == 1:
        return coeff * (1.0 + sigma * r * r) / (2.0 * r * r)
    if kind == 2:
        return coeff * r
    i = _spline_interval(sx, r)
    t = r - sx[i]
    return (3.0 * sc[0, i] * t + 2.0 * sc[1, i]) * t + sc[2, i]


cdef Py_ssize_t _spline_interval(double[::1] sx, double r) noexcept:
    cdef Py_ssize_t lo = 0, hi = sx.shape[0] - 2, mid
    if r <= sx[0]:
        return 0
    if r >= sx[sx.shape[0] - 1]:
        return hi
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if sx[mid] <= r:
            lo = mid
        else:
            hi = mid - 1
    return lo


cdef void _coeffs(double sigma, double R, double m1, double m2, double alpha,
                  double r, double[::1] series, double* out) noexcept:
    """out[0..8] = g00, g01, g11, D, E, F, C, B, A."""
    cdef double beta = 1.0 - alpha
    cdef double M = m1 * m2
    cdef double R2 = R * R
    cdef double r2 = r * r
    cdef double w = 1.0 + sigma * r2
    cdef double gden = 4.0 * R2 * M
    cdef double th, sa, ca, sb, cb, s2a, c2a, s2b, c2b, s4a, s4b, r4
    out[0] = w * w * (m1 + m2) / gden
    out[1] = -(m1 * alpha - m2 * beta) * 2.0 * w / gden
    out[2] = 4.0 * (m1 * alpha * alpha + m2 * beta * beta) / gden
    if r < SERIES_SWITCH:
        r4 = r2 * r2
        out[3] = series[0] + series[1] * r2 + series[2] * r4
        out[5] = series[3] / r2 + series[4] + series[5] * r2 + series[6] * r4
        out[6] = series[7] + series[8] * r2 + series[9] * r4
        out[8] = series[10] / r2 + series[11] + series[12] * r2 + series[13] * r4
        out[4] = series[14] / r + series[15] * r + series[16] * r2 * r
        out[7] = series[17] / r + series[18] * r + series[19] * r2 * r
        return
    if sigma > 0.0:
        th = atan(r)
        sa = sin(alpha * th); ca = cos(alpha * th)
        sb = sin(beta * th); cb = cos(beta * th)
        s2a = sin(2 * alpha * th); c2a = cos(2 * alpha * th)
        s2b = sin(2 * beta * th); c2b = cos(2 * beta * th)
        s4a = sin(4 * alpha * th); s4b = sin(4 * beta * th)
    else:
        th = atanh(r)
        sa = sinh(alpha * th); ca = cosh(alpha * th)
        sb = sinh(beta * th); cb = cosh(beta * th)
        s2a = sinh(2 * alpha * th); c2a = cosh(2 * alpha * th)
        s2b = sinh(2 * beta * th); c2b = cosh(2 * beta * th)
        s4a = sinh(4 * alpha * th); s4b = sinh(4 * beta * th)
    out[3] = w * (m1 * sa * sa + m2 * sb * sb) / (M * R2 * r2)
    out[5] = w * (m1 * ca * ca + m2 * cb * cb) / (M * R2 * r2)
    out[4] = w * (m1 * s2a - m2 * s2b) / (2.0 * M * R2 * r2)
    out[6] = w * w * (m1 * s2a * s2a + m2 * s2b * s2b) / (4.0 * M * R2 * r2)
    out[8] = w * w * (m1 * c2a * c2a + m2 * c2b * c2b) / (4.0 * M * R2 * r2)
    out[7] = w * w * (m1 * s4a - m2 * s4b) / (8.0 * M * R2 * r2)


cdef void _dcoeffs(double sigma, double R, double m1, double m2, double alpha,
                   double r, double[::1] series, double* out) noexcept:
    """out[0..8] = dg00, dg01, dg11, dD, dE, dF, dC, dB, dA."""
    cdef double beta = 1.0 - alpha
    cdef double M = m1 * m2
    cdef double R2 = R * R
    cdef double r2 = r * r
    cdef double w = 1.0 + sigma * r2
    cdef double th, sa, ca, sb, cb, s2a, c2a, s2b, c2b, s4a, c4a, s4b, c4b
    cdef double S1, Sh1, SD1, W1, WD1, S2, Sh2, SD2, W2, WD2
    out[0] = sigma * r * w * (m1 + m2) / (R2 * M)
    out[1] = -sigma * r * (m1 * alpha - m2 * beta) / (R2 * M)
    out[2] = 0.0
    if r < SERIES_SWITCH:
        out[3] = 2 * series[1] * r + 4 * series[2] * r * r2
        out[5] = -2 * series[3] / (r * r2) + 2 * series[5] * r + 4 * series[6] * r * r2
        out[6] = 2 * series[8] * r + 4 * series[9] * r * r2
        out[8] = -2 * series[10] / (r * r2) + 2 * series[12] * r + 4 * series[13] * r * r2
        out[4] = -series[14] / r2 + series[15] + 3 * series[16] * r2
        out[7] = -series[17] / r2 + series[18] + 3 * series[19] * r2
        return
    if sigma > 0.0:
        th = atan(r)
        sa = sin(alpha * th); ca = cos(alpha * th)
        sb = sin(beta * th); cb = cos(beta * th)
        s2a = sin(2 * alpha * th); c2a = cos(2 * alpha * th)
        s2b = sin(2 * beta * th); c2b = cos(2 * beta * th)
        s4a = sin(4 * alpha * th); c4a = cos(4 * alpha * th)
        s4b = sin(4 * beta * th); c4b = cos(4 * beta * th)
    else:
        th = atanh(r)
        sa = sinh(alpha * th); ca = cosh(alpha * th)
        sb = sinh(beta * th); cb = cosh(beta * th)
        s2a = sinh(2 * alpha * th); c2a = cosh(2 * alpha * th)
        s2b = sinh(2 * beta * th); c2b = cosh(2 * beta * th)
        s4a = sinh(4 * alpha * th); c4a = cosh(4 * alpha * th)
        s4b = sinh(4 * beta * th); c4b = cosh(4 * beta * th)
    S1 = m1 * sa * sa + m2 * sb * sb
    Sh1 = m1 * ca * ca + m2 * cb * cb
    SD1 = m1 * alpha * s2a + m2 * beta * s2b
    W1 = m1 * s2a - m2 * s2b
    WD1 = m1 * alpha * c2a - m2 * beta * c2b
    S2 = m1 * s2a * s2a + m2 * s2b * s2b
    Sh2 = m1 * c2a * c2a + m2 * c2b * c2b
    SD2 = m1 * alpha * s4a + m2 * beta * s4b
    W2 = m1 * s4a - m2 * s4b
    WD2 = m1 * alpha * c4a - m2 * beta * c4b
    out[3] = (2 * sigma * r * S1 + SD1 - 2 * w * S1 / r) / (M * R2 * r2)
    out[5] = (2 * sigma * r * Sh1 - sigma * SD1 - 2 * w * Sh1 / r) / (M * R2 * r2)
    out[4] = (2 * sigma * r * W1 + 2 * WD1 - 2 * w * W1 / r) / (2 * M * R2 * r2)
    out[6] = w * (4 * sigma * r * S2 + 2 * SD2 - 2 * w * S2 / r) / (4 * M * R2 * r2)
    out[8] = w * (4 * sigma * r * Sh2 - 2 * sigma * SD2 - 2 * w * Sh2 / r) / (4 * M * R2 * r2)
    out[7] = w * (4 * sigma * r * W2 + 4 * WD2 - 2 * w * W2 / r) / (8 * M * R2 * r2)


cdef double _energy(double sigma, double R, double m1, double m2, double alpha,
                    int q1, int q2, int pot_kind, double pot_coeff,
                    double[::1] sx, double[:, ::1] scoef, double[::1] series,
                    double[::1] y) noexcept:
    cdef double co[9]
    cdef double H
    cdef Py_ssize_t i, xl, yl, x2, y2
    cdef double r = y[0], pr = y[1]
    _coeffs(sigma, R, m1, m2, alpha, r, series, co)
    H = 0.5 * (co[0] * pr * pr + 2.0 * co[1] * pr * y[2] + co[2] * y[2] * y[2])
    xl = 3
    yl = 3 + q1
    x2 = 3 + 2 * q1
    y2 = 3 + 2 * q1 + q2
    for i in range(q1):
        H += 0.5 * (co[3] * y[xl + i] * y[xl + i] + co[5] * y[yl + i] * y[yl + i]
                    + 2.0 * co[4] * y[xl + i] * y[yl + i])
    for i in range(q2):
        H += 0.5 * (co[6] * y[x2 + i] * y[x2 + i] + co[8] * y[y2 + i] * y[y2 + i]
                    + 2.0 * co[7] * y[x2 + i] * y[y2 + i])
    return H + _pot_value(pot_kind, pot_coeff, sigma, r, sx, scoef)


cdef void _flow(double sigma, double R, double m1, double m2, double alpha,
                int q1, int q2, int pot_kind, double pot_coeff,
                double[::1] sx, double[:, ::1] scoef, double[::1] series,
                long[::1] sa, long[::1] sb, long[::1] sc_idx, double[::1] sval,
                double[::1] y, double[::1] hmu, double[::1] out) noexcept:
    cdef double co[9]
    cdef double de[9]
    cdef double r = y[0], pr = y[1]
    cdef double dHdr
    cdef Py_ssize_t i, n, xl, yl, x2, y2, N = y.shape[0] - 2
    _coeffs(sigma, R, m1, m2, alpha, r, series, co)
    _dcoeffs(sigma, R, m1, m2, alpha, r, series, de)
    xl = 1
    yl = 1 + q1
    x2 = 1 + 2 * q1
    y2 = 1 + 2 * q1 + q2
    for i in range(N):
        hmu[i] = 0.0
    hmu[0] = co[1] * pr + co[2] * y[2]
    for i in range(q1):
        hmu[xl + i] = co[3] * y[2 + xl + i] + co[4] * y[2 + yl + i]
        hmu[yl + i] = co[5] * y[2 + yl + i] + co[4] * y[2 + xl + i]
    for i in range(q2):
        hmu[x2 + i] = co[6] * y[2 + x2 + i] + co[7] * y[2 + y2 + i]
        hmu[y2 + i] = co[8] * y[2 + y2 + i] + co[7] * y[2 + x2 + i]
    out[0] = co[0] * pr + co[1] * y[2]
    dHdr = 0.5 * (de[0] * pr * pr + 2.0 * de[1] * pr * y[2] + de[2] * y[2] * y[2])
    for i in range(q1):
        dHdr += 0.5 * (de[3] * y[2 + xl + i] * y[2 + xl + i]
                       + de[5] * y[2 + yl + i] * y[2 + yl + i]
                       + 2.0 * de[4] * y[2 + xl + i] * y[2 + yl + i])
    for i in range(q2):
        dHdr += 0.5 * (de[6] * y[2 + x2 + i] * y[2 + x2 + i]
                       + de[8] * y[2 + y2 + i] * y[2 + y2 + i]
                       + 2.0 * de[7] * y[2 + x2 + i] * y[2 + y2 + i])
    dHdr += _pot_deriv(pot_kind, pot_coeff, sigma, r, sx, scoef)
    out[1] = -dHdr
    for i in range(N):
        out[2 + i] = 0.0
    n = sval.shape[0]
    for i in range(n):
        out[2 + sa[i]] += sval[i] * y[2 + sc_idx[i]] * hmu[sb[i]]


def run_trajectory(packed, double[::1] y0, double dt, long n_steps,
                   long sample_every=1):
    """Same contract as twobody._kernels.run_trajectory."""
    cdef double sigma = packed.sigma
    cdef double R = packed.R, m1 = packed.m1, m2 = packed.m2
    cdef double alpha = packed.alpha
    cdef int q1 = packed.q1, q2 = packed.q2
    cdef int pot_kind = packed.pot_kind
    cdef double pot_coeff = packed.pot_coeff
    cdef double[::1] sx = np.ascontiguousarray(packed.spline_x, dtype=float)
    cdef double[:, ::1] scoef = np.ascontiguousarray(packed.spline_c, dtype=float)
    cdef double[::1] series = np.ascontiguousarray(packed.series, dtype=float)
    cdef long[::1] sa = np.ascontiguousarray(packed.sc_a, dtype=np.int64)
    cdef long[::1] sb = np.ascontiguousarray(packed.sc_b, dtype=np.int64)
    cdef long[::1] sc_idx = np.ascontiguousarray(packed.sc_c, dtype=np.int64)
    cdef double[::1] sval = np.ascontiguousarray(packed.sc_val, dtype=float)
    cdef double[:, ::1] kinv = np.ascontiguousarray(packed.kinv, dtype=float)
    cdef double r_lo = packed.r_lo, r_hi = packed.r_hi

    cdef Py_ssize_t N = y0.shape[0]
    cdef Py_ssize_t n_samples = n_steps // sample_every + 2
    ts_arr = np.empty(n_samples)
    states_arr = np.empty((n_samples, N))
    energy_arr = np.empty(n_samples)
    casimir_arr = np.empty(n_samples)
    mu_other_arr = np.empty(n_samples)
    cdef double[::1] ts = ts_arr
    cdef double[:, ::1] states = states_arr
    cdef double[::1] energy = energy_arr
    cdef double[::1] casimir = casimir_arr
    cdef double[::1] mu_other = mu_other_arr

    y_arr = np.array(y0, dtype=float)
    cdef double[::1] y = y_arr
    cdef double[::1] yt = np.empty(N)
    cdef double[::1] k1 = np.empty(N)
    cdef double[::1] k2 = np.empty(N)
    cdef double[::1] k3 = np.empty(N)
    cdef double[::1] k4 = np.empty(N)
    cdef double[::1] hmu = np.empty(N - 2)

    cdef Py_ssize_t k = 0, step = 0, i, j
    cdef int exit_code = EXIT_COMPLETED
    cdef double acc, m
    cdef bint bad

    # initial sample
    ts[0] = 0.0
    for i in range(N):
        states[0, i] = y[i]
    energy[0] = _energy(sigma, R, m1, m2, alpha, q1, q2, pot_kind, pot_coeff,
                        sx, scoef, series, y)
    acc = 0.0
    for i in range(N - 2):
        for j in range(N - 2):
            acc += y[2 + i] * kinv[i, j] * y[2 + j]
    casimir[0] = acc
    m = 0.0
    for i in range(3, N):
        if fabs(y[i]) > m:
            m = fabs(y[i])
    mu_other[0] = m
    k = 1

    while step < n_steps:
        _flow(sigma, R, m1, m2, alpha, q1, q2, pot_kind, pot_coeff,
              sx, scoef, series, sa, sb, sc_idx, sval, y, hmu, k1)
        for i in range(N):
            yt[i] = y[i] + 0.5 * dt * k1[i]
        _flow(sigma, R, m1, m2, alpha, q1, q2, pot_kind, pot_coeff,
              sx, scoef, series, sa, sb, sc_idx, sval, yt, hmu, k2)
        for i in range(N):
            yt[i] = y[i] + 0.5 * dt * k2[i]
        _flow(sigma, R, m1, m2, alpha, q1, q2, pot_kind, pot_coeff,
              sx, scoef, series, sa, sb, sc_idx, sval, yt, hmu, k3)
        for i in range(N):
            yt[i] = y[i] + dt * k3[i]
        _flow(sigma, R, m1, m2, alpha, q1, q2, pot_kind, pot_coeff,
              sx, scoef, series, sa, sb, sc_idx, sval, yt, hmu, k4)
        for i in range(N):
            y[i] = y[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        step += 1
        bad = 0
        for i in range(N):
            if not isfinite(y[i]):
                bad = 1
                break
        if bad:
            exit_code = EXIT_NONFINITE
            break
        if y[0] < r_lo or y[0] > r_hi:
            exit_code = EXIT_BOUNDARY
            break
        if step % sample_every == 0 or step == n_steps:
            ts[k] = step * dt
            for i in range(N):
                states[k, i] = y[i]
            energy[k] = _energy(sigma, R, m1, m2, alpha, q1, q2, pot_kind,
                                pot_coeff, sx, scoef, series, y)
            acc = 0.0
            for i in range(N - 2):
                for j in range(N - 2):
                    acc += y[2 + i] * kinv[i, j] * y[2 + j]
            casimir[k] = acc
            m = 0.0
            for i in range(3, N):
                if fabs(y[i]) > m:
                    m = fabs(y[i])
            mu_other[k] = m
            k += 1

    return {"t": ts_arr[:k], "states": states_arr[:k], "energy": energy_arr[:k],
            "casimir": casimir_arr[:k], "mu_other": mu_other_arr[:k],
            "exit_code": exit_code, "steps_done": step}
