# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot simulation kernels.

Semantics (including the order of floating-point operations) match
chacs._kernels_py exactly; see that module for documentation. The build
disables FP contraction so both backends agree bitwise.
"""

from libc.math cimport fabs, isfinite, log, sqrt

import numpy as np


def henon_orbit(double a, double b, double x0, double y0,
                double[::1] exc, double bound):
    cdef Py_ssize_t steps = exc.shape[0]
    states_arr = np.zeros((steps + 1, 2))
    cdef double[:, ::1] states = states_arr
    cdef double x = x0, y = y0, xn, yn
    cdef Py_ssize_t n
    states[0, 0] = x
    states[0, 1] = y
    for n in range(steps):
        xn = -a * x * x + y + 1.0
        yn = b * x + exc[n]
        if not (isfinite(xn) and fabs(xn) <= bound):
            return states_arr, n + 1
        x = xn
        y = yn
        states[n + 1, 0] = x
        states[n + 1, 1] = y
    return states_arr, -1


def impulsive_slave(double a, double b, double[::1] master_x, Py_ssize_t lam,
                    double x0, double y0, double bound):
    cdef Py_ssize_t n_states = master_x.shape[0]
    states_arr = np.zeros((n_states, 2))
    err_arr = np.zeros(n_states)
    cdef double[:, ::1] states = states_arr
    cdef double[::1] err = err_arr
    cdef double x = x0, y = y0, xn, yn
    cdef Py_ssize_t i
    for i in range(n_states):
        err[i] = fabs(master_x[i] - x)
        if i > 0 and i % lam == 0:
            x = master_x[i]
        states[i, 0] = x
        states[i, 1] = y
        if i + 1 < n_states:
            xn = -a * x * x + y + 1.0
            yn = b * x
            if not (isfinite(xn) and fabs(xn) <= bound):
                return states_arr, err_arr, i + 1
            x = xn
            y = yn
    return states_arr, err_arr, -1


def excited_slave(double a, double b, double x0, double y0, Py_ssize_t lam,
                  double[::1] z, double[::1] sbar, dphi, double bound):
    cdef Py_ssize_t n = sbar.shape[0]
    cdef Py_ssize_t m_count = z.shape[0]
    zbar_arr = np.zeros(m_count)
    states_arr = np.zeros((n + 1, 2))
    cdef double[::1] zbar = zbar_arr
    cdef double[:, ::1] states = states_arr
    cdef bint want_jac = dphi is not None
    cdef double[:, ::1] dphi_v
    cdef double[:, ::1] jac_v
    cdef double[::1] u, v
    jac_arr = None
    u_arr = None
    v_arr = None
    if want_jac:
        dphi_v = dphi
        jac_arr = np.zeros((m_count, n))
        jac_v = jac_arr
        u_arr = np.zeros(n)
        v_arr = np.zeros(n)
        u = u_arr
        v = v_arr
    cdef double x = x0, y = y0, xn, yn, t, un
    cdef Py_ssize_t i, m, k
    for i in range(n + 1):
        if i > 0 and i % lam == 0 and i // lam <= m_count:
            m = i // lam
            zbar[m - 1] = x
            if want_jac:
                for k in range(n):
                    jac_v[m - 1, k] = u[k]
                    u[k] = 0.0
            x = z[m - 1]
        states[i, 0] = x
        states[i, 1] = y
        if i < n:
            xn = -a * x * x + y + 1.0
            yn = b * x + sbar[i]
            if want_jac:
                t = -2.0 * a * x
                for k in range(n):
                    un = t * u[k] + v[k]
                    v[k] = b * u[k] + dphi_v[i, k]
                    u[k] = un
            if not (isfinite(xn) and fabs(xn) <= bound):
                return zbar_arr, jac_arr, states_arr, i + 1
            x = xn
            y = yn
    return zbar_arr, jac_arr, states_arr, -1


def lyapunov_sum(double a, double b, double x0, double y0,
                 double[::1] exc, Py_ssize_t transient, double bound):
    cdef Py_ssize_t steps = exc.shape[0]
    cdef double x = x0, y = y0, w0 = 1.0, w1 = 0.0
    cdef double t0, t1, nrm, xn, yn, total = 0.0
    cdef Py_ssize_t n, count = 0
    cdef bint collapsed = False  # tangent vector annihilated (degenerate maps)
    for n in range(steps):
        if not collapsed:
            t0 = -2.0 * a * x * w0 + w1
            t1 = b * w0
            nrm = sqrt(t0 * t0 + t1 * t1)
            if nrm == 0.0:
                collapsed = True
            else:
                if n >= transient:
                    total += log(nrm)
                    count += 1
                w0 = t0 / nrm
                w1 = t1 / nrm
        xn = -a * x * x + y + 1.0
        yn = b * x + exc[n]
        if not (isfinite(xn) and fabs(xn) <= bound):
            return _lyap_value(total, count, collapsed), n + 1
        x = xn
        y = yn
    return _lyap_value(total, count, collapsed), -1


cdef _lyap_value(double total, Py_ssize_t count, bint collapsed):
    if collapsed:
        return float("-inf")
    return total / count if count else float("nan")
