"""Pure-Python implementations of the hot simulation kernels.

`chacs.kernels` selects these when the compiled extension is unavailable
(or when CHACS_PURE_PYTHON is set). Per-step arithmetic is written in the
same order as in the compiled kernels so both backends produce bit-identical
trajectories; the extension is compiled with FP contraction disabled for the
same reason.

All kernels return a ``diverged`` index: the step at which |x| first left
[-bound, bound] (or went non-finite), or -1 for a clean run. Callers decide
whether that is an error.
"""

import math

import numpy as np


def henon_orbit(a, b, x0, y0, exc, bound):
    """Iterate x' = -a*x^2 + y + 1, y' = b*x + exc[n] for len(exc) steps.

    Returns (states, diverged) with states of shape (steps+1, 2). On
    divergence the remaining states are left at zero.
    """
    steps = len(exc)
    states = np.zeros((steps + 1, 2))
    x = float(x0)
    y = float(y0)
    states[0, 0] = x
    states[0, 1] = y
    exc_l = [float(s) for s in exc]
    for n in range(steps):
        xn = -a * x * x + y + 1.0
        yn = b * x + exc_l[n]
        if not (math.isfinite(xn) and abs(xn) <= bound):
            return states, n + 1
        x = xn
        y = yn
        states[n + 1, 0] = x
        states[n + 1, 1] = y
    return states, -1


def impulsive_slave(a, b, master_x, lam, x0, y0, bound):
    """Free-running replica driven by the master's x at every lam-th step.

    ``master_x`` is the master's x sequence (length steps+1). The slave's x
    is overwritten by master_x[i] at i = lam, 2*lam, ...; the absolute x
    error at each index is recorded *before* the overwrite.

    Returns (states, err, diverged).
    """
    n_states = len(master_x)
    states = np.zeros((n_states, 2))
    err = np.zeros(n_states)
    mx = [float(v) for v in master_x]
    x = float(x0)
    y = float(y0)
    for i in range(n_states):
        err[i] = abs(mx[i] - x)
        if i > 0 and i % lam == 0:
            x = mx[i]
        states[i, 0] = x
        states[i, 1] = y
        if i + 1 < n_states:
            xn = -a * x * x + y + 1.0
            yn = b * x
            if not (math.isfinite(xn) and abs(xn) <= bound):
                return states, err, i + 1
            x = xn
            y = yn
    return states, err, -1


def excited_slave(a, b, x0, y0, lam, z, sbar, dphi, bound):
    """Excited replica with injections, optionally propagating sensitivities.

    ``sbar`` is the slave's excitation sequence (length N); ``z`` holds the
    M injected measurements. At each injection instant i = lam*m the current
    x is recorded into zbar[m-1] *before* being overwritten with z[m-1].

    When ``dphi`` (the N-by-N array of excitation derivatives, row n giving
    d sbar_n / d alpha_k) is not None, the sensitivity pair
        u' = -2*a*x*u + v,   v' = b*u + dphi[n]
    is propagated alongside the state; u is copied into the Jacobian row and
    reset to zero at each injection, mirroring the state overwrite.

    Returns (zbar, jac_or_None, states, diverged).
    """
    n = len(sbar)
    m_count = len(z)
    zbar = np.zeros(m_count)
    states = np.zeros((n + 1, 2))
    jac = None
    if dphi is not None:
        jac = np.zeros((m_count, n))
        u = np.zeros(n)
        v = np.zeros(n)
    x = float(x0)
    y = float(y0)
    z_l = [float(w) for w in z]
    s_l = [float(s) for s in sbar]
    for i in range(n + 1):
        if i > 0 and i % lam == 0 and i // lam <= m_count:
            m = i // lam
            zbar[m - 1] = x
            if jac is not None:
                jac[m - 1, :] = u
                u[:] = 0.0
            x = z_l[m - 1]
        states[i, 0] = x
        states[i, 1] = y
        if i < n:
            xn = -a * x * x + y + 1.0
            yn = b * x + s_l[i]
            if jac is not None:
                t = -2.0 * a * x
                u_new = t * u + v
                v = b * u + dphi[i]
                u = u_new
            if not (math.isfinite(xn) and abs(xn) <= bound):
                return zbar, jac, states, i + 1
            x = xn
            y = yn
    return zbar, jac, states, -1


def lyapunov_sum(a, b, x0, y0, exc, transient, bound):
    """Largest-Lyapunov-exponent estimate by tangent-vector renormalization.

    Runs len(exc) steps; per-step log growth of the tangent vector is
    averaged over the steps after ``transient``. Returns (estimate,
    diverged); the estimate is nan when no steps were accumulated.
    """
    steps = len(exc)
    x = float(x0)
    y = float(y0)
    w0 = 1.0
    w1 = 0.0
    total = 0.0
    count = 0
    collapsed = False  # tangent vector annihilated (degenerate maps)
    exc_l = [float(s) for s in exc]
    for n in range(steps):
        if not collapsed:
            t0 = -2.0 * a * x * w0 + w1
            t1 = b * w0
            nrm = math.sqrt(t0 * t0 + t1 * t1)
            if nrm == 0.0:
                collapsed = True
            else:
                if n >= transient:
                    total += math.log(nrm)
                    count += 1
                w0 = t0 / nrm
                w1 = t1 / nrm
        xn = -a * x * x + y + 1.0
        yn = b * x + exc_l[n]
        if not (math.isfinite(xn) and abs(xn) <= bound):
            return _lyap_value(total, count, collapsed), n + 1
        x = xn
        y = yn
    return _lyap_value(total, count, collapsed), -1


def _lyap_value(total, count, collapsed):
    if collapsed:
        return float("-inf")
    return total / count if count else float("nan")
