"""Compiled and pure-Python kernels must agree bit-for-bit."""

import os
import subprocess
import sys

import numpy as np
import pytest

from chacs import _kernels_py as pyk
from chacs import kernels

compiled = pytest.importorskip("chacs._speedups")

BOUND = 10.0


@pytest.fixture(scope="module")
def excitation():
    rng = np.random.default_rng(99)
    return rng.normal(scale=0.01, size=2000)


def test_orbit_bitwise_equal(excitation):
    a = compiled.henon_orbit(1.4, 0.3, 0.25, 0.25, excitation, BOUND)
    b = pyk.henon_orbit(1.4, 0.3, 0.25, 0.25, excitation, BOUND)
    assert a[1] == b[1]
    assert np.array_equal(a[0], b[0])


def test_free_orbit_bitwise_equal():
    exc = np.zeros(5000)
    a = compiled.henon_orbit(1.4, 0.3, 0.25, 0.25, exc, BOUND)
    b = pyk.henon_orbit(1.4, 0.3, 0.25, 0.25, exc, BOUND)
    assert a[1] == b[1] == -1
    assert np.array_equal(a[0], b[0])


def test_orbit_divergence_index_matches():
    exc = np.zeros(100)
    a = compiled.henon_orbit(5.0, 0.3, 0.0, 0.0, exc, BOUND)
    b = pyk.henon_orbit(5.0, 0.3, 0.0, 0.0, exc, BOUND)
    assert a[1] == b[1] > 0
    assert np.array_equal(a[0], b[0])


def test_impulsive_slave_bitwise_equal(excitation):
    master, _ = compiled.henon_orbit(1.4, 0.3, 0.25, 0.25,
                                     np.zeros(1500), BOUND)
    mx = np.ascontiguousarray(master[:, 0])
    a = compiled.impulsive_slave(1.4, 0.3, mx, 3, 0.0, 0.0, BOUND)
    b = pyk.impulsive_slave(1.4, 0.3, mx, 3, 0.0, 0.0, BOUND)
    assert np.array_equal(a[0], b[0])
    assert np.array_equal(a[1], b[1])
    assert a[2] == b[2] == -1


def test_excited_slave_bitwise_equal():
    rng = np.random.default_rng(5)
    n, lam = 96, 3
    master, _ = compiled.henon_orbit(1.4, 0.3, 0.25, 0.25,
                                     rng.normal(scale=0.01, size=n), BOUND)
    z = np.ascontiguousarray(master[:, 0][lam::lam][: n // lam])
    sbar = np.ascontiguousarray(rng.normal(scale=0.01, size=n))
    dphi = np.ascontiguousarray(rng.normal(size=(n, n)) * 0.02)
    a = compiled.excited_slave(1.4, 0.3, 0.25, 0.25, lam, z, sbar, dphi,
                               BOUND)
    b = pyk.excited_slave(1.4, 0.3, 0.25, 0.25, lam, z, sbar, dphi, BOUND)
    assert np.array_equal(a[0], b[0])
    assert np.array_equal(a[1], b[1])
    assert np.array_equal(a[2], b[2])
    assert a[3] == b[3] == -1


def test_lyapunov_bitwise_equal():
    exc = np.zeros(50_000)
    a = compiled.lyapunov_sum(1.4, 0.3, 0.25, 0.25, exc, 1000, BOUND)
    b = pyk.lyapunov_sum(1.4, 0.3, 0.25, 0.25, exc, 1000, BOUND)
    assert a == b


def test_env_var_forces_python_backend():
    code = "import chacs.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, CHACS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "python"


@pytest.mark.skipif(os.environ.get("CHACS_PURE_PYTHON", "0") not in ("", "0"),
                    reason="pure-Python backend forced via environment")
def test_default_backend_is_compiled_here():
    assert kernels.BACKEND == "compiled"
