"""Henon map simulation: free, excited, and impulsively driven variants.

The map is x' = -a*x^2 + y + 1, y' = b*x (+ excitation on the y update).
Measurements are taken by downsampling the x state at every lam-th step;
a receiver-side replica ("slave") runs the same dynamics with those samples
injected into its x state, which is the mechanism the reconstruction solver
exploits. Conventions used throughout:

* z_m = x[lam*m] for m = 1..M with M = floor(N/lam); x[0] is shared as the
  initial condition and is not a measurement.
* Record-then-inject: the slave's own x[lam*m] is recorded (into zbar, and
  its sensitivity into the Jacobian row) before being overwritten by z_m.
"""

import json
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from chacs import kernels
from chacs.errors import DivergenceError, EmptyMeasurementError
from chacs.fileio import format_float

# The attractor for (a, b) = (1.4, 0.3) stays within |x| < 1.8; anything
# past this bound is treated as an escaped orbit.
DIVERGENCE_BOUND = 10.0


class HenonParams(NamedTuple):
    a: float = 1.4
    b: float = 0.3


class PlanarState(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Trajectory:
    """State history of one run; states[n] = (x_n, y_n)."""

    states: np.ndarray  # shape (steps+1, 2)

    def __len__(self):
        return len(self.states)

    @property
    def x(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.states[:, 1]

    def state(self, n: int) -> PlanarState:
        return PlanarState(float(self.states[n, 0]), float(self.states[n, 1]))


@dataclass(frozen=True)
class MeasurementRecord:
    """Everything the receiver holds about one measurement run."""

    params: HenonParams
    lam: int
    n: int
    m: int
    initial: PlanarState
    scale: float
    z: np.ndarray

    def to_json(self) -> str:
        """Serialize to the wire format (doubles at 17 significant digits)."""
        f = format_float
        fields = [
            f'"a": {f(self.params.a)}',
            f'"b": {f(self.params.b)}',
            f'"lambda": {self.lam}',
            f'"n": {self.n}',
            f'"m": {self.m}',
            f'"x0": {f(self.initial.x)}',
            f'"y0": {f(self.initial.y)}',
            f'"scale": {f(self.scale)}',
            '"z": [' + ", ".join(f(v) for v in self.z) + "]",
        ]
        return "{" + ", ".join(fields) + "}"

    @classmethod
    def from_json(cls, text: str) -> "MeasurementRecord":
        doc = json.loads(text)
        lam = int(doc["lambda"])
        n = int(doc["n"])
        m = int(doc["m"])
        z = np.asarray(doc["z"], dtype=float)
        if lam < 1:
            raise ValueError("lambda must be >= 1")
        if m != n // lam or len(z) != m:
            raise ValueError("inconsistent measurement counts in record")
        if not np.all(np.isfinite(z)):
            raise ValueError("non-finite measurement values in record")
        return cls(
            params=HenonParams(float(doc["a"]), float(doc["b"])),
            lam=lam,
            n=n,
            m=m,
            initial=PlanarState(float(doc["x0"]), float(doc["y0"])),
            scale=float(doc["scale"]),
            z=z,
        )


@dataclass
class SlaveRun:
    """Output of one excited-slave pass."""

    zbar: np.ndarray
    jacobian: Optional[np.ndarray] = None  # (M, N): d zbar_m / d alpha_k
    trajectory: Optional[Trajectory] = None


@dataclass(frozen=True)
class ChaosReport:
    bounded: bool
    lyapunov_estimate: float
    steps: int


def henon_step(state, params: HenonParams, excitation: float = 0.0) -> PlanarState:
    """One step of the (possibly excited) map."""
    a, b = params
    x, y = state
    xn = -a * x * x + y + 1.0
    yn = b * x + excitation
    if not (math.isfinite(xn) and math.isfinite(yn)):
        raise DivergenceError(
            f"non-finite state after step from ({x}, {y})", state=(x, y)
        )
    return PlanarState(xn, yn)


def _signal_samples(signal) -> np.ndarray:
    samples = getattr(signal, "samples", signal)
    return np.ascontiguousarray(samples, dtype=float)


def _raise_divergence(diverged: int, what: str):
    raise DivergenceError(f"{what} left |x| <= {DIVERGENCE_BOUND} at step {diverged}",
                          step=diverged)


def run_master(params: HenonParams, init, steps: int) -> Trajectory:
    """Free-running orbit of length steps+1."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    exc = np.zeros(steps)
    states, diverged = kernels.henon_orbit(
        params.a, params.b, init[0], init[1], exc, DIVERGENCE_BOUND
    )
    if diverged >= 0:
        _raise_divergence(diverged, "free orbit")
    return Trajectory(states)


def run_excited_master(params: HenonParams, init, signal) -> Trajectory:
    """Orbit excited by the signal; step n adds sample n to the y update."""
    exc = _signal_samples(signal)
    if len(exc) < 1:
        raise ValueError("signal must have at least one sample")
    states, diverged = kernels.henon_orbit(
        params.a, params.b, init[0], init[1], exc, DIVERGENCE_BOUND
    )
    if diverged >= 0:
        _raise_divergence(diverged, "excited orbit")
    return Trajectory(states)


def downsample(traj: Trajectory, lam: int, n: int) -> np.ndarray:
    """Measurements z_m = x[lam*m], m = 1..floor(n/lam)."""
    if lam < 1:
        raise ValueError("lam must be >= 1")
    if len(traj) < n + 1:
        raise ValueError(f"trajectory too short for n={n}")
    m = n // lam
    if m == 0:
        raise EmptyMeasurementError(
            f"downsampling rate {lam} leaves no measurements for n={n}"
        )
    return traj.x[lam::lam][:m].copy()


def run_impulsive_slave_free(master: Trajectory, lam: int, params: HenonParams,
                             slave_init):
    """Free replica synchronized by x-injections at every lam-th step.

    Returns (slave trajectory, |x - xbar| error sequence); the error at each
    index is recorded before any injection at that index, so it shows the
    open-loop mismatch the next injection corrects.
    """
    if lam < 1:
        raise ValueError("lam must be >= 1")
    master_x = np.ascontiguousarray(master.x, dtype=float)
    states, err, diverged = kernels.impulsive_slave(
        params.a, params.b, master_x, lam, slave_init[0], slave_init[1],
        DIVERGENCE_BOUND,
    )
    if diverged >= 0:
        _raise_divergence(diverged, "impulsively driven slave")
    return Trajectory(states), err


def run_excited_slave(record: MeasurementRecord, alpha_bar, dictionary,
                      want_jacobian: bool = False) -> SlaveRun:
    """Receiver-side replica excited by the candidate coefficients.

    The slave starts from the shared initial condition and is driven by the
    recorded measurements (record-then-inject). With ``want_jacobian`` the
    sensitivities d zbar_m / d alpha_k are propagated through the variational
    recursion u' = -2*a*x*u + v, v' = b*u + scale*phi[n,k], with u reset to
    zero at injections after its value lands in the Jacobian row.
    """
    alpha_bar = np.asarray(alpha_bar, dtype=float)
    if alpha_bar.shape != (record.n,):
        raise ValueError(
            f"alpha_bar has shape {alpha_bar.shape}, expected ({record.n},)"
        )
    if dictionary.n != record.n:
        raise ValueError("dictionary and record disagree on signal length")
    if not np.all(np.isfinite(alpha_bar)):
        raise ValueError("alpha_bar must be finite")
    # Same expression as synthesize_signal so that alpha_bar == alpha tracks
    # the master bit-for-bit.
    sbar = np.ascontiguousarray(record.scale * (dictionary.atoms @ alpha_bar))
    dphi = None
    if want_jacobian:
        dphi = np.ascontiguousarray(record.scale * dictionary.atoms)
    z = np.ascontiguousarray(record.z, dtype=float)
    zbar, jac, states, diverged = kernels.excited_slave(
        record.params.a, record.params.b, record.initial.x, record.initial.y,
        record.lam, z, sbar, dphi, DIVERGENCE_BOUND,
    )
    if diverged >= 0:
        _raise_divergence(diverged, "excited slave")
    return SlaveRun(zbar=zbar, jacobian=jac, trajectory=Trajectory(states))


def finite_difference_jacobian(record: MeasurementRecord, dictionary, alpha_bar,
                               step: float = 1e-6) -> np.ndarray:
    """Central-difference d zbar / d alpha; the oracle for the variational path."""
    alpha_bar = np.asarray(alpha_bar, dtype=float)
    jac = np.zeros((record.m, record.n))
    for k in range(record.n):
        bumped = alpha_bar.copy()
        bumped[k] = alpha_bar[k] + step
        z_plus = run_excited_slave(record, bumped, dictionary).zbar
        bumped[k] = alpha_bar[k] - step
        z_minus = run_excited_slave(record, bumped, dictionary).zbar
        jac[:, k] = (z_plus - z_minus) / (2.0 * step)
    return jac


def check_chaotic(params: HenonParams, init, signal=None,
                  steps: int = 100_000, transient: int = 1_000) -> ChaosReport:
    """Boundedness plus a largest-Lyapunov-exponent estimate.

    The run is at least ``steps`` long; when a signal is given its samples
    excite the first len(signal) steps and the orbit then runs free, so the
    estimate reflects the excited system and its relaxation. Divergence is
    reported as bounded=False (estimate nan), never as an exception.
    """
    sig = _signal_samples(signal) if signal is not None else np.zeros(0)
    total = max(int(steps), len(sig))
    exc = np.zeros(total)
    exc[: len(sig)] = sig
    lyap, diverged = kernels.lyapunov_sum(
        params.a, params.b, init[0], init[1], exc, transient, DIVERGENCE_BOUND
    )
    bounded = diverged < 0
    return ChaosReport(
        bounded=bounded,
        lyapunov_estimate=float(lyap) if bounded else float("nan"),
        steps=total,
    )


def measure(params: HenonParams, init, lam: int, signal) -> MeasurementRecord:
    """Run the excited map and downsample it into a measurement record."""
    samples = _signal_samples(signal)
    n = len(samples)
    traj = run_excited_master(params, init, samples)
    z = downsample(traj, lam, n)
    return MeasurementRecord(
        params=params,
        lam=lam,
        n=n,
        m=len(z),
        initial=PlanarState(float(init[0]), float(init[1])),
        scale=float(getattr(signal, "scale", 1.0)),
        z=z,
    )
