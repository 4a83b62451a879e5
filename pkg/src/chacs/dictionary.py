"""Real Fourier dictionary, sparse coefficient sampling, and signal scaling.

Signals are synthesized as s = scale * (atoms @ alpha) over an orthonormal
real Fourier basis whose atom frequencies cover the digital range [0, 0.5].
The scale is chosen so the excitation is small enough to keep the excited
map chaotic; it is a known protocol parameter carried alongside the
measurements, so reconstruction estimates the O(1) coefficients directly.
"""

from dataclasses import dataclass

import numpy as np

from chacs import henon
from chacs.errors import ScalingFailureError

DISTRIBUTIONS = ("gaussian", "bernoulli")


@dataclass(frozen=True)
class Dictionary:
    n: int
    atoms: np.ndarray  # (n, n), column k is atom k
    frequencies: np.ndarray  # digital frequency of each atom, in [0, 0.5]


@dataclass(frozen=True)
class SparseCoefficients:
    alpha: np.ndarray
    support: np.ndarray  # sorted indices of the nonzeros
    k: int
    distribution: str


@dataclass(frozen=True)
class Signal:
    samples: np.ndarray
    scale: float  # multiplier already applied to the samples

    def __len__(self):
        return len(self.samples)


def build_real_fourier_dictionary(n: int) -> Dictionary:
    """Orthonormal real Fourier basis: DC, cos/sin pairs, Nyquist."""
    if n < 4 or n % 2 != 0:
        raise ValueError("dictionary length must be even and >= 4")
    t = np.arange(n)
    atoms = np.empty((n, n))
    freqs = np.empty(n)
    atoms[:, 0] = 1.0 / np.sqrt(n)
    freqs[0] = 0.0
    amp = np.sqrt(2.0 / n)
    for j in range(1, n // 2):
        phase = 2.0 * np.pi * j * t / n
        atoms[:, 2 * j - 1] = amp * np.cos(phase)
        atoms[:, 2 * j] = amp * np.sin(phase)
        freqs[2 * j - 1] = freqs[2 * j] = j / n
    atoms[:, n - 1] = np.where(t % 2 == 0, 1.0, -1.0) / np.sqrt(n)
    freqs[n - 1] = 0.5
    return Dictionary(n=n, atoms=atoms, frequencies=freqs)


def sample_sparse_coefficients(n: int, k: int, distribution: str,
                               seed) -> SparseCoefficients:
    """K-sparse coefficients on a uniformly drawn support (no replacement)."""
    if not 0 <= k <= n:
        raise ValueError(f"sparsity {k} outside [0, {n}]")
    if distribution not in DISTRIBUTIONS:
        raise ValueError(f"unknown distribution {distribution!r}")
    rng = np.random.default_rng(seed)
    support = np.sort(rng.choice(n, size=k, replace=False))
    alpha = np.zeros(n)
    if k > 0:
        if distribution == "gaussian":
            values = rng.standard_normal(k)
        else:
            values = rng.integers(0, 2, size=k) * 2.0 - 1.0
        alpha[support] = values
    return SparseCoefficients(alpha=alpha, support=support, k=k,
                              distribution=distribution)


def _alpha_of(coeffs) -> np.ndarray:
    return np.asarray(getattr(coeffs, "alpha", coeffs), dtype=float)


def synthesize_signal(dictionary: Dictionary, coeffs, scale: float = 1.0) -> Signal:
    alpha = _alpha_of(coeffs)
    if alpha.shape != (dictionary.n,):
        raise ValueError(
            f"coefficients have shape {alpha.shape}, expected ({dictionary.n},)"
        )
    samples = scale * (dictionary.atoms @ alpha)
    return Signal(samples=samples, scale=float(scale))


def analyze_signal(dictionary: Dictionary, signal) -> np.ndarray:
    """Exact coefficients of the (scaled) signal, by orthonormality."""
    samples = np.asarray(getattr(signal, "samples", signal), dtype=float)
    if samples.shape != (dictionary.n,):
        raise ValueError(
            f"signal has shape {samples.shape}, expected ({dictionary.n},)"
        )
    return dictionary.atoms.T @ samples


def choose_scale(dictionary: Dictionary, coeffs, params, init,
                 target_amplitude: float = 0.1, max_halvings: int = 20,
                 check_steps: int = 100_000) -> float:
    """Scale bringing max|s| to target_amplitude, validated to preserve chaos.

    The candidate scale is halved (up to ``max_halvings`` times) until the
    excited orbit stays bounded. Zero coefficients need no scaling: returns 1.
    """
    if target_amplitude <= 0:
        raise ValueError("target_amplitude must be positive")
    alpha = _alpha_of(coeffs)
    raw = dictionary.atoms @ alpha
    peak = float(np.max(np.abs(raw))) if len(raw) else 0.0
    if peak == 0.0:
        return 1.0
    scale = target_amplitude / peak
    for _ in range(max_halvings + 1):
        report = henon.check_chaotic(params, init, Signal(scale * raw, scale),
                                     steps=check_steps)
        if report.bounded:
            return scale
        scale *= 0.5
    raise ScalingFailureError(
        f"no bounded excitation found after {max_halvings} halvings"
    )
