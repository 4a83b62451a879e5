"""Random-FIR-filter compressed sensing baseline (RanCS).

Measurement convolves the signal with random Gaussian taps and keeps the
last filter output of each length-lam block; since the pipeline is linear
it collapses to an explicit M-by-N matrix and reconstruction is plain
iteratively reweighted *linear* least squares with the same weighting and
stopping rules as the chaotic pipeline.
"""

from dataclasses import dataclass

import numpy as np

from chacs.errors import EmptyMeasurementError
from chacs.reconstruction import IRNLSConfig, compute_weights


@dataclass(frozen=True)
class RancsFilter:
    taps: np.ndarray

    @property
    def length(self) -> int:
        return len(self.taps)


@dataclass(frozen=True)
class LinearMeasurement:
    matrix: np.ndarray  # (M, N): downsample . convolution . dictionary
    z: np.ndarray


@dataclass
class LinearIRLSResult:
    alpha_hat: np.ndarray
    outer_iterations: int
    converged: bool
    final_relative_change: float
    used_ridge_fallback: bool = False


def generate_random_taps(length: int, seed) -> RancsFilter:
    """i.i.d. standard normal taps, seed-deterministic."""
    if length < 1:
        raise ValueError("filter length must be >= 1")
    rng = np.random.default_rng(seed)
    return RancsFilter(taps=rng.standard_normal(length))


def fir_measure(signal, fir: RancsFilter, lam: int) -> np.ndarray:
    """Causal zero-initial-state convolution, then block-end downsampling.

    out_n = sum_l h_l * s_{n-l} (s_n = 0 for n < 0);
    z_m = out_{lam*(m+1)-1} for m = 0..floor(N/lam)-1.
    """
    if lam < 1:
        raise ValueError("lam must be >= 1")
    samples = np.asarray(getattr(signal, "samples", signal), dtype=float)
    n = len(samples)
    if n // lam == 0:
        raise EmptyMeasurementError(
            f"downsampling rate {lam} leaves no measurements for n={n}"
        )
    filtered = np.convolve(samples, fir.taps)[:n]
    return filtered[lam - 1 :: lam][: n // lam].copy()


def build_measurement_matrix(fir: RancsFilter, dictionary, n: int,
                             lam: int) -> np.ndarray:
    """Explicit measurement matrix; column k is the measured atom k."""
    if dictionary.n != n:
        raise ValueError("dictionary length does not match n")
    columns = [fir_measure(dictionary.atoms[:, k], fir, lam) for k in range(n)]
    return np.column_stack(columns)


def irls_linear_reconstruct(a_matrix, z, config: IRNLSConfig,
                            keep_history: bool = False):
    """Iteratively reweighted linear least squares.

    Starts from the minimum-norm least-squares solution; each pass solves
    (A^T A + mu*diag(w)) alpha = A^T z in closed form with weights from the
    previous iterate, stopping on the relative-change rule. A singular
    normal system falls back to an extra 1e-12 ridge and flags the result.

    With ``keep_history`` the per-iteration iterates are attached to the
    result as ``alphas`` (diagnostic use).
    """
    a_matrix = np.asarray(a_matrix, dtype=float)
    z = np.asarray(z, dtype=float)
    m, n = a_matrix.shape
    if z.shape != (m,):
        raise ValueError(f"z has shape {z.shape}, expected ({m},)")

    alpha = np.linalg.lstsq(a_matrix, z, rcond=None)[0]
    gram = a_matrix.T @ a_matrix
    rhs = a_matrix.T @ z
    used_ridge = False
    converged = False
    relative_change = float("inf")
    outer = 0
    alphas = [alpha.copy()] if keep_history else None

    for _ in range(config.max_outer):
        weights = compute_weights(alpha, config.eps)
        system = gram + np.diag(config.mu * weights)
        try:
            new_alpha = np.linalg.solve(system, rhs)
        except np.linalg.LinAlgError:
            new_alpha = np.linalg.solve(system + 1e-12 * np.eye(n), rhs)
            used_ridge = True
        previous_norm = float(np.linalg.norm(alpha))
        change = float(np.linalg.norm(new_alpha - alpha))
        if previous_norm > 0.0:
            relative_change = change / previous_norm
        else:
            relative_change = 0.0 if change == 0.0 else float("inf")
        alpha = new_alpha
        outer += 1
        if keep_history:
            alphas.append(alpha.copy())
        if relative_change <= config.outer_tol:
            converged = True
            break

    result = LinearIRLSResult(
        alpha_hat=alpha,
        outer_iterations=outer,
        converged=converged,
        final_relative_change=relative_change,
        used_ridge_fallback=used_ridge,
    )
    if keep_history:
        result.alphas = alphas
    return result
