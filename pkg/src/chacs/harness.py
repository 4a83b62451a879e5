"""Seeded Monte-Carlo trials and sweeps over the two pipelines.

One realization = fresh coefficients plus a fresh solver initialization,
both derived from the trial seed; trial seeds are content-hashes of
(master seed, grid key, realization index) so every grid cell's trials are
independent of the rest of the grid. Failed trials (divergence, stalls,
scaling failures) are recorded with err = inf rather than dropped so medians
stay honest.
"""

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from time import perf_counter
from typing import Optional, Sequence

import numpy as np

from chacs import rancs as rancs_mod
from chacs.dictionary import (build_real_fourier_dictionary, choose_scale,
                              sample_sparse_coefficients, synthesize_signal)
from chacs.errors import ChacsError, SolverStallError
from chacs.fileio import format_float, write_text_atomic
from chacs.henon import HenonParams, PlanarState, measure
from chacs.reconstruction import IRNLSConfig, irnls_reconstruct

DEFAULT_PARAMS = HenonParams(1.4, 0.3)
DEFAULT_INIT = PlanarState(0.25, 0.25)

TRIALS_CSV_HEADER = ("method,distribution,lambda,K,L,realization,seed,err,"
                     "outer_iterations,converged,wall_time_s")
SUMMARY_CSV_HEADER = "method,distribution,lambda,K,L,realizations,median_err"


@dataclass(frozen=True)
class TrialRecord:
    method: str
    distribution: str
    k: int
    lam: int
    filter_length: Optional[int]
    realization: int
    seed: int
    err: float
    outer_iterations: int
    converged: bool
    wall_time_s: float


@dataclass(frozen=True)
class SummaryRow:
    method: str
    distribution: str
    lam: int
    k: int
    filter_length: Optional[int]
    realizations: int
    median_err: float


@dataclass
class SweepTable:
    trials: list
    summary: list


@dataclass(frozen=True)
class SweepGrid:
    methods: Sequence[str]
    distributions: Sequence[str]
    lambdas: Sequence[int]
    sparsities: Sequence[int]
    filter_lengths: Sequence[int] = ()  # used by rancs rows only
    n: int = 128


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from the textual form of the parts."""
    text = "|".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def median_err(errs) -> float:
    """Median as the mean of the two central order statistics for even
    counts; inf sentinels sort as largest."""
    return float(np.median(np.asarray(errs, dtype=float)))


def relative_error(s_true, s_hat) -> float:
    """Err = sum((s - s_hat)^2) / sum(s^2) on signal samples."""
    s_true = np.asarray(s_true, dtype=float)
    s_hat = np.asarray(s_hat, dtype=float)
    if s_true.shape != s_hat.shape:
        raise ValueError("signals must have matching lengths")
    denom = float(np.sum(s_true * s_true))
    if denom == 0.0:
        raise ValueError("relative error undefined for an all-zero signal")
    return float(np.sum((s_true - s_hat) ** 2)) / denom


def _trial_error(s_true, s_hat) -> float:
    # Zero input has no relative scale; score the absolute squared error so
    # a near-zero reconstruction still counts as success.
    s_true = np.asarray(s_true, dtype=float)
    if float(np.sum(s_true * s_true)) == 0.0:
        s_hat = np.asarray(s_hat, dtype=float)
        return float(np.sum(s_hat * s_hat))
    return relative_error(s_true, s_hat)


def run_chacs_trial(n: int, k: int, lam: int, distribution: str,
                    config: IRNLSConfig, seed: int,
                    params: HenonParams = DEFAULT_PARAMS,
                    init: PlanarState = DEFAULT_INIT,
                    target_amplitude: float = 0.1,
                    realization: int = 0) -> TrialRecord:
    """Generate, measure, reconstruct, and score one chaotic-pipeline trial."""
    start = perf_counter()
    dictionary = build_real_fourier_dictionary(n)
    coeffs = sample_sparse_coefficients(n, k, distribution,
                                        derive_seed(seed, "coefficients"))
    err = float("inf")
    outer = 0
    converged = False
    try:
        scale = choose_scale(dictionary, coeffs, params, init, target_amplitude)
        signal = synthesize_signal(dictionary, coeffs, scale)
        record = measure(params, init, lam, signal)
        result = irnls_reconstruct(record, dictionary, config,
                                   derive_seed(seed, "start"))
        s_hat = synthesize_signal(dictionary, result.alpha_hat, scale)
        err = _trial_error(signal.samples, s_hat.samples)
        outer = result.outer_iterations
        converged = result.converged
    except SolverStallError as exc:
        if exc.partial is not None:
            outer = exc.partial.outer_iterations
    except ChacsError:
        pass
    return TrialRecord(
        method="chacs", distribution=distribution, k=k, lam=lam,
        filter_length=None, realization=realization, seed=seed, err=err,
        outer_iterations=outer, converged=converged,
        wall_time_s=perf_counter() - start,
    )


def run_rancs_trial(n: int, k: int, lam: int, filter_length: int,
                    distribution: str, config: IRNLSConfig, seed: int,
                    realization: int = 0) -> TrialRecord:
    """One trial of the linear random-filter pipeline (unit signal scale)."""
    start = perf_counter()
    dictionary = build_real_fourier_dictionary(n)
    coeffs = sample_sparse_coefficients(n, k, distribution,
                                        derive_seed(seed, "coefficients"))
    err = float("inf")
    outer = 0
    converged = False
    try:
        signal = synthesize_signal(dictionary, coeffs, 1.0)
        fir = rancs_mod.generate_random_taps(filter_length,
                                             derive_seed(seed, "taps"))
        matrix = rancs_mod.build_measurement_matrix(fir, dictionary, n, lam)
        z = rancs_mod.fir_measure(signal, fir, lam)
        result = rancs_mod.irls_linear_reconstruct(matrix, z, config)
        s_hat = dictionary.atoms @ result.alpha_hat
        err = _trial_error(signal.samples, s_hat)
        outer = result.outer_iterations
        converged = result.converged
    except ChacsError:
        pass
    return TrialRecord(
        method="rancs", distribution=distribution, k=k, lam=lam,
        filter_length=filter_length, realization=realization, seed=seed,
        err=err, outer_iterations=outer, converged=converged,
        wall_time_s=perf_counter() - start,
    )


def chacs_restart_errors(n: int, k: int, lam: int, distribution: str,
                         instance_seed: int, restarts: int,
                         config: Optional[IRNLSConfig] = None,
                         params: HenonParams = DEFAULT_PARAMS,
                         init: PlanarState = DEFAULT_INIT,
                         target_amplitude: float = 0.1):
    """Multi-restart reconstruction of one fixed instance.

    Returns (errs, results): the per-restart signal errors and results, in
    restart order. Stalled restarts score inf.
    """
    if config is None:
        config = IRNLSConfig()
    dictionary = build_real_fourier_dictionary(n)
    coeffs = sample_sparse_coefficients(
        n, k, distribution, derive_seed(instance_seed, "coefficients"))
    scale = choose_scale(dictionary, coeffs, params, init, target_amplitude)
    signal = synthesize_signal(dictionary, coeffs, scale)
    record = measure(params, init, lam, signal)
    errs = []
    results = []
    for i in range(restarts):
        try:
            result = irnls_reconstruct(record, dictionary, config,
                                       derive_seed(instance_seed, "start", i))
            s_hat = synthesize_signal(dictionary, result.alpha_hat, scale)
            errs.append(_trial_error(signal.samples, s_hat.samples))
        except SolverStallError as exc:
            result = exc.partial
            errs.append(float("inf"))
        results.append(result)
    return errs, results


def _grid_rows(grid: SweepGrid):
    for method in grid.methods:
        if method == "rancs":
            lengths = tuple(grid.filter_lengths)
            if not lengths:
                raise ValueError("rancs sweeps need filter_lengths")
        elif method == "chacs":
            lengths = (None,)
        else:
            raise ValueError(f"unknown method {method!r}")
        yield from product([method], grid.distributions, grid.lambdas,
                           grid.sparsities, lengths)


def _run_trial_spec(spec):
    (method, distribution, lam, k, length, n, config, seed, realization,
     params, init, target_amplitude) = spec
    if method == "chacs":
        return run_chacs_trial(n, k, lam, distribution, config, seed,
                               params, init, target_amplitude, realization)
    return run_rancs_trial(n, k, lam, length, distribution, config, seed,
                           realization)


def run_sweep(grid: SweepGrid, realizations: int, master_seed: int,
              config: Optional[IRNLSConfig] = None, max_workers: int = 1,
              params: HenonParams = DEFAULT_PARAMS,
              init: PlanarState = DEFAULT_INIT,
              target_amplitude: float = 0.1,
              trials_csv=None, summary_csv=None) -> SweepTable:
    """Run R realizations per grid cell; optionally write the two CSVs.

    The sweep is a pure function of (grid, realizations, master_seed,
    config): per-trial seeds are derived from the cell key, and results are
    assembled in grid order regardless of worker scheduling.
    """
    if realizations < 1:
        raise ValueError("realizations must be >= 1")
    if config is None:
        config = IRNLSConfig()
    specs = []
    for method, distribution, lam, k, length in _grid_rows(grid):
        for r in range(realizations):
            seed = derive_seed(master_seed, method, distribution, lam, k,
                               length, r)
            specs.append((method, distribution, lam, k, length, grid.n,
                          config, seed, r, params, init, target_amplitude))

    if max_workers is not None and max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            trials = list(pool.map(_run_trial_spec, specs))
    else:
        trials = [_run_trial_spec(spec) for spec in specs]

    summary = []
    for index, (method, distribution, lam, k, length) in enumerate(_grid_rows(grid)):
        cell = trials[index * realizations:(index + 1) * realizations]
        median = median_err([t.err for t in cell])
        summary.append(SummaryRow(method=method, distribution=distribution,
                                  lam=lam, k=k, filter_length=length,
                                  realizations=realizations,
                                  median_err=median))
    table = SweepTable(trials=trials, summary=summary)
    if trials_csv is not None:
        write_text_atomic(trials_csv, trials_csv_text(trials))
    if summary_csv is not None:
        write_text_atomic(summary_csv, summary_csv_text(table))
    return table


def trials_csv_text(trials) -> str:
    lines = [TRIALS_CSV_HEADER]
    for t in trials:
        length = "" if t.filter_length is None else str(t.filter_length)
        lines.append(
            f"{t.method},{t.distribution},{t.lam},{t.k},{length},"
            f"{t.realization},{t.seed},{format_float(t.err)},"
            f"{t.outer_iterations},{str(t.converged).lower()},"
            f"{format_float(t.wall_time_s)}"
        )
    return "\n".join(lines) + "\n"


def summary_csv_text(table: SweepTable) -> str:
    lines = [SUMMARY_CSV_HEADER]
    for row in table.summary:
        length = "" if row.filter_length is None else str(row.filter_length)
        lines.append(
            f"{row.method},{row.distribution},{row.lam},{row.k},{length},"
            f"{row.realizations},{format_float(row.median_err)}"
        )
    return "\n".join(lines) + "\n"
