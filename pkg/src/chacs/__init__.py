"""Chaos-based compressed sensing of frequency-sparse signals.

A sparse signal excites a Henon map; downsampling the map's x state yields
the compressed measurements. Reconstruction runs an impulsively synchronized
replica of the map and estimates the excitation coefficients by
l1-regularized nonlinear least squares. A random-FIR baseline with linear
iteratively reweighted least squares is included for comparisons.
"""

__version__ = "0.1.0"

from chacs.dictionary import (Dictionary, Signal, SparseCoefficients,
                              analyze_signal, build_real_fourier_dictionary,
                              choose_scale, sample_sparse_coefficients,
                              synthesize_signal)
from chacs.errors import (ChacsError, DivergenceError, EmptyMeasurementError,
                          ScalingFailureError, SolverStallError)
from chacs.harness import (SweepGrid, SweepTable, TrialRecord,
                           relative_error, run_chacs_trial, run_rancs_trial,
                           run_sweep)
from chacs.henon import (ChaosReport, HenonParams, MeasurementRecord,
                         PlanarState, SlaveRun, Trajectory, check_chaotic,
                         downsample, henon_step, measure, run_excited_master,
                         run_excited_slave, run_impulsive_slave_free,
                         run_master)
from chacs.kernels import BACKEND
from chacs.rancs import (LinearMeasurement, RancsFilter,
                         build_measurement_matrix, fir_measure,
                         generate_random_taps, irls_linear_reconstruct)
from chacs.reconstruction import (IRNLSConfig, ReconstructionResult,
                                  compute_weights, inner_weighted_nls,
                                  irnls_reconstruct)

__all__ = [
    "BACKEND",
    "ChacsError",
    "ChaosReport",
    "Dictionary",
    "DivergenceError",
    "EmptyMeasurementError",
    "HenonParams",
    "IRNLSConfig",
    "LinearMeasurement",
    "MeasurementRecord",
    "PlanarState",
    "RancsFilter",
    "ReconstructionResult",
    "ScalingFailureError",
    "Signal",
    "SlaveRun",
    "SolverStallError",
    "SparseCoefficients",
    "SweepGrid",
    "SweepTable",
    "Trajectory",
    "TrialRecord",
    "analyze_signal",
    "build_measurement_matrix",
    "build_real_fourier_dictionary",
    "check_chaotic",
    "choose_scale",
    "compute_weights",
    "downsample",
    "fir_measure",
    "generate_random_taps",
    "henon_step",
    "inner_weighted_nls",
    "irls_linear_reconstruct",
    "irnls_reconstruct",
    "measure",
    "relative_error",
    "run_chacs_trial",
    "run_excited_master",
    "run_excited_slave",
    "run_impulsive_slave_free",
    "run_master",
    "run_rancs_trial",
    "run_sweep",
    "sample_sparse_coefficients",
    "synthesize_signal",
]
