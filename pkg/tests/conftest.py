import numpy as np
import pytest

from chacs.dictionary import (build_real_fourier_dictionary, choose_scale,
                              sample_sparse_coefficients, synthesize_signal)
from chacs.harness import DEFAULT_INIT, DEFAULT_PARAMS, derive_seed
from chacs.henon import measure


class Instance:
    """One end-to-end problem: dictionary, true coefficients, measurements."""

    def __init__(self, n, k, lam, distribution="gaussian", seed=0,
                 target_amplitude=0.1, params=DEFAULT_PARAMS,
                 init=DEFAULT_INIT):
        self.params = params
        self.init = init
        self.dictionary = build_real_fourier_dictionary(n)
        self.coeffs = sample_sparse_coefficients(
            n, k, distribution, derive_seed(seed, "coefficients"))
        self.scale = choose_scale(self.dictionary, self.coeffs, params, init,
                                  target_amplitude)
        self.signal = synthesize_signal(self.dictionary, self.coeffs,
                                        self.scale)
        self.record = measure(params, init, lam, self.signal)


@pytest.fixture
def make_instance():
    return Instance


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
