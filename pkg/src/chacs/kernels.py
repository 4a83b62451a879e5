"""Backend selection for the simulation kernels.

Prefers the compiled extension; falls back to the pure-Python module when
the extension is missing or when the environment variable CHACS_PURE_PYTHON
is set to a non-empty value other than "0".
"""

import os

if os.environ.get("CHACS_PURE_PYTHON", "0") not in ("", "0"):
    from chacs import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from chacs import _speedups as _impl

        BACKEND = "compiled"
    except ImportError:
        from chacs import _kernels_py as _impl

        BACKEND = "python"

henon_orbit = _impl.henon_orbit
impulsive_slave = _impl.impulsive_slave
excited_slave = _impl.excited_slave
lyapunov_sum = _impl.lyapunov_sum
