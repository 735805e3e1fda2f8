"""Backend selection for the hot loops.

The compiled extension ``hurstci._kernels`` is used when it was built;
otherwise the numpy fallback is imported. Setting ``HURSTCI_PURE_PYTHON=1``
forces the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("HURSTCI_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND

rho_values = _impl.rho_values
rho_abs_partial_sum = _impl.rho_abs_partial_sum
second_differences = _impl.second_differences
second_difference_energy = _impl.second_difference_energy
lagged_quadratic = _impl.lagged_quadratic


def compiled_available():
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        return False
    return True
