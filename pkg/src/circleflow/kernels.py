"""Hot-kernel backend selection.

The compiled extension is preferred; the numpy fallback is picked up when it
is absent or when ``CIRCLEFLOW_FORCE_PYTHON_KERNELS`` is set (used by the
kernel-equivalence tests and the benchmark).
"""

import os

if os.environ.get("CIRCLEFLOW_FORCE_PYTHON_KERNELS"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
eval_series = _impl.eval_series
eval_series_and_derivative = _impl.eval_series_and_derivative
invert_monotone = _impl.invert_monotone
