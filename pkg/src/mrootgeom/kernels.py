"""Backend selection for the polynomial hot kernels.

The compiled extension ``mrootgeom._speedups`` is preferred when it built;
otherwise the numpy fallback is used.  Set the environment variable
``MROOTGEOM_KERNELS=python`` (or ``compiled``) before import to force a
backend, e.g. for the benchmark in ``benchmarks/bench_kernels.py``.
"""

from __future__ import annotations

import os

_requested = os.environ.get("MROOTGEOM_KERNELS", "").strip().lower()

if _requested == "python":
    from . import _kernels_py as _impl
elif _requested == "compiled":
    from . import _speedups as _impl  # type: ignore[no-redef]
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as _impl  # type: ignore[no-redef]

BACKEND: str = _impl.BACKEND
poly_eval = _impl.poly_eval
poly_eval_batch = _impl.poly_eval_batch
poly_derivative_dense = _impl.poly_derivative_dense
