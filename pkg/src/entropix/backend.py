"""Kernel backend selection.

The compiled extension is preferred when importable; set
``ENTROPIX_BACKEND=python`` to force the numpy fallback (used by the
backend-parity tests and the benchmark).
"""

import os

from entropix import _kernels_py

if os.environ.get("ENTROPIX_BACKEND", "").lower() == "python":
    kernels = _kernels_py
    BACKEND = "python"
else:
    try:
        from entropix import _kernels_c as kernels  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        kernels = _kernels_py
        BACKEND = "python"
