"""Select the compiled kernel when it is importable, else the pure-Python one.

Set ``ACAUSAL_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

python_kernels = _kernels_py
compiled_kernels = None

if not os.environ.get("ACAUSAL_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_kernels
    except ImportError:
        compiled_kernels = None

active = compiled_kernels if compiled_kernels is not None else python_kernels

IMPLEMENTATION = active.IMPLEMENTATION
fixed_point_count = active.fixed_point_count
first_violation = active.first_violation
scan_tables = active.scan_tables
