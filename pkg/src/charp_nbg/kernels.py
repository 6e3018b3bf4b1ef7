"""Kernel selection: the compiled module when importable, else pure Python.

Set ``CHARP_NBG_PURE_PYTHON=1`` to force the fallback.
"""

import os

BACKEND = "python"

if os.environ.get("CHARP_NBG_PURE_PYTHON", "") not in ("", "0"):
    from ._kernels_py import (axpy_prime, axpy_table, inv_prime, inv_table,
                              mul_prime, mul_table)
else:
    try:
        from ._kernels import (axpy_prime, axpy_table, inv_prime, inv_table,
                               mul_prime, mul_table)
        BACKEND = "cython"
    except ImportError:
        from ._kernels_py import (axpy_prime, axpy_table, inv_prime, inv_table,
                                  mul_prime, mul_table)

__all__ = ["BACKEND", "mul_prime", "mul_table", "axpy_prime", "axpy_table",
           "inv_prime", "inv_table"]
