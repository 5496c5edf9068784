"""Pure numpy kernel for jet coefficient multiplication.

Same contract as the compiled `qale._jetcore` module; used when the
extension is unavailable or when QALE_JET_BACKEND=numpy.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "numpy"


def mul_into(a, b, out, mul_i, mul_j, mul_k, offsets):
    """out[:] = truncated product of coefficient vectors a and b."""
    prod = a[mul_i] * b[mul_j]
    if prod.dtype.kind == "c":
        out.real[:] = np.add.reduceat(prod.real, offsets)
        out.imag[:] = np.add.reduceat(prod.imag, offsets)
    else:
        out[:] = np.add.reduceat(prod, offsets)
    return out
