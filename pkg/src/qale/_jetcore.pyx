# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for jet coefficient multiplication."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"


def mul_into(a, b, out, mul_i, mul_j, mul_k, offsets):
    """out[:] = truncated product of coefficient vectors a and b."""
    if a.dtype.kind == "c" or b.dtype.kind == "c":
        _mul_complex(a.astype(np.complex128, copy=False),
                     b.astype(np.complex128, copy=False),
                     out, mul_i, mul_j, mul_k)
    else:
        _mul_real(a, b, out, mul_i, mul_j, mul_k)
    return out


def _mul_real(double[::1] a, double[::1] b, double[::1] out,
              int[::1] mi, int[::1] mj, int[::1] mk):
    cdef Py_ssize_t p, n = mi.shape[0]
    out[:] = 0.0
    for p in range(n):
        out[mk[p]] += a[mi[p]] * b[mj[p]]


def _mul_complex(double complex[::1] a, double complex[::1] b,
                 double complex[::1] out,
                 int[::1] mi, int[::1] mj, int[::1] mk):
    cdef Py_ssize_t p, n = mi.shape[0]
    out[:] = 0.0
    for p in range(n):
        out[mk[p]] = out[mk[p]] + a[mi[p]] * b[mj[p]]
