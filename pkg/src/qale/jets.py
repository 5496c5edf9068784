"""Forward-mode automatic differentiation with truncated Taylor jets.

A :class:`Jet` holds the Taylor coefficients of a scalar function at a point,
up to a fixed total order, in a fixed number of real variables.  Arithmetic
on jets implements the product and chain rules exactly (to floating point),
which is what the curvature engine needs for clean fourth derivatives of
non-holomorphic Kahler potentials.

Coefficient convention: ``f(p + h) = sum_alpha c[alpha] * h**alpha``, i.e.
``c[alpha] = D^alpha f(p) / alpha!``.

The coefficient-multiplication kernel is the hot loop.  A compiled Cython
kernel is preferred; a pure numpy kernel is the fallback.  Selection happens
at import and can be forced with ``QALE_JET_BACKEND={cython,numpy}``.
"""

from __future__ import annotations

import math
import os

import numpy as np

from ._jet_tables import JetAlgebra, get_algebra
from . import _jetfallback

_requested = os.environ.get("QALE_JET_BACKEND", "").strip().lower()
if _requested == "numpy":
    _kernel = _jetfallback
elif _requested == "cython":
    from . import _jetcore as _kernel  # hard import: fail loudly if forced
else:
    try:
        from . import _jetcore as _kernel
    except ImportError:
        _kernel = _jetfallback

BACKEND = _kernel.BACKEND_NAME


def active_backend() -> str:
    """Name of the multiplication kernel in use ('cython' or 'numpy')."""
    return BACKEND


class Jet:
    """Truncated Taylor expansion of a scalar function at a point."""

    __slots__ = ("alg", "c")

    def __init__(self, alg: JetAlgebra, coeffs: np.ndarray):
        self.alg = alg
        self.c = coeffs

    # ---- constructors -------------------------------------------------

    @staticmethod
    def constant(alg: JetAlgebra, value, dtype=None) -> "Jet":
        if dtype is None:
            dtype = np.complex128 if isinstance(value, complex) else np.float64
        c = np.zeros(alg.size, dtype=dtype)
        c[0] = value
        return Jet(alg, c)

    @staticmethod
    def variable(alg: JetAlgebra, var: int, value: float) -> "Jet":
        c = np.zeros(alg.size, dtype=np.float64)
        c[0] = value
        if alg.order >= 1:
            e = [0] * alg.nvars
            e[var] = 1
            c[alg.index[tuple(e)]] = 1.0
        return Jet(alg, c)

    @staticmethod
    def variables(alg: JetAlgebra, values) -> list["Jet"]:
        return [Jet.variable(alg, v, float(x)) for v, x in enumerate(values)]

    # ---- basic accessors ----------------------------------------------

    @property
    def value(self):
        return self.c[0]

    def deriv(self, *vars_: int):
        """Value of the mixed partial derivative d/dx_{v1} ... d/dx_{vk}."""
        e = [0] * self.alg.nvars
        for v in vars_:
            e[v] += 1
        if sum(e) > self.alg.order:
            raise ValueError("derivative order exceeds jet order")
        k = self.alg.index[tuple(e)]
        return self.c[k] * self.alg.factorials[k]

    def copy(self) -> "Jet":
        return Jet(self.alg, self.c.copy())

    # ---- ring operations ----------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.alg is not self.alg:
                raise ValueError("jets from different algebras")
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is not None:
            return Jet(self.alg, self.c + o.c)
        c = self.c.astype(np.result_type(self.c.dtype, type(other)), copy=True)
        c[0] += other
        return Jet(self.alg, c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.alg, -self.c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return Jet(self.alg, self.c * other)
        alg = self.alg
        dtype = np.result_type(self.c.dtype, o.c.dtype)
        out = np.empty(alg.size, dtype=dtype)
        _kernel.mul_into(
            self.c.astype(dtype, copy=False),
            o.c.astype(dtype, copy=False),
            out, alg.mul_i, alg.mul_j, alg.mul_k, alg.mul_offsets,
        )
        return Jet(alg, out)

    __rmul__ = __mul__

    def __pow__(self, q):
        if isinstance(q, int) and q >= 0:
            acc = Jet.constant(self.alg, 1.0, dtype=self.c.dtype)
            for _ in range(q):
                acc = acc * self
            return acc
        return self.powc(float(q))

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.alg, self.c / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    # ---- differentiation ----------------------------------------------

    def derivative(self, var: int) -> "Jet":
        """Jet of d(self)/dx_var, one order lower (exact)."""
        target, src, dst, fac = self.alg.derivative_table(var)
        c = np.zeros(target.size, dtype=self.c.dtype)
        c[dst] = self.c[src] * fac
        return Jet(target, c)

    # ---- analytic functions (real jets only) ---------------------------

    def _compose(self, coeffs) -> "Jet":
        """Horner evaluation of sum_d coeffs[d] * (self - value)^d."""
        alg = self.alg
        dev = self.c.copy()
        dev[0] = 0.0
        hat = Jet(alg, dev)
        acc = Jet.constant(alg, coeffs[-1], dtype=self.c.dtype)
        for d in range(len(coeffs) - 2, -1, -1):
            acc = acc * hat + coeffs[d]
        return acc

    def _real_value(self) -> float:
        if self.c.dtype.kind == "c":
            raise TypeError("analytic composition requires a real jet")
        return float(self.c[0])

    def sqrt(self) -> "Jet":
        return self.powc(0.5)

    def powc(self, q: float) -> "Jet":
        a0 = self._real_value()
        if a0 <= 0.0:
            raise ValueError(f"powc requires positive value, got {a0}")
        coeffs = [a0 ** q]
        for d in range(1, self.alg.order + 1):
            coeffs.append(coeffs[-1] * (q - d + 1) / (d * a0))
        return self._compose(coeffs)

    def reciprocal(self) -> "Jet":
        a0 = self.c[0]
        if a0 == 0:
            raise ZeroDivisionError("reciprocal of jet with zero value")
        coeffs = [1.0 / a0]
        for d in range(1, self.alg.order + 1):
            coeffs.append(-coeffs[-1] / a0)
        return self._compose(coeffs)

    def log(self) -> "Jet":
        a0 = self._real_value()
        if a0 <= 0.0:
            raise ValueError(f"log requires positive value, got {a0}")
        coeffs = [math.log(a0)]
        for d in range(1, self.alg.order + 1):
            coeffs.append(((-1) ** (d - 1)) / (d * a0 ** d))
        return self._compose(coeffs)

    def exp(self) -> "Jet":
        a0 = self._real_value()
        e = math.exp(a0)
        coeffs = [e / math.factorial(d) for d in range(self.alg.order + 1)]
        return self._compose(coeffs)

    # ---- misc -----------------------------------------------------------

    def real_part(self) -> "Jet":
        if self.c.dtype.kind != "c":
            return self
        return Jet(self.alg, self.c.real.copy())

    def imag_part(self) -> "Jet":
        if self.c.dtype.kind != "c":
            return Jet(self.alg, np.zeros_like(self.c))
        return Jet(self.alg, self.c.imag.copy())

    def conj(self) -> "Jet":
        return Jet(self.alg, np.conj(self.c))

    def max_imag(self) -> float:
        if self.c.dtype.kind != "c":
            return 0.0
        return float(np.max(np.abs(self.c.imag)))

    def __repr__(self):
        return f"Jet(nvars={self.alg.nvars}, order={self.alg.order}, value={self.c[0]})"


# Numeric helpers that work on jets and on plain floats/numpy scalars, so the
# same potential code runs under AD and under direct evaluation.

def nsqrt(x):
    return x.sqrt() if isinstance(x, Jet) else np.sqrt(x)


def nlog(x):
    return x.log() if isinstance(x, Jet) else np.log(x)


def nexp(x):
    return x.exp() if isinstance(x, Jet) else np.exp(x)


def npow(x, q: float):
    return x.powc(q) if isinstance(x, Jet) else x ** q


def nvalue(x):
    return x.value if isinstance(x, Jet) else x


__all__ = [
    "Jet", "JetAlgebra", "get_algebra", "active_backend", "BACKEND",
    "nsqrt", "nlog", "nexp", "npow", "nvalue",
]
