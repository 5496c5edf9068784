"""Monomial bases and index tables for truncated multivariate Taylor jets.

A jet of order ``p`` in ``v`` real variables stores Taylor coefficients
``c[alpha]`` for all exponent multi-indices with ``|alpha| <= p``, in graded
lexicographic order.  The tables built here drive the two multiplication
backends and the exact differentiation maps.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np


def monomials(nvars: int, order: int) -> list[tuple[int, ...]]:
    """All exponent tuples with total degree <= order, graded lex order."""
    out = []
    for deg in range(order + 1):
        for alpha in itertools.combinations_with_replacement(range(nvars), deg):
            expo = [0] * nvars
            for v in alpha:
                expo[v] += 1
            out.append(tuple(expo))
    # combinations_with_replacement already yields a fixed order per degree;
    # sort within degree for a stable, documented convention
    out.sort(key=lambda e: (sum(e), e))
    return out


class JetAlgebra:
    """Precomputed index tables for jets of a fixed (nvars, order)."""

    def __init__(self, nvars: int, order: int):
        if nvars < 1 or order < 0:
            raise ValueError("need nvars >= 1 and order >= 0")
        self.nvars = nvars
        self.order = order
        self.monoms = monomials(nvars, order)
        self.size = len(self.monoms)
        self.index = {m: k for k, m in enumerate(self.monoms)}
        self.degrees = np.array([sum(m) for m in self.monoms], dtype=np.int32)
        self.factorials = np.array(
            [math.prod(math.factorial(e) for e in m) for m in self.monoms],
            dtype=np.float64,
        )
        self._build_mul_table()

    def _build_mul_table(self):
        I, J, K = [], [], []
        for i, a in enumerate(self.monoms):
            da = sum(a)
            for j, b in enumerate(self.monoms):
                if da + sum(b) > self.order:
                    continue
                k = self.index[tuple(x + y for x, y in zip(a, b))]
                I.append(i)
                J.append(j)
                K.append(k)
        order_by_target = np.argsort(np.array(K), kind="stable")
        self.mul_i = np.array(I, dtype=np.int32)[order_by_target]
        self.mul_j = np.array(J, dtype=np.int32)[order_by_target]
        self.mul_k = np.array(K, dtype=np.int32)[order_by_target]
        # group boundaries for reduceat-style accumulation; every target index
        # appears at least once via the (const, k) pair
        self.mul_offsets = np.searchsorted(self.mul_k, np.arange(self.size))
        self.mul_offsets = self.mul_offsets.astype(np.int64)

    @lru_cache(maxsize=None)
    def derivative_table(self, var: int):
        """Map coefficients to those of d/dx_var, one order lower.

        Returns (target_algebra, src_idx, dst_idx, factor) with
        ``out[dst] = c[src] * factor`` and all other targets zero.
        """
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        target = get_algebra(self.nvars, self.order - 1)
        src, dst, fac = [], [], []
        for beta, kd in target.index.items():
            alpha = list(beta)
            alpha[var] += 1
            ks = self.index[tuple(alpha)]
            src.append(ks)
            dst.append(kd)
            fac.append(float(alpha[var]))
        return (
            target,
            np.array(src, dtype=np.int64),
            np.array(dst, dtype=np.int64),
            np.array(fac, dtype=np.float64),
        )


_CACHE: dict[tuple[int, int], JetAlgebra] = {}


def get_algebra(nvars: int, order: int) -> JetAlgebra:
    key = (nvars, order)
    alg = _CACHE.get(key)
    if alg is None:
        alg = JetAlgebra(nvars, order)
        _CACHE[key] = alg
    return alg
