"""Certificates for the order-6 symplectic quotient of C^4.

The group is generated by the diagonal cube-root scaling
alpha = diag(w, w^2, w^2, w) with w = exp(2 pi i / 3) and the block swap
beta: (z1, z2, z3, z4) -> (z3, z4, z1, z2).  It preserves the complex
symplectic form dz1^dz2 + dz3^dz4, and five cubic/quadratic polynomials
cut out exactly the singular orbits.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from . import strata
from .errors import ZeroVector
from .groups import MatrixGroup, close_group

OMEGA = cmath.exp(2j * cmath.pi / 3)

# matrix of the symplectic form dz1^dz2 + dz3^dz4
SYMPLECTIC_J = np.array([
    [0, 1, 0, 0],
    [-1, 0, 0, 0],
    [0, 0, 0, 1],
    [0, 0, -1, 0],
], dtype=complex)


def alpha_matrix() -> np.ndarray:
    return np.diag([OMEGA, OMEGA ** 2, OMEGA ** 2, OMEGA]).astype(complex)


def beta_matrix() -> np.ndarray:
    b = np.zeros((4, 4), dtype=complex)
    b[0, 2] = b[1, 3] = b[2, 0] = b[3, 1] = 1.0
    return b


def s3_group() -> MatrixGroup:
    """The order-6 nonabelian group generated by alpha and beta."""
    return close_group([alpha_matrix(), beta_matrix()], max_order=64)


def symplectic_defect(G: MatrixGroup) -> float:
    """max over g of |g^T J g - J|; zero iff the form is preserved."""
    worst = 0.0
    for g in G.elements:
        worst = max(worst, float(np.max(np.abs(g.T @ SYMPLECTIC_J @ g
                                               - SYMPLECTIC_J))))
    return worst


def phi_invariants(z) -> np.ndarray:
    """The five polynomials (p1..p5); invariant under alpha, sign-flipped
    under beta."""
    z1, z2, z3, z4 = np.asarray(z, dtype=complex)
    return np.array([
        z1 * z2 - z3 * z4,
        z1 ** 3 - z3 ** 3,
        z1 ** 2 * z4 - z2 * z3 ** 2,
        z1 * z4 ** 2 - z2 ** 2 * z3,
        z2 ** 3 - z4 ** 3,
    ])


def sign_character(G: MatrixGroup) -> dict[int, int]:
    """chi with chi(alpha) = 1, chi(beta) = -1, extended to all elements.

    Computed from the determinant-free criterion: the fixed space of an
    element in the beta-conjugacy class is 2-dimensional while powers of
    alpha fix only the origin (or everything, for the identity).
    """
    from .groups import element_fixed_space

    chi = {}
    for i, g in enumerate(G.elements):
        d = element_fixed_space(g).dim
        chi[i] = -1 if d == 2 else 1
    return chi


@dataclass(frozen=True)
class VanishingVerdict:
    point: np.ndarray
    max_poly: float
    singular_distance: float
    vanishes: bool
    singular: bool

    @property
    def consistent(self) -> bool:
        return self.vanishes == self.singular


def vanishing_vs_singular(z, poset: strata.StratPoset,
                          tol: float = 1e-9) -> VanishingVerdict:
    """Compare joint vanishing of the five polynomials with membership of
    the singular strata."""
    z = np.asarray(z, dtype=complex)
    vals = phi_invariants(z)
    max_poly = float(np.max(np.abs(vals)))
    s = strata.singular_distance_s(z, poset)
    return VanishingVerdict(z, max_poly, s, max_poly <= tol, s <= tol)


def psi_embedding(x0: complex, x1: complex, x2: complex) -> np.ndarray:
    """[x0, x1^3, x1^2 x2, x1 x2^2, x2^3], normalized so the largest-modulus
    coordinate equals 1 (ties broken by lowest index)."""
    v = np.array([x0, x1 ** 3, x1 ** 2 * x2, x1 * x2 ** 2, x2 ** 3],
                 dtype=complex)
    return normalize_projective(v)


def normalize_projective(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    mags = np.abs(v)
    top = float(np.max(mags))
    if top == 0.0:
        raise ZeroVector("cannot normalize the zero vector")
    pivot = int(np.argmax(mags))
    return v / v[pivot]


def weighted_scale(t: complex, x0: complex, x1: complex, x2: complex):
    """The weighted-projective scaling [x0, x1, x2] -> [t^3 x0, t x1, t x2]."""
    return (t ** 3 * x0, t * x1, t * x2)


def stratum_point(poset: strata.StratPoset, index: int,
                  coeffs) -> np.ndarray:
    """A point on stratum `index` with the given basis coefficients."""
    V = poset.strata[index].V
    coeffs = np.asarray(coeffs, dtype=complex)
    return V.basis @ coeffs[: V.dim]
