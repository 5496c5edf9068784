"""Explicit Kahler potentials and the cutoff-and-sum glued construction.

Potential evaluators are generic over the scalar type: they accept plain
floats or AD jets (anything supporting +, *, and the nsqrt/nlog helpers),
so the same code path serves direct evaluation, finite-difference oracles
and the jet-based curvature engine.

Coordinate convention for a chart of complex dimension d: the evaluator
receives two sequences (xs, ys) of length d with z_q = xs[q] + i*ys[q].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, PointTooSingular
from .jets import Jet, nlog, nsqrt, nvalue
from .strata import MobiusWeights, StratPoset

EH_DOMAIN_FLOOR = 1e-12


@dataclass(frozen=True)
class KahlerPotential:
    """Chart-local scalar potential supporting derivatives through jets."""

    cdim: int
    fn: Callable
    domain: Callable[[np.ndarray], bool]
    name: str = "potential"

    def __call__(self, xs, ys):
        return self.fn(xs, ys)

    def value(self, z: np.ndarray) -> float:
        z = np.asarray(z, dtype=complex)
        return float(self.fn(list(z.real), list(z.imag)))


def euclidean_potential(m: int) -> KahlerPotential:
    """K(z) = |z|^2; the metric is the identity."""
    if m < 1:
        raise DomainError("need m >= 1")

    def fn(xs, ys):
        acc = xs[0] * xs[0] + ys[0] * ys[0]
        for q in range(1, m):
            acc = acc + xs[q] * xs[q] + ys[q] * ys[q]
        return acc

    return KahlerPotential(m, fn, lambda z: True, name=f"euclidean(m={m})")


def _eh_of_u(u, a: float):
    # K(u) = sqrt(a^4 + u^2) + a^2 log u - a^2 log(a^2 + sqrt(a^4 + u^2))
    s = nsqrt(a ** 4 + u * u)
    return s + (a * a) * nlog(u) - (a * a) * nlog(a * a + s)


def _usum(xs, ys):
    acc = xs[0] * xs[0] + ys[0] * ys[0]
    for q in range(1, len(xs)):
        acc = acc + xs[q] * xs[q] + ys[q] * ys[q]
    return acc


def eguchi_hanson_potential(a: float) -> KahlerPotential:
    """Ricci-flat ALE potential on the Z2-quotient chart of C^2 minus 0.

    Written as a function of u = |z|^2 on the double cover; det of the
    induced metric is identically 1, which is the Ricci-flatness
    certificate the curvature engine re-derives numerically.
    """
    if a <= 0:
        raise DomainError("Eguchi-Hanson scale must be positive")

    def fn(xs, ys):
        u = _usum(xs, ys)
        if nvalue(u) <= EH_DOMAIN_FLOOR:
            raise DomainError("Eguchi-Hanson chart excludes u = 0")
        return _eh_of_u(u, a)

    def domain(z):
        return float(np.vdot(z, z).real) > EH_DOMAIN_FLOOR

    return KahlerPotential(2, fn, domain, name=f"eguchi_hanson(a={a})")


def eguchi_hanson_correction(a: float) -> KahlerPotential:
    """K_EH(u) - u: the decaying difference from the flat potential.

    This is the component fed to the glued construction; it depends only on
    u = |z|^2, hence is invariant under every unitary action on the chart.
    """
    if a <= 0:
        raise DomainError("Eguchi-Hanson scale must be positive")

    def fn(xs, ys):
        u = _usum(xs, ys)
        if nvalue(u) <= EH_DOMAIN_FLOOR:
            raise DomainError("Eguchi-Hanson chart excludes u = 0")
        return _eh_of_u(u, a) - u

    def domain(z):
        return float(np.vdot(z, z).real) > EH_DOMAIN_FLOOR

    return KahlerPotential(2, fn, domain, name=f"eh_correction(a={a})")


def zero_potential(d: int) -> KahlerPotential:
    return KahlerPotential(d, lambda xs, ys: 0.0 * xs[0], lambda z: True, name="zero")


def product_potential(K1: KahlerPotential, K2: KahlerPotential) -> KahlerPotential:
    """K(v, y) = K1(v) + K2(y); the metric is block diagonal."""
    d1, d2 = K1.cdim, K2.cdim

    def fn(xs, ys):
        return K1.fn(xs[:d1], ys[:d1]) + K2.fn(xs[d1:], ys[d1:])

    def domain(z):
        return K1.domain(z[:d1]) and K2.domain(z[d1:])

    return KahlerPotential(d1 + d2, fn, domain,
                           name=f"product({K1.name},{K2.name})")


@dataclass(frozen=True)
class Cutoff:
    """Smooth step: 0 on [0, R], 1 on [2R, inf), C-infinity in between.

    Profile eta(x) = 1/(1 + exp(1/t - 1/(1-t))) with t = (x-R)/R; the
    transition band is clamped to t in [0.005, 0.995] to keep exp arguments
    representable (the truncated tails are below 1e-80).
    """

    R: float

    def __call__(self, x):
        v = float(nvalue(x))
        t_val = (v - self.R) / self.R
        if t_val <= 0.005:
            return self._const_like(x, 0.0)
        if t_val >= 0.995:
            return self._const_like(x, 1.0)
        t = (x - self.R) * (1.0 / self.R)
        y = 1.0 / t - 1.0 / (1.0 - t) if not isinstance(t, Jet) \
            else t.reciprocal() - (1.0 - t).reciprocal()
        if isinstance(y, Jet):
            return (1.0 + y.exp()).reciprocal()
        return 1.0 / (1.0 + math.exp(y))

    @staticmethod
    def _const_like(x, val: float):
        if isinstance(x, Jet):
            return Jet.constant(x.alg, val)
        return val


def cutoff_eta(R: float) -> Cutoff:
    if R <= 0:
        raise DomainError("cutoff radius must be positive")
    return Cutoff(R)


def _apply_complex(M: np.ndarray, xs, ys):
    """Apply a complex matrix to generic (xs, ys) coordinates."""
    rows_x, rows_y = [], []
    for q in range(M.shape[0]):
        acc_x = None
        acc_y = None
        for j in range(M.shape[1]):
            c = M[q, j]
            if abs(c) < 1e-15:
                continue
            re, im = c.real, c.imag
            tx = xs[j] * re - ys[j] * im
            ty = ys[j] * re + xs[j] * im
            acc_x = tx if acc_x is None else acc_x + tx
            acc_y = ty if acc_y is None else acc_y + ty
        if acc_x is None:
            acc_x = 0.0 * xs[0]
            acc_y = 0.0 * ys[0]
        rows_x.append(acc_x)
        rows_y.append(acc_y)
    return rows_x, rows_y


@dataclass
class GluedPotential:
    """Weighted cutoff sum of stratum components over chart preimages.

    At a point of the quotient represented by z, the value is

        sum_{i != inf} (k_i / |G|) * sum_{g in G}
            phi_i(w-chart coords of g z) * prod_{j: i !>= j} eta(mu_{i,j}(g z))

    Summing over the full group hits each A_i-chart preimage |A_i| times,
    which reproduces the k_i |A_i| / |G| weighting over distinct preimages.
    """

    poset: StratPoset
    weights: MobiusWeights
    components: dict[int, KahlerPotential]
    R: float
    cutoff: Cutoff = field(init=False)
    _terms: list = field(init=False, repr=False)

    def __post_init__(self):
        self.cutoff = cutoff_eta(self.R)
        G = self.poset.group
        zero = self.poset.idx_zero
        inf = self.poset.idx_infinity
        for i, comp in self.components.items():
            if i == zero and comp.name != "zero":
                raise DomainError("component for the dense stratum must be zero")
            if comp.cdim != self.poset.strata[i].dim_W:
                raise DomainError(f"component {i} has wrong chart dimension")
        terms = []
        for i in range(self.poset.size):
            if i in (zero, inf):
                continue
            k_i = self.weights.k.get(i, 0)
            if k_i == 0:
                continue
            if i not in self.components:
                raise DomainError(f"no component supplied for stratum {i}")
            s = self.poset.strata[i]
            basis_h = s.W.basis.conj().T
            cut_js = [j for j in range(self.poset.size) if not self.poset.geq[i, j]]
            per_g = []
            for gidx in range(G.order):
                g = G.elements[gidx]
                chart = basis_h @ g
                mus = []
                for j in cut_js:
                    comp_proj = np.eye(G.dim) - self.poset.strata[j].V.projector
                    mats = [comp_proj @ G.elements[int(G.mul[a, gidx])] for a in s.A]
                    mus.append(mats)
                per_g.append((chart, mus))
            terms.append((i, k_i, self.components[i], per_g))
        self._terms = terms
        self._cdim = G.dim

    @property
    def cdim(self) -> int:
        return self._cdim

    def fn(self, xs, ys):
        G = self.poset.group
        zv = np.array([complex(nvalue(x), nvalue(y)) for x, y in zip(xs, ys)])
        total = 0.0 * xs[0]
        for i, k_i, comp, per_g in self._terms:
            w = k_i / G.order
            for chart, mus in per_g:
                # cutoff factors, value-first: pick the min branch per j and
                # skip the whole g-term if any factor is identically zero
                branch_mats = []
                active = True
                for mats in mus:
                    vals = [float(np.linalg.norm(M @ zv)) for M in mats]
                    b = int(np.argmin(vals))
                    if vals[b] <= self.R * 1.005:
                        active = False
                        break
                    branch_mats.append((mats[b], vals[b]))
                if not active:
                    continue
                factor = None
                for M, val in branch_mats:
                    if val >= 2.0 * self.R:
                        continue  # eta == 1 exactly there
                    wx, wy = _apply_complex(M, xs, ys)
                    mu_jet = nsqrt(_usum(wx, wy))
                    eta = self.cutoff(mu_jet)
                    factor = eta if factor is None else factor * eta
                cx, cy = _apply_complex(chart, xs, ys)
                wchart = np.array([complex(nvalue(a), nvalue(b))
                                   for a, b in zip(cx, cy)])
                if not comp.domain(wchart):
                    raise PointTooSingular(
                        f"chart preimage for stratum {i} leaves the component domain")
                val = comp.fn(cx, cy)
                if factor is not None:
                    val = val * factor
                total = total + w * val
        return total

    def as_potential(self) -> KahlerPotential:
        return KahlerPotential(self.cdim, self.fn, self._domain, name="glued")

    def total_potential(self) -> KahlerPotential:
        """Euclidean background plus the glued correction."""
        eu = euclidean_potential(self.cdim)

        def fn(xs, ys):
            return eu.fn(xs, ys) + self.fn(xs, ys)

        return KahlerPotential(self.cdim, fn, self._domain, name="glued_total")

    def _domain(self, z: np.ndarray) -> bool:
        try:
            zs = np.asarray(z, dtype=complex)
            self.fn(list(zs.real), list(zs.imag))
            return True
        except (PointTooSingular, DomainError):
            return False

    def value(self, z: np.ndarray) -> float:
        z = np.asarray(z, dtype=complex)
        return float(self.fn(list(z.real), list(z.imag)))


def glued_potential(poset: StratPoset, weights: MobiusWeights,
                    components: dict[int, KahlerPotential],
                    R: float) -> GluedPotential:
    return GluedPotential(poset, weights, components, R)


@dataclass(frozen=True)
class PositivityReport:
    points: list
    min_eigenvalues: list[float]
    passed: bool


def positivity_check(potential: KahlerPotential, sample_points) -> PositivityReport:
    """Minimum metric eigenvalue per sample; passes iff all are positive."""
    from .curvature import metric_from_potential

    mins = []
    pts = [np.asarray(p, dtype=complex) for p in sample_points]
    for z in pts:
        g = metric_from_potential(potential, z).g
        mins.append(float(np.linalg.eigvalsh(g)[0]))
    return PositivityReport(pts, mins, all(v > 0 for v in mins))
