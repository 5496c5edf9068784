"""Kahler metrics, Ricci data and decay fits from potentials, via jets.

Wirtinger derivatives are assembled from real-coordinate jets by
d/dz = (d/dx - i d/dy)/2.  Sign conventions are pinned by two anchors:
the flat potential |z|^2 yields the identity metric, and the Laplacian
Delta f = -2 g^{jk} d_j d_kbar f satisfies Delta(r^2) = -2m on flat C^m
(the Kahler Laplacian is half the Riemannian one).  The compatible
gradient norm is |grad f|^2 = 4 g^{jk} (d_j f)(d_k f)^bar, which gives
|grad r^2|^2 = 4 r^2 on flat space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMetric, DomainError, InsufficientSamples
from .jets import Jet, get_algebra
from .potentials import KahlerPotential

HERMITIAN_TOL = 1e-10


def _point_jets(z: np.ndarray, order: int):
    z = np.asarray(z, dtype=complex)
    m = z.shape[0]
    alg = get_algebra(2 * m, order)
    xs = [Jet.variable(alg, q, float(z[q].real)) for q in range(m)]
    ys = [Jet.variable(alg, m + q, float(z[q].imag)) for q in range(m)]
    return xs, ys


def potential_jet(K: KahlerPotential, z: np.ndarray, order: int) -> Jet:
    """Jet of the potential at z, in 2m real variables."""
    if not K.domain(np.asarray(z, dtype=complex)):
        raise DomainError("point outside the potential domain")
    xs, ys = _point_jets(z, order)
    return K.fn(xs, ys)


def _metric_values_from_jet(kjet: Jet, m: int) -> np.ndarray:
    """g_{j kbar} = d^2 K / dz_j dzbar_k as an m x m complex matrix."""
    g = np.empty((m, m), dtype=complex)
    for j in range(m):
        for k in range(m):
            xx = kjet.deriv(j, k)
            yy = kjet.deriv(m + j, m + k)
            xy = kjet.deriv(j, m + k)
            yx = kjet.deriv(m + j, k)
            g[j, k] = 0.25 * ((xx + yy) + 1j * (xy - yx))
    return g


def _metric_jets_from_jet(kjet: Jet, m: int) -> list[list[Jet]]:
    """Entries of g as complex jets, two orders below the input jet."""
    firsts = [kjet.derivative(v) for v in range(2 * m)]
    cache: dict[tuple[int, int], Jet] = {}

    def second(a: int, b: int) -> Jet:
        key = (min(a, b), max(a, b))
        if key not in cache:
            cache[key] = firsts[key[0]].derivative(key[1])
        return cache[key]

    rows = []
    for j in range(m):
        row = []
        for k in range(m):
            xx = second(j, k)
            yy = second(m + j, m + k)
            xy = second(j, m + k)
            yx = second(m + j, k)
            re = (xx.c + yy.c) * 0.25
            im = (xy.c - yx.c) * 0.25
            row.append(Jet(xx.alg, re + 1j * im))
        rows.append(row)
    return rows


def _det(mat) -> Jet:
    """Cofactor determinant for small matrices of jets (or scalars)."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    acc = None
    for c in range(n):
        minor = [[mat[r][cc] for cc in range(n) if cc != c] for r in range(1, n)]
        term = mat[0][c] * _det(minor)
        if c % 2 == 1:
            term = -term
        acc = term if acc is None else acc + term
    return acc


@dataclass(frozen=True)
class MetricSample:
    point: np.ndarray
    g: np.ndarray
    det_g: float
    ricci: np.ndarray | None = None
    scalar_curv: float | None = None


def metric_from_potential(K: KahlerPotential, z: np.ndarray) -> MetricSample:
    """Metric g_{j kbar}(z) from second derivatives of the potential."""
    z = np.asarray(z, dtype=complex)
    m = z.shape[0]
    kjet = potential_jet(K, z, order=2)
    g = _metric_values_from_jet(kjet, m)
    asym = float(np.max(np.abs(g - g.conj().T)))
    if asym > HERMITIAN_TOL:
        raise DegenerateMetric(f"metric not Hermitian (asymmetry {asym:.2e})")
    g = 0.5 * (g + g.conj().T)
    det = float(np.linalg.det(g).real)
    return MetricSample(z, g, det)


def ricci_form(K: KahlerPotential, z: np.ndarray) -> np.ndarray:
    """Ric_{j kbar} = -d_j d_kbar log det g, from an order-4 jet of K."""
    z = np.asarray(z, dtype=complex)
    m = z.shape[0]
    kjet = potential_jet(K, z, order=4)
    gjets = _metric_jets_from_jet(kjet, m)
    detjet = _det(gjets)
    if detjet.max_imag() > 1e-8 * max(1.0, abs(detjet.value)):
        raise DegenerateMetric("determinant jet has a large imaginary part")
    det_re = detjet.real_part()
    if det_re.value <= 0:
        raise DegenerateMetric(f"det g = {det_re.value} is not positive")
    logdet = det_re.log()
    ric = -_metric_values_from_jet(logdet, m)
    return 0.5 * (ric + ric.conj().T)


def ricci_potential_f(K: KahlerPotential, z: np.ndarray) -> float:
    """f = -log det g: zero exactly when K solves the Ricci-flat
    Monge-Ampere equation in the standard holomorphic trivialization."""
    sample = metric_from_potential(K, z)
    if sample.det_g <= 0:
        raise DegenerateMetric(f"det g = {sample.det_g} is not positive")
    return -float(np.log(sample.det_g))


def metric_with_ricci(K: KahlerPotential, z: np.ndarray) -> MetricSample:
    base = metric_from_potential(K, z)
    ric = ricci_form(K, z)
    scal = 2.0 * float(np.trace(np.linalg.solve(base.g, ric)).real)
    return MetricSample(base.point, base.g, base.det_g, ric, scal)


def kahler_laplacian(K: KahlerPotential, fld, z: np.ndarray) -> float:
    """Delta f = -2 g^{jk} d_j d_kbar f for a scalar field on the chart.

    `fld` follows the same generic (xs, ys) calling convention as
    potentials.
    """
    z = np.asarray(z, dtype=complex)
    m = z.shape[0]
    g = metric_from_potential(K, z).g
    if np.linalg.eigvalsh(g)[0] <= 0:
        raise DegenerateMetric("metric is not positive at the sample point")
    xs, ys = _point_jets(z, order=2)
    fjet = fld(xs, ys)
    F = _metric_values_from_jet(fjet, m)
    return -2.0 * float(np.trace(np.linalg.solve(g, F)).real)


def gradient_norm_sq(K: KahlerPotential, fld, z: np.ndarray) -> float:
    """|grad f|^2 = 4 g^{jk} (d_j f)(d_k f)^bar; equals |grad|^2_euclid on
    flat space."""
    z = np.asarray(z, dtype=complex)
    m = z.shape[0]
    g = metric_from_potential(K, z).g
    xs, ys = _point_jets(z, order=1)
    fjet = fld(xs, ys)
    dz = np.array([0.5 * (fjet.deriv(j) - 1j * fjet.deriv(m + j))
                   for j in range(m)])
    return 4.0 * float((dz.conj() @ np.linalg.solve(g, dz)).real)


# ---------------------------------------------------------------------------
# decay fits


@dataclass(frozen=True)
class DecayReport:
    origin: np.ndarray
    direction: np.ndarray
    radii: np.ndarray
    norms: np.ndarray
    exponent: float | None
    residual_rms: float | None
    exact_zero: bool = False

    def to_json_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "residual_rms": self.residual_rms,
            "exact_zero": self.exact_zero,
            "n_samples": int(len(self.radii)),
            "radius_min": float(self.radii[0]),
            "radius_max": float(self.radii[-1]),
        }

    def csv_rows(self) -> list[tuple[float, float, float, float]]:
        rows = []
        for r, v in zip(self.radii, self.norms):
            lr = float(np.log10(r))
            lv = float(np.log10(v)) if v > 0 else float("-inf")
            rows.append((float(r), float(v), lr, lv))
        return rows


VANISH_TOL = 1e-14


def decay_fit(fld, origin: np.ndarray, direction: np.ndarray,
              radii) -> DecayReport:
    """Least-squares slope of log|field| against log radius along a ray.

    `fld` maps a complex point to a scalar or array; the sup norm of the
    result is fitted.  If every sample is below 1e-14 the field is reported
    as exact zero and no exponent is fitted.
    """
    origin = np.asarray(origin, dtype=complex)
    direction = np.asarray(direction, dtype=complex)
    nrm = np.linalg.norm(direction)
    if nrm == 0:
        raise DomainError("ray direction must be nonzero")
    direction = direction / nrm
    radii = np.asarray(radii, dtype=float)
    if len(radii) < 5:
        raise InsufficientSamples("need at least 5 radii per fit")
    if not np.all(np.diff(radii) > 0):
        raise DomainError("radii must be strictly increasing")

    norms = []
    for r in radii:
        val = fld(origin + r * direction)
        norms.append(float(np.max(np.abs(val))))
    norms = np.array(norms)

    if np.all(norms < VANISH_TOL):
        return DecayReport(origin, direction, radii, norms, None, None, True)

    mask = norms >= VANISH_TOL
    if mask.sum() < 5:
        raise InsufficientSamples(
            "fewer than 5 samples above the vanishing threshold")
    lx = np.log(radii[mask])
    ly = np.log(norms[mask])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return DecayReport(origin, direction, radii, norms, float(slope), rms)
