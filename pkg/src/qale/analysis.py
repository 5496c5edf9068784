"""Weighted-Holder machinery on flat models and the radial barrier solve.

Closed forms used here, in the Kahler normalization (Delta(r^2) = -2m on
flat C^m):

    Delta(r^b s^c) = -1/2 r^(b-2) s^(c-2) [ c(c+2n-2) r^2 + b(2m-2+b+2c) s^2 ]

for 0 < s <= r, with s the distance to a copy of C^(m-n).  A constant C
with Delta(C r^b s^c) >= r^b s^(c-2) exists iff

    c(c+2n-2) < 0   and   c(c+2n-2) + b(2m-2+b+2c) < 0,

equivalently 2-2n < c < 0 and |b+c+m-1| < sqrt((m-1)^2 + 2c(m-n)).  The
certified isomorphism region adds b < 0; the conjectured region replaces
the square-root bound by b + c > 2 - 2m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    InsufficientSamples,
    IntegrationFailure,
    PreconditionFailed,
)

BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class RegionSpec:
    m: int
    n: int

    def __post_init__(self):
        if not (1 <= self.n <= self.m):
            raise DomainError("need 1 <= n <= m")


def laplacian_identity(m: int, n: int, beta: float, gamma: float,
                       r: float, s: float) -> float:
    """Closed-form Delta(r^beta s^gamma) on flat C^m away from C^(m-n)."""
    if s <= 0 or s > r:
        raise DomainError("need 0 < s <= r")
    bracket = (gamma * (gamma + 2 * n - 2) * r * r
               + beta * (2 * m - 2 + beta + 2 * gamma) * s * s)
    return -0.5 * r ** (beta - 2) * s ** (gamma - 2) * bracket


def _ineq_values(spec: RegionSpec, beta: float, gamma: float):
    p = gamma * (gamma + 2 * spec.n - 2)
    q = beta * (2 * spec.m - 2 + beta + 2 * gamma)
    return p, q


@dataclass(frozen=True)
class RegionVerdict:
    classification: str            # inside_sufficient | outside | boundary
    ineq_first: bool               # gamma(gamma+2n-2) < 0
    ineq_both: bool                # ... and + beta(2m-2+beta+2gamma) < 0
    inside_conjectured: bool
    quantities: dict[str, float]


def region_membership(spec: RegionSpec, beta: float, gamma: float) -> RegionVerdict:
    """Classify (beta, gamma) against the certified sufficient region.

    Also reports the raw two-inequality truth values and membership in the
    conjectured region; 'boundary' means some defining quantity is within
    1e-12 of equality.
    """
    p, q = _ineq_values(spec, beta, gamma)
    disc = (spec.m - 1) ** 2 + 2 * gamma * (spec.m - spec.n)
    root = math.sqrt(disc) if disc >= 0 else float("nan")
    margin = root - abs(beta + gamma + spec.m - 1) if disc >= 0 else float("nan")
    quantities = {
        "p": p,
        "p_plus_q": p + q,
        "beta": beta,
        "gamma": gamma,
        "gamma_minus_lower": gamma - (2 - 2 * spec.n),
        "sqrt_margin": margin,
        "conj_margin": beta + gamma - (2 - 2 * spec.m),
    }
    ineq_first = p < 0
    ineq_both = ineq_first and (p + q) < 0
    inside_conj = (beta < 0 and (2 - 2 * spec.n) < gamma < 0
                   and beta + gamma > 2 - 2 * spec.m)

    sufficient_qs = [beta, gamma, quantities["gamma_minus_lower"], margin]
    on_boundary = any(math.isfinite(v) and abs(v) <= BOUNDARY_TOL
                      for v in sufficient_qs)
    inside = (beta < 0 and (2 - 2 * spec.n) < gamma < 0
              and math.isfinite(margin) and margin > 0)
    if on_boundary:
        cls = "boundary"
    elif inside:
        cls = "inside_sufficient"
    else:
        cls = "outside"
    return RegionVerdict(cls, ineq_first, ineq_both, inside_conj, quantities)


@dataclass(frozen=True)
class BarrierReport:
    feasible: bool
    C: float | None
    n_samples: int
    agrees_with_inequalities: bool


def barrier_check(spec: RegionSpec, beta: float, gamma: float,
                  samples) -> BarrierReport:
    """Minimal C with C * Delta(r^b s^c) >= r^b s^(c-2) over the samples.

    Infeasible as soon as the Laplacian is nonpositive somewhere.  On
    non-boundary inputs the verdict matches the two-inequality membership
    provided the samples cover s/r ratios near both 0 and 1.
    """
    verdict = region_membership(spec, beta, gamma)
    best = 0.0
    feasible = True
    count = 0
    for r, s in samples:
        count += 1
        lap = laplacian_identity(spec.m, spec.n, beta, gamma, r, s)
        target = r ** beta * s ** (gamma - 2)
        if lap <= 0:
            feasible = False
            break
        best = max(best, target / lap)
    agrees = feasible == verdict.ineq_both
    return BarrierReport(feasible, best if feasible else None, count, agrees)


def barrier_samples(n_ratio: int = 12, r_values=(1.0, 3.0, 10.0)):
    """(r, s) pairs whose ratios s/r sweep [1e-3, 1], endpoints included."""
    ratios = np.geomspace(1e-3, 1.0, n_ratio)
    out = []
    for r in r_values:
        for x in ratios:
            out.append((float(r), float(r * x)))
    return out


# ---------------------------------------------------------------------------
# weighted Holder norms over sampled fields


@dataclass(frozen=True)
class FieldSample:
    """Point sample carrying |grad^j f| for j <= k and the order-k tensor."""

    point: np.ndarray
    deriv_norms: tuple[float, ...]
    top_tensor: np.ndarray


def weighted_holder_norm(samples: list[FieldSample], pair, beta: float,
                         gamma: float, k: int, alpha: float) -> float:
    """Sampled proxy for |f| in C^{k,alpha}_{beta,gamma}.

    Sum over j <= k of sup rho^-beta sigma^(j-gamma) |grad^j f|, plus the
    Holder seminorm of the top tensor over sample pairs closer than
    min(sigma)/4 in the chart (an injectivity-radius proxy; tensor
    components are compared in the fixed chart).
    """
    if not samples:
        raise InsufficientSamples("no samples")
    for smp in samples:
        if len(smp.deriv_norms) != k + 1:
            raise InsufficientSamples("samples must carry norms to order k")
    rho = [pair.rho(s.point) for s in samples]
    sig = [pair.sigma(s.point) for s in samples]

    total = 0.0
    for j in range(k + 1):
        total += max(rho[i] ** (-beta) * sig[i] ** (j - gamma)
                     * samples[i].deriv_norms[j]
                     for i in range(len(samples)))

    semi = 0.0
    gam_top = gamma - k - alpha
    for i in range(len(samples)):
        for j in range(i + 1, len(samples)):
            d = float(np.linalg.norm(samples[i].point - samples[j].point))
            if d == 0 or d >= min(sig[i], sig[j]) / 4.0:
                continue
            diff = float(np.max(np.abs(samples[i].top_tensor
                                       - samples[j].top_tensor)))
            w = (min(rho[i], rho[j]) ** (-beta)
                 * min(sig[i], sig[j]) ** (-gam_top))
            semi = max(semi, w * diff / d ** alpha)
    return total + semi


def windowed_sup(samples: list[FieldSample], pair, beta: float, gamma: float,
                 edges) -> list[float]:
    """sup rho^-beta sigma^-gamma |f| within radius windows, for growth scans."""
    rs = [float(np.linalg.norm(s.point)) for s in samples]
    out = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        vals = [pair.rho(s.point) ** (-beta) * pair.sigma(s.point) ** (-gamma)
                * s.deriv_norms[0]
                for s, r in zip(samples, rs) if lo <= r < hi]
        out.append(max(vals) if vals else 0.0)
    return out


# ---------------------------------------------------------------------------
# radial Poisson solve on the Eguchi-Hanson chart


@dataclass(frozen=True)
class RadialProfile:
    """Solution data of Delta u = -2m along the radial coordinate t = |z|^2.

    Fields: the log-spaced grid t, the profile u, w = t u', the gradient
    norm squared |grad u|^2, the surrogate radius rho(t) = sqrt(t), and the
    complex dimension m of the model.
    """

    a: float
    m: int
    t: np.ndarray
    u: np.ndarray
    w: np.ndarray
    grad_sq: np.ndarray
    sup_defect: float  # sup of 4u - |grad u|^2

    def rho(self) -> np.ndarray:
        return np.sqrt(self.t)


def eh_radial_poisson(a: float, npts: int = 800,
                      t_span: tuple[float, float] | None = None) -> RadialProfile:
    """Solve Delta u = -4 radially on the Eguchi-Hanson chart (m = 2).

    First-order reduction in w = t u' with an integrating-factor-friendly
    form, integrated by RK4 in log t over [a^2/10, 1e4 a^2].  The regular
    branch fixes w near the exceptional set (w ~ t^2/a^2) and the additive
    constant of u is fixed by the far-field behaviour u -> t + a^4/(2t),
    which follows from integrating u' = t/sqrt(a^4+t^2) + O(t^-2).
    """
    if a < 0:
        raise DomainError("need a >= 0")
    if t_span is None:
        t_span = (a * a / 10.0, 1e4 * a * a) if a > 0 else (0.1, 1e4)
    t0, t1 = t_span
    if not (0 < t0 < t1):
        raise IntegrationFailure("bad integration span")

    def S(t):
        return math.sqrt(a ** 4 + t * t)

    # d/dtau with tau = log t:  du/dtau = w,  dw/dtau = 2 t^2 / S - t^2 w / S^2
    def rhs(tau, y):
        t = math.exp(tau)
        u, w = y
        return np.array([w, 2 * t * t / S(t) - (t * t) * w / S(t) ** 2])

    taus = np.linspace(math.log(t0), math.log(t1), npts)
    h = taus[1] - taus[0]
    y = np.array([0.0, t0 * t0 / (a * a) if a > 0 else t0])
    us = np.empty(npts)
    ws = np.empty(npts)
    us[0], ws[0] = y
    for i in range(npts - 1):
        tau = taus[i]
        k1 = rhs(tau, y)
        k2 = rhs(tau + h / 2, y + h / 2 * k1)
        k3 = rhs(tau + h / 2, y + h / 2 * k2)
        k4 = rhs(tau + h, y + h * k3)
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise IntegrationFailure(f"integration blew up at step {i}")
        us[i + 1], ws[i + 1] = y

    t = np.exp(taus)
    shift = (t[-1] + a ** 4 / (2 * t[-1])) - us[-1]
    u = us + shift
    uprime = ws / t
    svals = np.sqrt(a ** 4 + t * t)
    grad_sq = 4.0 * uprime ** 2 * svals
    sup_defect = float(np.max(4.0 * u - grad_sq))
    return RadialProfile(a, 2, t, u, ws, grad_sq, sup_defect)


def flat_radial_profile(m: int = 2, t_span=(0.1, 1e4), npts: int = 400) -> RadialProfile:
    """Exact flat-space profile u = r^2 on the same grid layout."""
    t = np.geomspace(t_span[0], t_span[1], npts)
    u = t.copy()
    w = t.copy()
    grad_sq = 4.0 * t
    return RadialProfile(0.0, m, t, u, w, grad_sq, float(np.max(4 * u - grad_sq)))


@dataclass(frozen=True)
class BarrierFromU:
    delta: float
    K_shift: float
    C1: float
    C2: float
    min_slack: float
    passed: bool


def barrier_from_u(profile: RadialProfile, delta: float,
                   K_shift: float) -> BarrierFromU:
    """Verify the power-of-u barrier construction on the radial grid.

    Checks, for 1-m < delta < 0 and F = (u+K)^delta:
      * u + K >= 1 and |grad u|^2 <= 4(u+K) (preconditions),
      * Delta F >= -2 delta (delta + m - 1) (u+K)^(delta-1) pointwise,
      * existence of C1, C2 > 0 with
          C1 * [-2 delta (delta+m-1) (u+K)^(delta-1)] >= rho^(2 delta - 2)
          and (u+K)^delta <= C2 rho^(2 delta),
    with rho = sqrt(r^2 + 1) + 1 for the chart radius r = sqrt(t).
    """
    m = profile.m
    if not (1 - m < delta < 0):
        raise PreconditionFailed(f"need {1 - m} < delta < 0, got {delta}")
    uk = profile.u + K_shift
    if np.min(uk) < 1.0 - 1e-12:
        i = int(np.argmin(uk))
        raise PreconditionFailed(f"u+K < 1 at t={profile.t[i]:.3g}")
    slack_pre = 4.0 * uk - profile.grad_sq
    if np.min(slack_pre) < -1e-9:
        i = int(np.argmin(slack_pre))
        raise PreconditionFailed(f"|grad u|^2 > 4(u+K) at t={profile.t[i]:.3g}")

    lap_u = -2.0 * m  # exact along the solve
    lap_F = (delta * uk ** (delta - 1) * lap_u
             - 0.5 * delta * (delta - 1) * uk ** (delta - 2) * profile.grad_sq)
    bound = -2.0 * delta * (delta + m - 1) * uk ** (delta - 1)
    slack = lap_F - bound
    min_slack = float(np.min(slack))
    pointwise_ok = min_slack >= -1e-10 * float(np.max(np.abs(bound)))

    r = np.sqrt(profile.t)
    rho = np.sqrt(r * r + 1.0) + 1.0
    C1 = float(np.max(rho ** (2 * delta - 2) / bound))
    C2 = float(np.max(uk ** delta / rho ** (2 * delta)))
    passed = pointwise_ok and math.isfinite(C1) and math.isfinite(C2)
    return BarrierFromU(delta, K_shift, C1, C2, min_slack, passed)
