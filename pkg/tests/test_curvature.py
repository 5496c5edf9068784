"""Curvature engine: metrics, Ricci, Laplacian, decay fits, FD oracles."""

import math

import numpy as np
import pytest

from qale import analysis, curvature, potentials, verify
from qale.errors import DomainError, InsufficientSamples
from qale.potentials import KahlerPotential


def richardson_mixed(f, x0, idxs, h=0.05):
    """Mixed partial by nested central differences with one Richardson step.

    f takes a real vector; idxs is the list of variable indices to
    differentiate by (repetitions allowed).
    """

    def nested(g, order_idxs, step):
        if not order_idxs:
            return g
        head, rest = order_idxs[0], order_idxs[1:]

        def d(x):
            xp = x.copy()
            xm = x.copy()
            xp[head] += step
            xm[head] -= step
            gg = nested(g, rest, step)
            return (gg(xp) - gg(xm)) / (2 * step)

        return d

    coarse = nested(f, list(idxs), h)(np.asarray(x0, dtype=float))
    fine = nested(f, list(idxs), h / 2)(np.asarray(x0, dtype=float))
    return (4 * fine - coarse) / 3


def real_call(K, vec):
    m = len(vec) // 2
    return K.fn(list(vec[:m]), list(vec[m:]))


def test_metric_trivial_and_quartic():
    eu = potentials.euclidean_potential(3)
    g = curvature.metric_from_potential(eu, np.array([1.0, 2.0j, -1.0])).g
    assert np.allclose(g, np.eye(3), atol=1e-13)

    quartic = KahlerPotential(
        1, lambda xs, ys: (xs[0] * xs[0] + ys[0] * ys[0]) ** 2,
        lambda z: True, name="|z|^4")
    g = curvature.metric_from_potential(quartic, np.array([1.0 + 0j])).g
    assert g[0, 0] == pytest.approx(4.0, rel=1e-12)


def test_eh_metric_matches_finite_differences():
    pot = potentials.eguchi_hanson_potential(1.0)
    z = np.array([0.8 + 0.3j, -0.2 + 0.5j])  # u ~ 1
    g = curvature.metric_from_potential(pot, z).g
    x0 = np.concatenate([z.real, z.imag])
    for j in range(2):
        for k in range(2):
            xx = richardson_mixed(lambda v: real_call(pot, v), x0, [j, k], h=0.02)
            yy = richardson_mixed(lambda v: real_call(pot, v), x0,
                                  [2 + j, 2 + k], h=0.02)
            xy = richardson_mixed(lambda v: real_call(pot, v), x0,
                                  [j, 2 + k], h=0.02)
            yx = richardson_mixed(lambda v: real_call(pot, v), x0,
                                  [2 + j, k], h=0.02)
            want = 0.25 * ((xx + yy) + 1j * (xy - yx))
            assert g[j, k] == pytest.approx(want, abs=1e-7)


def test_ricci_flat_cases():
    eu = potentials.euclidean_potential(2)
    ric = curvature.ricci_form(eu, np.array([0.5, 1.0j]))
    assert np.max(np.abs(ric)) < 1e-14
    pot = potentials.eguchi_hanson_potential(1.0)
    rng = np.random.default_rng(0)
    for _ in range(5):
        u = float(rng.uniform(0.5, 50))
        z = math.sqrt(u) * verify._unit_complex_vector(rng, 2)
        ric = curvature.ricci_form(pot, z)
        assert np.max(np.abs(ric)) <= 1e-8


def test_ricci_nonflat_matches_fd():
    """K = |z|^2 + 0.01 |z|^4 on C^2: Ricci from jets vs FD of log det g."""
    def fn(xs, ys):
        u = potentials._usum(xs, ys)
        return u + 0.01 * u * u

    K = KahlerPotential(2, fn, lambda z: True, name="perturbed")
    z = np.array([0.6 - 0.2j, 0.3 + 0.4j])
    ric = curvature.ricci_form(K, z)
    assert np.max(np.abs(ric)) > 1e-3  # genuinely curved

    def logdet(vec):
        zz = np.array([vec[0] + 1j * vec[2], vec[1] + 1j * vec[3]])
        return math.log(curvature.metric_from_potential(K, zz).det_g)

    x0 = np.array([z[0].real, z[1].real, z[0].imag, z[1].imag])
    for j in range(2):
        for k in range(2):
            xx = richardson_mixed(logdet, x0, [j, k], h=0.02)
            yy = richardson_mixed(logdet, x0, [2 + j, 2 + k], h=0.02)
            xy = richardson_mixed(logdet, x0, [j, 2 + k], h=0.02)
            yx = richardson_mixed(logdet, x0, [2 + j, k], h=0.02)
            want = -0.25 * ((xx + yy) + 1j * (xy - yx))
            assert ric[j, k] == pytest.approx(want, abs=1e-6)


def test_ricci_gauge_invariance():
    """Adding a pluriharmonic affine function leaves Ricci unchanged."""
    def base(xs, ys):
        u = potentials._usum(xs, ys)
        return u + 0.02 * u * u

    def shifted(xs, ys):
        # + Re((2+i) z_1 + 3 z_2) + 5
        return (base(xs, ys) + 2.0 * xs[0] - 1.0 * ys[0] + 3.0 * xs[1] + 5.0)

    K1 = KahlerPotential(2, base, lambda z: True)
    K2 = KahlerPotential(2, shifted, lambda z: True)
    z = np.array([0.4 + 0.1j, -0.3 + 0.6j])
    r1 = curvature.ricci_form(K1, z)
    r2 = curvature.ricci_form(K2, z)
    assert np.allclose(r1, r2, atol=1e-11)


def test_ricci_potential_examples():
    eu = potentials.euclidean_potential(3)
    assert curvature.ricci_potential_f(eu, np.array([1.0, 2.0, 3.0])) == \
        pytest.approx(0.0, abs=1e-14)
    prod = potentials.product_potential(
        potentials.euclidean_potential(1),
        potentials.eguchi_hanson_potential(1.0))
    z = np.array([2.0 + 1j, 1.5, -0.5 + 0.5j])
    assert abs(curvature.ricci_potential_f(prod, z)) <= 1e-8


def test_laplacian_anchors():
    eu = potentials.euclidean_potential(2)
    z = np.array([0.7, -0.2 + 0.9j])
    # flat C^2, f = r^2 -> -4
    lap = curvature.kahler_laplacian(eu, potentials._usum, z)
    assert lap == pytest.approx(-4.0, rel=1e-12)
    # constant field -> 0
    lap0 = curvature.kahler_laplacian(eu, lambda xs, ys: 0.0 * xs[0] + 3.0, z)
    assert lap0 == pytest.approx(0.0, abs=1e-12)


def test_laplacian_radial_power():
    """flat C^3, f = r^beta: Delta f = -1/2 beta(beta+2m-2) r^(beta-2)."""
    from qale.jets import npow

    eu = potentials.euclidean_potential(3)
    z = np.array([0.5, 0.7j, -0.4 + 0.2j])
    r = float(np.linalg.norm(z))
    beta = -2.0
    lap = curvature.kahler_laplacian(
        eu, lambda xs, ys: npow(potentials._usum(xs, ys), beta / 2), z)
    want = -0.5 * beta * (beta + 2 * 3 - 2) * r ** (beta - 2)
    assert lap == pytest.approx(want, rel=1e-10)


def test_laplacian_closed_form_random_draws():
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(20):
        m = int(rng.integers(2, 5))
        n = int(rng.integers(2, m + 1))
        beta = float(rng.uniform(-3, -0.1))
        gamma = float(rng.uniform(-3, -0.1))
        z = verify._unit_complex_vector(rng, m) * float(rng.uniform(0.7, 2.5))
        s = float(np.linalg.norm(z[m - n:]))
        if s < 0.2:
            z[m - n:] += 0.5
            s = float(np.linalg.norm(z[m - n:]))
        r = float(np.linalg.norm(z))
        got = curvature.kahler_laplacian(
            potentials.euclidean_potential(m),
            verify.power_field(m, n, beta, gamma), z)
        want = analysis.laplacian_identity(m, n, beta, gamma, r, s)
        worst = max(worst, abs(got - want) / abs(want))
    assert worst <= 1e-6


def test_ad_matches_richardson_on_random_potentials():
    """Mixed 2nd and 4th derivatives of polynomial/exponential potentials."""
    from qale.jets import Jet, get_algebra

    rng = np.random.default_rng(5)
    alg = get_algebra(4, 4)
    for _ in range(50):
        c = rng.normal(size=8) * 0.3

        def fn(v):
            x0, x1, y0, y1 = v
            poly = (c[0] * x0 * x0 * y1 + c[1] * x1 * y0 + c[2] * x0 * y0 * y1
                    + c[3] * x1 * x1 * x1)
            expo = c[4] * x0 + c[5] * y1
            return poly + (expo).exp() if hasattr(expo, "exp") else \
                poly + math.exp(expo)

        x0v = rng.normal(size=4) * 0.5
        jets_in = [Jet.variable(alg, q, float(x0v[q])) for q in range(4)]
        f = fn(jets_in)
        for idxs in ([0, 1], [2, 3], [0, 0, 1, 3], [1, 2, 3, 3]):
            want = richardson_mixed(lambda v: fn(list(v)), x0v, idxs, h=0.08)
            got = f.deriv(*idxs)
            assert got == pytest.approx(want, rel=2e-6, abs=2e-6)


def test_product_ricci_is_block_sum():
    """Ricci of a product potential is the block sum of factor Riccis,
    checked with a genuinely curved factor."""
    def curved(xs, ys):
        u = potentials._usum(xs, ys)
        return u + 0.05 * u * u

    factor = KahlerPotential(1, curved, lambda z: True)
    prod = potentials.product_potential(potentials.euclidean_potential(2),
                                        factor)
    z = np.array([0.4 + 0.2j, -0.7, 0.5 - 0.3j])
    full = curvature.ricci_form(prod, z)
    part = curvature.ricci_form(factor, z[2:])
    assert np.allclose(full[:2, :2], 0.0, atol=1e-11)
    assert np.allclose(full[:2, 2], 0.0, atol=1e-11)
    assert full[2, 2] == pytest.approx(part[0, 0], rel=1e-10)
    assert abs(part[0, 0]) > 1e-3


def test_metric_sample_with_ricci():
    sample = curvature.metric_with_ricci(
        potentials.eguchi_hanson_potential(1.0), np.array([1.2, 0.3 - 0.8j]))
    assert sample.det_g == pytest.approx(1.0, rel=1e-12)
    assert np.max(np.abs(sample.ricci)) < 1e-10
    assert abs(sample.scalar_curv) < 1e-10


def test_det_product_metric():
    prod = potentials.product_potential(
        potentials.euclidean_potential(1),
        potentials.eguchi_hanson_potential(1.0))
    z = np.array([1.0 + 0.5j, 0.9, 0.4 - 0.3j])
    full = curvature.metric_from_potential(prod, z)
    eh = curvature.metric_from_potential(
        potentials.eguchi_hanson_potential(1.0), z[1:])
    assert full.det_g == pytest.approx(1.0 * eh.det_g, rel=1e-12)


def test_decay_fit_synthetic():
    report = curvature.decay_fit(
        lambda z: float(np.linalg.norm(z)) ** -3,
        np.zeros(2), np.array([1.0, 1.0]), np.geomspace(2, 80, 9))
    assert report.exponent == pytest.approx(-3.0, abs=1e-3)
    assert report.residual_rms < 1e-10


def test_decay_fit_exact_zero():
    report = curvature.decay_fit(lambda z: 0.0, np.zeros(2),
                                 np.array([1.0, 0.0]),
                                 np.geomspace(1, 50, 6))
    assert report.exact_zero
    assert report.exponent is None


def test_decay_fit_errors():
    with pytest.raises(InsufficientSamples):
        curvature.decay_fit(lambda z: 1.0, np.zeros(1), np.array([1.0]),
                            [1.0, 2.0, 3.0, 4.0])
    with pytest.raises(DomainError):
        curvature.decay_fit(lambda z: 1.0, np.zeros(1), np.array([1.0]),
                            [1.0, 3.0, 2.0, 4.0, 5.0])


def test_eh_metric_error_decay_minus_four():
    pot = potentials.eguchi_hanson_potential(1.0)

    def err(z):
        return np.abs(curvature.metric_from_potential(pot, z).g - np.eye(2))

    fit = curvature.decay_fit(err, np.zeros(2),
                              np.array([1.0, 0.7 + 0.4j]),
                              np.geomspace(5, 160, 12))
    assert fit.exponent == pytest.approx(-4.0, abs=0.1)
