"""Potentials: Euclidean, Eguchi-Hanson, products, cutoff, glued sum."""

import math

import numpy as np
import pytest

from qale import curvature, potentials, strata, verify
from qale.errors import DomainError, PointTooSingular
from qale.jets import Jet, get_algebra


def test_euclidean_values_and_metric():
    K = potentials.euclidean_potential(2)
    assert K.value(np.zeros(2)) == 0.0
    assert K.value(np.array([1.0, 1j])) == pytest.approx(2.0)
    g = curvature.metric_from_potential(K, np.array([0.3 + 1j, -2.0])).g
    assert np.allclose(g, np.eye(2), atol=1e-12)
    rep = potentials.positivity_check(K, [np.zeros(2), np.array([3.0, 1j])])
    assert rep.passed
    assert rep.min_eigenvalues == pytest.approx([1.0, 1.0])


def test_eh_positive_definite_on_chart():
    pot = potentials.eguchi_hanson_potential(1.0)
    rng = np.random.default_rng(0)
    pts = [math.sqrt(u) * verify._unit_complex_vector(rng, 2)
           for u in np.linspace(0.5, 50, 10)]
    rep = potentials.positivity_check(pot, pts)
    assert rep.passed
    assert min(rep.min_eigenvalues) > 0


def test_eh_domain_error_at_zero():
    pot = potentials.eguchi_hanson_potential(1.0)
    with pytest.raises(DomainError):
        pot.value(np.zeros(2))
    with pytest.raises(DomainError):
        potentials.eguchi_hanson_potential(0.0)


def test_eh_flat_limit():
    """As a -> 0 the metric tends to the identity on u > 0."""
    pot = potentials.eguchi_hanson_potential(1e-4)
    z = np.array([0.8 + 0.1j, -0.5 + 0.4j])
    g = curvature.metric_from_potential(pot, z).g
    assert np.max(np.abs(g - np.eye(2))) < 1e-8


def test_eh_correction_decays():
    corr = potentials.eguchi_hanson_correction(1.0)
    # K_EH(u) - u ~ -a^4/(2u) for large u
    for u in (25.0, 100.0, 400.0):
        z = np.array([math.sqrt(u), 0], dtype=complex)
        assert corr.value(z) == pytest.approx(-1.0 / (2 * u), rel=2e-2)


def test_product_potential():
    eu1 = potentials.euclidean_potential(1)
    eu2 = potentials.euclidean_potential(2)
    prod = potentials.product_potential(eu1, eu2)
    z = np.array([1.0 + 1j, 0.5, -0.25j])
    assert prod.value(z) == pytest.approx(potentials.euclidean_potential(3).value(z))

    mixed = potentials.product_potential(
        eu1, potentials.eguchi_hanson_potential(1.0))
    z = np.array([0.7 - 0.3j, 1.1, 0.4 + 0.9j])
    g = curvature.metric_from_potential(mixed, z).g
    assert abs(g[0, 0] - 1.0) < 1e-12
    assert abs(g[0, 1]) < 1e-12 and abs(g[0, 2]) < 1e-12
    # product of Ricci-flat factors is Ricci-flat
    ric = curvature.ricci_form(mixed, z)
    assert np.max(np.abs(ric)) < 1e-10


def test_cutoff_profile():
    R = 1.5
    eta = potentials.cutoff_eta(R)
    assert eta(R / 2) == 0.0
    assert eta(3 * R) == 1.0
    xs = np.linspace(R * 1.001, 2 * R * 0.999, 400)
    vals = [eta(x) for x in xs]
    assert all(0.0 <= v <= 1.0 for v in vals)
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    # derivative bound via jets
    alg = get_algebra(1, 2)
    dmax = 0.0
    for x in xs:
        j = eta(Jet.variable(alg, 0, float(x)))
        dmax = max(dmax, abs(j.deriv(0)))
    assert 1.0 / R <= dmax <= 8.0 / R


def test_cutoff_smooth_join():
    """Jet evaluation agrees with values across the clamped edges."""
    eta = potentials.cutoff_eta(1.0)
    alg = get_algebra(1, 2)
    for x in (0.9, 1.004, 1.2, 1.7, 1.996, 2.3):
        j = eta(Jet.variable(alg, 0, x))
        assert j.value == pytest.approx(eta(x), abs=1e-12)


def glued_z4(R=1.0, a=1.0):
    return verify.build_glued("c3_z4", R=R, a=a)


def test_glued_reduces_to_component():
    _, poset, w, glued = glued_z4()
    corr = potentials.eguchi_hanson_correction(1.0)
    rng = np.random.default_rng(1)
    for _ in range(10):
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        z *= 3.0 / np.linalg.norm(z)  # radius 3 > 2R
        expect = corr.value(z[1:])
        assert glued.value(z) == pytest.approx(expect, rel=1e-12, abs=1e-12)


def test_glued_zero_components():
    _, poset, w, _ = glued_z4()
    comps = {i: potentials.zero_potential(poset.strata[i].dim_W)
             for i in w.k if i != poset.idx_zero}
    glued = potentials.glued_potential(poset, w, comps, 1.0)
    z = np.array([1.0, 2.0, 3.0], dtype=complex)
    assert glued.value(z) == 0.0


def test_glued_g_equivariance():
    _, poset, w, glued = verify.build_glued("c3_z22")
    G = poset.group
    rng = np.random.default_rng(2)
    for _ in range(5):
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        z *= 5.0
        base = glued.value(z)
        for g in G.elements:
            assert glued.value(g @ z) == pytest.approx(base, rel=1e-10, abs=1e-10)


def test_glued_far_from_two_lines_approaches_single_component():
    _, poset, w, glued = verify.build_glued("c3_z22")
    corr = potentials.eguchi_hanson_correction(1.0)
    # close-ish to the z1 axis, far from the others: phi ~ phi_1 + O(decay)
    z = np.array([30.0, 2.5, 2.5], dtype=complex)
    phi1 = corr.value(np.array([z[1], z[2]]))
    phi2 = corr.value(np.array([z[0], z[2]]))
    phi3 = corr.value(np.array([z[0], z[1]]))
    val = glued.value(z)
    # all cutoffs are 1 here, so the sum is exact ...
    assert val == pytest.approx(phi1 + phi2 + phi3, rel=1e-12)
    # ... and the distant components are an O(r^-2) tail on top of phi_1
    tail = abs(val - phi1)
    assert 0 < tail < 2.0 / abs(z[0]) ** 2


def test_glued_b_invariance_of_components():
    """Component potentials depend only on |w|^2, hence are invariant under
    every coset representative of B_i acting on the transverse chart."""
    _, poset, w, glued = glued_z4()
    corr = potentials.eguchi_hanson_correction(1.0)
    G = poset.group
    i = next(i for i, s in enumerate(poset.strata) if s.dim_V == 1)
    s = poset.strata[i]
    rng = np.random.default_rng(3)
    for rep in s.B.representatives:
        gmat = G.elements[rep]
        for _ in range(5):
            wv = rng.normal(size=3) + 1j * rng.normal(size=3)
            wv = s.W.projector @ wv
            wc = s.W.basis.conj().T @ wv
            gwc = s.W.basis.conj().T @ (gmat @ wv)
            assert corr.value(wc) == pytest.approx(corr.value(gwc), rel=1e-10)


def test_glued_point_too_singular():
    _, poset, w, glued = glued_z4()
    # far from the origin cutoff but on the singular line: the EH chart
    # preimage is undefined there
    z = np.array([10.0, 0.0, 0.0], dtype=complex)
    with pytest.raises((PointTooSingular, DomainError)):
        glued.value(z)


def test_glued_matches_preimage_sum_oracle():
    """Independent form of the weighted sum: k_i |A_i|/|G| over distinct
    chart preimages (one per coset of A_i), with explicit cutoff factors."""
    _, poset, w, glued = verify.build_glued("c3_z22")
    G = poset.group
    corr = potentials.eguchi_hanson_correction(1.0)
    eta = potentials.cutoff_eta(1.0)
    rng = np.random.default_rng(9)

    def oracle(z):
        total = 0.0
        for i, s in enumerate(poset.strata):
            k_i = w.k.get(i, 0)
            if k_i == 0 or i in (poset.idx_zero, poset.idx_infinity):
                continue  # phi_0 = 0 contributes nothing
            # coset representatives of A_i \ G
            reps, seen = [], set()
            for g in range(G.order):
                if g in seen:
                    continue
                reps.append(g)
                for a in s.A:
                    seen.add(int(G.mul[a, g]))
            acc = 0.0
            cut_js = [j for j in range(poset.size) if not poset.geq[i, j]]
            for g in reps:
                gz = G.elements[g] @ z
                wv = s.W.basis.conj().T @ gz
                factor = 1.0
                for j in cut_js:
                    mu = strata.quotient_distance(gz, poset.strata[j].V,
                                                  list(s.A), G)
                    factor *= eta(mu)
                acc += corr.value(wv) * factor
            total += k_i * len(s.A) / G.order * acc
        return total

    for scale in (3.0, 5.0, 12.0):
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        z *= scale / np.linalg.norm(z)
        if strata.singular_distance_s(z, poset) < 1.2:
            continue
        assert glued.value(z) == pytest.approx(oracle(z), rel=1e-10, abs=1e-12)


def test_positivity_far_field_glued():
    _, poset, w, glued = verify.build_glued("c3_z22")
    total = glued.total_potential()
    rng = np.random.default_rng(4)
    pts = []
    while len(pts) < 8:
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        z *= 8.0 / np.linalg.norm(z)
        if strata.singular_distance_s(z, poset) > 2.5:
            pts.append(z)
    rep = potentials.positivity_check(total, pts)
    assert rep.passed
