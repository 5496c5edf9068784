"""The order-6 symplectic quotient example: group, polynomials, embedding."""

import numpy as np
import pytest

from qale import s3quotient, strata
from qale.errors import ZeroVector
from qale.s3quotient import (alpha_matrix, beta_matrix, phi_invariants,
                             psi_embedding, s3_group, symplectic_defect,
                             vanishing_vs_singular, weighted_scale)


@pytest.fixture(scope="module")
def group():
    return s3_group()


@pytest.fixture(scope="module")
def poset(group):
    return strata.build_lattice(group)


def test_group_order_and_shape(group):
    assert group.order == 6
    a = group.element_index(alpha_matrix())
    b = group.element_index(beta_matrix())
    assert group.mul[a, b] != group.mul[b, a]


def test_symplectic_preservation(group):
    assert symplectic_defect(group) <= 1e-12


def test_phi_values():
    p = phi_invariants(np.array([1.0, 0, 0, 0]))
    assert np.allclose(p, [0, 1, 0, 0, 0])
    assert np.allclose(phi_invariants(np.zeros(4)), np.zeros(5))


def test_phi_equivariance_random():
    rng = np.random.default_rng(0)
    alpha, beta = alpha_matrix(), beta_matrix()
    for _ in range(1000):
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        p = phi_invariants(z)
        assert np.max(np.abs(phi_invariants(alpha @ z) - p)) <= 1e-10
        assert np.max(np.abs(phi_invariants(beta @ z) + p)) <= 1e-10


def test_phi_relative_invariance_all_elements(group):
    chi = s3quotient.sign_character(group)
    rng = np.random.default_rng(1)
    for _ in range(100):
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        p = phi_invariants(z)
        for gi, g in enumerate(group.elements):
            assert np.max(np.abs(phi_invariants(g @ z) - chi[gi] * p)) <= 1e-10


def test_lattice_shape(poset):
    assert poset.size == 5
    dims = sorted(s.dim_V for s in poset.strata)
    assert dims == [0, 2, 2, 2, 4]
    assert poset.n == 2
    planes = [s for s in poset.strata if s.dim_V == 2]
    for s in planes:
        assert len(s.A) == 2
        assert s.B.order == 1  # N(V) = A here


def test_action_permutes_planes_transitively(group, poset):
    act = strata.g_action(group, poset)
    planes = [i for i, s in enumerate(poset.strata) if s.dim_V == 2]
    assert act.orbit(planes[0]) == tuple(sorted(planes))


def test_vanishing_on_strata(poset):
    rng = np.random.default_rng(2)
    planes = [i for i, s in enumerate(poset.strata) if s.dim_V == 2]
    for i in planes:
        for _ in range(20):
            c = rng.normal(size=2) + 1j * rng.normal(size=2)
            z = s3quotient.stratum_point(poset, i, c)
            v = vanishing_vs_singular(z, poset)
            assert v.vanishes and v.singular and v.consistent


def test_vanishing_fix_beta_explicit(poset):
    # Fix(beta) = {z1 = z3, z2 = z4}
    z = np.array([0.7 + 0.2j, -1.1 + 0.5j, 0.7 + 0.2j, -1.1 + 0.5j])
    v = vanishing_vs_singular(z, poset)
    assert v.vanishes and v.singular


def test_nonsingular_nonvanishing(poset):
    v = vanishing_vs_singular(np.array([1.0, 0, 0, 0]), poset)
    assert not v.vanishes and not v.singular and v.consistent
    v0 = vanishing_vs_singular(np.zeros(4), poset)
    assert v0.vanishes and v0.singular and v0.consistent


def test_random_consistency(poset):
    rng = np.random.default_rng(3)
    for _ in range(200):
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        assert vanishing_vs_singular(z, poset).consistent


def test_psi_basic():
    out = psi_embedding(1.0, 0.0, 0.0)
    assert np.allclose(out, [1, 0, 0, 0, 0])
    out = psi_embedding(0.0, 1.0, 0.0)
    assert np.allclose(out, [0, 1, 0, 0, 0])
    with pytest.raises(ZeroVector):
        psi_embedding(0.0, 0.0, 0.0)


def test_psi_weighted_scaling():
    rng = np.random.default_rng(4)
    for _ in range(100):
        x = rng.normal(size=3) + 1j * rng.normal(size=3)
        t = rng.normal() + 1j * rng.normal()
        if abs(t) < 0.1:
            t = 0.7 + 0.2j
        scaled = weighted_scale(t, *x)
        assert np.max(np.abs(psi_embedding(*scaled)
                             - psi_embedding(*x))) <= 1e-10


def test_psi_injectivity_spot_check():
    rng = np.random.default_rng(5)
    min_sep = np.inf
    for _ in range(500):
        x = rng.normal(size=3) + 1j * rng.normal(size=3)
        y = rng.normal(size=3) + 1j * rng.normal(size=3)
        sep = np.max(np.abs(psi_embedding(*x) - psi_embedding(*y)))
        min_sep = min(min_sep, sep)
    assert min_sep > 1e-9
