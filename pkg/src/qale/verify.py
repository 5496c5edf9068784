"""Verification suites behind `qale verify` and the acceptance tests.

Each suite returns a list of CheckResult plus a payload dict of metrics.
All randomness flows through a single seeded generator so reports are
reproducible byte for byte.
"""

from __future__ import annotations

import math

import numpy as np

from . import analysis, config, curvature, potentials, s3quotient, strata
from .errors import UnknownSuite
from .jets import npow
from .report import CheckResult

SUITES = ("laplacian", "eh", "glue", "region", "s3")


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _unit_complex_vector(rng, m: int) -> np.ndarray:
    v = rng.normal(size=m) + 1j * rng.normal(size=m)
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------------------
# laplacian suite


def power_field(m: int, n: int, beta: float, gamma: float):
    """r^beta s^gamma on flat C^m, with s the distance to the subspace
    spanned by the first m-n coordinates."""

    def fn(xs, ys):
        r2 = potentials._usum(xs, ys)
        s2 = potentials._usum(xs[m - n:], ys[m - n:])
        return npow(r2, beta / 2.0) * npow(s2, gamma / 2.0)

    return fn


def suite_laplacian(m: int | None = None, n: int | None = None,
                    draws: int = 20, seed: int = 0):
    rng = _rng(seed)
    worst = 0.0
    for _ in range(draws):
        mm = int(m) if m else int(rng.integers(2, 5))
        nn = int(n) if n else int(rng.integers(2, mm + 1))
        beta = float(rng.uniform(-3.0, -0.1))
        gamma = float(rng.uniform(-3.0, -0.1))
        z = _unit_complex_vector(rng, mm) * float(rng.uniform(0.5, 3.0))
        s = float(np.linalg.norm(z[mm - nn:]))
        if s < 0.2:  # keep clear of the singular subspace
            z[mm - nn:] = z[mm - nn:] + 0.5
            s = float(np.linalg.norm(z[mm - nn:]))
        r = float(np.linalg.norm(z))
        expected = analysis.laplacian_identity(mm, nn, beta, gamma, r, s)
        got = curvature.kahler_laplacian(
            potentials.euclidean_potential(mm), power_field(mm, nn, beta, gamma), z)
        worst = max(worst, abs(got - expected) / max(1e-30, abs(expected)))
    ok = worst <= 1e-6
    checks = [CheckResult("laplacian_identity_ad_vs_closed_form", ok,
                          {"draws": draws, "max_rel_err": worst})]
    return checks, {"max_rel_err": worst}


# ---------------------------------------------------------------------------
# Eguchi-Hanson suite


def suite_eh(a: float = 1.0, seed: int = 0):
    rng = _rng(seed)
    pot = potentials.eguchi_hanson_potential(a)

    ric_sup = 0.0
    for _ in range(20):
        u = float(rng.uniform(0.5, 50.0))
        z = math.sqrt(u) * _unit_complex_vector(rng, 2)
        ric = curvature.ricci_form(pot, z)
        ric_sup = max(ric_sup, float(np.max(np.abs(ric))))
    c_ricci = CheckResult("eh_ricci_flat", ric_sup <= 1e-8,
                          {"sup_ricci": ric_sup, "points": 20})

    direction = _unit_complex_vector(rng, 2)
    radii = np.geomspace(5.0, 160.0, 12)

    def err_field(z):
        g = curvature.metric_from_potential(pot, z).g
        return np.abs(g - np.eye(2))

    fit = curvature.decay_fit(err_field, np.zeros(2), direction, radii)
    decay_ok = fit.exponent is not None and abs(fit.exponent + 4.0) <= 0.1
    c_decay = CheckResult("eh_metric_error_decay", decay_ok,
                          {"exponent": fit.exponent,
                           "residual_rms": fit.residual_rms})

    grid = [math.sqrt(u) * _unit_complex_vector(rng, 2)
            for u in np.linspace(0.5, 50.0, 12)]
    pos = potentials.positivity_check(pot, grid)
    c_pos = CheckResult("eh_metric_positive", pos.passed,
                        {"min_eigenvalue": min(pos.min_eigenvalues)})
    checks = [c_ricci, c_decay, c_pos]
    payload = {"sup_ricci": ric_sup, "decay": fit.to_json_dict()}
    return checks, payload


# ---------------------------------------------------------------------------
# glued-potential suite


def standard_components(poset: strata.StratPoset, a: float):
    """Eguchi-Hanson corrections for every weighted stratum with a
    transverse C^2/{+-1} model."""
    comps = {}
    for i, s in enumerate(poset.strata):
        if i in (poset.idx_zero, poset.idx_infinity):
            continue
        if s.dim_W != 2 or len(s.A) != 2:
            continue
        nontrivial = [ai for ai in s.A if ai != poset.group.id_index][0]
        gmat = poset.group.elements[nontrivial]
        act = s.W.basis.conj().T @ gmat @ s.W.basis
        if np.max(np.abs(act + np.eye(2))) > 1e-8:
            continue
        comps[i] = potentials.eguchi_hanson_correction(a)
    return comps


def build_glued(name: str, R: float | None = None, a: float | None = None):
    """Glued potential for a bundled example; R and a fall back to the
    config's tube_radius and eh_scale."""
    cfg = config.load_config(name)
    R = cfg.tube_radius if R is None else R
    a = cfg.eh_scale if a is None else a
    G = cfg.build_group()
    poset = strata.build_lattice(G)
    weights = strata.mobius_weights(poset)
    comps = standard_components(poset, a)
    glued = potentials.glued_potential(poset, weights, comps, R)
    return cfg, poset, weights, glued


def generic_rays(poset: strata.StratPoset, rng, count: int,
                 min_rel_dist: float = 0.35):
    """Unit directions staying proportionally clear of all singular strata."""
    m = poset.group.dim
    rays = []
    while len(rays) < count:
        d = _unit_complex_vector(rng, m)
        if strata.singular_distance_s(d, poset) >= min_rel_dist:
            rays.append(d)
    return rays


def suite_glue(example: str = "c3_z22", R: float | None = None,
               a: float | None = None, seed: int = 0):
    rng = _rng(seed)
    checks = []
    payload = {}
    if example == "c3_z4":
        cfg, poset, weights, glued = build_glued("c3_z4", R, a)
        total = glued.total_potential()
        R, a = glued.R, cfg.eh_scale if a is None else a

        prod = potentials.product_potential(
            potentials.euclidean_potential(1),
            potentials.eguchi_hanson_potential(a))
        worst_prod = 0.0
        for _ in range(20):
            u = float(rng.uniform(0.5, 50.0))
            z = np.concatenate([rng.normal(size=1) + 1j * rng.normal(size=1),
                                math.sqrt(u) * _unit_complex_vector(rng, 2)])
            worst_prod = max(worst_prod, abs(curvature.ricci_potential_f(prod, z)))
        checks.append(CheckResult("product_monge_ampere_exact",
                                  worst_prod <= 1e-8, {"sup_f": worst_prod}))

        worst_glue = 0.0
        for _ in range(20):
            w = float(rng.uniform(2 * R + 1.05, 20.0)) * _unit_complex_vector(rng, 2)
            z1 = rng.normal() + 1j * rng.normal()
            z = np.array([z1, w[0], w[1]])
            assert strata.singular_distance_s(z, poset) > 2 * R + 1
            worst_glue = max(worst_glue, abs(curvature.ricci_potential_f(total, z)))
        checks.append(CheckResult("glued_f_compactly_supported",
                                  worst_glue <= 1e-9, {"sup_f": worst_glue}))
        payload = {"sup_f_product": worst_prod, "sup_f_glued": worst_glue}
    elif example == "c3_z22":
        cfg, poset, weights, glued = build_glued("c3_z22", R, a)
        total = glued.total_potential()
        R = glued.R
        rays = generic_rays(poset, rng, 5)
        radii = np.geomspace(8.0 * R, 44.0 * R, 10)
        exps = []
        for d in rays:
            fit = curvature.decay_fit(
                lambda z: curvature.ricci_potential_f(total, z),
                np.zeros(3), d, radii)
            exps.append(fit.exponent)
        ok = all(e is not None and abs(e + 8.0) <= 0.5 for e in exps)
        checks.append(CheckResult("glued_f_interference_decay", ok,
                                  {"exponents": exps}))
        payload = {"exponents": exps}
    else:
        raise UnknownSuite(f"no glue example named {example!r}")
    return checks, payload


# ---------------------------------------------------------------------------
# region suite


def suite_region(seed: int = 0, draws: int = 200):
    checks = []
    inside_ok = True
    for m in (3, 4):
        v = analysis.region_membership(analysis.RegionSpec(m, 2), 1.0 - m, -0.1)
        inside_ok = inside_ok and v.classification == "inside_sufficient"
    checks.append(CheckResult("corner_points_inside", inside_ok, {}))

    spec1 = analysis.RegionSpec(3, 1)
    grid_vals = np.linspace(-3.0, -0.1, 15)
    n1_outside = all(
        analysis.region_membership(spec1, b, g).classification == "outside"
        for b in grid_vals for g in grid_vals)
    checks.append(CheckResult("n_equals_1_all_outside", n1_outside, {}))

    rng = _rng(seed)
    samples = analysis.barrier_samples()
    agree = 0
    feasible_count = 0
    ident_worst = 0.0
    root_ok = True
    bracket_ok = True
    done = 0
    while done < draws:
        m = int(rng.integers(2, 5))
        n = int(rng.integers(2, m + 1))
        beta = float(rng.uniform(-3.0, -0.1))
        gamma = float(rng.uniform(-3.0, -0.1))
        spec = analysis.RegionSpec(m, n)
        verdict = analysis.region_membership(spec, beta, gamma)
        if any(math.isfinite(v) and abs(v) < 1e-9
               for v in verdict.quantities.values()):
            continue  # reject near-boundary draws
        done += 1
        rep = analysis.barrier_check(spec, beta, gamma, samples)
        if rep.agrees_with_inequalities:
            agree += 1

        lhs = (m - 1) ** 2 + 2 * gamma * (m - n)
        rhs = (m + 1 - 2 * n) ** 2 + 2 * (gamma + 2 * n - 2) * (m - n)
        ident_worst = max(ident_worst, abs(lhs - rhs))
        if (2 - 2 * n) < gamma < 0:
            root = math.sqrt(lhs)
            if not (abs(m + 1 - 2 * n) <= root + 1e-12
                    and root <= (m - 1) + 1e-12):
                root_ok = False
        if rep.feasible:
            feasible_count += 1
            if not (2 - 2 * m < beta + gamma < 0):
                bracket_ok = False
    checks.append(CheckResult("barrier_matches_inequalities", agree == draws,
                              {"agree": agree, "draws": draws,
                               "feasible": feasible_count}))
    checks.append(CheckResult("algebraic_identities", ident_worst <= 1e-12,
                              {"max_abs_defect": ident_worst}))
    checks.append(CheckResult("root_sandwich", root_ok, {}))
    checks.append(CheckResult("feasible_sum_bracket", bracket_ok, {}))

    prof = analysis.eh_radial_poisson(1.0)
    bar = analysis.barrier_from_u(prof, delta=-0.5, K_shift=1.0)
    checks.append(CheckResult("eh_barrier_construction", bar.passed,
                              {"C1": bar.C1, "C2": bar.C2,
                               "min_slack": bar.min_slack,
                               "sup_4u_minus_gradsq": prof.sup_defect}))
    payload = {"agree": agree, "draws": draws, "C1": bar.C1, "C2": bar.C2}
    return checks, payload


# ---------------------------------------------------------------------------
# S3 suite


def suite_s3(seed: int = 0):
    rng = _rng(seed)
    G = s3quotient.s3_group()
    checks = [CheckResult("group_order_6", G.order == 6, {"order": G.order})]

    a_idx = G.element_index(s3quotient.alpha_matrix())
    b_idx = G.element_index(s3quotient.beta_matrix())
    nonabelian = G.mul[a_idx, b_idx] != G.mul[b_idx, a_idx]
    checks.append(CheckResult("nonabelian", bool(nonabelian), {}))

    defect = s3quotient.symplectic_defect(G)
    checks.append(CheckResult("symplectic_form_preserved", defect <= 1e-12,
                              {"defect": defect}))

    alpha = s3quotient.alpha_matrix()
    beta = s3quotient.beta_matrix()
    chi = s3quotient.sign_character(G)
    worst_ab = 0.0
    worst_all = 0.0
    for _ in range(1000):
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        p = s3quotient.phi_invariants(z)
        worst_ab = max(worst_ab,
                       float(np.max(np.abs(s3quotient.phi_invariants(alpha @ z) - p))),
                       float(np.max(np.abs(s3quotient.phi_invariants(beta @ z) + p))))
    zs = [rng.normal(size=4) + 1j * rng.normal(size=4) for _ in range(50)]
    for z in zs:
        p = s3quotient.phi_invariants(z)
        for gi, g in enumerate(G.elements):
            worst_all = max(worst_all, float(np.max(np.abs(
                s3quotient.phi_invariants(g @ z) - chi[gi] * p))))
    checks.append(CheckResult("five_polynomial_equivariance",
                              worst_ab <= 1e-10 and worst_all <= 1e-10,
                              {"sup_err_generators": worst_ab,
                               "sup_err_all_elements": worst_all}))

    poset = strata.build_lattice(G)
    tol = 1e-9
    consistent = True
    verdicts = {}
    plane_idxs = [i for i, s in enumerate(poset.strata) if s.dim_V == 2]
    for i in plane_idxs:
        counts = {"consistent": 0, "violating": 0}
        for _ in range(50):
            c = rng.normal(size=2) + 1j * rng.normal(size=2)
            z = s3quotient.stratum_point(poset, i, c)
            v = s3quotient.vanishing_vs_singular(z, poset, tol)
            counts["consistent" if v.consistent and v.vanishes
                   else "violating"] += 1
        verdicts[f"stratum_{i}"] = counts
        consistent = consistent and counts["violating"] == 0
    ambient = {"consistent": 0, "violating": 0}
    for _ in range(200):
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        v = s3quotient.vanishing_vs_singular(z, poset, tol)
        ambient["consistent" if v.consistent else "violating"] += 1
    verdicts["ambient"] = ambient
    consistent = consistent and ambient["violating"] == 0
    z0 = np.zeros(4, dtype=complex)
    v0 = s3quotient.vanishing_vs_singular(z0, poset, tol)
    consistent = consistent and v0.consistent and v0.vanishes and v0.singular
    checks.append(CheckResult("vanishing_iff_singular", consistent,
                              {"tolerance": tol,
                               "plane_strata": len(plane_idxs),
                               "verdicts": verdicts}))

    worst_psi = 0.0
    for _ in range(100):
        x = rng.normal(size=3) + 1j * rng.normal(size=3)
        t = rng.normal() + 1j * rng.normal()
        if abs(t) < 0.1:
            t += 0.5
        sx = s3quotient.weighted_scale(t, *x)
        d = np.max(np.abs(s3quotient.psi_embedding(*sx)
                          - s3quotient.psi_embedding(*x)))
        worst_psi = max(worst_psi, float(d))
    checks.append(CheckResult("psi_weighted_scaling", worst_psi <= 1e-10,
                              {"sup_err": worst_psi}))

    min_sep = math.inf
    for _ in range(500):
        x = rng.normal(size=3) + 1j * rng.normal(size=3)
        y = rng.normal(size=3) + 1j * rng.normal(size=3)
        sep = float(np.max(np.abs(s3quotient.psi_embedding(*x)
                                  - s3quotient.psi_embedding(*y))))
        min_sep = min(min_sep, sep)
    checks.append(CheckResult("psi_injectivity_spot_check", min_sep > 1e-9,
                              {"min_separation": min_sep}))

    payload = {"symplectic_defect": defect, "min_psi_separation": min_sep,
               "vanishing_verdicts": verdicts}
    return checks, payload


def run_suite(name: str, **kwargs):
    if name == "laplacian":
        return suite_laplacian(**kwargs)
    if name == "eh":
        return suite_eh(**kwargs)
    if name == "glue":
        return suite_glue(**kwargs)
    if name == "region":
        return suite_region(**kwargs)
    if name == "s3":
        return suite_s3(**kwargs)
    raise UnknownSuite(f"unknown suite {name!r}; choose from {SUITES}")
