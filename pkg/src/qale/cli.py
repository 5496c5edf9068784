"""Command-line front end: analyze, verify, region, decay.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or parse error.
Reports are printed to stdout and written under --out; with a fixed config
and seed they are byte-identical across runs (QALE_SEED overrides the seed).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, analysis, config, curvature, groups, potentials
from . import strata, verify
from .errors import (BadRange, NonUnitaryGenerator, OrderCapExceeded,
                     ParseError, QaleError, UnknownSuite)
from .report import CheckResult, RunReport, render_json, write_csv, write_json


def _env_seed(default: int) -> int:
    raw = os.environ.get("QALE_SEED")
    return int(raw) if raw else default


def _emit(report: RunReport, out_dir: Path, stem: str) -> None:
    text = render_json(report.to_dict())
    sys.stdout.write(text)
    write_json(out_dir / f"{stem}.json", report.to_dict())


def cmd_analyze(args) -> int:
    cfg = config.load_config(args.config)
    seed = _env_seed(cfg.seed)
    G = cfg.build_group()
    poset = strata.build_lattice(G)
    weights = strata.mobius_weights(poset)
    action = strata.g_action(G, poset)
    payload = strata.poset_report(poset, weights, action)
    payload["k"] = {str(i): k for i, k in sorted(weights.k.items())}

    checks = [CheckResult("mobius_system_exact", True,
                          {"weights": [weights.k[i] for i in sorted(weights.k)]})]

    closed = True
    for i in range(poset.size):
        for j in range(poset.size):
            meet = groups.intersect(poset.strata[i].V, poset.strata[j].V)
            if not any(meet.same_as(s.V) for s in poset.strata):
                closed = False
    checks.append(CheckResult("lattice_intersection_closed", closed, {}))

    if G.order <= 64:
        subs = groups.subgroup_enumeration(G)
        oracle = []
        for sub in subs:
            V = groups.fix_of_subset([G.elements[i] for i in sub])
            if not any(V.same_as(w) for w in oracle):
                oracle.append(V)
        match = (len(oracle) == poset.size
                 and all(any(V.same_as(s.V) for s in poset.strata) for V in oracle))
        checks.append(CheckResult("lattice_matches_subgroup_oracle", match,
                                  {"subgroups": len(subs),
                                   "oracle_subspaces": len(oracle)}))

    if cfg.expected_stratum_count is not None:
        payload["expected_stratum_count"] = cfg.expected_stratum_count
        payload["stratum_count_matches_expected"] = (
            cfg.expected_stratum_count == poset.size)

    report = RunReport(command=f"analyze {cfg.name}", config_digest=cfg.digest,
                       version=__version__, seed=seed, checks=checks,
                       payload=payload)
    _emit(report, Path(args.out), f"analyze_{cfg.name}")
    return 0 if report.passed else 1


def cmd_verify(args) -> int:
    seed = _env_seed(args.seed)
    kwargs = {"seed": seed}
    if args.suite == "laplacian":
        kwargs.update(m=args.m, n=args.n, draws=args.draws or 20)
    elif args.suite == "eh":
        kwargs.update(a=args.a or 1.0)
    elif args.suite == "glue":
        kwargs.update(example=args.example, a=args.a, R=args.R)
    elif args.suite == "region":
        kwargs.update(draws=args.draws or 200)
    elif args.suite != "s3":
        raise UnknownSuite(f"unknown suite {args.suite!r}")
    checks, payload = verify.run_suite(args.suite, **kwargs)
    report = RunReport(command=f"verify {args.suite}", config_digest="-",
                       version=__version__, seed=seed, checks=checks,
                       payload=payload)
    _emit(report, Path(args.out), f"verify_{args.suite}")
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {c.name}")
    return 0 if report.passed else 1


def _parse_range(text: str, name: str) -> tuple[float, float]:
    try:
        lo, hi = (float(t) for t in text.split(":"))
    except ValueError as exc:
        raise BadRange(f"bad {name} range {text!r} (want LO:HI)") from exc
    if lo > hi:
        raise BadRange(f"{name} range must satisfy LO <= HI")
    return lo, hi


def cmd_region(args) -> int:
    if args.n < 1 or args.n > args.m:
        raise BadRange("need 1 <= n <= m")
    blo, bhi = _parse_range(args.beta_range, "beta")
    glo, ghi = _parse_range(args.gamma_range, "gamma")
    if args.grid < 1:
        raise BadRange("grid must be >= 1")
    spec = analysis.RegionSpec(args.m, args.n)
    betas = np.linspace(blo, bhi, args.grid)
    gammas = np.linspace(glo, ghi, args.grid)
    rows = []
    inside = 0
    for b in betas:
        for g in gammas:
            v = analysis.region_membership(spec, float(b), float(g))
            flag = 1 if v.classification == "inside_sufficient" else 0
            inside += flag
            rows.append((float(b), float(g), flag,
                         1 if v.inside_conjectured else 0))
    out_dir = Path(args.out)
    csv_path = out_dir / f"region_m{args.m}_n{args.n}.csv"
    write_csv(csv_path, ["beta", "gamma", "inside_sufficient",
                         "inside_conjectured"], rows)
    seed = _env_seed(0)
    report = RunReport(command=f"region m={args.m} n={args.n}",
                       config_digest="-", version=__version__, seed=seed,
                       checks=[], payload={"grid": args.grid, "inside": inside},
                       artifacts=[csv_path.name])
    _emit(report, out_dir, f"region_m{args.m}_n{args.n}")
    return 0


def _parse_ray(text: str, m: int) -> np.ndarray:
    vals = [float(t) for t in text.split(",")]
    if len(vals) == m:
        return np.array(vals, dtype=complex)
    if len(vals) == 2 * m:
        return np.array(vals[:m]) + 1j * np.array(vals[m:])
    raise ParseError(f"ray needs {m} or {2 * m} comma-separated floats")


def cmd_decay(args) -> int:
    seed = _env_seed(args.seed)
    rng = np.random.default_rng(seed)
    if args.example == "eh":
        pot = potentials.eguchi_hanson_potential(args.a or 1.0)
        m = 2
        radii = np.geomspace(5.0, 160.0, 12)

        def field(z):
            return np.abs(curvature.metric_from_potential(pot, z).g - np.eye(2))
    elif args.example in ("c3_z4", "c3_z22"):
        _, poset, _, glued = verify.build_glued(args.example, args.R, args.a)
        total = glued.total_potential()
        m = 3
        radii = np.geomspace(8.0 * glued.R, 44.0 * glued.R, 10)

        def field(z):
            return curvature.ricci_potential_f(total, z)
    else:
        raise UnknownSuite(f"no decay example named {args.example!r}")

    if args.ray:
        direction = _parse_ray(args.ray, m)
    else:
        direction = rng.normal(size=m) + 1j * rng.normal(size=m)
    direction = direction / np.linalg.norm(direction)
    fit = curvature.decay_fit(field, np.zeros(m), direction, radii)

    out_dir = Path(args.out)
    csv_path = out_dir / f"decay_{args.example}.csv"
    write_csv(csv_path, ["radius", "field_norm", "log10_radius", "log10_norm"],
              fit.csv_rows())
    payload = fit.to_json_dict()
    payload["direction_re"] = [float(v) for v in direction.real]
    payload["direction_im"] = [float(v) for v in direction.imag]
    report = RunReport(command=f"decay {args.example}", config_digest="-",
                       version=__version__, seed=seed, checks=[],
                       payload=payload, artifacts=[csv_path.name])
    _emit(report, out_dir, f"decay_{args.example}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qale",
                                description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)

    pa = sub.add_parser("analyze", help="stratification report for a group config")
    pa.add_argument("config")
    pa.add_argument("--out", default="qale_out")
    pa.set_defaults(func=cmd_analyze)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite", choices=list(verify.SUITES))
    pv.add_argument("--m", type=int, default=None)
    pv.add_argument("--n", type=int, default=None)
    pv.add_argument("--draws", type=int, default=None)
    pv.add_argument("--a", type=float, default=None,
                    help="Eguchi-Hanson scale (default: 1.0 / config)")
    pv.add_argument("--R", type=float, default=None,
                    help="gluing tube radius (default: config)")
    pv.add_argument("--example", default="c3_z22")
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--out", default="qale_out")
    pv.set_defaults(func=cmd_verify)

    pr = sub.add_parser("region", help="scan the isomorphism region to CSV")
    pr.add_argument("--m", type=int, required=True)
    pr.add_argument("--n", type=int, required=True)
    pr.add_argument("--beta-range", default="-3:-0.1")
    pr.add_argument("--gamma-range", default="-3:-0.1")
    pr.add_argument("--grid", type=int, default=100)
    pr.add_argument("--out", default="qale_out")
    pr.set_defaults(func=cmd_region)

    pd = sub.add_parser("decay", help="fit a power-law decay along a ray")
    pd.add_argument("--example", required=True,
                    choices=["eh", "c3_z4", "c3_z22"])
    pd.add_argument("--ray", default=None)
    pd.add_argument("--a", type=float, default=None)
    pd.add_argument("--R", type=float, default=None)
    pd.add_argument("--seed", type=int, default=0)
    pd.add_argument("--out", default="qale_out")
    pd.set_defaults(func=cmd_decay)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ParseError, BadRange, UnknownSuite, NonUnitaryGenerator,
            OrderCapExceeded) as exc:
        # config-level problems are usage errors per the exit-code contract
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QaleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
