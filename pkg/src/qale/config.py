"""Group config files: JSON schema, entry tokens, bundled examples.

Matrix entries are either [re, im] float pairs or one of the tokens
"0", "1", "-1", "i", "-i", "cis(p/q)", "-cis(p/q)" with integer p and
positive integer q <= 10^6; cis(p/q) means exp(2*pi*i*p/q).
"""

from __future__ import annotations

import cmath
import hashlib
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ParseError
from .groups import MatrixGroup, close_group, is_unitary

_CIS_RE = re.compile(r"^(-?)cis\((-?\d+)/(\d+)\)$")
MAX_DENOMINATOR = 10 ** 6

_TOKENS = {
    "0": 0.0 + 0.0j,
    "1": 1.0 + 0.0j,
    "-1": -1.0 + 0.0j,
    "i": 1.0j,
    "-i": -1.0j,
}


def parse_entry(entry, where: str = "") -> complex:
    if isinstance(entry, str):
        tok = entry.strip()
        if tok in _TOKENS:
            return _TOKENS[tok]
        m = _CIS_RE.match(tok)
        if m:
            sign = -1.0 if m.group(1) == "-" else 1.0
            p, q = int(m.group(2)), int(m.group(3))
            if q <= 0 or q > MAX_DENOMINATOR:
                raise ParseError(f"{where}: bad denominator in {tok!r}")
            return sign * cmath.exp(2j * cmath.pi * p / q)
        raise ParseError(f"{where}: unknown entry token {tok!r}")
    if isinstance(entry, (list, tuple)) and len(entry) == 2:
        try:
            return complex(float(entry[0]), float(entry[1]))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{where}: bad [re, im] pair {entry!r}") from exc
    if isinstance(entry, (int, float)):
        return complex(entry)
    raise ParseError(f"{where}: entry must be a token or [re, im] pair, "
                     f"got {entry!r}")


@dataclass
class GroupConfig:
    name: str
    dimension: int
    generators: list[np.ndarray]
    seed: int = 0
    max_order: int = 10_000
    tube_radius: float = 1.0
    eh_scale: float = 1.0
    expected_stratum_count: int | None = None
    digest: str = ""
    extra: dict = field(default_factory=dict)

    def build_group(self) -> MatrixGroup:
        return close_group(self.generators, max_order=self.max_order,
                           dim=self.dimension)


def parse_config(text: str, name: str = "config") -> GroupConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{name}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"{name}: top level must be an object")
    try:
        dim = int(raw["dimension"])
        gen_grids = raw["generators"]
    except KeyError as exc:
        raise ParseError(f"{name}: missing required key {exc.args[0]!r}") from exc

    gens = []
    for gi, grid in enumerate(gen_grids):
        if len(grid) != dim or any(len(row) != dim for row in grid):
            raise ParseError(f"{name}: generator {gi} is not {dim}x{dim}")
        mat = np.empty((dim, dim), dtype=complex)
        for r, row in enumerate(grid):
            for c, entry in enumerate(row):
                mat[r, c] = parse_entry(
                    entry, where=f"{name}: generator {gi}, row {r}, col {c}")
        if not is_unitary(mat):
            from .errors import NonUnitaryGenerator
            raise NonUnitaryGenerator(
                f"{name}: generator {gi} is not unitary at 1e-10")
        gens.append(mat)

    known = {"name", "dimension", "generators", "seed", "max_order",
             "tube_radius", "eh_scale", "expected_stratum_count"}
    extra = {k: v for k, v in raw.items() if k not in known}
    return GroupConfig(
        name=str(raw.get("name", name)),
        dimension=dim,
        generators=gens,
        seed=int(raw.get("seed", 0)),
        max_order=int(raw.get("max_order", 10_000)),
        tube_radius=float(raw.get("tube_radius", 1.0)),
        eh_scale=float(raw.get("eh_scale", 1.0)),
        expected_stratum_count=(int(raw["expected_stratum_count"])
                                if "expected_stratum_count" in raw else None),
        digest=hashlib.sha256(text.encode()).hexdigest(),
        extra=extra,
    )


BUNDLED = ("c3_z4", "c3_z22", "c4_z23", "c4_s3")


def load_config(path_or_name: str) -> GroupConfig:
    """Load a config from a path, or a bundled config by bare name."""
    p = Path(path_or_name)
    if p.exists():
        return parse_config(p.read_text(), name=p.stem)
    stem = path_or_name.removesuffix(".json")
    if stem in BUNDLED:
        text = resources.files("qale.configs").joinpath(f"{stem}.json").read_text()
        return parse_config(text, name=stem)
    raise ParseError(f"no such config file or bundled name: {path_or_name!r}")
