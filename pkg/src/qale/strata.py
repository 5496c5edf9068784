"""Fixed-subspace lattice of C^m/G and the attached stratification data.

For a finite G < U(m) the lattice L = {Fix(A) : A <= G} is computed as the
intersection closure of the single-element fixed spaces together with C^m
(the two agree because Fix(A) is the intersection of Fix(a) over a in A;
subgroup enumeration is kept as an independent oracle).  Each member V_i
carries its perpendicular W_i, pointwise stabilizer A_i = C(V_i), setwise
stabilizer N_i, quotient B_i = N_i/A_i and decay exponent d_i = 2 - 2 dim W_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import groups
from .errors import NonUniqueOrInconsistent, OrbitResolutionFailure
from .groups import CosetStructure, MatrixGroup, Subspace

MATCH_TOL = 1e-8


@dataclass(frozen=True)
class Stratum:
    index: int
    V: Subspace
    W: Subspace
    A: tuple[int, ...]
    N: tuple[int, ...]
    B: CosetStructure
    d: int

    @property
    def dim_V(self) -> int:
        return self.V.dim

    @property
    def dim_W(self) -> int:
        return self.W.dim


@dataclass
class StratPoset:
    group: MatrixGroup
    strata: list[Stratum]
    geq: np.ndarray            # geq[i, j] True iff V_i subset of V_j
    idx_zero: int
    idx_infinity: int
    n: int | None              # min dim W_i over i != 0; None if no singular strata

    @property
    def size(self) -> int:
        return len(self.strata)

    def singular_indices(self) -> list[int]:
        return [i for i in range(self.size) if i != self.idx_zero]

    def above(self, j: int) -> list[int]:
        """Indices i with i >= j in the stratum order (V_i inside V_j)."""
        return [i for i in range(self.size) if self.geq[i, j]]


def _projector_key(P: np.ndarray) -> bytes:
    re = np.round(P.real / 1e-6).astype(np.int64)
    im = np.round(P.imag / 1e-6).astype(np.int64)
    return re.tobytes() + im.tobytes()


def build_lattice(G: MatrixGroup) -> StratPoset:
    """Intersection closure of {Fix(g)} plus C^m, with all stratum data."""
    m = G.dim
    members: list[Subspace] = [Subspace.full(m)]

    def add(V: Subspace) -> bool:
        for w in members:
            if w.same_as(V):
                return False
        members.append(V)
        return True

    for g in G.elements:
        add(groups.element_fixed_space(g))
    grew = True
    while grew:
        grew = False
        snapshot = list(members)
        for a in snapshot:
            for b in snapshot:
                if add(groups.intersect(a, b)):
                    grew = True

    members.sort(key=lambda V: (m - V.dim, _projector_key(V.projector)))

    strata: list[Stratum] = []
    for idx, V in enumerate(members):
        A = tuple(groups.centralizer_of_subspace(G, V))
        N = tuple(groups.normalizer_of_subspace(G, V))
        B = groups.quotient_group(list(N), list(A), G)
        W = V.orthocomplement()
        fixA = groups.fix_of_subset([G.elements[a] for a in A])
        if not fixA.same_as(V):
            raise NonUniqueOrInconsistent(
                f"Fix(C(V)) differs from V for stratum {idx}")
        strata.append(Stratum(idx, V, W, A, N, B, 2 - 2 * W.dim))

    k = len(strata)
    geq = np.zeros((k, k), dtype=bool)
    for i in range(k):
        for j in range(k):
            geq[i, j] = strata[j].V.contains(strata[i].V)

    idx_zero = 0
    assert strata[idx_zero].V.dim == m
    fixG = groups.fix_of_subset(G.elements)
    idx_infinity = next(i for i, s in enumerate(strata) if s.V.same_as(fixG))

    sing_dims = [s.dim_W for i, s in enumerate(strata) if i != idx_zero]
    n = min(sing_dims) if sing_dims else None
    return StratPoset(G, strata, geq, idx_zero, idx_infinity, n)


@dataclass(frozen=True)
class MobiusWeights:
    """Integers k_i with sum over {i >= j, i != infinity} k_i = 1 for all j."""

    k: dict[int, int]


def mobius_weights(poset: StratPoset) -> MobiusWeights:
    """Unique integer solution of the triangular weight system.

    Indices are processed by increasing dim V (equivalently non-increasing
    dim W) so every equation reads k_j = 1 - sum of already-solved k_i over
    the strata strictly above j.
    """
    inf = poset.idx_infinity
    active = [i for i in range(poset.size) if i != inf]
    order = sorted(active, key=lambda j: (poset.strata[j].dim_V, j))
    k: dict[int, int] = {}
    for j in order:
        acc = 0
        for i in active:
            if i != j and poset.geq[i, j]:
                if i not in k:
                    raise NonUniqueOrInconsistent(
                        "weight system is not triangular in this order")
                acc += k[i]
        k[j] = 1 - acc
    for j in active:
        total = sum(k[i] for i in active if poset.geq[i, j])
        if total != 1:
            raise NonUniqueOrInconsistent(f"weight equation fails at j={j}")
    return MobiusWeights(k)


@dataclass(frozen=True)
class GActionOnI:
    """Permutation of stratum indices induced by each group element."""

    perms: np.ndarray  # (|G|, |I|)

    def orbit(self, i: int) -> tuple[int, ...]:
        return tuple(sorted(set(int(p[i]) for p in self.perms)))


def g_action(G: MatrixGroup, poset: StratPoset) -> GActionOnI:
    """Resolve g.i by matching g V_i against the lattice, then verify."""
    k = poset.size
    perms = np.empty((G.order, k), dtype=np.int64)
    for gi, g in enumerate(G.elements):
        ginv = g.conj().T
        for i, s in enumerate(poset.strata):
            target = g @ s.V.projector @ ginv
            hit = -1
            for j, t in enumerate(poset.strata):
                if groups._supnorm(t.V.projector - target) <= MATCH_TOL:
                    hit = j
                    break
            if hit < 0:
                raise OrbitResolutionFailure(
                    f"g V_i matches no stratum (g={gi}, i={i})")
            perms[gi, i] = hit

    # invariants: W_{g.i} = g W_i and A_{g.i} = g A_i g^{-1}
    for gi in range(G.order):
        g = G.elements[gi]
        ginv_idx = int(G.inv[gi])
        for i, s in enumerate(poset.strata):
            t = poset.strata[int(perms[gi, i])]
            wt = g @ s.W.projector @ g.conj().T
            if groups._supnorm(t.W.projector - wt) > MATCH_TOL:
                raise OrbitResolutionFailure("W_{g.i} != g W_i")
            conj = sorted(int(G.mul[G.mul[gi, a], ginv_idx]) for a in s.A)
            if conj != sorted(t.A):
                raise OrbitResolutionFailure("A_{g.i} != g A_i g^{-1}")
    return GActionOnI(perms)


# ---------------------------------------------------------------------------
# distance and radius functions


def quotient_distance(x: np.ndarray, V: Subspace, A: list[int],
                      G: MatrixGroup) -> float:
    """Distance in C^m/A from the class of x to the image of V.

    Equals min over a in A of |(I - P_V)(a x)|.
    """
    x = np.asarray(x, dtype=complex)
    best = math.inf
    for a in A:
        ax = G.elements[a] @ x
        best = min(best, float(np.linalg.norm(ax - V.projector @ ax)))
    return best


def mu(x: np.ndarray, poset: StratPoset, i: int, j: int) -> float:
    """mu_{i,j}: distance to the pull-back of stratum j in the chart of A_i."""
    s = poset.strata[i]
    return quotient_distance(x, poset.strata[j].V, list(s.A), poset.group)


def nu(x: np.ndarray, i: int, poset: StratPoset) -> float:
    """nu_i = 1 + min over j != 0 of mu_{i,j}; always >= 1."""
    vals = [mu(x, poset, i, j) for j in poset.singular_indices()]
    return 1.0 + (min(vals) if vals else math.inf)


def singular_distance_s(x: np.ndarray, poset: StratPoset,
                        G: MatrixGroup | None = None) -> float:
    """Distance in C^m/G from the class of x to the singular set."""
    G = G or poset.group
    x = np.asarray(x, dtype=complex)
    best = math.inf
    for i in poset.singular_indices():
        P = poset.strata[i].V.projector
        for g in G.elements:
            gx = g @ x
            best = min(best, float(np.linalg.norm(gx - P @ gx)))
    return best


@dataclass(frozen=True)
class RadiusPair:
    """Smooth surrogates (rho, sigma) for distance to 0 and to the singular set.

    rho = sqrt(r^2 + 1) + 1 sits in [r+1, r+2]; sigma = sqrt(s^2/4 + 1) + 1
    sits in [s/2+1, s+2]; both are >= 1 and rho >= sigma since s <= r.
    """

    poset: StratPoset

    def r(self, x: np.ndarray) -> float:
        return float(np.linalg.norm(np.asarray(x, dtype=complex)))

    def s(self, x: np.ndarray) -> float:
        val = singular_distance_s(x, self.poset)
        return self.r(x) if math.isinf(val) else val

    def rho(self, x: np.ndarray) -> float:
        r = self.r(x)
        return math.sqrt(r * r + 1.0) + 1.0

    def sigma(self, x: np.ndarray) -> float:
        s = self.s(x)
        return math.sqrt(s * s / 4.0 + 1.0) + 1.0

    def sandwich_ok(self, x: np.ndarray) -> bool:
        r, s = self.r(x), self.s(x)
        rho, sig = self.rho(x), self.sigma(x)
        return (r + 1.0 <= rho <= r + 2.0
                and 0.5 * s + 1.0 <= sig <= s + 2.0
                and rho >= sig)


def radius_pair(poset: StratPoset, G: MatrixGroup | None = None) -> RadiusPair:
    return RadiusPair(poset)


def near_equidistance(x: np.ndarray, poset: StratPoset, band: float = 1e-3) -> bool:
    """True if two distinct singular strata are nearly equidistant from x.

    The singular distance s is only piecewise smooth there, so gradient
    checks discard such samples.  Distances are minimized over the group
    orbit per stratum; only proper strata below the dense one and above
    the minimum are compared (nested strata share their minima).
    """
    x = np.asarray(x, dtype=complex)
    vals = []
    for i in poset.singular_indices():
        if i == poset.idx_infinity and poset.size > 2:
            continue  # contained in every other singular stratum
        P = poset.strata[i].V.projector
        best = math.inf
        for g in poset.group.elements:
            gx = g @ x
            best = min(best, float(np.linalg.norm(gx - P @ gx)))
        vals.append(best)
    vals.sort()
    return len(vals) >= 2 and (vals[1] - vals[0]) < band


def induced_sublattice(poset: StratPoset, i: int) -> tuple[list[int], list[Subspace], bool]:
    """Restriction data for stratum i: indices I' = {j : i >= j}, V'_j = V_j ∩ W_i.

    Returns (indices, subspaces, closed) where closed reports whether the
    induced family is itself closed under pairwise intersection.
    """
    idxs = [j for j in range(poset.size) if poset.geq[i, j]]
    W = poset.strata[i].W
    subs = [groups.intersect(poset.strata[j].V, W) for j in idxs]
    closed = True
    for a in subs:
        for b in subs:
            c = groups.intersect(a, b)
            if not any(c.same_as(s) for s in subs):
                closed = False
    return idxs, subs, closed


def poset_report(poset: StratPoset, weights: MobiusWeights,
                 action: GActionOnI) -> dict:
    """Stratification report with stable field names (see README)."""
    strata = []
    for s in poset.strata:
        strata.append({
            "index": s.index,
            "dim_V": s.dim_V,
            "dim_W": s.dim_W,
            "A_order": len(s.A),
            "N_order": len(s.N),
            "B_order": s.B.order,
            "d": s.d,
            "k": weights.k.get(s.index),
        })
    orbits = sorted({action.orbit(i) for i in range(poset.size)})
    return {
        "ambient_dim": poset.group.dim,
        "group_order": poset.group.order,
        "stratum_count": poset.size,
        "idx_zero": poset.idx_zero,
        "idx_infinity": poset.idx_infinity,
        "n": poset.n,
        "strata": strata,
        "geq": [[int(v) for v in row] for row in poset.geq],
        "orbits": [list(o) for o in orbits],
    }
