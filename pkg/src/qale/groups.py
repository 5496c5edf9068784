"""Finite subgroups of U(m): closure, fixed subspaces, stabilizers.

Elements are dense complex matrices deduplicated on a 1e-6 rounding grid.
All target groups have root-of-unity entries and tiny orders, so double
precision closure is robust; unitarity is verified to 1e-10 and kernel
ranks use a fixed 1e-8 singular value cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    NonUnitaryGenerator,
    NonUniqueOrInconsistent,
    NotNormal,
    OrderCapExceeded,
)

UNITARITY_TOL = 1e-10
RANK_TOL = 1e-8
DEDUP_GRID = 1e-6
MATCH_TOL = 1e-8


def _supnorm(mat: np.ndarray) -> float:
    return float(np.max(np.abs(mat))) if mat.size else 0.0


def is_unitary(mat: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    m = mat.shape[0]
    return _supnorm(mat.conj().T @ mat - np.eye(m)) <= tol


def canonical_key(mat: np.ndarray) -> bytes:
    """Hashable key from entries rounded to the 1e-6 grid."""
    re = np.round(mat.real / DEDUP_GRID).astype(np.int64)
    im = np.round(mat.imag / DEDUP_GRID).astype(np.int64)
    return re.tobytes() + im.tobytes()


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of C^m with an orthonormal basis and its projector."""

    ambient_dim: int
    basis: np.ndarray       # (m, d), orthonormal columns
    projector: np.ndarray   # (m, m), Hermitian idempotent

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @staticmethod
    def from_basis(basis: np.ndarray) -> "Subspace":
        m = basis.shape[0]
        if basis.shape[1] == 0:
            return Subspace(m, basis.reshape(m, 0), np.zeros((m, m), dtype=complex))
        q, _ = np.linalg.qr(basis)
        q = q[:, : basis.shape[1]]
        return Subspace(m, q, q @ q.conj().T)

    @staticmethod
    def full(m: int) -> "Subspace":
        return Subspace(m, np.eye(m, dtype=complex), np.eye(m, dtype=complex))

    @staticmethod
    def zero(m: int) -> "Subspace":
        return Subspace(m, np.zeros((m, 0), dtype=complex), np.zeros((m, m), dtype=complex))

    def contains(self, other: "Subspace", tol: float = MATCH_TOL) -> bool:
        """True if other is a subspace of self (P_self P_other = P_other)."""
        return _supnorm(self.projector @ other.projector - other.projector) <= tol

    def same_as(self, other: "Subspace", tol: float = MATCH_TOL) -> bool:
        return _supnorm(self.projector - other.projector) <= tol

    def orthocomplement(self) -> "Subspace":
        m = self.ambient_dim
        vals, vecs = np.linalg.eigh(self.projector)
        keep = vals < 0.5
        basis = vecs[:, keep]
        return Subspace(m, basis, basis @ basis.conj().T)

    def distance(self, x: np.ndarray) -> float:
        """Euclidean distance from point x to the subspace."""
        return float(np.linalg.norm(x - self.projector @ x))


@dataclass
class MatrixGroup:
    """Finite subgroup of U(m) as a closed element list with a mul table."""

    dim: int
    elements: list[np.ndarray]
    mul: np.ndarray              # (n, n) index table
    inv: np.ndarray              # (n,) index table
    id_index: int
    generator_indices: list[int]
    keys: list[bytes] = field(repr=False, default_factory=list)

    @property
    def order(self) -> int:
        return len(self.elements)

    def indices(self) -> range:
        return range(self.order)

    def element_index(self, mat: np.ndarray) -> int:
        key = canonical_key(mat)
        try:
            return self.keys.index(key)
        except ValueError:
            for i, e in enumerate(self.elements):
                if _supnorm(e - mat) <= MATCH_TOL:
                    return i
            raise KeyError("matrix is not an element of the group") from None

    def is_subgroup(self, idxs: list[int]) -> bool:
        s = set(idxs)
        if self.id_index not in s:
            return False
        for a in idxs:
            if self.inv[a] not in s:
                return False
            for b in idxs:
                if self.mul[a, b] not in s:
                    return False
        return True


def close_group(generators: list[np.ndarray], max_order: int = 10_000,
                dim: int | None = None) -> MatrixGroup:
    """Smallest closed subgroup of U(m) containing the generators.

    Elements are ordered deterministically by canonical key.  Raises
    NonUnitaryGenerator, DimensionMismatch or OrderCapExceeded.
    """
    if max_order < 1:
        raise OrderCapExceeded("max_order must be >= 1")
    if not generators:
        if dim is None:
            raise DimensionMismatch("empty generator list needs an explicit dim")
        m = dim
    else:
        m = generators[0].shape[0]
    gens = []
    for g in generators:
        g = np.asarray(g, dtype=complex)
        if g.shape != (m, m):
            raise DimensionMismatch(f"generator shape {g.shape} != ({m}, {m})")
        if not is_unitary(g):
            raise NonUnitaryGenerator(
                f"generator fails unitarity at tolerance {UNITARITY_TOL}")
        gens.append(g)

    ident = np.eye(m, dtype=complex)
    seen = {canonical_key(ident): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                prod = g @ a
                key = canonical_key(prod)
                if key not in seen:
                    if len(seen) >= max_order:
                        raise OrderCapExceeded(
                            f"closure exceeded max_order={max_order}")
                    seen[key] = prod
                    nxt.append(prod)
        frontier = nxt

    keys = sorted(seen)
    elements = [seen[k] for k in keys]
    n = len(elements)
    key_index = {k: i for i, k in enumerate(keys)}

    mul = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            k = canonical_key(a @ b)
            if k not in key_index:
                raise OrderCapExceeded("product escaped the closed set")
            mul[i, j] = key_index[k]
    id_index = key_index[canonical_key(ident)]
    inv = np.empty(n, dtype=np.int64)
    for i in range(n):
        (hits,) = np.nonzero(mul[i] == id_index)
        inv[i] = hits[0]

    gen_idx = [key_index[canonical_key(g)] for g in gens]
    return MatrixGroup(m, elements, mul, inv, id_index, gen_idx, keys)


def element_fixed_space(g: np.ndarray) -> Subspace:
    """Orthonormal basis of ker(g - I) = Fix(g)."""
    g = np.asarray(g, dtype=complex)
    if not is_unitary(g):
        raise NonUnitaryGenerator("fixed space defined for unitary matrices")
    m = g.shape[0]
    _, s, vh = np.linalg.svd(g - np.eye(m))
    null_mask = s <= RANK_TOL
    basis = vh[null_mask].conj().T
    return Subspace(m, basis, basis @ basis.conj().T)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection of two subspaces via the kernel of (I-P_a)+(I-P_b)."""
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("subspaces live in different ambient spaces")
    m = a.ambient_dim
    op = 2 * np.eye(m) - a.projector - b.projector
    vals, vecs = np.linalg.eigh(op)
    keep = vals <= RANK_TOL * 10
    basis = vecs[:, keep]
    return Subspace(m, basis, basis @ basis.conj().T)


def fix_of_subset(elements: list[np.ndarray]) -> Subspace:
    """Fix(A) = intersection of Fix(a) over the given elements."""
    if not elements:
        raise DimensionMismatch("fix_of_subset needs at least one element")
    m = elements[0].shape[0]
    cur = Subspace.full(m)
    for g in elements:
        if g.shape != (m, m):
            raise DimensionMismatch("elements of mixed dimension")
        cur = intersect(cur, element_fixed_space(g))
    return cur


def centralizer_of_subspace(G: MatrixGroup, V: Subspace) -> list[int]:
    """Indices of C(V) = {g : g v = v for all v in V}."""
    if V.ambient_dim != G.dim:
        raise DimensionMismatch("subspace dimension differs from group dimension")
    ident = np.eye(G.dim)
    out = [i for i, g in enumerate(G.elements)
           if _supnorm((g - ident) @ V.projector) <= MATCH_TOL]
    if not G.is_subgroup(out):
        raise NonUniqueOrInconsistent("centralizer is not closed in the mul table")
    return out


def normalizer_of_subspace(G: MatrixGroup, V: Subspace) -> list[int]:
    """Indices of N(V) = {g : g V = V}.

    A unitary g preserves V exactly when it commutes with the projector.
    """
    if V.ambient_dim != G.dim:
        raise DimensionMismatch("subspace dimension differs from group dimension")
    P = V.projector
    out = [i for i, g in enumerate(G.elements)
           if _supnorm(g @ P - P @ g) <= MATCH_TOL]
    if not G.is_subgroup(out):
        raise NonUniqueOrInconsistent("normalizer is not closed in the mul table")
    return out


@dataclass(frozen=True)
class CosetStructure:
    """Quotient N/A as coset representatives with a multiplication table."""

    representatives: tuple[int, ...]
    mul: np.ndarray
    coset_of: dict[int, int]

    @property
    def order(self) -> int:
        return len(self.representatives)


def quotient_group(N: list[int], A: list[int], G: MatrixGroup) -> CosetStructure:
    """Cosets of the normal subgroup A inside N, with induced multiplication."""
    aset = set(A)
    nset = set(N)
    if not aset <= nset:
        raise NotNormal("A is not contained in N")
    for nidx in N:
        ninv = G.inv[nidx]
        for a in A:
            if G.mul[G.mul[nidx, a], ninv] not in aset:
                raise NotNormal("A is not normal in N")

    coset_of: dict[int, int] = {}
    reps: list[int] = []
    for nidx in sorted(N):
        if nidx in coset_of:
            continue
        rep_id = len(reps)
        reps.append(nidx)
        for a in A:
            coset_of[int(G.mul[nidx, a])] = rep_id
    k = len(reps)
    if k * len(A) != len(N):
        raise NonUniqueOrInconsistent("coset partition does not tile N")
    mul = np.empty((k, k), dtype=np.int64)
    for i, r in enumerate(reps):
        for j, s in enumerate(reps):
            mul[i, j] = coset_of[int(G.mul[r, s])]
    return CosetStructure(tuple(reps), mul, coset_of)


def subgroup_enumeration(G: MatrixGroup) -> list[frozenset[int]]:
    """Every subgroup of G (as index sets), for |G| <= 64.

    Brute force: close the set of cyclic subgroups under pairwise joins.
    Intended as an independent oracle for the fixed-subspace lattice.
    """
    if G.order > 64:
        raise OrderCapExceeded("subgroup enumeration limited to |G| <= 64")

    def closure(seed: set[int]) -> frozenset[int]:
        cur = set(seed)
        cur.add(G.id_index)
        frontier = list(cur)
        while frontier:
            nxt = []
            for a in frontier:
                for b in list(cur):
                    for c in (int(G.mul[a, b]), int(G.mul[b, a])):
                        if c not in cur:
                            cur.add(c)
                            nxt.append(c)
                ainv = int(G.inv[a])
                if ainv not in cur:
                    cur.add(ainv)
                    nxt.append(ainv)
            frontier = nxt
        return frozenset(cur)

    cyclic = {closure({i}) for i in G.indices()}
    subgroups = set(cyclic)
    subgroups.add(frozenset({G.id_index}))
    grew = True
    while grew:
        grew = False
        for h in list(subgroups):
            for c in cyclic:
                if c <= h:
                    continue
                j = closure(set(h) | set(c))
                if j not in subgroups:
                    subgroups.add(j)
                    grew = True
    return sorted(subgroups, key=lambda s: (len(s), sorted(s)))
