"""Cycles as glued pseudomanifolds and back.

A relative cycle expands into unit-coefficient simplex instances; matching
codimension-1 faces glue into an oriented pseudomanifold mapping to the pair
(psi).  Pushing the top cells forward and reading homology coordinates is the
inverse direction (phi).  Bounding chains glue into bordisms, and nullbordisms
are synthesized by integer linear solving.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from .simplicial import (
    Chain,
    Complex,
    Simplex,
    SimplicialPair,
    boundary,
    boundary_matrix,
    canonicalize,
    chain_basis,
    chain_to_vector,
    relative_reduce,
    unit_chain,
    vector_to_chain,
)
from .intlinalg import solve_integer
from .bmhomology import bm_homology


class DegenerateSimplex(ValueError):
    """An instance map with repeated target vertices."""


class NotACycle(ValueError):
    """Some interior face has nonzero signed multiplicity."""


class InconsistentPairing(ValueError):
    """A face pairing that does not describe a valid quotient."""


class NotClosedRelL(ValueError):
    """A pushforward that fails to be a relative cycle."""


class BoundaryMismatch(ValueError):
    """The bounding chain's boundary does not match c1 - c0 rel L."""


# ---------------------------------------------------------------------------
# instances


@dataclass(frozen=True)
class SimplexInstance:
    """One copy of the standard simplex, its corners sent to target vertices.

    The corner order is the orientation; repeated targets are refused (the
    maps stay linear embeddings).
    """

    id: int
    map: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(v) for v in self.map))
        if len(set(self.map)) != len(self.map):
            raise DegenerateSimplex("instance %d repeats vertices %r" % (self.id, self.map))

    @property
    def dim(self) -> int:
        return len(self.map) - 1

    def face_tuple(self, p: int) -> Tuple[int, ...]:
        """Ordered image of the p-th codimension-1 face (corner p dropped)."""
        return self.map[:p] + self.map[p + 1:]

    def canonical(self) -> Tuple[Simplex, int]:
        s, sign = canonicalize(self.map)
        return s, sign


def expand_to_unit(c: Chain) -> List[SimplexInstance]:
    """Unit-multiplicity instances of c; a negative coefficient becomes an odd
    corner swap, so the instance sum re-canonicalizes to c."""
    out: List[SimplexInstance] = []
    for s, a in c.items():
        verts = s.vertices
        if a < 0:
            if len(verts) < 2:
                raise ValueError("cannot absorb a negative sign into a point instance")
            verts = (verts[1], verts[0]) + verts[2:]
        for _ in range(abs(a)):
            out.append(SimplexInstance(len(out), verts))
    return out


def _perm_sign(perm: Tuple[int, ...]) -> int:
    sign = 1
    for a, b in combinations(range(len(perm)), 2):
        if perm[a] > perm[b]:
            sign = -sign
    return sign


def _tau(f1: Tuple[int, ...], f2: Tuple[int, ...]) -> Tuple[int, ...]:
    """Permutation t with f1[t[j]] = f2[j]; both tuples list the same set."""
    pos = {v: i for i, v in enumerate(f1)}
    return tuple(pos[v] for v in f2)


def _iota(p: int, j: int) -> int:
    # corner j of the p-th face, as a corner of the whole simplex
    return j if j < p else j + 1


def _face_data(inst: SimplexInstance, p: int) -> Tuple[Simplex, int]:
    """Canonical face simplex and its signed multiplicity (-1)^p * sort sign."""
    s, sign = canonicalize(inst.face_tuple(p))
    return s, (-1) ** p * sign


# ---------------------------------------------------------------------------
# face pairing


@dataclass(frozen=True)
class FacePairing:
    """Which faces glue to which, by what corner permutation.

    pairs is symmetric (both orders present); perms is keyed by ordered pair.
    unpaired_at_infinity collects faces mapping into L; free collects boundary
    faces that are unpaired without being at infinity (bordism interfaces) and
    is empty for anything pair_faces builds.
    """

    pairs: frozenset
    perms: Dict[tuple, Tuple[int, ...]] = field(repr=False)
    unpaired_at_infinity: frozenset = frozenset()
    free: frozenset = frozenset()

    def mate(self, i: int, p: int) -> Optional[Tuple[int, int]]:
        for a, b in self.pairs:
            if a == (i, p):
                return b
        return None


def pair_faces(instances, pair: SimplicialPair) -> FacePairing:
    """Match faces over the same geometric simplex in opposite orientation classes.

    Faces landing in L are exempt.  Buckets with unbalanced classes mean the
    instance sum was not a relative cycle.  Greedy matching in canonical
    order; the glued quotient may depend on the matching but its homology
    class never does.
    """
    instances = list(instances)
    k = instances[0].dim if instances else 0
    buckets: Dict[Simplex, Dict[int, list]] = {}
    infinity = []
    if k >= 1:
        for inst in instances:
            for p in range(k + 1):
                f, eps = _face_data(inst, p)
                if f in pair.l:
                    infinity.append((inst.id, p))
                else:
                    buckets.setdefault(f, {1: [], -1: []})[eps].append((inst.id, p))

    pairs = set()
    perms: Dict[tuple, Tuple[int, ...]] = {}
    by_id = {inst.id: inst for inst in instances}
    for f in sorted(buckets):
        plus = sorted(buckets[f][1])
        minus = sorted(buckets[f][-1])
        if len(plus) != len(minus):
            raise NotACycle("face %r has signed multiplicity %d"
                            % (f, len(plus) - len(minus)))
        for a, b in zip(plus, minus):
            f1 = by_id[a[0]].face_tuple(a[1])
            f2 = by_id[b[0]].face_tuple(b[1])
            t = _tau(f1, f2)
            pairs.add((a, b))
            pairs.add((b, a))
            perms[(a, b)] = t
            perms[(b, a)] = _tau(f2, f1)
    return FacePairing(frozenset(pairs), perms, frozenset(infinity))


# ---------------------------------------------------------------------------
# gluing


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


@dataclass(frozen=True)
class PseudoManifold:
    """Quotient of disjoint standard simplices by the face pairing.

    Cells are equivalence classes of (instance id, corner tuple) pairs;
    cell_of maps each such pair to its class id, classes lists the members of
    each class (sorted).  Orientations live on the instances' corner orders.
    """

    dimension: int
    instances: Tuple[SimplexInstance, ...]
    gluing: FacePairing
    cell_of: Dict[Tuple[int, Tuple[int, ...]], int] = field(repr=False, default=None)
    classes: Dict[int, tuple] = field(repr=False, default=None)

    def cells(self, d: int) -> list:
        return sorted(cid for cid, members in self.classes.items()
                      if len(members[0][1]) == d + 1)

    def cell_counts(self) -> Dict[int, int]:
        return {d: len(self.cells(d)) for d in range(self.dimension + 1)}

    def euler(self) -> int:
        return sum((-1) ** d * n for d, n in self.cell_counts().items())

    def face_class(self, i: int, p: int) -> int:
        corners = tuple(c for c in range(self.dimension + 1) if c != p)
        return self.cell_of[(i, corners)]

    def boundary_faces(self) -> list:
        """(i, p) faces with no partner: at infinity or free."""
        return sorted(self.gluing.unpaired_at_infinity | self.gluing.free)

    def is_empty(self) -> bool:
        return not self.instances


def _validate_pairing(instances, pairing: FacePairing, k: int):
    by_id = {inst.id: inst for inst in instances}
    seen: Dict[tuple, int] = {}
    for a, b in pairing.pairs:
        if a == b:
            raise InconsistentPairing("face %r paired with itself" % (a,))
        if (b, a) not in pairing.pairs:
            raise InconsistentPairing("pairing is not symmetric at %r" % (a,))
        seen[a] = seen.get(a, 0) + 1
        t = pairing.perms.get((a, b))
        if t is None or sorted(t) != list(range(k)):
            raise InconsistentPairing("missing or invalid permutation for %r" % ((a, b),))
        rev = pairing.perms.get((b, a))
        if rev is None or any(t[rev[j]] != j for j in range(k)):
            raise InconsistentPairing("permutations of %r are not mutually inverse" % ((a, b),))
        # glued faces must actually agree pointwise
        f1 = by_id[a[0]].face_tuple(a[1])
        f2 = by_id[b[0]].face_tuple(b[1])
        if any(f1[t[j]] != f2[j] for j in range(k)):
            raise InconsistentPairing("faces %r, %r do not agree under the permutation" % (a, b))
        if _perm_sign(t) != -(-1) ** (a[1] + b[1]):
            raise InconsistentPairing("orientation sign violated at %r" % ((a, b),))
    accounted = set(seen) | set(pairing.unpaired_at_infinity) | set(pairing.free)
    for key, n in seen.items():
        if n != 1:
            raise InconsistentPairing("face %r appears in several pairs" % (key,))
    for key in pairing.unpaired_at_infinity | pairing.free:
        if key in seen:
            raise InconsistentPairing("face %r both paired and unpaired" % (key,))
    for inst in instances:
        for p in range(k + 1):
            if k >= 1 and (inst.id, p) not in accounted:
                raise InconsistentPairing("face %r unaccounted for" % ((inst.id, p),))


def glue(instances, pairing: FacePairing, dimension: Optional[int] = None) -> PseudoManifold:
    """Assemble the quotient cell structure of the instances under the pairing."""
    instances = tuple(instances)
    if dimension is None:
        if not instances:
            raise ValueError("dimension required for an empty gluing")
        dimension = instances[0].dim
    k = dimension
    if any(inst.dim != k for inst in instances):
        raise InconsistentPairing("instances of mixed dimension")
    _validate_pairing(instances, pairing, k)

    uf = _UnionFind()
    for inst in instances:
        corners = range(k + 1)
        for size in range(1, k + 2):
            for S in combinations(corners, size):
                uf.add((inst.id, S))
    for (a, b) in pairing.pairs:
        t = pairing.perms[(a, b)]
        for size in range(1, k + 1):
            for J in combinations(range(k), size):
                s1 = tuple(sorted(_iota(a[1], t[j]) for j in J))
                s2 = tuple(sorted(_iota(b[1], j) for j in J))
                uf.union((a[0], s1), (b[0], s2))

    groups: Dict[tuple, list] = {}
    for node in uf.parent:
        groups.setdefault(uf.find(node), []).append(node)
    cell_of: Dict[tuple, int] = {}
    classes: Dict[int, tuple] = {}
    for cid, root in enumerate(sorted(groups, key=lambda r: (len(r[1]), min(groups[r])))):
        members = tuple(sorted(groups[root]))
        sizes = {len(S) for _, S in members}
        if len(sizes) != 1:
            raise InconsistentPairing("cells of different dimension identified")
        seen_inst: Dict[int, tuple] = {}
        for i, S in members:
            if i in seen_inst and seen_inst[i] != S:
                raise InconsistentPairing(
                    "two cells of instance %d identified with each other" % i)
            seen_inst[i] = S
        classes[cid] = members
        for m in members:
            cell_of[m] = cid
    return PseudoManifold(k, instances, pairing, cell_of, classes)


# ---------------------------------------------------------------------------
# pseudomanifold verification


@dataclass(frozen=True)
class PseudoManifoldReport:
    ok: bool
    interior_cells: int
    boundary_cells: int
    infinity_cells: int
    free_cells: int
    codim2_cells: int
    failures: Tuple[str, ...]


def check_pseudomanifold(m: PseudoManifold) -> PseudoManifoldReport:
    """Every interior codim-1 cell: two top cofaces in opposite induced
    orientation; every boundary cell: one.  Also counts the codim-2 skeleton
    the construction would remove."""
    k = m.dimension
    failures: List[str] = []
    interior = bndry = infinity = free = 0
    unpaired = set(m.gluing.unpaired_at_infinity)
    freeset = set(m.gluing.free)
    by_id = {inst.id: inst for inst in m.instances}
    paired = {a: b for a, b in m.gluing.pairs}
    if k >= 1:
        for cid in m.cells(k - 1):
            faces = []
            for i, S in m.classes[cid]:
                missing = [p for p in range(k + 1) if p not in S]
                if len(missing) == 1:
                    faces.append((i, missing[0]))
            if len(faces) == 1:
                f = faces[0]
                if f in unpaired:
                    infinity += 1
                elif f in freeset:
                    free += 1
                else:
                    failures.append("lone face %r neither paired nor boundary" % (f,))
                bndry += 1
            elif len(faces) == 2:
                a, b = faces
                if paired.get(a) != b:
                    failures.append("cofaces %r, %r identified without a pairing" % (a, b))
                    continue
                t = m.gluing.perms[(a, b)]
                f1 = by_id[a[0]].face_tuple(a[1])
                f2 = by_id[b[0]].face_tuple(b[1])
                if any(f1[t[j]] != f2[j] for j in range(k)):
                    failures.append("pairing at %r does not agree pointwise" % (a,))
                # opposite induced orientations <=> sign tau = -(-1)^(p1+p2)
                if _perm_sign(t) != -(-1) ** (a[1] + b[1]):
                    failures.append("induced orientations at %r not opposite" % (a,))
                interior += 1
            else:
                failures.append("codim-1 cell %d has %d top cofaces" % (cid, len(faces)))
    codim2 = sum(len(m.cells(d)) for d in range(0, max(k - 1, 0)))
    return PseudoManifoldReport(not failures, interior, bndry, infinity, free,
                                codim2, tuple(failures))


# ---------------------------------------------------------------------------
# psi and phi


@dataclass(frozen=True)
class CombPseudocycle:
    """A glued pseudomanifold mapping to the pair; the instance maps carry the map."""

    m: PseudoManifold
    target: SimplicialPair
    infinity_faces: frozenset

    def pushforward(self) -> Chain:
        """Image chain of the oriented top cells (degenerate images vanish)."""
        total = Chain(self.m.dimension, {})
        for inst in self.m.instances:
            total = total + unit_chain(inst.map)
        return total


def psi(c: Chain, pair: SimplicialPair) -> CombPseudocycle:
    """Expand a relative cycle to unit instances, pair the faces, and glue."""
    instances = expand_to_unit(c)
    pairing = pair_faces(instances, pair)
    m = glue(instances, pairing, c.degree)
    return CombPseudocycle(m, pair, pairing.unpaired_at_infinity)


def phi(f: CombPseudocycle) -> tuple:
    """Homology coordinates of the pushforward cycle in bm_homology(target)."""
    chain = f.pushforward()
    reduced = relative_reduce(chain, f.target)
    if not relative_reduce(boundary(reduced), f.target).is_zero():
        raise NotClosedRelL("pushforward of the pseudomanifold is not a cycle rel L")
    return bm_homology(f.target).class_coordinates(reduced)


def roundtrip_check(c: Chain, pair: SimplicialPair) -> bool:
    """phi(psi(c)) and c name the same homology class."""
    return phi(psi(c, pair)) == bm_homology(pair).class_coordinates(
        relative_reduce(c, pair))


# ---------------------------------------------------------------------------
# bordisms


@dataclass(frozen=True)
class Bordism:
    """A (k+1)-pseudomanifold whose free boundary is m1 (sign +) minus m0 (sign -).

    match0/match1 send each free boundary face (i, p) of w to the instance id
    of m0/m1 it is identified with.
    """

    w: PseudoManifold
    target: SimplicialPair
    m0: PseudoManifold
    m1: PseudoManifold
    match0: Dict[Tuple[int, int], int]
    match1: Dict[Tuple[int, int], int]


def glue_equivalence(tilde_c: Chain, c0: Chain, c1: Chain,
                     pair: SimplicialPair) -> Bordism:
    """Glue the bounding chain's instances; leftover faces become the two
    boundaries, identified with the instances of psi(c0) and psi(c1).

    A boundary face joins boundary1 when its orientation class matches the
    instance's sign, boundary0 when it opposes it; this is exactly the
    bordism sign convention, enforced rather than chosen.
    """
    if not relative_reduce(boundary(tilde_c) - (c1 - c0), pair).is_zero():
        raise BoundaryMismatch("boundary of the chain is not c1 - c0 rel L")
    k1 = tilde_c.degree
    k = k1 - 1
    side0, side1 = psi(c0, pair), psi(c1, pair)
    wins = expand_to_unit(tilde_c)

    buckets: Dict[Simplex, Dict[int, list]] = {}
    infinity = []
    for inst in wins:
        for p in range(k1 + 1):
            f, eps = _face_data(inst, p)
            if f in pair.l:
                infinity.append((inst.id, p))
            else:
                buckets.setdefault(f, {1: [], -1: []})[eps].append((inst.id, p))

    demands: Dict[Simplex, list] = {}   # f -> [(r, instance id, wanted eps)]
    for r, side in ((0, side0), (1, side1)):
        for inst in side.m.instances:
            f, sig = inst.canonical()
            wanted = sig if r == 1 else -sig
            demands.setdefault(f, []).append((r, inst.id, wanted))

    pairs = set()
    perms: Dict[tuple, Tuple[int, ...]] = {}
    match0: Dict[Tuple[int, int], int] = {}
    match1: Dict[Tuple[int, int], int] = {}
    by_id = {inst.id: inst for inst in wins}
    for f in sorted(set(buckets) | set(demands)):
        bucket = buckets.get(f, {1: [], -1: []})
        plus = sorted(bucket[1])
        minus = sorted(bucket[-1])
        for r, j, wanted in sorted(demands.get(f, [])):
            pool = plus if wanted > 0 else minus
            if not pool:
                raise BoundaryMismatch(
                    "no face left over %r to identify with boundary%d instance %d"
                    % (f, r, j))
            face = pool.pop(0)
            (match1 if r == 1 else match0)[face] = j
        if len(plus) != len(minus):
            raise NotACycle("face %r has leftover signed multiplicity %d"
                            % (f, len(plus) - len(minus)))
        for a, b in zip(plus, minus):
            f1 = by_id[a[0]].face_tuple(a[1])
            f2 = by_id[b[0]].face_tuple(b[1])
            pairs.add((a, b))
            pairs.add((b, a))
            perms[(a, b)] = _tau(f1, f2)
            perms[(b, a)] = _tau(f2, f1)

    freefaces = frozenset(match0) | frozenset(match1)
    pairing = FacePairing(frozenset(pairs), perms, frozenset(infinity), freefaces)
    w = glue(wins, pairing, k1)
    return Bordism(w, pair, side0.m, side1.m, match0, match1)


@dataclass(frozen=True)
class BordismReport:
    ok: bool
    boundary0_cells: int
    boundary1_cells: int
    interior_cells: int
    failures: Tuple[str, ...]


def check_bordism(b: Bordism) -> BordismReport:
    """Re-verify the boundary partition and the sign convention from scratch.

    Each free face must belong to exactly one side; the permutation carrying
    the face onto its matched instance must have sign -(-1)^(r + p).
    """
    failures: List[str] = []
    base = check_pseudomanifold(b.w)
    failures.extend(base.failures)
    freefaces = set(b.w.gluing.free)
    claimed = set(b.match0) | set(b.match1)
    if set(b.match0) & set(b.match1):
        failures.append("faces %r claimed by both boundaries"
                        % (sorted(set(b.match0) & set(b.match1)),))
    for face in sorted(freefaces ^ claimed):
        failures.append("face %r not in exactly one boundary" % (face,))
    by_id = {inst.id: inst for inst in b.w.instances}
    for r, matches, side in ((0, b.match0, b.m0), (1, b.match1, b.m1)):
        inst_by_id = {inst.id: inst for inst in side.instances}
        if sorted(matches.values()) != sorted(inst_by_id):
            failures.append("boundary%d instances not matched bijectively" % r)
        for (i, p), j in sorted(matches.items()):
            face = by_id[i].face_tuple(p)
            target = inst_by_id[j].map
            if set(face) != set(target):
                failures.append("face %r does not cover boundary%d instance %d"
                                % ((i, p), r, j))
                continue
            t = _tau(face, target)
            if _perm_sign(t) != -(-1) ** (r + p):
                failures.append("sign convention violated at face %r (boundary%d)"
                                % ((i, p), r))
    return BordismReport(not failures, len(b.match0), len(b.match1),
                         base.interior_cells, tuple(failures))


def nullbordism(f: CombPseudocycle) -> Optional[Bordism]:
    """A bordism from the empty pseudocycle to f, when f's class vanishes.

    The bounding chain comes from one integer solve against the relative
    boundary matrix; a nonzero class returns None.
    """
    coords = phi(f)
    if any(x != 0 for x in coords):
        return None
    pair = f.target
    k = f.m.dimension
    cycle = relative_reduce(f.pushforward(), pair)
    vec = chain_to_vector(cycle, chain_basis(pair, k))
    sol = solve_integer(boundary_matrix(pair, k + 1), vec)
    if sol is None:
        raise NotClosedRelL("class is zero but no integer bounding chain exists")
    tilde_c = vector_to_chain(sol, chain_basis(pair, k + 1), k + 1)
    return glue_equivalence(tilde_c, Chain(k, {}), cycle, pair)


# ---------------------------------------------------------------------------
# certificates


def pm_to_json(m: PseudoManifold) -> dict:
    """Deterministic certificate: instances, ordered pairs with permutations
    and signs, and the boundary partition."""
    pairs = []
    for a, b in sorted(m.gluing.pairs):
        t = m.gluing.perms[(a, b)]
        pairs.append({"a": list(a), "b": list(b), "perm": list(t),
                      "sign": _perm_sign(t)})
    return {
        "dimension": m.dimension,
        "instances": [list(inst.map) for inst in m.instances],
        "pairs": pairs,
        "infinity": [list(x) for x in sorted(m.gluing.unpaired_at_infinity)],
        "free": [list(x) for x in sorted(m.gluing.free)],
        "cells": {str(d): len(m.cells(d)) for d in range(m.dimension + 1)},
    }


def bordism_to_json(b: Bordism) -> dict:
    return {
        "w": pm_to_json(b.w),
        "boundary0": {
            "sign": -1,
            "pseudomanifold": pm_to_json(b.m0),
            "matches": [[i, p, j] for (i, p), j in sorted(b.match0.items())],
        },
        "boundary1": {
            "sign": 1,
            "pseudomanifold": pm_to_json(b.m1),
            "matches": [[i, p, j] for (i, p), j in sorted(b.match1.items())],
        },
    }
