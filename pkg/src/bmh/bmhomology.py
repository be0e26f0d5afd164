"""Homology of simplicial pairs and the verification harnesses built on it.

A pair (K, L) stands in for the open space |K| - |L|; everything here is
relative homology of the pair over the integers, plus the structures that
make the duality story checkable: fundamental cycles, cap products,
complement-complex cohomology, Mayer-Vietoris exactness, and the vanishing
of star neighborhoods.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Optional, Tuple

from .intlinalg import (
    AbelianGroup,
    HomologyData,
    IntMatrix,
    Presented,
    coordinate_kernel,
    group_iso_check,
    homology_group,
    subgroup_contains,
)
from .simplicial import (
    Chain,
    Cochain,
    Complex,
    Simplex,
    SimplexNotInComplex,
    SimplicialPair,
    barycentric_subdivision,
    boundary,
    boundary_matrix,
    chain_basis,
    chain_to_vector,
    closed_star,
    complement_complex,
    is_full,
    relative_reduce,
    subdivide_pair,
    vector_to_chain,
)


class NonOrientable(ValueError):
    """Orientation propagation forced both signs on some top simplex."""


class NotPseudoManifold(ValueError):
    """An interior codimension-1 face without exactly two top cofaces."""


class SimplexAtInfinity(KeyError):
    """Local data requested at a simplex of L, which the pair treats as infinity."""


class NotCover(ValueError):
    """The two subcomplexes do not cover the ambient complex."""


# ---------------------------------------------------------------------------
# homology of a pair


@dataclass(frozen=True)
class HomologyResult:
    """Homology of (K, L) in every degree, with chain representatives.

    representatives[d] lists free generators first, then one generator per
    torsion factor, matching groups[d].torsion order.
    """

    pair: SimplicialPair
    groups: Dict[int, AbelianGroup]
    representatives: Dict[int, Tuple[Chain, ...]]
    _data: Dict[int, HomologyData] = field(repr=False, default=None)
    _bases: Dict[int, list] = field(repr=False, default=None)

    def group(self, d: int) -> AbelianGroup:
        return self.groups.get(d, AbelianGroup(0))

    def reps(self, d: int) -> tuple:
        return self.representatives.get(d, ())

    def class_coordinates(self, c: Chain) -> tuple:
        """Coordinates of a relative cycle's class: free part exact, torsion mod factor."""
        reduced = relative_reduce(c, self.pair)
        if c.degree not in self._data:
            if reduced.is_zero():
                return ()
            raise ValueError("chain of degree %d does not live on the pair" % c.degree)
        v = chain_to_vector(reduced, self._bases[c.degree])
        return self._data[c.degree].class_coordinates(v)

    def is_zero_class(self, c: Chain) -> bool:
        return all(x == 0 for x in self.class_coordinates(c))

    def __str__(self):
        top = max(self.groups, default=-1)
        return ", ".join("H_%d = %s" % (d, self.group(d)) for d in range(top + 1))


@lru_cache(maxsize=None)
def bm_homology(pair: SimplicialPair) -> HomologyResult:
    """Relative homology of the pair in all degrees 0..dim K."""
    groups: Dict[int, AbelianGroup] = {}
    reps: Dict[int, Tuple[Chain, ...]] = {}
    data: Dict[int, HomologyData] = {}
    bases: Dict[int, list] = {}
    for d in range(0, pair.k.dim + 1):
        h = homology_group(boundary_matrix(pair, d), boundary_matrix(pair, d + 1))
        basis = chain_basis(pair, d)
        groups[d] = h.group
        reps[d] = tuple(vector_to_chain(v, basis, d) for v in h.representatives)
        data[d] = h
        bases[d] = basis
    return HomologyResult(pair, groups, reps, data, bases)


def absolute_homology(k: Complex) -> HomologyResult:
    return bm_homology(SimplicialPair.closed(k))


# ---------------------------------------------------------------------------
# fundamental cycles


@dataclass(frozen=True)
class FundamentalClassResult:
    """A +-1 relative cycle on the interior top simplices, plus its sign labels.

    orientation[s] is the propagated sign of s against the reference
    (increasing-vertex) order; it always equals the cycle coefficient.
    """

    cycle: Chain
    orientation: Dict[Simplex, int]

    def oriented_vertices(self, s: Simplex) -> tuple:
        """A vertex order of s realizing its propagated orientation."""
        sign = self.orientation[s]
        if sign > 0 or len(s.vertices) < 2:
            return s.vertices
        w = list(s.vertices)
        w[0], w[1] = w[1], w[0]
        return tuple(w)


def fundamental_cycle(pair: SimplicialPair,
                      seed: Optional[Tuple[Simplex, int]] = None) -> FundamentalClassResult:
    """Coherently orient the interior top simplices, spreading out from the seed.

    Across an interior face appearing as face p of s and face p' of s',
    cancellation in the relative boundary forces
    sign(s') = -sign(s) * (-1)**(p + p').  Breadth-first from the seed; the
    result is independent of the order, the traversal only fixes intermediate
    data.
    """
    n = pair.k.dim
    tops = pair.interior(n)
    if not tops:
        raise ValueError("pair has no top simplices outside L")

    cofaces: Dict[Simplex, list] = {}
    for s in tops:
        for p in range(n + 1):
            f = s.face(p)
            if f not in pair.l:
                cofaces.setdefault(f, []).append((s, p))
    if n >= 1:
        for f in pair.k.of_dim(n - 1):
            if f in pair.l:
                continue
            found = len(cofaces.get(f, ()))
            if found != 2:
                raise NotPseudoManifold(
                    "interior face %r has %d top cofaces, want 2" % (f, found))

    if seed is None:
        seed = (tops[0], 1)
    s0, e0 = seed
    if s0 not in set(tops):
        raise SimplexNotInComplex(s0)
    if e0 not in (1, -1):
        raise ValueError("seed orientation must be +1 or -1")

    sign = {s0: e0}
    queue = deque([s0])
    while queue:
        s = queue.popleft()
        for p in range(n + 1):
            f = s.face(p)
            if f in pair.l:
                continue
            for t, p2 in cofaces[f]:
                if t == s:
                    continue
                forced = -sign[s] * (-1) ** (p + p2)
                if t in sign:
                    if sign[t] != forced:
                        raise NonOrientable("conflicting signs forced on %r" % (t,))
                else:
                    sign[t] = forced
                    queue.append(t)
    if len(sign) != len(tops):
        raise ValueError("interior top simplices are not connected through "
                         "codimension-1 faces")
    cycle = Chain(n, dict(sign))
    if not relative_reduce(boundary(cycle), pair).is_zero():
        raise NotPseudoManifold("propagated top simplices do not close up rel L")
    return FundamentalClassResult(cycle, dict(sign))


def local_restriction(c: Chain, s: Simplex,
                      pair: Optional[SimplicialPair] = None) -> int:
    """Coefficient of the top simplex s in c, against s's reference orientation.

    With a pair supplied, asking at a simplex of L is refused: that point lies
    at infinity and carries no local class.
    """
    if pair is not None:
        if s in pair.l:
            raise SimplexAtInfinity(s)
        if s not in pair.k:
            raise SimplexNotInComplex(s)
    if s.dim != c.degree:
        raise ValueError("simplex dimension %d, chain degree %d" % (s.dim, c.degree))
    return c.get(s)


# ---------------------------------------------------------------------------
# cap product


def cap_product(a: Cochain, c: Chain) -> Chain:
    """Front-face/back-face cap: a eats the back face, the front face survives.

    For a of degree q and c of degree p+q this lands in degree p; a degree
    mismatch (q too large) gives the zero chain, keeping the boundary identity
    total.
    """
    p = c.degree - a.degree
    if p < 0:
        return Chain(p, {})
    out: Dict[Simplex, int] = {}
    for s, m in c.coeffs.items():
        v = s.vertices
        val = a(Simplex(v[p:]))
        if val == 0:
            continue
        front = Simplex(v[:p + 1])
        out[front] = out.get(front, 0) + m * val
    return Chain(p, out)


# ---------------------------------------------------------------------------
# duality report


@dataclass(frozen=True)
class PDReport:
    """Degree-by-degree comparison of complement cohomology with pair homology.

    For each q: H^q of the complement complex against H_{n-q}(K, L).  In the
    closed case (L empty) cap_matrices[q] is the coordinate matrix of capping
    cohomology representatives with the fundamental cycle, and cap_iso[q] says
    whether that map is an isomorphism.
    """

    n: int
    subdivided: bool
    closed: bool
    cohomology: Dict[int, AbelianGroup]
    homology: Dict[int, AbelianGroup]
    matches: Dict[int, bool]
    cap_matrices: Dict[int, IntMatrix]
    cap_iso: Dict[int, bool]

    @property
    def ok(self) -> bool:
        return all(self.matches.values()) and all(self.cap_iso.values())


def _cochain_homology(k: Complex) -> Dict[int, HomologyData]:
    """H^q of a complex, coordinates in its canonical q-simplex bases."""
    pair = SimplicialPair.closed(k)
    out = {}
    for q in range(0, k.dim + 1):
        # the coboundary is the transposed boundary: (da)(s) = a(ds)
        up = boundary_matrix(pair, q + 1).transpose()
        down = boundary_matrix(pair, q).transpose()
        out[q] = homology_group(up, down)
    return out


def pd_check(pair: SimplicialPair) -> PDReport:
    """Compare H^q of the complement complex with H_{n-q}(K, L) in every degree.

    The complement complex needs L full in K; if it is not, the pair is
    subdivided once.  With L empty the comparison is upgraded to the chain
    level: capping with the fundamental cycle must carry cohomology generators
    to a generating set.
    """
    work, subdivided = pair, False
    if not is_full(pair):
        work, _ = subdivide_pair(pair)
        subdivided = True
    n = work.k.dim
    fc = fundamental_cycle(work)
    comp = complement_complex(work)
    coh = _cochain_homology(comp)
    hom = bm_homology(work)
    closed = not work.l.simplices

    cohomology: Dict[int, AbelianGroup] = {}
    homology: Dict[int, AbelianGroup] = {}
    matches: Dict[int, bool] = {}
    cap_matrices: Dict[int, IntMatrix] = {}
    cap_iso: Dict[int, bool] = {}
    for q in range(0, n + 1):
        hq = coh.get(q)
        cg = hq.group if hq is not None else AbelianGroup(0)
        hg = hom.group(n - q)
        cohomology[q] = cg
        homology[q] = hg
        matches[q] = (cg.rank, cg.torsion) == (hg.rank, hg.torsion)
        if closed:
            cols = []
            if hq is not None:
                basis = comp.of_dim(q)
                for rep in hq.representatives:
                    alpha = Cochain(q, dict(zip(basis, rep)), comp)
                    cols.append(hom.class_coordinates(cap_product(alpha, fc.cycle)))
            tdim = hg.rank + len(hg.torsion)
            cap_matrices[q] = IntMatrix(
                tdim, len(cols), [col[i] for i in range(tdim) for col in cols])
            cap_iso[q] = group_iso_check(cg, cols, hg)
    return PDReport(n, subdivided, closed, cohomology, homology, matches,
                    cap_matrices, cap_iso)


# ---------------------------------------------------------------------------
# Mayer-Vietoris


@dataclass(frozen=True)
class MVReport:
    """Exactness record for ... -> H_d(W) -> H_d(U)+H_d(V) -> H_d(K) -> H_{d-1}(W) -> ...

    W = U cap V.  Direct-sum coordinates pack all free parts first (U then V),
    then all torsion parts (U then V).  exact_at is keyed by (degree, node)
    with node one of "intersection", "sum", "total".
    """

    degrees: tuple
    w_groups: Dict[int, AbelianGroup]
    sum_groups: Dict[int, Presented]
    k_groups: Dict[int, AbelianGroup]
    alpha: Dict[int, IntMatrix]
    beta: Dict[int, IntMatrix]
    delta: Dict[int, IntMatrix]
    exact_at: Dict[Tuple[int, str], bool]

    @property
    def ok(self) -> bool:
        return all(self.exact_at.values())


def _pack_sum(cu, cv, gu: AbelianGroup, gv: AbelianGroup) -> tuple:
    # direct-sum coordinates: free(U), free(V), torsion(U), torsion(V)
    return (tuple(cu[:gu.rank]) + tuple(cv[:gv.rank])
            + tuple(cu[gu.rank:]) + tuple(cv[gv.rank:]))


def _sum_generators(hu: HomologyResult, hv: HomologyResult, d: int) -> list:
    """Generators of H_d(U)+H_d(V) in packed order, as (chain, side) pairs."""
    gu, gv = hu.group(d), hv.group(d)
    ru, rv = hu.reps(d), hv.reps(d)
    gens = [(ru[i], "u") for i in range(gu.rank)]
    gens += [(rv[i], "v") for i in range(gv.rank)]
    gens += [(ru[gu.rank + i], "u") for i in range(len(gu.torsion))]
    gens += [(rv[gv.rank + i], "v") for i in range(len(gv.torsion))]
    return gens


def _cols_to_matrix(cols, rows: int) -> IntMatrix:
    return IntMatrix(rows, len(cols), [col[i] for i in range(rows) for col in cols])


def _apply_cols(cols, vec, rows: int) -> list:
    out = [0] * rows
    for c, x in zip(cols, vec):
        for i in range(rows):
            out[i] += c[i] * x
    return out


def _im_eq_ker(mid_group, in_cols, out_cols, end_group) -> bool:
    """im(incoming) = ker(outgoing) at the middle group, torsion-aware."""
    end_dim = end_group.rank + len(end_group.torsion)
    for g in in_cols:
        if not subgroup_contains(end_group, [], _apply_cols(out_cols, g, end_dim)):
            return False                       # composite is not even zero
    for g in coordinate_kernel(mid_group, out_cols, end_group):
        if not subgroup_contains(mid_group, in_cols, g):
            return False
    return True


def _split_u_first(z: Chain, u: Complex) -> Chain:
    return Chain(z.degree, {s: a for s, a in z.coeffs.items() if s in u})


def mv_check(k: Complex, u: Complex, v: Complex, degrees) -> MVReport:
    """Verify exactness of the U, V covering sequence in the given degrees.

    The connecting map takes a cycle z of K, splits it U-first (every simplex
    of U goes to the U part, the rest to V), and reads off the class of the
    U part's boundary in W = U cap V.
    """
    if not (u.simplices <= k.simplices and v.simplices <= k.simplices):
        raise NotCover("U, V are not subcomplexes of K")
    if (u.simplices | v.simplices) != k.simplices:
        raise NotCover("U and V do not cover K")
    w = Complex(u.simplices & v.simplices)

    degs = sorted(set(int(d) for d in degrees))
    if not degs:
        raise ValueError("no degrees requested")
    if degs[0] < 0:
        raise ValueError("degrees must be nonnegative")

    hw, hu, hv, hk = (absolute_homology(x) for x in (w, u, v, k))

    def dim_of(g) -> int:
        return g.rank + len(g.torsion)

    def sum_group(d: int) -> Presented:
        gu, gv = hu.group(d), hv.group(d)
        return Presented(gu.rank + gv.rank, gu.torsion + gv.torsion)

    def alpha_cols(d: int) -> list:
        gu, gv = hu.group(d), hv.group(d)
        return [_pack_sum(hu.class_coordinates(r), hv.class_coordinates(r), gu, gv)
                for r in hw.reps(d)]

    def beta_cols(d: int) -> list:
        cols = []
        for chain, side in _sum_generators(hu, hv, d):
            coords = hk.class_coordinates(chain)
            cols.append(tuple(x if side == "u" else -x for x in coords))
        return cols

    def delta_cols(d: int) -> list:
        cols = []
        for z in hk.reps(d):
            zu = _split_u_first(z, u)
            db = boundary(zu)
            cols.append(hw.class_coordinates(db))
        return cols

    lo, hi = degs[0], degs[-1]
    alpha = {d: alpha_cols(d) for d in range(max(0, lo - 1), hi + 1)}
    beta = {d: beta_cols(d) for d in range(lo, hi + 1)}
    delta = {d: delta_cols(d) for d in range(lo, hi + 2)}

    exact_at: Dict[Tuple[int, str], bool] = {}
    for d in degs:
        exact_at[(d, "intersection")] = _im_eq_ker(
            hw.group(d), delta.get(d + 1, []), alpha[d], sum_group(d))
        exact_at[(d, "sum")] = _im_eq_ker(
            sum_group(d), alpha[d], beta[d], hk.group(d))
        exact_at[(d, "total")] = _im_eq_ker(
            hk.group(d), beta[d], delta[d],
            hw.group(d - 1) if d >= 1 else AbelianGroup(0))

    return MVReport(
        degrees=tuple(degs),
        w_groups={d: hw.group(d) for d in range(0, hi + 2)},
        sum_groups={d: sum_group(d) for d in range(0, hi + 2)},
        k_groups={d: hk.group(d) for d in range(0, hi + 2)},
        alpha={d: _cols_to_matrix(c, dim_of(sum_group(d))) for d, c in alpha.items()},
        beta={d: _cols_to_matrix(c, dim_of(hk.group(d))) for d, c in beta.items()},
        delta={d: _cols_to_matrix(c, dim_of(hw.group(d - 1))) for d, c in delta.items()},
        exact_at=exact_at,
    )


# ---------------------------------------------------------------------------
# star neighborhoods


@dataclass(frozen=True)
class StarVanishingReport:
    """Homology of the subdivided star union around A, checked above the bound."""

    star_union: Complex
    groups: Dict[int, AbelianGroup]
    bound: int

    @property
    def ok(self) -> bool:
        return all(g.is_trivial() for d, g in self.groups.items() if d > self.bound)


def star_neighborhood_vanishing(k: Complex, a: Complex, kdim: int) -> StarVanishingReport:
    """Union of closed stars, in sd k, of barycenters b_s with dim s >= dim k - kdim
    and s meeting A; reports H_l and whether it vanishes for all l > kdim."""
    if not a.simplices <= k.simplices:
        raise ValueError("A is not a subcomplex of K")
    sd, vmap = barycentric_subdivision(k)
    averts = set(a.vertex_ids())
    acc = set()
    for s in k.simplices:
        if s.dim >= k.dim - kdim and set(s.vertices) & averts:
            acc.update(closed_star(Simplex((vmap[s],)), sd).simplices)
    star = Complex(acc)
    h = absolute_homology(star)
    groups = {d: h.group(d) for d in range(0, star.dim + 1)}
    return StarVanishingReport(star, groups, kdim)
