"""Simplicial complexes, pairs, integer chains/cochains, and subdivision.

Vertices are opaque integers. A simplex is its strictly increasing vertex
tuple; orientation data lives in chain coefficients and in explicit vertex
orderings, with reordering handled by permutation signs (degenerate tuples
collapse to zero).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .intlinalg import IntMatrix


class SimplexNotInComplex(KeyError):
    pass


class NotFull(ValueError):
    """L is not a full subcomplex; subdivide once before taking complements."""


@dataclass(frozen=True)
class Simplex:
    vertices: Tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.vertices, self.vertices[1:]):
            if a >= b:
                raise ValueError("vertices must be strictly increasing: %r" % (self.vertices,))

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def face(self, p: int) -> "Simplex":
        """The codimension-1 face dropping the p-th vertex."""
        v = self.vertices
        return Simplex(v[:p] + v[p + 1:])

    def faces(self):
        return [self.face(p) for p in range(len(self.vertices))]

    def all_faces(self):
        """Every nonempty subtuple (the closure), self included."""
        out = []
        n = len(self.vertices)
        for mask in range(1, 1 << n):
            out.append(Simplex(tuple(v for i, v in enumerate(self.vertices) if mask >> i & 1)))
        return out

    def __contains__(self, v: int) -> bool:
        return v in self.vertices

    def is_face_of(self, other: "Simplex") -> bool:
        return set(self.vertices) <= set(other.vertices)

    def __lt__(self, other: "Simplex") -> bool:
        return self.vertices < other.vertices

    def __repr__(self):
        return "Simplex(%s)" % ",".join(str(v) for v in self.vertices)


def simplex(*vertices: int) -> Simplex:
    return Simplex(tuple(vertices))


def _sort_sign(t: Sequence[int]) -> int:
    # parity of the permutation sorting t (t has distinct entries)
    t = list(t)
    sign = 1
    for i in range(len(t)):
        for j in range(i + 1, len(t)):
            if t[i] > t[j]:
                sign = -sign
    return sign


def canonicalize(ordered_vertices: Sequence[int]) -> Optional[Tuple[Simplex, int]]:
    """Sorted representative with the sorting permutation's sign; None on a repeat.

    >>> canonicalize((1, 0, 2))
    (Simplex(0,1,2), -1)
    >>> canonicalize((0, 0, 1)) is None
    True
    """
    t = tuple(ordered_vertices)
    if len(set(t)) != len(t):
        return None
    return Simplex(tuple(sorted(t))), _sort_sign(t)


class Chain:
    """Integer chain of a fixed degree; zero coefficients are never stored."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Optional[Dict[Simplex, int]] = None):
        self.degree = degree
        clean = {}
        for s, a in (coeffs or {}).items():
            if a == 0:
                continue
            if s.dim != degree:
                raise ValueError("simplex %r has dim %d, chain degree %d" % (s, s.dim, degree))
            clean[s] = int(a)
        self.coeffs = clean

    @classmethod
    def from_items(cls, items: Iterable[Tuple[Sequence[int], int]], degree: Optional[int] = None):
        """Build from (ordered vertex tuple, coefficient) pairs, canonicalizing each."""
        acc: Dict[Simplex, int] = {}
        deg = degree
        for verts, a in items:
            c = canonicalize(verts)
            if c is None:
                continue
            s, sign = c
            if deg is None:
                deg = s.dim
            acc[s] = acc.get(s, 0) + sign * a
        if deg is None:
            raise ValueError("cannot infer degree of an empty chain")
        return cls(deg, acc)

    def get(self, s: Simplex) -> int:
        return self.coeffs.get(s, 0)

    def items(self):
        return sorted(self.coeffs.items())

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "Chain") -> "Chain":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        acc = dict(self.coeffs)
        for s, a in other.coeffs.items():
            acc[s] = acc.get(s, 0) + a
        return Chain(self.degree, acc)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __neg__(self) -> "Chain":
        return Chain(self.degree, {s: -a for s, a in self.coeffs.items()})

    def __rmul__(self, k: int) -> "Chain":
        return Chain(self.degree, {s: k * a for s, a in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Chain) and self.degree == other.degree \
            and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.degree, frozenset(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return "Chain(%d, 0)" % self.degree
        return "Chain(%d, %s)" % (
            self.degree,
            " ".join("%+d*%r" % (a, s) for s, a in self.items()),
        )


def unit_chain(verts: Sequence[int]) -> Chain:
    """The chain of a single oriented simplex (zero chain if degenerate)."""
    c = canonicalize(verts)
    if c is None:
        return Chain(len(verts) - 1, {})
    s, sign = c
    return Chain(s.dim, {s: sign})


class Cochain:
    """Integer cochain on a complex; evaluation off the stored keys is 0."""

    __slots__ = ("degree", "values", "space")

    def __init__(self, degree: int, values: Dict[Simplex, int], space: "Complex"):
        self.degree = degree
        self.values = {s: int(a) for s, a in values.items() if a != 0}
        self.space = space
        for s in self.values:
            if s.dim != degree:
                raise ValueError("cochain key of wrong dimension: %r" % (s,))

    def __call__(self, s: Simplex) -> int:
        return self.values.get(s, 0)

    def eval_chain(self, c: Chain) -> int:
        return sum(a * self(s) for s, a in c.coeffs.items())

    def __eq__(self, other):
        return isinstance(other, Cochain) and self.degree == other.degree \
            and self.values == other.values and self.space == other.space

    def __repr__(self):
        return "Cochain(%d, %s)" % (
            self.degree, " ".join("%r:%+d" % (s, a) for s, a in sorted(self.values.items())))


class Complex:
    """Finite simplicial complex: a face-closed set of simplices."""

    def __init__(self, simplices: Iterable[Simplex]):
        self.simplices = frozenset(simplices)
        by_dim: Dict[int, list] = {}
        for s in self.simplices:
            by_dim.setdefault(s.dim, []).append(s)
        self._by_dim = {d: sorted(v) for d, v in by_dim.items()}
        for s in self.simplices:
            if s.dim > 0:
                for f in s.faces():
                    if f not in self.simplices:
                        raise ValueError("not closed under faces: %r lacks %r" % (s, f))

    @classmethod
    def from_top(cls, tops: Iterable[Sequence[int]]) -> "Complex":
        """Close the listed simplices (as vertex tuples) under taking faces."""
        acc = set()
        for t in tops:
            s = Simplex(tuple(sorted(t)))
            acc.update(s.all_faces())
        return cls(acc)

    @classmethod
    def empty(cls) -> "Complex":
        return cls(())

    @property
    def dim(self) -> int:
        return max(self._by_dim, default=-1)

    def of_dim(self, d: int) -> list:
        return self._by_dim.get(d, [])

    def vertex_ids(self) -> list:
        return sorted(s.vertices[0] for s in self.of_dim(0))

    def maximal(self) -> list:
        """Simplices with no proper coface."""
        covered = set()
        for s in self.simplices:
            if s.dim > 0:
                covered.update(s.faces())
        return sorted(s for s in self.simplices if s not in covered)

    def euler(self) -> int:
        return sum((-1) ** d * len(v) for d, v in self._by_dim.items())

    def __contains__(self, s: Simplex) -> bool:
        return s in self.simplices

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        for d in sorted(self._by_dim):
            yield from self._by_dim[d]

    def __eq__(self, other):
        return isinstance(other, Complex) and self.simplices == other.simplices

    def __hash__(self):
        return hash(self.simplices)

    def __repr__(self):
        return "Complex(%d simplices, dim %d)" % (len(self.simplices), self.dim)


@dataclass(frozen=True)
class SimplicialPair:
    """A complex K with a marked subcomplex L; models the open object |K| - |L|."""

    k: Complex
    l: Complex

    def __post_init__(self):
        if not self.l.simplices <= self.k.simplices:
            raise ValueError("L is not a subcomplex of K")

    @classmethod
    def closed(cls, k: Complex) -> "SimplicialPair":
        return cls(k, Complex.empty())

    def interior(self, d: int) -> list:
        """d-simplices of K not in L, in canonical order."""
        return [s for s in self.k.of_dim(d) if s not in self.l]


def boundary(c: Chain) -> Chain:
    """Alternating sum of codimension-1 faces; zero in degree 0."""
    if c.degree <= 0:
        return Chain(c.degree - 1, {})
    acc: Dict[Simplex, int] = {}
    for s, a in c.coeffs.items():
        for p in range(len(s.vertices)):
            f = s.face(p)
            acc[f] = acc.get(f, 0) + a * (-1) ** p
    return Chain(c.degree - 1, acc)


def relative_reduce(c: Chain, pair: SimplicialPair) -> Chain:
    """Drop every simplex carried by L."""
    return Chain(c.degree, {s: a for s, a in c.coeffs.items() if s not in pair.l})


def is_relative_cycle(c: Chain, pair: SimplicialPair) -> bool:
    return relative_reduce(boundary(c), pair).is_zero()


def coboundary(a: Cochain) -> Cochain:
    """(da)(s) = a(boundary of s), on the cochain's own complex."""
    vals: Dict[Simplex, int] = {}
    for s in a.space.of_dim(a.degree + 1):
        v = a.eval_chain(boundary(unit_chain(s.vertices)))
        if v:
            vals[s] = v
    return Cochain(a.degree + 1, vals, a.space)


def support(c: Chain) -> frozenset:
    """Union of closures of the simplices with nonzero coefficient."""
    acc = set()
    for s in c.coeffs:
        acc.update(s.all_faces())
    return frozenset(acc)


# ---------------------------------------------------------------------------
# stars, skeleta, complements

def open_star(s: Simplex, k: Complex) -> frozenset:
    """All cofaces of s in k (s included)."""
    if s not in k:
        raise SimplexNotInComplex(s)
    return frozenset(t for t in k.simplices if s.is_face_of(t))


def closed_star(s: Simplex, k: Complex) -> Complex:
    acc = set()
    for t in open_star(s, k):
        acc.update(t.all_faces())
    return Complex(acc)


def skeleton(k: Complex, l: int) -> Complex:
    return Complex(s for s in k.simplices if s.dim <= l)


def is_full(pair: SimplicialPair) -> bool:
    """Every simplex of K spanned by L-vertices already lies in L."""
    lverts = set(pair.l.vertex_ids())
    for s in pair.k.simplices:
        if s not in pair.l and set(s.vertices) <= lverts:
            return False
    return True


def complement_complex(pair: SimplicialPair) -> Complex:
    """Full subcomplex of K on the vertices outside L (a retract of |K| - |L|)."""
    if not is_full(pair):
        raise NotFull("subdivide the pair once first")
    lverts = set(pair.l.vertex_ids())
    return Complex(s for s in pair.k.simplices if not set(s.vertices) & lverts)


# ---------------------------------------------------------------------------
# barycentric subdivision

def _barycenter_ids(k: Complex) -> Dict[Simplex, int]:
    # dim-0 barycenters keep their vertex id; higher ones get fresh sequential ids
    vmap: Dict[Simplex, int] = {}
    next_id = max(k.vertex_ids(), default=-1) + 1
    for s in sorted(k.simplices, key=lambda s: (s.dim, s.vertices)):
        if s.dim == 0:
            vmap[s] = s.vertices[0]
        else:
            vmap[s] = next_id
            next_id += 1
    return vmap


def _sd_complex(k: Complex, vmap: Dict[Simplex, int]) -> Complex:
    from itertools import permutations

    tops = []
    for m in k.maximal():
        for perm in permutations(m.vertices):
            flag = [vmap[Simplex(tuple(sorted(perm[: i + 1])))] for i in range(len(perm))]
            tops.append(flag)
    if not tops:
        return Complex.empty()
    return Complex.from_top(tops)


def barycentric_subdivision(k: Complex) -> Tuple[Complex, Dict[Simplex, int]]:
    """The flag complex of k, plus the map simplex -> its barycenter's vertex id."""
    vmap = _barycenter_ids(k)
    return _sd_complex(k, vmap), vmap


def subdivide_pair(pair: SimplicialPair) -> Tuple[SimplicialPair, Dict[Simplex, int]]:
    """Subdivide K and L compatibly (one vmap for both)."""
    vmap = _barycenter_ids(pair.k)
    sdk = _sd_complex(pair.k, vmap)
    sdl = _sd_complex(pair.l, vmap)
    return SimplicialPair(sdk, sdl), vmap


def cone_chain(b: int, c: Chain) -> Chain:
    """Prepend vertex b to every simplex of c (degenerate terms drop out)."""
    acc: Dict[Simplex, int] = {}
    for s, a in c.coeffs.items():
        cc = canonicalize((b,) + s.vertices)
        if cc is None:
            continue
        t, sign = cc
        acc[t] = acc.get(t, 0) + sign * a
    return Chain(c.degree + 1, acc)


def _sd_simplex(s: Simplex, vmap: Dict[Simplex, int], memo: dict) -> Chain:
    if s in memo:
        return memo[s]
    if s.dim == 0:
        out = Chain(0, {s: 1})
    else:
        db = Chain(s.dim - 1, {})
        for p in range(len(s.vertices)):
            db = db + (-1) ** p * _sd_simplex(s.face(p), vmap, memo)
        out = cone_chain(vmap[s], db)
    memo[s] = out
    return out


def sd_chain(c: Chain, vmap: Dict[Simplex, int]) -> Chain:
    """Barycentric subdivision of a chain (a chain map)."""
    memo: dict = {}
    acc = Chain(c.degree, {})
    for s, a in c.coeffs.items():
        acc = acc + a * _sd_simplex(s, vmap, memo)
    return acc


def _homotopy_simplex(s: Simplex, vmap: Dict[Simplex, int],
                      memo_sd: dict, memo_d: dict) -> Chain:
    if s in memo_d:
        return memo_d[s]
    if s.dim == 0:
        out = Chain(1, {})
    else:
        rhs = _sd_simplex(s, vmap, memo_sd) - Chain(s.dim, {s: 1})
        for p in range(len(s.vertices)):
            rhs = rhs - (-1) ** p * _homotopy_simplex(s.face(p), vmap, memo_sd, memo_d)
        out = cone_chain(vmap[s], rhs)
    memo_d[s] = out
    return out


def subdivision_homotopy(c: Chain, vmap: Dict[Simplex, int]) -> Chain:
    """D with sd(c) - c = boundary(D(c)) + D(boundary(c)), exactly and termwise."""
    memo_sd: dict = {}
    memo_d: dict = {}
    acc = Chain(c.degree + 1, {})
    for s, a in c.coeffs.items():
        acc = acc + a * _homotopy_simplex(s, vmap, memo_sd, memo_d)
    return acc


# ---------------------------------------------------------------------------
# boundary matrices

def chain_basis(pair: SimplicialPair, d: int) -> list:
    return pair.interior(d)


def chain_to_vector(c: Chain, basis: list) -> tuple:
    index = {s: i for i, s in enumerate(basis)}
    v = [0] * len(basis)
    for s, a in c.coeffs.items():
        if s in index:
            v[index[s]] = a
        elif a != 0:
            raise ValueError("chain leaves the basis: %r" % (s,))
    return tuple(v)


def vector_to_chain(v: Sequence[int], basis: list, degree: int) -> Chain:
    return Chain(degree, {s: a for s, a in zip(basis, v)})


def boundary_matrix(pair: SimplicialPair, d: int) -> IntMatrix:
    """Matrix of the relative boundary C_d(K,L) -> C_{d-1}(K,L) in canonical bases."""
    src = pair.interior(d)
    tgt = pair.interior(d - 1) if d >= 1 else []
    rows = len(tgt)
    index = {s: i for i, s in enumerate(tgt)}
    cols = []
    for s in src:
        col = [0] * rows
        if d >= 1:
            for p in range(len(s.vertices)):
                f = s.face(p)
                i = index.get(f)
                if i is not None:
                    col[i] += (-1) ** p
        cols.append(col)
    return IntMatrix(rows, len(src), [col[i] for i in range(rows) for col in cols])


# ---------------------------------------------------------------------------
# fixture generators

def simplex_pair(n: int) -> SimplicialPair:
    """(standard n-simplex, its boundary); the finite model of n-space."""
    top = tuple(range(n + 1))
    k = Complex.from_top([top])
    l = Complex.from_top([top[:p] + top[p + 1:] for p in range(n + 1)]) if n >= 1 \
        else Complex.empty()
    return SimplicialPair(k, l)


def sphere(n: int) -> Complex:
    """Boundary of the (n+1)-simplex."""
    top = tuple(range(n + 2))
    return Complex.from_top([top[:p] + top[p + 1:] for p in range(n + 2)])


def torus() -> Complex:
    """7-vertex triangulation: triangles {i,i+1,i+3} and {i,i+2,i+3} mod 7."""
    tris = []
    for i in range(7):
        tris.append(tuple(sorted(((i) % 7, (i + 1) % 7, (i + 3) % 7))))
        tris.append(tuple(sorted(((i) % 7, (i + 2) % 7, (i + 3) % 7))))
    return Complex.from_top(tris)


def mobius_pair() -> SimplicialPair:
    """5-vertex strip {i,i+1,i+2} mod 5 with its boundary circle at infinity."""
    k = Complex.from_top([tuple(sorted((i, (i + 1) % 5, (i + 2) % 5))) for i in range(5)])
    l = Complex.from_top([tuple(sorted((i, (i + 2) % 5))) for i in range(5)])
    return SimplicialPair(k, l)


def cylinder_pair() -> SimplicialPair:
    """Triangulated annulus on 6 vertices rel both boundary circles."""
    k = Complex.from_top([(0, 1, 4), (0, 3, 4), (1, 2, 5), (1, 4, 5), (0, 2, 3), (2, 3, 5)])
    l = Complex.from_top([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    return SimplicialPair(k, l)


def disjoint_union(a: Complex, b: Complex) -> Complex:
    """a plus a vertex-shifted copy of b (ids made disjoint deterministically)."""
    averts = a.vertex_ids()
    bverts = b.vertex_ids()
    offset = (max(averts) + 1 - min(bverts)) if averts and bverts else 0
    shifted = [Simplex(tuple(v + offset for v in s.vertices)) for s in b.simplices]
    return Complex(set(a.simplices) | set(shifted))


def cone(k: Complex, apex: Optional[int] = None) -> Complex:
    if apex is None:
        apex = max(k.vertex_ids(), default=-1) + 1
    elif any(apex in s for s in k.simplices):
        raise ValueError("apex already a vertex")
    acc = set(k.simplices)
    acc.add(Simplex((apex,)))
    for s in k.simplices:
        acc.add(Simplex(tuple(sorted(s.vertices + (apex,)))))
    return Complex(acc)


# ---------------------------------------------------------------------------
# JSON formats (consumed by the CLI): a pair is
#   {"vertices": [ids], "simplices": [[v,...],...], "infinity": [[v,...],...]}
# and listing a simplex implies all its faces.  A chain is
#   [{"s": [v,...], "a": int}, ...].

def pair_to_json(pair: SimplicialPair) -> dict:
    return {
        "vertices": pair.k.vertex_ids(),
        "simplices": [list(s.vertices) for s in pair.k.maximal()],
        "infinity": [list(s.vertices) for s in pair.l.maximal()],
    }


def pair_from_json(data: dict) -> SimplicialPair:
    tops = [tuple(t) for t in data.get("simplices", [])]
    tops += [(v,) for v in data.get("vertices", [])]
    k = Complex.from_top(tops) if tops else Complex.empty()
    inf = [tuple(t) for t in data.get("infinity", [])]
    l = Complex.from_top(inf) if inf else Complex.empty()
    return SimplicialPair(k, l)


def complex_to_json(k: Complex) -> dict:
    return pair_to_json(SimplicialPair.closed(k))


def complex_from_json(data: dict) -> Complex:
    return pair_from_json(data).k


def chain_to_json(c: Chain) -> list:
    return [{"s": list(s.vertices), "a": a} for s, a in c.items()]


def chain_from_json(data: list, degree: Optional[int] = None) -> Chain:
    return Chain.from_items([(tuple(e["s"]), e["a"]) for e in data], degree=degree)


if __name__ == "__main__":
    import doctest

    doctest.testmod()
