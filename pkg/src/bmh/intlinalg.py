"""Exact integer linear algebra: Smith normal form, integer solving, abelian groups.

Everything runs on plain Python ints (arbitrary precision); matrices are small
and dense, so no attempt is made at sparse or modular shortcuts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence


class CompositionNonzero(ValueError):
    """d_k . d_{k+1} != 0, so there is no homology to take."""


class NotChainMap(ValueError):
    """The given matrix does not preserve cycles and boundaries."""


class IntMatrix:
    """Immutable dense integer matrix, row-major.

    >>> IntMatrix.identity(2) @ IntMatrix.from_rows([[1, 2], [3, 4]])
    IntMatrix([[1, 2], [3, 4]])
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Sequence[int]):
        entries = tuple(int(e) for e in entries)
        if len(entries) != rows * cols:
            raise ValueError("entry count %d != %d x %d" % (len(entries), rows, cols))
        self.rows = rows
        self.cols = cols
        self._data = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise ValueError("ragged rows")
            flat.extend(row)
        return cls(r, c, flat)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def column(cls, v: Sequence[int]) -> "IntMatrix":
        return cls(len(v), 1, list(v))

    def __getitem__(self, ij) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self._data[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self._data[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return tuple(self._data[i * self.cols + j] for i in range(self.rows))

    def tolists(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols, self.rows,
            [self._data[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)],
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        a, b = self._data, other._data
        n, m, p = self.rows, self.cols, other.cols
        out = [0] * (n * p)
        for i in range(n):
            base = i * m
            for k in range(m):
                aik = a[base + k]
                if aik:
                    rowk = k * p
                    outi = i * p
                    for j in range(p):
                        out[outi + j] += aik * b[rowk + j]
        return IntMatrix(n, p, out)

    def mulvec(self, v: Sequence[int]) -> tuple:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(
            sum(self._data[i * self.cols + j] * v[j] for j in range(self.cols))
            for i in range(self.rows)
        )

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return all(e == 0 for e in self._data)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.shape == other.shape
            and self._data == other._data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self._data))

    def __repr__(self):
        return "IntMatrix(%r)" % (self.tolists(),)

    def det(self) -> int:
        """Exact determinant (fraction-free Bareiss elimination)."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(self.row(i)) for i in range(n)]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SmithForm:
    """u @ a @ v == d with u, v unimodular and d diagonal, d_1 | d_2 | ... >= 0."""

    d: IntMatrix
    u: IntMatrix
    v: IntMatrix

    def diagonal(self) -> tuple:
        return tuple(self.d[i, i] for i in range(min(self.d.rows, self.d.cols)))

    def rank(self) -> int:
        return sum(1 for x in self.diagonal() if x != 0)


def _min_abs_pivot(a, t, m, n):
    # minimal nonzero |entry| in the block starting at (t, t); None when all zero
    best = None
    for i in range(t, m):
        row = a[i]
        for j in range(t, n):
            x = row[j]
            if x != 0 and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
                if best[0] == 1:
                    return best
    return best


def smith_normal_form(a: IntMatrix) -> SmithForm:
    """Smith normal form with transforms.

    >>> smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]])).diagonal()
    (2, 4)
    """
    m, n = a.rows, a.cols
    w = a.tolists()
    u = IntMatrix.identity(m).tolists()
    v = IntMatrix.identity(n).tolists()

    def row_sub(i, k, q):  # row_i -= q * row_k
        wi, wk = w[i], w[k]
        for j in range(n):
            wi[j] -= q * wk[j]
        ui, uk = u[i], u[k]
        for j in range(m):
            ui[j] -= q * uk[j]

    def col_sub(j, k, q):  # col_j -= q * col_k
        for row in w:
            row[j] -= q * row[k]
        for row in v:
            row[j] -= q * row[k]

    def row_swap(i, k):
        w[i], w[k] = w[k], w[i]
        u[i], u[k] = u[k], u[i]

    def col_swap(j, k):
        for row in w:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    def row_neg(i):
        w[i] = [-x for x in w[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    limit = min(m, n)
    while t < limit:
        piv = _min_abs_pivot(w, t, m, n)
        if piv is None:
            break
        _, pi, pj = piv
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        while True:
            # clear column t below the pivot, then row t right of it
            dirty = False
            for i in range(t + 1, m):
                if w[i][t] != 0:
                    q = w[i][t] // w[t][t]
                    row_sub(i, t, q)
                    if w[i][t] != 0:  # remainder smaller than pivot; promote it
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if w[t][j] != 0:
                    q = w[t][j] // w[t][t]
                    col_sub(j, t, q)
                    if w[t][j] != 0:
                        col_swap(t, j)
                        dirty = True
            if not dirty and all(w[i][t] == 0 for i in range(t + 1, m)) \
                    and all(w[t][j] == 0 for j in range(t + 1, n)):
                break
        # pivot must divide every remaining entry; fold an offender into row t
        offender = None
        p = w[t][t]
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if w[i][j] % p != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_sub(t, offender, -1)  # row_t += row_offender
            continue  # re-run elimination at the same t
        t += 1

    for i in range(min(m, n)):
        if w[i][i] < 0:
            row_neg(i)

    return SmithForm(
        d=IntMatrix.from_rows(w) if m else IntMatrix.zero(0, n),
        u=IntMatrix.from_rows(u) if m else IntMatrix.identity(0),
        v=IntMatrix.from_rows(v) if n else IntMatrix.identity(0),
    )


def invert_unimodular(a: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular integer matrix (via its Smith form: u a v = 1)."""
    if a.rows != a.cols:
        raise ValueError("not square")
    s = smith_normal_form(a)
    if any(x != 1 for x in s.diagonal()):
        raise ValueError("matrix is not unimodular")
    return s.v @ s.u


def solve_integer(a: IntMatrix, b: Sequence[int]) -> Optional[tuple]:
    """Some integer x with a @ x = b, or None when no integer solution exists.

    >>> solve_integer(IntMatrix.from_rows([[2, 3]]), [1])
    (-1, 1)
    >>> solve_integer(IntMatrix.from_rows([[2]]), [3]) is None
    True
    """
    b = tuple(int(x) for x in b)
    if len(b) != a.rows:
        raise ValueError("rhs length mismatch")
    s = smith_normal_form(a)
    ub = s.u.mulvec(b)
    r = s.rank()
    y = [0] * a.cols
    for i in range(a.rows):
        di = s.d[i, i] if i < min(a.rows, a.cols) else 0
        if i < r:
            if ub[i] % di != 0:
                return None
            y[i] = ub[i] // di
        elif ub[i] != 0:
            return None
    return s.v.mulvec(y)


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group: Z^rank + sum of Z/torsion[i]."""

    rank: int
    torsion: tuple = ()

    def __post_init__(self):
        for i, t in enumerate(self.torsion):
            if t <= 1:
                raise ValueError("invariant factors must exceed 1")
            if i and self.torsion[i - 1] != 0 and t % self.torsion[i - 1] != 0:
                raise ValueError("invariant factors must form a divisibility chain")

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append("Z^%d" % self.rank)
        parts.extend("Z/%d" % t for t in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class HomologyData:
    """ker(d_k)/im(d_{k+1}) together with everything needed to coordinatize classes.

    representatives lists integer cycle vectors: free generators first, then one
    generator per torsion factor (same order as group.torsion).
    """

    group: AbelianGroup
    representatives: tuple            # tuple of coefficient tuples, length = ambient dim
    d_k: IntMatrix
    d_kplus1: IntMatrix
    _kernel: IntMatrix = field(repr=False, default=None)        # columns: kernel basis
    _kernel_coords: IntMatrix = field(repr=False, default=None)  # kernel coords of ambient cycles
    _u2: IntMatrix = field(repr=False, default=None)            # quotient-normalizing transform
    _factors: tuple = field(repr=False, default=())             # full SNF diagonal of the image

    def class_coordinates(self, v: Sequence[int]) -> tuple:
        """Coordinates of a cycle vector: free coords (exact ints), then torsion mod factor."""
        v = tuple(int(x) for x in v)
        if len(v) != self.d_k.cols:
            raise ValueError("vector not in the chain group")
        if any(x != 0 for x in self.d_k.mulvec(v)):
            raise ValueError("vector is not a cycle")
        y = self._kernel_coords.mulvec(v)
        w = self._u2.mulvec(y)
        z = len(y)
        r2 = sum(1 for f in self._factors if f != 0)
        free = [w[i] for i in range(r2, z)]
        tors = [w[i] % self._factors[i] for i in range(r2) if self._factors[i] > 1]
        return tuple(free) + tuple(tors)

    def is_zero_class(self, v: Sequence[int]) -> bool:
        return all(c == 0 for c in self.class_coordinates(v))


def homology_group(d_k: IntMatrix, d_kplus1: IntMatrix) -> HomologyData:
    """Homology at C_k of the pair of boundary matrices d_k: C_k -> C_{k-1}, d_{k+1}: C_{k+1} -> C_k."""
    n = d_k.cols
    if d_kplus1.rows != n:
        raise ValueError("boundary matrices not composable")
    if d_k.rows and d_kplus1.cols:
        if not (d_k @ d_kplus1).is_zero():
            raise CompositionNonzero("d_k @ d_{k+1} != 0")

    s1 = smith_normal_form(d_k)
    r1 = s1.rank()
    v1inv = invert_unimodular(s1.v)
    # kernel of d_k = last n - r1 columns of v1; cycle coords = last n - r1 rows of v1inv
    z = n - r1
    kernel = IntMatrix(n, z, [s1.v[i, r1 + j] for i in range(n) for j in range(z)])
    kcoords = IntMatrix(z, n, [v1inv[r1 + i, j] for i in range(z) for j in range(n)])

    # image of d_{k+1} in kernel coordinates
    b = kcoords @ d_kplus1
    if d_kplus1.cols:
        top = IntMatrix(r1, n, [v1inv[i, j] for i in range(r1) for j in range(n)]) @ d_kplus1
        if not top.is_zero():
            raise CompositionNonzero("image of d_{k+1} is not contained in ker(d_k)")

    s2 = smith_normal_form(b)
    r2 = s2.rank()
    factors = tuple(s2.d[i, i] for i in range(min(z, b.cols))) + (0,) * max(0, z - min(z, b.cols))
    u2inv = invert_unimodular(s2.u)

    rank = z - r2
    torsion = tuple(f for f in factors[:r2] if f > 1)
    gens = []
    for i in list(range(r2, z)) + [i for i in range(r2) if factors[i] > 1]:
        y = u2inv.col(i)
        gens.append(kernel.mulvec(y))
    return HomologyData(
        group=AbelianGroup(rank=rank, torsion=torsion),
        representatives=tuple(gens),
        d_k=d_k,
        d_kplus1=d_kplus1,
        _kernel=kernel,
        _kernel_coords=kcoords,
        _u2=s2.u,
        _factors=factors,
    )


class Presented(NamedTuple):
    """A group given as Z^rank + sum of Z/torsion[i], factors in no particular order.

    Duck-types AbelianGroup for the subgroup helpers below; unlike AbelianGroup it
    skips the invariant-factor normalization (direct sums concatenate factors).
    """

    rank: int
    torsion: tuple = ()

    @property
    def dim(self):
        return self.rank + len(self.torsion)


def _relation_columns(group) -> list:
    """Columns spanning the relations of Z^(rank+t) presenting the group."""
    dim = group.rank + len(group.torsion)
    cols = []
    for i, t in enumerate(group.torsion):
        col = [0] * dim
        col[group.rank + i] = t
        cols.append(col)
    return cols


def subgroup_contains(group, generators: Sequence[Sequence[int]],
                      target: Sequence[int]) -> bool:
    """Does target (a coordinate vector in group) lie in the subgroup the generators span?"""
    dim = group.rank + len(group.torsion)
    cols = [list(g) for g in generators] + _relation_columns(group)
    if not cols:
        return all(x == 0 for x in target)
    mat = IntMatrix(dim, len(cols), [c[i] for i in range(dim) for c in cols])
    return solve_integer(mat, target) is not None


def coordinate_kernel(source, matrix_cols: Sequence[Sequence[int]],
                      target) -> list:
    """Generators (coordinate vectors in source) of the kernel of the map given on generators.

    matrix_cols[j] is the target-coordinate image of source generator j.
    """
    sdim = source.rank + len(source.torsion)
    tdim = target.rank + len(target.torsion)
    rel_t = _relation_columns(target)
    cols = [list(c) for c in matrix_cols] + rel_t
    if sdim == 0:
        return []
    if tdim == 0 or not cols:
        gens = [[0] * sdim for _ in range(sdim)]
        for i in range(sdim):
            gens[i][i] = 1
        return gens
    mat = IntMatrix(tdim, len(cols), [c[i] for i in range(tdim) for c in cols])
    s = smith_normal_form(mat)
    r = s.rank()
    out = []
    for j in range(r, mat.cols):
        col = s.v.col(j)
        out.append(list(col[:sdim]))
    # relation vectors of the source are in the kernel of any well-defined map
    out.extend(_relation_columns(source))
    return out


def group_iso_check(source, matrix_cols: Sequence[Sequence[int]],
                    target) -> bool:
    """Is the map sending source generators to the given target coordinates an isomorphism?

    Requires matching invariants; then surjectivity suffices (f.g. abelian groups
    are Hopfian), and surjectivity is read off the Smith form of [matrix | relations].
    """
    if (source.rank, source.torsion) != (target.rank, target.torsion):
        return False
    tdim = target.rank + len(target.torsion)
    if tdim == 0:
        return True
    cols = [list(c) for c in matrix_cols] + _relation_columns(target)
    if not cols:
        return False
    mat = IntMatrix(tdim, len(cols), [c[i] for i in range(tdim) for c in cols])
    s = smith_normal_form(mat)
    return s.rank() == tdim and all(x == 1 for x in s.diagonal()[:tdim])


def induced_map(f: IntMatrix, source: HomologyData, target: HomologyData) -> IntMatrix:
    """Matrix of the induced map on homology, columns indexed by source representatives.

    f is a degree-k chain matrix. It must send cycles to cycles and boundaries to
    boundaries (the checkable face of chain-map commutation at this degree).
    """
    if f.cols != source.d_k.cols or f.rows != target.d_k.cols:
        raise ValueError("chain matrix shape mismatch")
    nsrc = source.d_k.cols
    # cycles -> cycles: check on a kernel basis of the source
    for j in range(source._kernel.cols):
        img = f.mulvec(source._kernel.col(j))
        if any(x != 0 for x in target.d_k.mulvec(img)):
            raise NotChainMap("image of a cycle is not a cycle")
    # boundaries -> boundaries
    for j in range(source.d_kplus1.cols):
        img = f.mulvec(source.d_kplus1.col(j))
        if solve_integer(target.d_kplus1, img) is None:
            raise NotChainMap("image of a boundary is not a boundary")
    cols = []
    for rep in source.representatives:
        cols.append(target.class_coordinates(f.mulvec(rep)))
    tdim = target.group.rank + len(target.group.torsion)
    return IntMatrix(tdim, len(cols), [c[i] for i in range(tdim) for c in cols])


if __name__ == "__main__":
    import doctest

    doctest.testmod()
