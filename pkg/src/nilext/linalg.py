"""Exact dense linear algebra over the rationals.

Matrices are plain lists of rows, entries are ``fractions.Fraction``.
Every routine returns fresh objects and never mutates its input.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = list
Matrix = list


class Inconsistent(ValueError):
    """Raised by :func:`solve` when the right-hand side is not in the image."""


def Q(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[Q(x) for x in row] for row in rows]


def zeros(n: int, m: int) -> Matrix:
    return [[Fraction(0)] * m for _ in range(n)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def shape(m: Matrix, cols: int | None = None) -> tuple[int, int]:
    if not m:
        return 0, (cols or 0)
    return len(m), len(m[0])


def transpose(m: Matrix, cols: int | None = None) -> Matrix:
    r, c = shape(m, cols)
    return [[m[i][j] for i in range(r)] for j in range(c)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        assert len(row) == inner
        new = [Fraction(0)] * cols
        for k, x in enumerate(row):
            if x:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        new[j] += x * bk[j]
        out.append(new)
    return out


def matvec(m: Matrix, v: Sequence) -> Vector:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in m]


def rref(m: Matrix, cols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the (strictly increasing) pivot columns.

    Zero rows are kept at the bottom so the output has the input's shape.
    """
    rows = [list(map(Q, r)) for r in m]
    nrows, ncols = shape(rows, cols)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        if piv != 1:
            rows[r] = [x / piv for x in rows[r]]
        pr = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                ri = rows[i]
                rows[i] = [x - f * y if y else x for x, y in zip(ri, pr)]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def row_basis(vectors: Iterable[Sequence], dim: int) -> Matrix:
    """RREF basis (nonzero rows only) of the span of ``vectors``."""
    vecs = [list(map(Q, v)) for v in vectors]
    if not vecs:
        return []
    red, piv = rref(vecs, dim)
    return red[: len(piv)]


def kernel_basis(m: Matrix, cols: int | None = None) -> list[Vector]:
    """Basis of {v : m v = 0}, one vector per free column (free entry = 1)."""
    _, ncols = shape(m, cols)
    red, piv = rref(m, ncols)
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in enumerate(piv):
            v[c] = -red[r][f]
        basis.append(v)
    return basis


def solve(m: Matrix, b: Sequence, cols: int | None = None) -> Vector:
    """Particular solution of ``m x = b`` with free variables set to zero."""
    nrows, ncols = shape(m, cols)
    assert len(b) == nrows
    aug = [list(row) + [Q(bi)] for row, bi in zip(m, b)]
    red, piv = rref(aug, ncols + 1)
    if piv and piv[-1] == ncols:
        raise Inconsistent("right-hand side is not in the image")
    x = [Fraction(0)] * ncols
    for r, c in enumerate(piv):
        x[c] = red[r][ncols]
    return x


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    aug = [list(map(Q, row)) + e for row, e in zip(m, identity(n))]
    red, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return [row[n:] for row in red[:n]]


def det(m: Matrix) -> Fraction:
    """Determinant by fraction-valued Gaussian elimination."""
    rows = [list(map(Q, r)) for r in m]
    n = len(rows)
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            out = -out
        out *= rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] / rows[c][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return out


def is_zero(v: Iterable) -> bool:
    return not any(v)


class Subspace:
    """A linear subspace of Q^n stored as its RREF row basis.

    Two subspaces are equal iff their bases are equal, so ``==`` is exact.
    """

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        self.ambient_dim = ambient_dim
        vecs = [list(map(Q, v)) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValueError("vector length does not match ambient dimension")
        if vecs:
            red, piv = rref(vecs, ambient_dim)
            self.basis = [tuple(r) for r in red[: len(piv)]]
            self.pivots = tuple(piv)
        else:
            self.basis = []
            self.pivots = ()

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, identity(n))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, tuple(self.basis)))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def reduce(self, v: Sequence) -> Vector:
        """Reduce ``v`` modulo the subspace (zero at every pivot column)."""
        out = list(map(Q, v))
        for row, p in zip(self.basis, self.pivots):
            f = out[p]
            if f:
                out = [x - f * y if y else x for x, y in zip(out, row)]
        return out

    def contains(self, v: Sequence) -> bool:
        return is_zero(self.reduce(v))

    def coordinates(self, v: Sequence) -> Vector:
        """Coordinates of ``v`` in the RREF basis; raises if ``v`` is outside."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        return [Q(v[p]) for p in self.pivots]

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient_dim, list(self.basis) + list(other.basis))

    def intersect(self, other: "Subspace") -> "Subspace":
        # solve sum a_i u_i = sum b_j w_j
        k = self.dim
        if k == 0 or other.dim == 0:
            return Subspace(self.ambient_dim)
        cols = [list(u) for u in self.basis] + [[-x for x in w] for w in other.basis]
        kern = kernel_basis(transpose(cols), len(cols))
        vecs = []
        for c in kern:
            v = [Fraction(0)] * self.ambient_dim
            for a, u in zip(c[:k], self.basis):
                if a:
                    v = [x + a * y for x, y in zip(v, u)]
            vecs.append(v)
        return Subspace(self.ambient_dim, vecs)

    def annihilator(self) -> "Subspace":
        """Annihilator in the dual space, in dual-basis coordinates."""
        if self.dim == 0:
            return Subspace.full(self.ambient_dim)
        return Subspace(self.ambient_dim, kernel_basis([list(r) for r in self.basis], self.ambient_dim))

    def complement_indices(self) -> list[int]:
        """Standard coordinates that are not pivots: a canonical complement."""
        piv = set(self.pivots)
        return [i for i in range(self.ambient_dim) if i not in piv]
