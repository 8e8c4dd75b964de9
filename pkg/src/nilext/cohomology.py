"""Chevalley-Eilenberg cochains with trivial coefficients.

Sign convention: for a 1-form rho, ``d rho (x, y) = rho([x, y])`` and
``(a ^ b)(x, y) = a(x) b(y) - a(y) b(x)``.  In coordinates
``d e^k = sum_{i<j} c_ij^k e^i ^ e^j``, which gives ``d a^2 = a^1 ^ b^1`` for
the filiform algebra m_0(n), and ``d e^l = c_l`` for the dual of a vector
added by a central extension.  d is extended to higher degrees as a
derivation of the exterior algebra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .lie import LieAlgebra, NotNilpotent, NoLayout, lower_central_series
from .linalg import Q, Subspace, kernel_basis, transpose


class NotClosed(ValueError):
    pass


def _sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``idx`` (0 on a repeated index)."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class ExteriorForm:
    """A p-form on an n-dimensional space: sparse map sorted-index-tuple -> coefficient."""

    __slots__ = ("degree", "ambient_dim", "terms")

    def __init__(self, degree: int, ambient_dim: int, terms: Mapping | None = None):
        self.degree = degree
        self.ambient_dim = ambient_dim
        clean: dict[tuple[int, ...], Fraction] = {}
        for idx, c in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"monomial {idx} has wrong degree")
            if any(not 0 <= i < ambient_dim for i in idx):
                raise ValueError(f"monomial {idx} out of range")
            sign, key = _sort_sign(idx)
            if sign:
                clean[key] = clean.get(key, Fraction(0)) + sign * Q(c)
        self.terms = {k: v for k, v in sorted(clean.items()) if v}

    @classmethod
    def monomial(cls, ambient_dim: int, *idx: int, coeff=1) -> "ExteriorForm":
        return cls(len(idx), ambient_dim, {tuple(idx): coeff})

    @classmethod
    def zero(cls, degree: int, ambient_dim: int) -> "ExteriorForm":
        return cls(degree, ambient_dim)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for idx, c in self.terms.items():
            mono = "^".join(f"e{i + 1}" for i in idx) or "1"
            parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __eq__(self, other):
        return (
            isinstance(other, ExteriorForm)
            and self.degree == other.degree
            and self.ambient_dim == other.ambient_dim
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.degree, self.ambient_dim, tuple(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other):
        if (self.degree, self.ambient_dim) != (other.degree, other.ambient_dim):
            raise ValueError("forms of different degree or ambient dimension")

    def __add__(self, other: "ExteriorForm") -> "ExteriorForm":
        self._check(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, Fraction(0)) + v
        return ExteriorForm(self.degree, self.ambient_dim, t)

    def __neg__(self):
        return ExteriorForm(self.degree, self.ambient_dim, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar) -> "ExteriorForm":
        s = Q(scalar)
        return ExteriorForm(self.degree, self.ambient_dim, {k: s * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def wedge(self, other: "ExteriorForm") -> "ExteriorForm":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        out: dict = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                sign, key = _sort_sign(a + b)
                if sign:
                    out[key] = out.get(key, Fraction(0)) + sign * x * y
        return ExteriorForm(self.degree + other.degree, self.ambient_dim, out)

    __xor__ = wedge

    def __call__(self, *vectors: Sequence) -> Fraction:
        """Evaluate on p vectors (determinant formula)."""
        if len(vectors) != self.degree:
            raise ValueError("wrong number of arguments")
        total = Fraction(0)
        p = self.degree
        for idx, c in self.terms.items():
            for perm in itertools.permutations(range(p)):
                sign, _ = _sort_sign(perm)
                prod = Fraction(c * sign)
                for slot, which in enumerate(perm):
                    prod *= Q(vectors[slot][idx[which]])
                    if not prod:
                        break
                total += prod
        return total

    def to_vector(self, monomials: Sequence[tuple[int, ...]]) -> list[Fraction]:
        pos = {m: i for i, m in enumerate(monomials)}
        v = [Fraction(0)] * len(monomials)
        for k, c in self.terms.items():
            v[pos[k]] = c
        return v

    @classmethod
    def from_vector(cls, degree, ambient_dim, monomials, vec) -> "ExteriorForm":
        return cls(degree, ambient_dim, {m: c for m, c in zip(monomials, vec) if c})

    def pullback(self, matrix: Sequence[Sequence]) -> "ExteriorForm":
        """phi^* w, where column i of ``matrix`` is phi(e_i)."""
        n = self.ambient_dim
        ones = []
        for k in range(n):
            ones.append(ExteriorForm(1, n, {(i,): matrix[k][i] for i in range(n) if matrix[k][i]}))
        out = ExteriorForm(self.degree, n)
        for idx, c in self.terms.items():
            term = ExteriorForm(0, n, {(): c})
            for k in idx:
                term = term.wedge(ones[k])
            out = out + term
        return out


def monomials(n: int, p: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(n), p))


def form_weight_of_monomial(weights: Sequence[int], idx: Sequence[int]) -> int:
    return sum(weights[i] for i in idx)


def d1(g: LieAlgebra, k: int) -> ExteriorForm:
    """d e^k."""
    terms = {}
    for (i, j), row in g.brackets.items():
        c = row.get(k)
        if c:
            terms[(i, j)] = c
    return ExteriorForm(2, g.dim, terms)


def differential(g: LieAlgebra, w: ExteriorForm) -> ExteriorForm:
    if w.ambient_dim != g.dim:
        raise ValueError("form and algebra dimensions differ")
    n = g.dim
    ones = [d1(g, k) for k in range(n)]
    out = ExteriorForm(w.degree + 1, n)
    for idx, c in w.terms.items():
        for r, k in enumerate(idx):
            if not ones[k]:
                continue
            left = ExteriorForm(r, n, {idx[:r]: c * (-1) ** r})
            right = ExteriorForm(len(idx) - r - 1, n, {idx[r + 1 :]: 1})
            out = out + left.wedge(ones[k]).wedge(right)
    return out


@lru_cache(maxsize=512)
def _d_matrix(g: LieAlgebra, p: int, cols: tuple, rows: tuple) -> tuple:
    n = g.dim
    columns = []
    for m in cols:
        dv = differential(g, ExteriorForm(p, n, {m: 1}))
        columns.append(dv.to_vector(rows))
    return tuple(tuple(r) for r in transpose(columns, len(cols))) if rows else ()


def d_matrix(g: LieAlgebra, p: int, weight: int | None = None):
    """Matrix of d_p : Lambda^p -> Lambda^{p+1}, plus the column and row monomials."""
    cols = monomials(g.dim, p)
    rows = monomials(g.dim, p + 1)
    if weight is not None:
        if g.weights is None:
            raise NoLayout("weight restriction needs a layout")
        cols = [m for m in cols if form_weight_of_monomial(g.weights, m) == weight]
        rows = [m for m in rows if form_weight_of_monomial(g.weights, m) == weight]
    mat = _d_matrix(g, p, tuple(cols), tuple(rows))
    return [list(r) for r in mat], cols, rows


@dataclass
class CohomologyBasis:
    degree: int
    ambient_dim: int
    monomials: list
    representatives: list
    boundary_space: Subspace
    cocycle_space: Subspace
    weight: int | None = None
    _reps: Subspace = field(default=None, repr=False)

    def __post_init__(self):
        vecs = [r.to_vector(self.monomials) for r in self.representatives]
        self._reps = Subspace(len(self.monomials), vecs)

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def __len__(self):
        return self.dim

    def to_vector(self, w: ExteriorForm) -> list[Fraction]:
        pos = {m: i for i, m in enumerate(self.monomials)}
        v = [Fraction(0)] * len(self.monomials)
        for k, c in w.terms.items():
            if k not in pos:
                raise ValueError("form has monomials outside this complex")
            v[pos[k]] = c
        return v

    def is_cocycle(self, w: ExteriorForm) -> bool:
        try:
            return self.cocycle_space.contains(self.to_vector(w))
        except ValueError:
            return False

    def is_coboundary(self, w: ExteriorForm) -> bool:
        return self.boundary_space.contains(self.to_vector(w))

    def coordinates(self, w: ExteriorForm) -> list[Fraction]:
        """Coordinates of the class of w in the representative basis."""
        v = self.to_vector(w)
        if not self.cocycle_space.contains(v):
            raise NotClosed("form is not a cocycle")
        red = self.boundary_space.reduce(v)
        # reps are RREF rows reduced against the boundaries, so read pivots
        return [red[p] for p in self._reps.pivots]

    def form(self, coords: Sequence) -> ExteriorForm:
        out = ExteriorForm(self.degree, self.ambient_dim)
        for c, r in zip(coords, self.representatives):
            if c:
                out = out + r * c
        return out


def _cohomology(g: LieAlgebra, p: int, weight: int | None) -> CohomologyBasis:
    n = g.dim
    dp, cols, rows = d_matrix(g, p, weight)
    z = Subspace(len(cols), kernel_basis(dp, len(cols)) if cols else [])
    if p >= 1:
        dprev, pcols, prow = d_matrix(g, p - 1, weight)
        assert list(prow) == list(cols)
        images = transpose(dprev, len(pcols)) if pcols and cols else []
        b = Subspace(len(cols), images)
    else:
        b = Subspace(len(cols))
    reduced = [b.reduce(v) for v in z.basis]
    reps_space = Subspace(len(cols), reduced)
    reps = [ExteriorForm.from_vector(p, n, cols, r) for r in reps_space.basis]
    return CohomologyBasis(p, n, list(cols), reps, b, z, weight)


def cohomology(g: LieAlgebra, p: int) -> CohomologyBasis:
    if not 0 <= p <= g.dim:
        raise ValueError("degree out of range")
    return _cohomology(g, p, None)


def homogeneous_cohomology(g: LieAlgebra, p: int, weight: int) -> CohomologyBasis:
    if g.weights is None:
        raise NoLayout("weight-graded cohomology needs a layout")
    return _cohomology(g, p, weight)


def weight_of_form(g: LieAlgebra, w: ExteriorForm) -> int | None:
    """Common weight of all monomials of w; None when w is inhomogeneous.

    The zero form has no weight and also returns None.
    """
    if g.weights is None:
        raise NoLayout("weights need a layout")
    ws = {form_weight_of_monomial(g.weights, m) for m in w.terms}
    return ws.pop() if len(ws) == 1 else None


def _restriction_nonzero(w: ExteriorForm, spaces: Sequence[Subspace]) -> bool:
    for vecs in itertools.product(*(s.basis for s in spaces)):
        if w(*vecs):
            return True
    return False


def form_filtration(g: LieAlgebra, w: ExteriorForm, series: list | None = None) -> int:
    """Smallest k with w vanishing on g^{k_1} x ... x g^{k_p} whenever sum k_i > k."""
    if series is None:
        series = lower_central_series(g)
    if series[-1].dim:
        raise NotNilpotent("filtration needs a nilpotent algebra")
    s = len(series) - 1
    if not w:
        return 0
    best = 0
    for ks in itertools.combinations_with_replacement(range(1, s + 1), w.degree):
        if sum(ks) > best and _restriction_nonzero(w, [series[k - 1] for k in ks]):
            best = sum(ks)
    return best


def wedge_square_space(n: int, sub: Subspace) -> Subspace:
    """Lambda^2(L) inside Lambda^2 for a subspace L of the dual."""
    mons = monomials(n, 2)
    vecs = []
    rows = sub.basis
    for a in range(len(rows)):
        fa = ExteriorForm(1, n, {(i,): c for i, c in enumerate(rows[a]) if c})
        for b in range(a + 1, len(rows)):
            fb = ExteriorForm(1, n, {(i,): c for i, c in enumerate(rows[b]) if c})
            vecs.append(fa.wedge(fb).to_vector(mons))
    return Subspace(len(mons), vecs)


def dual_chain_L(g: LieAlgebra) -> list[Subspace]:
    """L_0 = 0 and L_i = {rho : d rho in Lambda^2(L_{i-1})}, up to L_s = g*."""
    n = g.dim
    mons = monomials(n, 2)
    dcols = [d1(g, k).to_vector(mons) for k in range(n)]
    chain = [Subspace(n)]
    while chain[-1].dim < n:
        target = wedge_square_space(n, chain[-1])
        cols = [target.reduce(c) for c in dcols]
        nxt = Subspace(n, kernel_basis(transpose(cols, n), n))
        if nxt == chain[-1]:
            break
        chain.append(nxt)
    return chain


def set_has_filtration_s(g: LieAlgebra, cocycles: Sequence[ExteriorForm], s: int) -> bool:
    """True iff no nontrivial combination of the classes lies in F^{s-1} H^2.

    A class lies there when some representative (varying over the coboundary
    coset) vanishes on g^{k1} x g^{k2} for all k1 + k2 >= s.
    """
    n = g.dim
    for c in cocycles:
        if c.degree != 2 or differential(g, c):
            raise NotClosed("input forms must be closed 2-forms")
    m = len(cocycles)
    if m == 0:
        return True
    series = lower_central_series(g)
    if series[-1].dim:
        raise NotNilpotent("filtration needs a nilpotent algebra")
    depth = len(series) - 1
    rows = []
    for k1 in range(1, depth + 1):
        for k2 in range(k1, depth + 1):
            if k1 + k2 < s:
                continue
            for x in series[k1 - 1].basis:
                for y in series[k2 - 1].basis:
                    br = g.bracket(x, y)
                    rows.append([c(x, y) for c in cocycles] + list(br))
    if not rows:
        # F^{s-1} is everything
        return False
    # a combination that is a coboundary also shows up here (it vanishes
    # identically after subtracting d mu)
    kern = kernel_basis(rows, m + n)
    return not any(any(v[:m]) for v in kern)


def random_form(rng, n: int, p: int, density: float = 0.5, span: int = 3) -> ExteriorForm:
    terms = {}
    for m in monomials(n, p):
        if rng.random() < density:
            terms[m] = Fraction(rng.randint(-span, span), rng.randint(1, span))
    return ExteriorForm(p, n, terms)
