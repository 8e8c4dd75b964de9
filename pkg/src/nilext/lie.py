"""Lie algebras given by structure constants, and their lower central series."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import (
    Inconsistent,
    Q,
    Subspace,
    identity,
    inverse,
    kernel_basis,
    matvec,
    solve,
    transpose,
)


class NotNilpotent(ValueError):
    pass


class NotAnIdeal(ValueError):
    pass


class NoLayout(ValueError):
    pass


class LieAlgebra:
    """Finite-dimensional Lie algebra over Q.

    ``brackets`` maps ``(i, j)`` to ``{k: coeff}`` meaning
    ``[e_i, e_j] = sum coeff * e_k``.  Keys with ``i > j`` are accepted and
    flipped; only ``i < j`` is stored.  Indices are 0-based.
    """

    def __init__(
        self,
        dim: int,
        brackets: Mapping | None = None,
        names: Sequence[str] | None = None,
        weights: Sequence[int] | None = None,
    ):
        self.dim = dim
        self.names = list(names) if names is not None else [f"e{i + 1}" for i in range(dim)]
        if len(self.names) != dim:
            raise ValueError("wrong number of basis names")
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), terms in (brackets or {}).items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise ValueError(f"bracket index out of range: {(i, j)}")
            if i == j:
                if any(Q(c) for c in terms.values()):
                    raise ValueError("[e_i, e_i] must vanish")
                continue
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            row = table.setdefault((i, j), {})
            for k, c in terms.items():
                if not 0 <= k < dim:
                    raise ValueError(f"bracket target out of range: {k}")
                row[k] = row.get(k, Fraction(0)) + sign * Q(c)
        self.brackets = {}
        for key in sorted(table):
            row = {k: c for k, c in sorted(table[key].items()) if c}
            if row:
                self.brackets[key] = row
        if weights is not None:
            weights = tuple(int(w) for w in weights)
            if len(weights) != dim or any(w < 1 for w in weights):
                raise ValueError("weights must be positive, one per basis vector")
            for (i, j), row in self.brackets.items():
                for k in row:
                    if weights[k] != weights[i] + weights[j]:
                        raise ValueError(
                            f"layout violated by [{self.names[i]},{self.names[j]}] -> {self.names[k]}"
                        )
        self.weights = weights

    def __repr__(self):
        rels = ", ".join(
            f"[{self.names[i]},{self.names[j]}]="
            + "+".join(f"{c}*{self.names[k]}" for k, c in row.items())
            for (i, j), row in self.brackets.items()
        )
        return f"LieAlgebra(dim={self.dim}; {rels or 'abelian'})"

    def __eq__(self, other):
        return (
            isinstance(other, LieAlgebra)
            and self.dim == other.dim
            and self.brackets == other.brackets
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.dim, tuple((k, tuple(v.items())) for k, v in self.brackets.items())))

    def same_structure(self, other: "LieAlgebra") -> bool:
        """Equal structure constants, ignoring names and layout."""
        return self.dim == other.dim and self.brackets == other.brackets

    def with_weights(self, weights: Sequence[int] | None) -> "LieAlgebra":
        return LieAlgebra(self.dim, self.brackets, self.names, weights)

    def basis_bracket(self, i: int, j: int) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        if i == j:
            return out
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        for k, c in self.brackets.get((i, j), {}).items():
            out[k] = sign * c
        return out

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        if i == j:
            return Fraction(0)
        if i < j:
            return self.brackets.get((i, j), {}).get(k, Fraction(0))
        return -self.brackets.get((j, i), {}).get(k, Fraction(0))

    def bracket(self, x: Sequence, y: Sequence) -> list[Fraction]:
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError("dimension mismatch")
        out = [Fraction(0)] * self.dim
        for (i, j), row in self.brackets.items():
            c = Q(x[i]) * Q(y[j]) - Q(x[j]) * Q(y[i])
            if c:
                for k, v in row.items():
                    out[k] += c * v
        return out

    def ad(self, x: Sequence) -> list[list[Fraction]]:
        """Matrix of ad_x (columns are images of basis vectors)."""
        cols = [self.bracket(x, unit(self.dim, j)) for j in range(self.dim)]
        return transpose(cols, self.dim)

    def is_abelian(self) -> bool:
        return not self.brackets


def unit(n: int, i: int) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(n, {}, weights=[1] * n)


def check_jacobi(g: LieAlgebra) -> list[tuple[int, int, int]]:
    """Basis triples i<j<k on which the Jacobi identity fails (empty if none)."""
    n = g.dim
    bad = []
    for i in range(n):
        for j in range(i + 1, n):
            eij = g.basis_bracket(i, j)
            for k in range(j + 1, n):
                ejk = g.basis_bracket(j, k)
                eki = g.basis_bracket(k, i)
                t1 = g.bracket(unit(n, i), ejk)
                t2 = g.bracket(unit(n, j), eki)
                t3 = g.bracket(unit(n, k), eij)
                if any(a + b + c for a, b, c in zip(t1, t2, t3)):
                    bad.append((i, j, k))
    return bad


def bracket_spaces(g: LieAlgebra, a: Subspace, b: Subspace) -> Subspace:
    vecs = [g.bracket(u, v) for u in a.basis for v in b.basis]
    return Subspace(g.dim, vecs)


def lower_central_series(g: LieAlgebra, max_terms: int | None = None) -> list[Subspace]:
    """[g^1, g^2, ...] ending with the zero subspace, or with the first repeat
    if the series stabilises at a nonzero ideal (non-nilpotent case)."""
    full = Subspace.full(g.dim)
    series = [full]
    while series[-1].dim:
        nxt = bracket_spaces(g, full, series[-1])
        if nxt == series[-1]:
            break
        series.append(nxt)
        if max_terms and len(series) >= max_terms:
            break
    return series


def nil_index(g: LieAlgebra) -> int | None:
    """Nil-index s (g^s != 0, g^{s+1} = 0); None when g is not nilpotent.

    The zero algebra gets nil-index 0.
    """
    series = lower_central_series(g)
    if series[-1].dim:
        return None
    return len(series) - 1


def is_nilpotent(g: LieAlgebra) -> bool:
    return nil_index(g) is not None


def is_filiform(g: LieAlgebra) -> bool:
    s = nil_index(g)
    return s is not None and g.dim >= 2 and s == g.dim - 1


def center(g: LieAlgebra) -> Subspace:
    n = g.dim
    rows = []
    for j in range(n):
        for k in range(n):
            rows.append([g.structure_constant(i, j, k) for i in range(n)])
    return Subspace(n, kernel_basis(rows, n))


def is_ideal(g: LieAlgebra, sub: Subspace) -> bool:
    return all(sub.contains(g.bracket(unit(g.dim, i), v)) for i in range(g.dim) for v in sub.basis)


@dataclass
class Quotient:
    algebra: LieAlgebra
    projection: list[list[Fraction]]  # (dim q) x (dim g)
    section: list[int]  # standard coordinates kept as the quotient basis


def quotient(g: LieAlgebra, ideal: Subspace) -> Quotient:
    """g / ideal in the basis of non-pivot standard coordinates."""
    if not is_ideal(g, ideal):
        raise NotAnIdeal("subspace is not an ideal")
    keep = ideal.complement_indices()

    def project(v):
        red = ideal.reduce(v)
        return [red[c] for c in keep]

    br = {}
    for a, i in enumerate(keep):
        for b in range(a + 1, len(keep)):
            j = keep[b]
            p = project(g.basis_bracket(i, j))
            row = {k: c for k, c in enumerate(p) if c}
            if row:
                br[(a, b)] = row
    names = [g.names[i] for i in keep]
    try:
        # the inherited layout survives only for homogeneous ideals
        q = LieAlgebra(len(keep), br, names, None if g.weights is None else [g.weights[i] for i in keep])
    except ValueError:
        q = LieAlgebra(len(keep), br, names)
    proj = [project(unit(g.dim, i)) for i in range(g.dim)]
    return Quotient(q, transpose(proj, len(keep)), keep)


def direct_sum(g: LieAlgebra, h: LieAlgebra) -> LieAlgebra:
    n = g.dim
    br = dict(g.brackets)
    for (i, j), row in h.brackets.items():
        br[(i + n, j + n)] = {k + n: c for k, c in row.items()}
    weights = None
    if g.weights is not None and h.weights is not None:
        weights = list(g.weights) + list(h.weights)
    names = list(g.names) + list(h.names)
    if len(set(names)) != len(names):
        names = None
    return LieAlgebra(n + h.dim, br, names, weights)


def weight_blocks(g: LieAlgebra) -> dict[int, list[int]]:
    if g.weights is None:
        raise NoLayout("algebra has no weight layout")
    blocks: dict[int, list[int]] = {}
    for i, w in enumerate(g.weights):
        blocks.setdefault(w, []).append(i)
    return blocks


@dataclass(frozen=True)
class CarnotCheck:
    ok: bool
    witness: int | None = None

    def __bool__(self):
        return self.ok


def is_carnot_layout(g: LieAlgebra) -> CarnotCheck:
    """[g_1, g_i] = g_{i+1} for all i >= 1, as an equality of subspaces."""
    blocks = weight_blocks(g)
    top = max(blocks) if blocks else 0

    def span(w):
        return Subspace(g.dim, [unit(g.dim, i) for i in blocks.get(w, [])])

    g1 = span(1)
    for i in range(1, top):
        if bracket_spaces(g, g1, span(i)) != span(i + 1):
            return CarnotCheck(False, i)
    return CarnotCheck(True)


def associated_graded(g: LieAlgebra) -> LieAlgebra:
    """gr g for the lower-central-series filtration, with its natural layout."""
    series = lower_central_series(g)
    if series[-1].dim:
        raise NotNilpotent("associated graded needs a nilpotent algebra")
    vectors: list[list[Fraction]] = []
    weights: list[int] = []
    for i in range(len(series) - 1):
        nxt = series[i + 1]
        reduced = [nxt.reduce(v) for v in series[i].basis]
        comp = Subspace(g.dim, reduced)
        vectors.extend(list(v) for v in comp.basis)
        weights.extend([i + 1] * comp.dim)
    n = g.dim
    if n == 0:
        return LieAlgebra(0, {}, weights=[])
    change = transpose(vectors, n)  # columns = adapted basis
    inv = inverse(change)
    br = {}
    for a in range(n):
        for b in range(a + 1, n):
            w = weights[a] + weights[b]
            coords = matvec(inv, g.bracket(vectors[a], vectors[b]))
            row = {k: c for k, c in enumerate(coords) if c and weights[k] == w}
            if row:
                br[(a, b)] = row
    return LieAlgebra(n, br, weights=weights)


def _strata(g: LieAlgebra, v1: list) -> list[list] | None:
    """V_1 = span(v1), V_(k+1) = [V_1, V_k]; None unless they add up directly to g."""
    layers = [v1]
    total = Subspace(g.dim, v1)
    while True:
        nxt = Subspace(g.dim, [g.bracket(x, y) for x in v1 for y in layers[-1]])
        if nxt.dim == 0:
            break
        if (total + nxt).dim != total.dim + nxt.dim:
            return None
        layers.append([list(r) for r in nxt.basis])
        total = total + nxt
    return layers if total.dim == g.dim else None


def _grading_derivation(g: LieAlgebra, derived: Subspace):
    """A derivation D with D x = x mod [g, g], or None if there is none."""
    n = g.dim
    rows, rhs = [], []
    for i in range(n):
        for j in range(i + 1, n):
            cij = g.basis_bracket(i, j)
            for k in range(n):
                row = [Fraction(0)] * (n * n)
                for l, c in enumerate(cij):
                    if c:
                        row[k * n + l] += c
                for l in range(n):
                    c1 = g.structure_constant(l, j, k)
                    if c1:
                        row[l * n + i] -= c1
                    c2 = g.structure_constant(i, l, k)
                    if c2:
                        row[l * n + j] -= c2
                if any(row):
                    rows.append(row)
                    rhs.append(Fraction(0))
    for f in derived.annihilator().basis:
        for i in range(n):
            row = [Fraction(0)] * (n * n)
            for k in range(n):
                row[k * n + i] = f[k]
            rows.append(row)
            rhs.append(f[i])
    try:
        x = solve(rows, rhs, n * n)
    except Inconsistent:
        return None
    return [x[k * n:(k + 1) * n] for k in range(n)]


def carnot_model(g: LieAlgebra):
    """A layered copy of a Carnot algebra: (G, P) with G = change_basis(g, P).

    g is Carnot exactly when some derivation D acts as the identity on
    g/[g, g].  D is then invertible on [g, g] shifted by one, so ker(D - 1)
    is a complement of [g, g] generating a grading.  Returns None when g is
    not Carnot.
    """
    series = lower_central_series(g)
    if series[-1].dim:
        raise NotNilpotent("carnot_model needs a nilpotent algebra")
    derived = series[1] if len(series) > 1 else Subspace(g.dim)
    D = _grading_derivation(g, derived)
    if D is None:
        return None
    shifted = [[D[k][i] - (1 if k == i else 0) for i in range(g.dim)] for k in range(g.dim)]
    kern = kernel_basis(shifted, g.dim)
    # project the input's own complement vectors onto ker(D - 1) along [g, g],
    # so the first layer keeps the caller's degree-one coordinates
    mat = transpose(kern + [list(d) for d in derived.basis], g.dim)
    v1 = []
    for i in derived.complement_indices():
        c = solve(mat, unit(g.dim, i), g.dim)
        v1.append([sum(c[j] * kern[j][r] for j in range(len(kern))) for r in range(g.dim)])
    layers = _strata(g, v1)
    if layers is None:
        return None
    cols = [v for layer in layers for v in layer]
    weights = [k + 1 for k, layer in enumerate(layers) for _ in layer]
    return change_basis(g, cols, weights=weights), transpose(cols, g.dim)


def is_homomorphism(f: Sequence[Sequence], src: LieAlgebra, dst: LieAlgebra) -> bool:
    """f (dst.dim x src.dim, columns = images) satisfies f[x,y] = [fx,fy]."""
    cols = transpose([list(r) for r in f], src.dim)
    for i in range(src.dim):
        for j in range(i + 1, src.dim):
            lhs = matvec(f, src.basis_bracket(i, j))
            rhs = dst.bracket(cols[i], cols[j])
            if lhs != rhs:
                return False
    return True


def is_isomorphism(f, src: LieAlgebra, dst: LieAlgebra) -> bool:
    if src.dim != dst.dim:
        return False
    try:
        inverse([list(r) for r in f])
    except ValueError:
        return False
    return is_homomorphism(f, src, dst)


def change_basis(g: LieAlgebra, columns: Sequence[Sequence], weights=None, names=None) -> LieAlgebra:
    """Structure constants of g in a new basis (columns in old coordinates)."""
    n = g.dim
    vecs = [list(map(Q, c)) for c in columns]
    inv = inverse(transpose(vecs, n))
    br = {}
    for a in range(n):
        for b in range(a + 1, n):
            coords = matvec(inv, g.bracket(vecs[a], vecs[b]))
            row = {k: c for k, c in enumerate(coords) if c}
            if row:
                br[(a, b)] = row
    return LieAlgebra(n, br, names, weights)


__all__ = [
    "LieAlgebra",
    "NotNilpotent",
    "NotAnIdeal",
    "NoLayout",
    "CarnotCheck",
    "Quotient",
    "abelian",
    "unit",
    "check_jacobi",
    "lower_central_series",
    "nil_index",
    "is_nilpotent",
    "is_filiform",
    "center",
    "is_ideal",
    "quotient",
    "direct_sum",
    "weight_blocks",
    "is_carnot_layout",
    "associated_graded",
    "is_homomorphism",
    "is_isomorphism",
    "change_basis",
    "carnot_model",
    "bracket_spaces",
    "identity",
]
