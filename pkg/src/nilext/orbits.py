"""Automorphisms, derivations and the induced action on second cohomology.

Matrices of linear maps follow one convention throughout: column i is the
image of e_i.  The pullback of forms is ``(phi^* w)(x, y) = w(phi x, phi y)``
so ``phi^* e^k = sum_i phi[k][i] e^i``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import catalog
from .cohomology import (
    CohomologyBasis,
    ExteriorForm,
    cohomology,
    homogeneous_cohomology,
    monomials,
    set_has_filtration_s,
    weight_of_form,
)
from .lie import (
    LieAlgebra,
    NotNilpotent,
    is_carnot_layout,
    is_homomorphism,
    lower_central_series,
    nil_index,
    unit,
    weight_blocks,
)
from .linalg import (
    Inconsistent,
    Q,
    Subspace,
    det,
    identity,
    inverse,
    kernel_basis,
    matmul,
    rank,
    solve,
    transpose,
)


class NotCarnot(ValueError):
    pass


class NotAnAutomorphism(ValueError):
    pass


# ---------------------------------------------------------------------------
# automorphisms and derivations
# ---------------------------------------------------------------------------


@dataclass
class GradedAutomorphism:
    algebra: LieAlgebra
    matrix: list

    @property
    def blocks(self) -> dict[int, list]:
        out = {}
        for w, idx in weight_blocks(self.algebra).items():
            out[w] = [[self.matrix[r][c] for c in idx] for r in idx]
        return out


def _check_square(A, n):
    if len(A) != n or any(len(r) != n for r in A):
        raise ValueError(f"expected a {n}x{n} matrix")


def extend_degree_one_map(g: LieAlgebra, A: Sequence[Sequence]) -> GradedAutomorphism | None:
    """Extend an invertible map of g_1 to a graded automorphism of a Carnot algebra.

    Column r of A is the image of the r-th weight-1 basis vector in weight-1
    coordinates.  Returns None when the induced map does not respect the
    relations.
    """
    check = is_carnot_layout(g)
    if not check:
        raise NotCarnot(f"[g_1, g_i] != g_(i+1) at i = {check.witness}")
    blocks = weight_blocks(g)
    b1 = blocks[1]
    A = [[Q(x) for x in row] for row in A]
    _check_square(A, len(b1))
    if det(A) == 0:
        raise ValueError("singular degree-one map")
    n = g.dim
    images: list = [None] * n
    for c, i in enumerate(b1):
        v = [Fraction(0)] * n
        for r, k in enumerate(b1):
            v[k] = A[r][c]
        images[i] = v
    for w in sorted(blocks)[1:]:
        bw, prev = blocks[w], blocks[w - 1]
        pairs = [(i, j) for i in b1 for j in prev]
        cols = []
        for i, j in pairs:
            v = g.basis_bracket(i, j)
            cols.append([v[k] for k in bw])
        mat = transpose(cols, len(bw))
        for pos, t in enumerate(bw):
            coef = solve(mat, unit(len(bw), pos), len(pairs))
            img = [Fraction(0)] * n
            for c, (i, j) in zip(coef, pairs):
                if c:
                    img = [x + c * y for x, y in zip(img, g.bracket(images[i], images[j]))]
            images[t] = img
    phi = transpose(images, n)
    if not is_homomorphism(phi, g, g):
        return None
    return GradedAutomorphism(g, phi)


def derivations(g: LieAlgebra, allowed=None) -> list[list[list[Fraction]]]:
    """Basis of Der(g); ``allowed(k, i)`` may restrict which entries D[k][i] are free."""
    n = g.dim
    unknowns = [(k, i) for k in range(n) for i in range(n) if allowed is None or allowed(k, i)]
    pos = {u: a for a, u in enumerate(unknowns)}
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            cij = g.basis_bracket(i, j)
            for k in range(n):
                row = [Fraction(0)] * len(unknowns)
                # D[e_i, e_j]_k
                for l, c in enumerate(cij):
                    if c and (k, l) in pos:
                        row[pos[(k, l)]] += c
                # - [D e_i, e_j]_k - [e_i, D e_j]_k
                for l in range(n):
                    c1 = g.structure_constant(l, j, k)
                    if c1 and (l, i) in pos:
                        row[pos[(l, i)]] -= c1
                    c2 = g.structure_constant(i, l, k)
                    if c2 and (l, j) in pos:
                        row[pos[(l, j)]] -= c2
                if any(row):
                    rows.append(row)
    kern = kernel_basis(rows, len(unknowns)) if rows else [unit(len(unknowns), a) for a in range(len(unknowns))]
    out = []
    for v in kern:
        D = [[Fraction(0)] * n for _ in range(n)]
        for (k, i), x in zip(unknowns, v):
            D[k][i] = x
        out.append(D)
    return out


def is_derivation(g: LieAlgebra, D) -> bool:
    n = g.dim
    cols = transpose(D, n)
    for i in range(n):
        for j in range(i + 1, n):
            lhs = [sum((D[k][l] * c for l, c in enumerate(g.basis_bracket(i, j)) if c), Fraction(0)) for k in range(n)]
            a = g.bracket(cols[i], unit(n, j))
            b = g.bracket(unit(n, i), cols[j])
            if lhs != [x + y for x, y in zip(a, b)]:
                return False
    return True


def graded_derivations(g: LieAlgebra):
    w = g.weights
    return derivations(g, lambda k, i: w[k] == w[i])


def positive_derivations(g: LieAlgebra):
    """Derivations raising weight; exponentials of these are unipotent automorphisms."""
    w = g.weights
    return derivations(g, lambda k, i: w[k] > w[i])


def exp_nilpotent(D) -> list:
    n = len(D)
    out = identity(n)
    term = identity(n)
    for k in range(1, n + 1):
        term = [[x / k for x in row] for row in matmul(term, D)]
        if not any(any(r) for r in term):
            break
        out = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(out, term)]
    return out


SAMPLE_VALUES = [Fraction(x) for x in (1, -1, 2, -2, 3, Fraction(1, 2), Fraction(-1, 3), 0)]


def sample_matrix(rng: random.Random, n: int, values=SAMPLE_VALUES) -> list:
    while True:
        A = [[rng.choice(values) for _ in range(n)] for _ in range(n)]
        if det(A) != 0:
            return A


def structured_degree_one_maps(n: int):
    """Permutation, diagonal-sign and elementary matrices, in a fixed order."""
    import itertools

    seen = []
    for perm in itertools.permutations(range(n)):
        P = [[Fraction(int(perm[c] == r)) for c in range(n)] for r in range(n)]
        seen.append(P)
    for r in range(n):
        for c in range(n):
            if r == c:
                continue
            for v in (1, -1, 2, Fraction(1, 2)):
                E = identity(n)
                E[r][c] = Fraction(v)
                seen.append(E)
    for r in range(n):
        for v in (-1, 2, Fraction(1, 2)):
            E = identity(n)
            E[r][r] = Fraction(v)
            seen.append(E)
    return seen


def random_graded_automorphism(g: LieAlgebra, rng: random.Random, tries: int = 50):
    """A random graded automorphism of a Carnot algebra (None if none found)."""
    k = len(weight_blocks(g)[1])
    for _ in range(tries):
        phi = extend_degree_one_map(g, sample_matrix(rng, k))
        if phi is not None:
            return phi.matrix
    return None


def random_automorphism(g: LieAlgebra, rng: random.Random, tries: int = 50):
    """Graded automorphism composed with the exponential of a positive derivation."""
    phi = random_graded_automorphism(g, rng, tries)
    if phi is None:
        return None
    ders = positive_derivations(g)
    D = [[Fraction(0)] * g.dim for _ in range(g.dim)]
    for E in ders:
        c = rng.choice(SAMPLE_VALUES)
        if c:
            D = [[a + c * b for a, b in zip(r1, r2)] for r1, r2 in zip(D, E)]
    return matmul(phi, exp_nilpotent(D))


# ---------------------------------------------------------------------------
# action on H^2
# ---------------------------------------------------------------------------


def derivation_pullback(D, w: ExteriorForm) -> ExteriorForm:
    """D^* w = sum over slots of w with D inserted (infinitesimal pullback)."""
    n = w.ambient_dim
    ones = [ExteriorForm(1, n, {(i,): D[k][i] for i in range(n) if D[k][i]}) for k in range(n)]
    out = ExteriorForm(w.degree, n)
    for idx, c in w.terms.items():
        for r, k in enumerate(idx):
            left = ExteriorForm(r, n, {idx[:r]: c})
            right = ExteriorForm(len(idx) - r - 1, n, {idx[r + 1 :]: 1})
            out = out + left.wedge(ones[k]).wedge(right)
    return out


class ClassFrame:
    """A chosen basis of a subspace of H^p given by explicit cocycles."""

    def __init__(self, h: CohomologyBasis, forms: Sequence[ExteriorForm], names=None):
        self.h = h
        self.forms = list(forms)
        self.names = list(names) if names else [f"c{i + 1}" for i in range(len(self.forms))]
        cols = [h.coordinates(f) for f in self.forms]
        self._mat = transpose(cols, h.dim) if cols else []
        if rank(self._mat) != len(self.forms):
            raise ValueError("frame forms are dependent in cohomology")

    @property
    def dim(self) -> int:
        return len(self.forms)

    def coords(self, w: ExteriorForm) -> list[Fraction]:
        """Coordinates of the class of w; raises Inconsistent if outside the span."""
        return solve(self._mat, self.h.coordinates(w), self.dim)

    def form(self, x: Sequence) -> ExteriorForm:
        out = ExteriorForm(self.h.degree, self.h.ambient_dim)
        for c, f in zip(x, self.forms):
            if Q(c):
                out = out + f * Q(c)
        return out

    def action(self, phi) -> list:
        """Matrix M with phi^*(sum x_j f_j) = sum (M x)_i f_i."""
        cols = [self.coords(f.pullback(phi)) for f in self.forms]
        return transpose(cols, self.dim)


def pullback_matrix(phi, h: CohomologyBasis) -> list:
    """Action of phi^* on H^p in the representative basis; checks it descends."""
    for b in h.boundary_space.basis:
        w = ExteriorForm.from_vector(h.degree, h.ambient_dim, h.monomials, b)
        if not h.is_coboundary(w.pullback(phi)):
            raise NotAnAutomorphism("pullback does not preserve coboundaries")
    cols = []
    for r in h.representatives:
        cols.append(h.coordinates(r.pullback(phi)))
    return transpose(cols, h.dim)


def pullback_on_H2(phi, h: CohomologyBasis, coords: Sequence) -> list[Fraction]:
    w = h.form(coords)
    return h.coordinates(w.pullback(phi))


# ---------------------------------------------------------------------------
# infinitesimal orbit dimension
# ---------------------------------------------------------------------------

OPEN = "open orbit certified"
MODULI = "moduli direction found"
INCONCLUSIVE = "inconclusive"


@dataclass
class OrbitTangent:
    rank: int
    grassmannian_dim: int
    derivations_used: int
    restricted: bool

    @property
    def status(self) -> str:
        if self.rank == self.grassmannian_dim:
            return OPEN
        return INCONCLUSIVE if self.restricted else MODULI


def orbit_tangent_dimension(g: LieAlgebra, forms: Sequence[ExteriorForm], space: CohomologyBasis | None = None) -> OrbitTangent:
    """Rank of Der(g) acting on the point span(forms) of Gr(m, H^2).

    With a weight-homogeneous ``space`` only weight-preserving derivations are
    used, so a rank deficit is reported as inconclusive.
    """
    if space is None:
        space = cohomology(g, 2)
    restricted = space.weight is not None
    ders = graded_derivations(g) if restricted else derivations(g)
    h = space.dim
    pts = [space.coordinates(f) for f in forms]
    L = Subspace(h, pts)
    m = len(forms)
    if L.dim != m:
        raise ValueError("classes are dependent")
    basis = [list(v) for v in L.basis]
    vecs = []
    for D in ders:
        v = []
        for b in basis:
            w = space.form(b)
            moved = space.coordinates(derivation_pullback(D, w))
            v.extend(L.reduce(moved))
        vecs.append(v)
    r = rank(vecs) if vecs else 0
    return OrbitTangent(r, m * (h - m), len(ders), restricted)


# ---------------------------------------------------------------------------
# m_2(5)
# ---------------------------------------------------------------------------

M25_NAMES = ["Omega7", "omega7", "omega5"]


def m25_frame() -> ClassFrame:
    g = catalog.m2_5()
    c = catalog.m25_cocycles()
    return ClassFrame(cohomology(g, 2), [c[k] for k in M25_NAMES], M25_NAMES)


def m25_automorphism(alpha, beta3=0, beta4=0, beta5=0, beta6=0, alpha3=0, alpha4=0, alpha5=0, alpha6=0):
    """Automorphism of m_2(5) from its action on the dual basis.

    phi^* e^1 = a e^1, phi^* e^2 = a^2 e^2, phi^* e^3 = a^3 e^3 + b3 e^2 + a3 e^1, ...
    """
    a, b3, b4, b5, b6 = map(Q, (alpha, beta3, beta4, beta5, beta6))
    a3, a4, a5, a6 = map(Q, (alpha3, alpha4, alpha5, alpha6))
    if a == 0:
        raise ValueError("alpha must be nonzero")
    M = [
        [a, 0, 0, 0, 0, 0],
        [0, a**2, 0, 0, 0, 0],
        [a3, b3, a**3, 0, 0, 0],
        [a4, b4, a * b3, a**4, 0, 0],
        [a5, b5, a * b4 - a3 * a**2, a**2 * b3, a**5, 0],
        [a6, b6, a * b5 - a4 * a**2, a**2 * b4 - a3 * a**3, a**3 * b3, a**6],
    ]
    M = [[Q(x) for x in row] for row in M]
    if not is_homomorphism(M, catalog.m2_5(), catalog.m2_5()):
        raise NotAnAutomorphism("parameters do not define an automorphism")
    return M


def m25_orbit_label(x: Sequence, field: str = "real"):
    """Orbit of (x1 : x2 : x3) in P(H^2(m_2(5))) in the frame Omega7, omega7, omega5.

    Returns (label, parameter or None, representative).
    """
    x1, x2, x3 = map(Q, x)
    if not (x1 or x2 or x3):
        raise ValueError("zero vector has no projective class")
    if x2:
        if x1:
            t = x2 / x1
            return ("line", t, (1, t, 0))
        return ("polar-line", None, (0, 1, 0))
    if x1 == 0:
        return ("origin", None, (0, 0, 1))
    if x3 == 0:
        return ("infinity-point", None, (1, 0, 0))
    if field == "complex":
        return ("ray", None, (1, 0, 1))
    if (x1 > 0) == (x3 > 0):
        return ("plus-ray", None, (1, 0, 1))
    return ("minus-ray", None, (-1, 0, 1))


def m25_normal_form(x: Sequence, field: str = "real"):
    return m25_orbit_label(x, field)


# ---------------------------------------------------------------------------
# L(2,3)
# ---------------------------------------------------------------------------


def l23_frame() -> ClassFrame:
    return ClassFrame(cohomology(catalog.l23(), 2), catalog.l23_cocycles(), ["a1^a3", "a1^b3+b1^a3", "b1^b3"])


def l23_printed_action(a1, b1, r1, m1) -> list:
    """The 3x3 matrix D * Sym^2 used for the action on H^2(L(2,3)), D = a1 m1 - b1 r1."""
    a1, b1, r1, m1 = map(Q, (a1, b1, r1, m1))
    D = a1 * m1 - b1 * r1
    M = [
        [a1 * a1, 2 * r1 * a1, r1 * r1],
        [a1 * b1, r1 * b1 + a1 * m1, m1 * r1],
        [b1 * b1, 2 * m1 * b1, m1 * m1],
    ]
    return [[D * x for x in row] for row in M]


def l23_dual_degree_one(a1, b1, r1, m1) -> list:
    """Degree-one map with phi^* a^1 = a1 a^1 + r1 b^1 and phi^* b^1 = b1 a^1 + m1 b^1."""
    return [[Q(a1), Q(r1)], [Q(b1), Q(m1)]]


def l23_orbit_label(x: Sequence, field: str = "real") -> str:
    """Label by the discriminant x2^2 - x1 x3 (invariant up to positive factors)."""
    x1, x2, x3 = map(Q, x)
    if not (x1 or x2 or x3):
        return "zero"
    disc = x2 * x2 - x1 * x3
    if disc == 0:
        return "parabola"
    if field == "complex":
        return "generic"
    return "outside" if disc > 0 else "inside"


# ---------------------------------------------------------------------------
# L~(2,4)
# ---------------------------------------------------------------------------


def ltilde24_frame() -> ClassFrame:
    g = catalog.l_tilde_2_4()
    return ClassFrame(homogeneous_cohomology(g, 2, 5), catalog.ltilde24_cocycles(), ["v1", "v2", "v3", "v4"])


def ltilde24_printed_action(alpha, rho, mu) -> list:
    """The lower-triangular group action on weight-5 classes in the frame v1..v4, as tabulated."""
    a, r, m = map(Q, (alpha, rho, mu))
    M = [
        [a * a, 3 * r * a, a * r, 2 * r * r],
        [0, a * m, 0, m * r],
        [0, 0, a * m, m * r],
        [0, 0, 0, m * m],
    ]
    s = a * a * m
    return [[s * x for x in row] for row in M]


def ltilde24_dual_degree_one(alpha, rho, mu) -> list:
    """Degree-one map with phi^* a^1 = alpha a^1 + rho b^1 and phi^* b^1 = mu b^1."""
    return [[Q(alpha), Q(rho)], [Fraction(0), Q(mu)]]


def ltilde24_invariant(x: Sequence, field: str = "real"):
    """Orbit label for (x1 : x2 : x3 : x4) under the tabulated lower-triangular action.

    Returns (label, parameter or None, representative).
    """
    x1, x2, x3, x4 = map(Q, x)
    if not (x1 or x2 or x3 or x4):
        raise ValueError("zero vector has no projective class")
    if x4:
        X, Y, Z = x1 / x4, x2 / x4, x3 / x4
        if Y != Z:
            t = (X - Y * Y - Y * Z) / (Z - Y) ** 2
            return ("t", t, (t, 0, 1, 1))
        q = X - 2 * Y * Y
        if q == 0:
            return ("parabola-orbit", None, (0, 0, 0, 1))
        if field == "complex":
            return ("plane-generic", None, (1, 0, 0, 1))
        return ("plane-plus", None, (1, 0, 0, 1)) if q > 0 else ("plane-minus", None, (-1, 0, 0, 1))
    if x2 == 0 and x3 == 0:
        return ("point-at-infinity", None, (1, 0, 0, 0))
    special = 3 * x2 + x3 == 0
    if special and x1:
        return ("line-shifted", Fraction(-1, 3), (1, Fraction(-1, 3), 1, 0))
    if x3 == 0:
        return ("line", None, (0, 1, 0, 0))
    tau = x2 / x3
    return ("line", tau, (0, tau, 1, 0))


def quadric_type(t) -> str:
    """Type of F_t = t(z-y)^2 + y^2 + yz - x by the determinant of its (y, z) quadratic part."""
    t = Q(t)
    # (t+1) y^2 + (1-2t) yz + t z^2
    a, b, c = t + 1, (1 - 2 * t) / 2, t
    d = a * c - b * b
    if d < 0:
        return "hyperbolic-paraboloid"
    if d == 0:
        return "parabolic-cylinder"
    return "elliptic-paraboloid"


# ---------------------------------------------------------------------------
# orbit equivalence of spans
# ---------------------------------------------------------------------------


@dataclass
class OrbitResult:
    status: str  # "yes" | "no" | "undecided"
    witness: list | None = None  # automorphism phi with phi^* span2 = span1
    change: list | None = None  # m x m matrix A with phi^* c2_l = sum_k A_lk c1_k mod coboundaries
    invariant: str | None = None
    values: tuple | None = None
    tried: int = 0
    notes: list = field(default_factory=list)


def span_subspace(h: CohomologyBasis, forms: Sequence[ExteriorForm]) -> Subspace:
    return Subspace(h.dim, [h.coordinates(f) for f in forms])


def _change_matrix(h, forms1, forms2, phi):
    """A with phi^* c2_l = sum_k A[l][k] c1_k in H^2, or None."""
    cols = [h.coordinates(f) for f in forms1]
    mat = transpose(cols, h.dim)
    A = []
    for f in forms2:
        try:
            A.append(solve(mat, h.coordinates(f.pullback(phi)), len(forms1)))
        except Inconsistent:
            return None
    return A if det(A) != 0 else None


def filtration_profile(g: LieAlgebra, forms) -> tuple:
    """For each s, does the span have filtration s."""
    s_max = (nil_index(g) or 0) + 1
    return tuple(set_has_filtration_s(g, forms, s) for s in range(2, s_max + 1))


def weight_profile(g: LieAlgebra, forms) -> tuple | None:
    if g.weights is None:
        return None
    return tuple(sorted(str(weight_of_form(g, f)) for f in forms))


def _registered_invariant(g: LieAlgebra, forms, field_: str):
    """Algebra-specific exact orbit invariants for one-dimensional spans."""
    if len(forms) != 1:
        return None
    if g.same_structure(catalog.m2_5()):
        fr = m25_frame()
        return "m25-orbit", m25_orbit_label(fr.coords(forms[0]), field_)[:2]
    if g.same_structure(catalog.l23()):
        fr = l23_frame()
        try:
            return "l23-discriminant", l23_orbit_label(fr.coords(forms[0]), field_)
        except Inconsistent:
            return None
    return None


def _invariants(g, h, forms, field_):
    out = []
    if h.weight is not None:
        # weights of representatives only survive graded automorphisms
        out.append(("weight-profile", weight_profile(g, forms)))
    out.append(("filtration-profile", filtration_profile(g, forms)))
    reg = _registered_invariant(g, forms, field_)
    if reg:
        out.append(reg)
    out.append(("orbit-tangent-rank", orbit_tangent_dimension(g, forms, h).rank))
    return out


def _candidate_automorphisms(g: LieAlgebra, rng: random.Random, budget: int, graded_only: bool = False):
    """Deterministic stream of automorphisms to try as orbit witnesses."""
    if g.same_structure(catalog.m2_5()):
        for _ in range(budget):
            vals = [rng.choice(SAMPLE_VALUES) for _ in range(8)]
            a = rng.choice([v for v in SAMPLE_VALUES if v])
            yield m25_automorphism(a, *vals)
        return
    if g.weights is None or not is_carnot_layout(g):
        return
    k = len(weight_blocks(g)[1])
    count = 0
    for A in structured_degree_one_maps(k):
        if count >= budget:
            return
        count += 1
        phi = extend_degree_one_map(g, A)
        if phi is not None:
            yield phi.matrix
    pos = positive_derivations(g)
    while count < budget:
        count += 1
        phi = extend_degree_one_map(g, sample_matrix(rng, k))
        if phi is None:
            continue
        yield phi.matrix
        if pos and not graded_only:
            D = [[Fraction(0)] * g.dim for _ in range(g.dim)]
            for E in pos:
                c = rng.choice(SAMPLE_VALUES)
                if c:
                    D = [[a + c * b for a, b in zip(r1, r2)] for r1, r2 in zip(D, E)]
            yield matmul(phi.matrix, exp_nilpotent(D))


def symplectic_normal_basis(w: ExteriorForm) -> tuple[list, int]:
    """Basis (columns) in which the 2-form w reads e1^e2 + ... + e(2r-1)^e(2r), and r."""
    n = w.ambient_dim
    vecs = [unit(n, i) for i in range(n)]
    chosen = []
    r = 0
    while True:
        pair = None
        for a in range(len(vecs)):
            for b in range(a + 1, len(vecs)):
                if w(vecs[a], vecs[b]):
                    pair = (a, b)
                    break
            if pair:
                break
        if pair is None:
            break
        a, b = pair
        u, v = vecs[a], vecs[b]
        c = w(u, v)
        v = [x / c for x in v]
        rest = []
        for k, x in enumerate(vecs):
            if k in (a, b):
                continue
            # make x orthogonal to u and v
            p, q = w(x, v), w(x, u)
            rest.append([xi - p * ui + q * vi for xi, ui, vi in zip(x, u, v)])
        chosen += [u, v]
        vecs = rest
        r += 1
    basis = chosen + Subspace(n, vecs).basis if vecs else chosen
    return transpose([list(b) for b in basis], n), r


def orbit_equivalent_graded(
    g: LieAlgebra,
    span1: Sequence[ExteriorForm],
    span2: Sequence[ExteriorForm],
    budget: int = 200,
    seed: int = 0,
    field: str = "real",
    space: CohomologyBasis | None = None,
) -> OrbitResult:
    """Are span1 and span2 in the same GL_m x Aut orbit of Gr(m, H^2)?"""
    if len(span1) != len(span2):
        raise ValueError("spans of different dimension")
    h = space if space is not None else cohomology(g, 2)
    s1, s2 = span_subspace(h, span1), span_subspace(h, span2)
    if s1.dim != len(span1) or s2.dim != len(span2):
        raise ValueError("span elements are dependent in cohomology")
    n = g.dim
    if s1 == s2:
        ident = identity(n)
        return OrbitResult("yes", ident, _change_matrix(h, span1, span2, ident), tried=0)
    for (name, v1), (_, v2) in zip(_invariants(g, h, span1, field), _invariants(g, h, span2, field)):
        if v1 != v2:
            return OrbitResult("no", invariant=name, values=(v1, v2))
    # Aut of an abelian algebra is GL_n; with all weights 1 that is also Aut_gr
    full_gl = h.weight is None or (g.weights is not None and set(g.weights) == {1})
    if g.is_abelian() and len(span1) == 1 and full_gl:
        P1, r1 = symplectic_normal_basis(span1[0])
        P2, r2 = symplectic_normal_basis(span2[0])
        if r1 != r2:
            return OrbitResult("no", invariant="rank", values=(2 * r1, 2 * r2))
        phi = matmul(P2, inverse(P1))
        return OrbitResult("yes", phi, _change_matrix(h, span1, span2, phi), tried=1)
    rng = random.Random(seed)
    tried = 0
    for phi in _candidate_automorphisms(g, rng, budget, graded_only=h.weight is not None):
        tried += 1
        moved = Subspace(h.dim, [h.coordinates(f.pullback(phi)) for f in span2])
        if moved == s1:
            return OrbitResult("yes", phi, _change_matrix(h, span1, span2, phi), tried=tried)
    return OrbitResult("undecided", tried=tried, notes=["no witness in the sample grid; invariants agree"])
