"""Central extensions by sets of 2-cocycles, and the quotient/read-off inverse."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cohomology import (
    ExteriorForm,
    NotClosed,
    d1,
    differential,
    monomials,
    set_has_filtration_s,
    weight_of_form,
)
from .lie import (
    LieAlgebra,
    change_basis,
    check_jacobi,
    lower_central_series,
    nil_index,
    quotient,
    unit,
)
from .linalg import Inconsistent, Q, det, identity, solve, transpose


class ExtensionError(ValueError):
    pass


@dataclass(frozen=True)
class ExtensionSpec:
    base: LieAlgebra
    cocycles: tuple
    new_names: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "cocycles", tuple(self.cocycles))
        if self.new_names is not None:
            object.__setattr__(self, "new_names", tuple(self.new_names))

    @property
    def m(self) -> int:
        return len(self.cocycles)


@dataclass
class Extension:
    algebra: LieAlgebra
    embedding: list  # (n+m) x m, columns are images of the new basis vectors
    projection: list  # n x (n+m)
    spec: ExtensionSpec


def _new_weights(base: LieAlgebra, cocycles: Sequence[ExteriorForm]):
    if base.weights is None:
        return None
    ws = []
    for c in cocycles:
        w = weight_of_form(base, c) if c else None
        if w is None:
            return None
        ws.append(w)
    return list(base.weights) + ws


def central_extension(spec_or_base, cocycles=None, new_names=None) -> Extension:
    """g~ = g + V with [x, y]~ = [x, y] + sum_l c_l(x, y) z_l; z_l appended last."""
    if isinstance(spec_or_base, ExtensionSpec):
        spec = spec_or_base
    else:
        spec = ExtensionSpec(spec_or_base, tuple(cocycles), new_names)
    base = spec.base
    n, m = base.dim, spec.m
    for c in spec.cocycles:
        if c.degree != 2 or c.ambient_dim != n:
            raise ExtensionError("cocycles must be 2-forms on the base")
        if differential(base, c):
            raise NotClosed(f"form {c} is not closed")
    br = {k: dict(v) for k, v in base.brackets.items()}
    for l, c in enumerate(spec.cocycles):
        for (i, j), coeff in c.terms.items():
            br.setdefault((i, j), {})[n + l] = coeff
    names = list(base.names)
    if spec.new_names is not None:
        names += list(spec.new_names)
    else:
        names += [f"z{l + 1}" for l in range(m)]
    if len(set(names)) != len(names):
        names = None
    g = LieAlgebra(n + m, br, names, _new_weights(base, spec.cocycles))
    bad = check_jacobi(g)
    assert not bad, f"Jacobi fails on {bad[:3]} despite closed cocycles"
    emb = transpose([unit(n + m, n + l) for l in range(m)], n + m) if m else [[] for _ in range(n + m)]
    proj = [unit(n + m, i) for i in range(n)]
    return Extension(g, emb, proj, spec)


def shift_by_coboundary(spec: ExtensionSpec, mus: Sequence[ExteriorForm]) -> ExtensionSpec:
    """Replace each c_l by c_l + d mu_l."""
    if len(mus) != spec.m:
        raise ExtensionError("need one 1-form per cocycle")
    new = []
    for c, mu in zip(spec.cocycles, mus):
        new.append(c + differential(spec.base, mu))
    return ExtensionSpec(spec.base, tuple(new), spec.new_names)


def coboundary_isomorphism(spec: ExtensionSpec, mus: Sequence[ExteriorForm]) -> list:
    """Matrix of f: ext(c + d mu) -> ext(c), f(x) = x - sum mu_l(x) z_l, f(z) = z."""
    n, m = spec.base.dim, spec.m
    f = identity(n + m)
    for l, mu in enumerate(mus):
        for (i,), c in mu.terms.items():
            f[n + l][i] -= c
    return f


def extension_witness(src_base: LieAlgebra, source, dst_base: LieAlgebra, target, phi, nu_weight: int | None = None):
    """Isomorphism ext(src_base, source) -> ext(dst_base, target) lifting phi.

    phi : src_base -> dst_base must be an isomorphism (columns = images).
    Solves phi^* c_l = sum_k B_lk c'_k + d nu_l on src_base for an invertible
    B and 1-forms nu_l, where c are the target and c' the source cocycles.
    Returns the (n+m) x (n+m) matrix, or None when no solution exists.
    With ``nu_weight`` the 1-forms nu only use dual vectors of that weight,
    which keeps the lift graded when phi is graded and the cocycles are
    homogeneous of that weight.
    """
    n, m = src_base.dim, len(target)
    if len(source) != m or dst_base.dim != n:
        raise ExtensionError("cocycle sets or bases of different size")
    mons = monomials(n, 2)
    dcols = [d1(src_base, k).to_vector(mons) for k in range(n)]
    if nu_weight is not None:
        zero = [Fraction(0)] * len(mons)
        dcols = [v if src_base.weights[k] == nu_weight else zero for k, v in enumerate(dcols)]
    srcv = [c.to_vector(mons) for c in source]
    mat = transpose(srcv + dcols, len(mons))
    B = []
    nus = []
    for c in target:
        rhs = c.pullback(phi).to_vector(mons)
        try:
            x = solve(mat, rhs, m + n)
        except Inconsistent:
            return None
        B.append(x[:m])
        nus.append(x[m:])
    if m and det(B) == 0:
        return None
    f = [[Fraction(0)] * (n + m) for _ in range(n + m)]
    for r in range(n):
        for c in range(n):
            f[r][c] = Q(phi[r][c])
    for l in range(m):
        for i in range(n):
            f[n + l][i] = nus[l][i]
        for k in range(m):
            f[n + l][n + k] = B[l][k]
    return f


@dataclass
class TheoremReport:
    s: int
    m: int
    predicted: bool  # the cocycle set has filtration s
    nil_index: int | None
    top_ideal_dim: int
    actual: bool  # nil-index s and dim g~^s = m

    @property
    def consistent(self) -> bool:
        return self.predicted == self.actual

    @property
    def nil_index_ok(self) -> bool:
        return self.nil_index == self.s

    @property
    def ideal_dim_ok(self) -> bool:
        return self.top_ideal_dim == self.m


def verify_extension_theorem(g: LieAlgebra, cocycles: Sequence[ExteriorForm]) -> TheoremReport:
    s0 = nil_index(g)
    if s0 is None:
        raise ExtensionError("base must be nilpotent")
    s = s0 + 1
    predicted = set_has_filtration_s(g, cocycles, s)
    ext = central_extension(g, cocycles).algebra
    series = lower_central_series(ext)
    s_ext = nil_index(ext)
    top = series[s - 1].dim if len(series) >= s else 0
    actual = s_ext == s and top == len(cocycles)
    return TheoremReport(s, len(cocycles), predicted, s_ext, top, actual)


@dataclass
class Roundtrip:
    base: LieAlgebra
    cocycles: list
    basis: list  # columns: adapted basis of the input, base part first
    ideal_dim: int

    def rebuild(self) -> LieAlgebra:
        return central_extension(self.base, self.cocycles).algebra


def roundtrip(g: LieAlgebra) -> Roundtrip:
    """Split off the last nonzero term of the lower central series."""
    if g.is_abelian():
        raise ExtensionError("abelian algebras have no canonical ideal to split off")
    series = lower_central_series(g)
    if series[-1].dim:
        raise ExtensionError("input is not nilpotent")
    ideal = series[-2]
    q = quotient(g, ideal)
    keep = q.section
    n = len(keep)
    cocycles = []
    for l, p in enumerate(ideal.pivots):
        terms = {}
        for a in range(n):
            for b in range(a + 1, n):
                v = g.basis_bracket(keep[a], keep[b])
                if v[p]:
                    terms[(a, b)] = v[p]
        cocycles.append(ExteriorForm(2, n, terms))
    base = q.algebra
    if g.weights is not None and base.weights is None:
        base = LieAlgebra(base.dim, base.brackets, base.names)
    columns = [unit(g.dim, i) for i in keep] + [list(r) for r in ideal.basis]
    return Roundtrip(base, cocycles, columns, ideal.dim)


def adapted_form(g: LieAlgebra, rt: Roundtrip) -> LieAlgebra:
    """g rewritten in the roundtrip's adapted basis (for comparison with rebuild())."""
    return change_basis(g, rt.basis)
