"""Isomorphism testing and the recurrent classification by central extensions."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import catalog
from .cohomology import ExteriorForm, cohomology, homogeneous_cohomology, set_has_filtration_s
from .extension import central_extension, extension_witness, roundtrip
from .lie import (
    LieAlgebra,
    NotNilpotent,
    abelian,
    associated_graded,
    carnot_model,
    center,
    is_carnot_layout,
    is_filiform,
    is_isomorphism,
    lower_central_series,
    nil_index,
)
from .linalg import identity, inverse, matmul
from .orbits import ClassFrame, derivations, orbit_equivalent_graded


@dataclass(frozen=True)
class Fingerprint:
    dim: int
    lcs: tuple
    h1: int
    h2: int
    h2_weights: tuple  # (weight, dim) pairs of H^2 of the associated graded algebra
    der: int
    center: int

    def differences(self, other: "Fingerprint") -> list[str]:
        return [f for f in self.__dataclass_fields__ if getattr(self, f) != getattr(other, f)]


def fingerprint(g: LieAlgebra) -> Fingerprint:
    series = lower_central_series(g)
    if series[-1].dim:
        raise NotNilpotent("fingerprint needs a nilpotent algebra")
    lcs = tuple(s.dim for s in series)
    h1 = cohomology(g, 1).dim
    h2 = cohomology(g, 2).dim
    gr = associated_graded(g)
    top = 2 * max(gr.weights) if gr.weights else 0
    prof = []
    for w in range(2, top + 1):
        d = homogeneous_cohomology(gr, 2, w).dim
        if d:
            prof.append((w, d))
    return Fingerprint(g.dim, lcs, h1, h2, tuple(prof), len(derivations(g)), center(g).dim)


# ---------------------------------------------------------------------------
# isomorphism
# ---------------------------------------------------------------------------


@dataclass
class IsoResult:
    status: str  # "yes" | "no" | "undecided"
    witness: list | None = None  # g -> h, columns are images
    invariant: str | None = None
    values: tuple | None = None
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.status == "yes"


def _ltilde24_invariant(base: LieAlgebra, forms):
    """Exact invariant of one weight-5 class of L~(2,4) under its full automorphism group.

    Automorphisms act on the weight-5 part (modulo weight 4) through the
    graded group, which is the torus diag(alpha, mu) and the swap of the two
    generators.  Invariant: zero pattern up to reversal and the rational
    invariants x1^2 x4 / x3^3, x4^2 x1 / x2^3.
    """
    if len(forms) != 1 or not base.same_structure(catalog.l_tilde_2_4()):
        return None
    fr = ClassFrame(cohomology(base, 2), catalog.ltilde24_cocycles() + [catalog.ltilde24_weight4_cocycle()])
    x1, x2, x3, x4 = fr.coords(forms[0])[:4]
    if not (x1 or x2 or x3 or x4):
        return ("weight-4 only",)
    pat = tuple(int(v == 0) for v in (x1, x2, x3, x4))
    pat = min(pat, pat[::-1])
    vals = []
    if x3:
        vals.append(str(x1 * x1 * x4 / x3**3))
    if x2:
        vals.append(str(x4 * x4 * x1 / x2**3))
    return (pat, tuple(sorted(vals)))


def _layered(g: LieAlgebra):
    """(G, P) with G a layered Carnot copy of g and P: G -> g, or None."""
    if g.weights is not None and is_carnot_layout(g):
        return g, identity(g.dim)
    return carnot_model(g)


def _is_graded(f, g: LieAlgebra, h: LieAlgebra) -> bool:
    return all(not f[r][c] or h.weights[r] == g.weights[c] for r in range(h.dim) for c in range(g.dim))


def _isomorphic_graded(g: LieAlgebra, h: LieAlgebra, budget, seed, field) -> IsoResult:
    """Graded isomorphism of two layered Carnot algebras, through graded maps only."""
    if sorted(g.weights) != sorted(h.weights):
        return IsoResult("no", invariant="layer-dims", values=(tuple(sorted(g.weights)), tuple(sorted(h.weights))))
    if g.same_structure(h) and g.weights == h.weights:
        return IsoResult("yes", identity(g.dim))
    if g.is_abelian():
        return IsoResult("yes", identity(g.dim))
    rg, rh = roundtrip(g), roundtrip(h)
    if rg.base.weights is None or rh.base.weights is None:
        return IsoResult("undecided", notes=["quotient lost its layout"])
    sub = _isomorphic_graded(rg.base, rh.base, budget, seed, field)
    if sub.status != "yes":
        return sub if sub.status == "no" else IsoResult("undecided", notes=sub.notes)
    psi = sub.witness
    Cg = rg.cocycles
    Ch = [c.pullback(psi) for c in rh.cocycles]
    w = max(g.weights)
    inv_g, inv_h = _ltilde24_invariant(rg.base, Cg), _ltilde24_invariant(rg.base, Ch)
    if inv_g is not None and inv_g != inv_h:
        return IsoResult("no", invariant="ltilde24-weight5-orbit", values=(inv_g, inv_h))
    space = homogeneous_cohomology(rg.base, 2, w)
    res = orbit_equivalent_graded(rg.base, Cg, Ch, budget, seed, field, space=space)
    if res.status == "no":
        return IsoResult("no", invariant=res.invariant, values=res.values)
    if res.status != "yes":
        return IsoResult("undecided", notes=res.notes + [f"tried {res.tried} graded automorphisms"])
    Phi = matmul(psi, res.witness)
    F = extension_witness(rg.base, Cg, rh.base, rh.cocycles, Phi, nu_weight=w)
    if F is None:
        return IsoResult("undecided", notes=["orbit witness did not lift"])
    Bg = [list(r) for r in zip(*rg.basis)]
    Bh = [list(r) for r in zip(*rh.basis)]
    f = matmul(matmul(Bh, F), inverse(Bg))
    if not is_isomorphism(f, g, h) or not _is_graded(f, g, h):
        raise AssertionError("constructed witness is not a graded isomorphism")
    return IsoResult("yes", f)


def isomorphic(g: LieAlgebra, h: LieAlgebra, budget: int = 200, seed: int = 0, field: str = "real") -> IsoResult:
    """Decide g ~= h by fingerprints, then recursively through the top central quotient.

    Carnot inputs are moved to layered copies and compared through graded
    maps; everything else goes through the general recursion, whose orbit
    step only has sampled automorphisms to offer.
    """
    if g.dim != h.dim:
        return IsoResult("no", invariant="dim", values=(g.dim, h.dim))
    if g.same_structure(h):
        return IsoResult("yes", identity(g.dim))
    fg, fh = fingerprint(g), fingerprint(h)
    diff = fg.differences(fh)
    if diff:
        k = diff[0]
        return IsoResult("no", invariant=k, values=(getattr(fg, k), getattr(fh, k)))
    if g.is_abelian():
        return IsoResult("yes", identity(g.dim))
    lg, lh = _layered(g), _layered(h)
    if lg is not None and lh is not None:
        (G, Pg), (H, Ph) = lg, lh
        res = _isomorphic_graded(G, H, budget, seed, field)
        if res.status == "yes":
            res.witness = matmul(matmul(Ph, res.witness), inverse(Pg))
            if not is_isomorphism(res.witness, g, h):
                raise AssertionError("transported witness is not an isomorphism")
        return res
    return _isomorphic_general(g, h, budget, seed, field)


def _isomorphic_general(g: LieAlgebra, h: LieAlgebra, budget, seed, field) -> IsoResult:
    rg, rh = roundtrip(g), roundtrip(h)
    sub = isomorphic(rg.base, rh.base, budget, seed, field)
    if sub.status == "no":
        return IsoResult("no", invariant=f"quotient/{sub.invariant}", values=sub.values)
    if sub.status != "yes":
        return IsoResult("undecided", notes=["quotients undecided"] + sub.notes)
    psi = sub.witness
    Cg = rg.cocycles
    Ch = [c.pullback(psi) for c in rh.cocycles]
    inv_g, inv_h = _ltilde24_invariant(rg.base, Cg), _ltilde24_invariant(rg.base, Ch)
    if inv_g is not None and inv_g != inv_h:
        return IsoResult("no", invariant="ltilde24-weight5-orbit", values=(inv_g, inv_h))
    res = orbit_equivalent_graded(rg.base, Cg, Ch, budget, seed, field)
    if res.status == "no":
        return IsoResult("no", invariant=res.invariant, values=res.values)
    if res.status != "yes":
        return IsoResult("undecided", notes=res.notes + [f"tried {res.tried} automorphisms"])
    Phi = matmul(psi, res.witness)
    F = extension_witness(rg.base, Cg, rh.base, rh.cocycles, Phi)
    if F is None:
        return IsoResult("undecided", notes=["orbit witness did not lift"])
    Bg = [list(r) for r in zip(*rg.basis)]
    Bh = [list(r) for r in zip(*rh.basis)]
    f = matmul(matmul(Bh, F), inverse(Bg))
    if not is_isomorphism(f, g, h):
        raise AssertionError("constructed witness is not an isomorphism")
    return IsoResult("yes", f)


# ---------------------------------------------------------------------------
# classification trees
# ---------------------------------------------------------------------------


@dataclass
class ClassificationNode:
    id: int
    algebra: LieAlgebra
    parent: int | None
    cocycles: list
    status: str = "canonical"  # canonical | duplicate | dead-end | undecided
    duplicate_of: int | None = None
    label: str | None = None
    notes: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.algebra.dim


@dataclass
class ClassificationTree:
    nodes: list

    def canonical(self, dim: int | None = None) -> list[ClassificationNode]:
        return [
            n for n in self.nodes
            if n.status in ("canonical", "dead-end") and (dim is None or n.dim == dim)
        ]

    def counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for n in self.canonical():
            out[n.dim] = out.get(n.dim, 0) + 1
        return dict(sorted(out.items()))


def _check_edge(parent: LieAlgebra, child: LieAlgebra, m: int):
    assert child.dim == parent.dim + m
    assert nil_index(child) == (nil_index(parent) or 0) + 1


def _point_candidates(dim: int):
    """Coordinate vectors, pairwise sums and the all-ones vector, in a fixed order."""
    out = []
    for i in range(dim):
        out.append([Fraction(int(k == i)) for k in range(dim)])
    for i, j in itertools.combinations(range(dim), 2):
        out.append([Fraction(int(k in (i, j))) for k in range(dim)])
    if dim > 2:
        out.append([Fraction(1)] * dim)
    return out


def _label_filiform(g: LieAlgebra) -> str | None:
    n = g.dim
    if g.same_structure(catalog.m0(n - 1)):
        return f"m0({n - 1})"
    cands = [(f"m0({n - 1})", catalog.m0(n - 1))]
    if n % 2 == 0 and n >= 6:
        cands.append((f"m1({n - 1})", catalog.m1(n - 1)))
    for name, c in cands:
        if isomorphic(g, c).status == "yes":
            return name
    return None


def _parallel_map(fn, items, jobs: int):
    """Ordered map; results do not depend on the number of workers."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def enumerate_graded_filiform(
    max_dim: int, budget: int = 200, seed: int = 0, label: bool = True, jobs: int = 1
) -> ClassificationTree:
    """Naturally graded filiform algebras up to max_dim by successive one-dimensional extensions."""
    if max_dim < 3:
        raise ValueError("max_dim must be at least 3")
    root = ClassificationNode(0, catalog.m0(1), None, [], label="m0(1)")
    nodes = [root]
    frontier = [root]
    while frontier:
        nxt = []
        for node in frontier:
            g = node.algebra
            n = g.dim
            s = (nil_index(g) or 0) + 1
            h = homogeneous_cohomology(g, 2, n)
            if h.dim == 0:
                node.status = "dead-end"
                node.notes.append(f"H^2 of weight {n} vanishes")
                continue
            if n >= max_dim:
                continue
            kids: list[ClassificationNode] = []
            for x in _point_candidates(h.dim):
                c = h.form(x)
                if not set_has_filtration_s(g, [c], s):
                    continue
                child = central_extension(g, [c], [f"e{n + 1}"]).algebra
                if not is_filiform(child) or not is_carnot_layout(child):
                    continue
                _check_edge(g, child, 1)
                new = ClassificationNode(len(nodes), child, node.id, [c])
                for k in kids:
                    if k.status != "canonical":
                        continue
                    res = orbit_equivalent_graded(g, k.cocycles, [c], budget, seed, space=h)
                    if res.status == "yes":
                        new.status, new.duplicate_of = "duplicate", k.id
                        break
                    if res.status == "undecided":
                        new.notes.append(f"undecided against node {k.id}")
                if new.status == "canonical" and new.notes:
                    new.status = "undecided"
                nodes.append(new)
                if new.status == "canonical":
                    kids.append(new)
                    nxt.append(new)
            if not kids:
                node.status = "dead-end"
        frontier = nxt
    if label:
        todo = [x for x in nodes if x.status in ("canonical", "dead-end") and x.label is None]
        for node, name in zip(todo, _parallel_map(_label_filiform, [x.algebra for x in todo], jobs)):
            node.label = name
    return ClassificationTree(nodes)


def grassmannian_points(h: int, m: int, values=(0, 1)):
    """Row-reduced m x h matrices with free entries drawn from ``values``."""
    for piv in itertools.combinations(range(h), m):
        free = [(r, c) for r in range(m) for c in range(h) if c > piv[r] and c not in piv]
        for vals in itertools.product(values, repeat=len(free)):
            M = [[Fraction(0)] * h for _ in range(m)]
            for r, p in enumerate(piv):
                M[r][p] = Fraction(1)
            for (r, c), v in zip(free, vals):
                M[r][c] = Fraction(v)
            yield M


SMALL_CAP = 4


def _label_small(g: LieAlgebra) -> str | None:
    names = {
        "h3": catalog.heisenberg(),
        "h3+k": catalog.h3_plus_k(),
        "m0(3)": catalog.m0(3),
    }
    for name, c in names.items():
        if c.dim == g.dim and isomorphic(g, c).status == "yes":
            return name
    return None


def classify_nilpotent_small(max_dim: int, budget: int = 300, seed: int = 0, jobs: int = 1) -> ClassificationTree:
    """All nilpotent algebras of dimension <= max_dim (at most 4) by the recurrent method."""
    if max_dim > SMALL_CAP:
        raise ValueError(f"classification is capped at dimension {SMALL_CAP}")
    nodes: list[ClassificationNode] = []
    for n in range(1, max_dim + 1):
        nodes.append(ClassificationNode(len(nodes), abelian(n), None, [], label=f"abelian({n})"))
        base_nodes = [x for x in nodes if x.status == "canonical" and x.dim < n]
        found = [nodes[-1]]
        for parent in base_nodes:
            g, m = parent.algebra, n - parent.dim
            if g.dim < 2:
                continue
            s = (nil_index(g) or 0) + 1
            h = cohomology(g, 2)
            if h.dim < m:
                continue
            for M in grassmannian_points(h.dim, m):
                forms = [h.form(row) for row in M]
                if not set_has_filtration_s(g, forms, s):
                    continue
                child = central_extension(g, forms).algebra
                _check_edge(g, child, m)
                new = ClassificationNode(len(nodes), child, parent.id, forms)
                for k in found:
                    res = isomorphic(child, k.algebra, budget, seed)
                    if res.status == "yes":
                        new.status, new.duplicate_of = "duplicate", k.id
                        break
                    if res.status == "undecided":
                        new.notes.append(f"undecided against node {k.id}")
                if new.status == "canonical" and new.notes:
                    new.status = "undecided"
                nodes.append(new)
                if new.status == "canonical":
                    found.append(new)
    todo = [x for x in nodes if x.status == "canonical" and x.label is None]
    for node, name in zip(todo, _parallel_map(_label_small, [x.algebra for x in todo], jobs)):
        node.label = name
    return ClassificationTree(nodes)
