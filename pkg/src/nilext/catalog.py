"""Named algebras and parametric families."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cohomology import ExteriorForm
from .extension import central_extension
from .lie import LieAlgebra, abelian, direct_sum
from .linalg import Q

DIM_CAP = 30


def m0(k: int) -> LieAlgebra:
    """[e1, e_i] = e_{i+1} for 2 <= i <= k; dimension k + 1, natural layout."""
    if k < 1:
        raise ValueError("m0(k) needs k >= 1")
    n = k + 1
    br = {(0, i): {i + 1: 1} for i in range(1, k)}
    weights = [1, 1] + list(range(2, n))
    return LieAlgebra(n, br, weights=weights)


def heisenberg() -> LieAlgebra:
    return m0(2)


def m1(n: int) -> LieAlgebra:
    """m_1(2m-1), n = 2m - 1 odd >= 5.

    [e1, e_i] = e_{i+1} (2 <= i <= 2m-2) and
    [e_k, e_{2m-k+1}] = (-1)^(k+1) e_{2m} (2 <= k <= m).
    """
    if n % 2 == 0 or n < 5:
        raise ValueError("m1 is defined for odd n = 2m - 1 >= 5")
    m = (n + 1) // 2
    dim = 2 * m
    br = {}
    for i in range(2, 2 * m - 1):
        br[(0, i - 1)] = {i: 1}
    for k in range(2, m + 1):
        br[(k - 1, 2 * m - k)] = {dim - 1: (-1) ** (k + 1)}
    weights = [1, 1] + list(range(2, dim))
    return LieAlgebra(dim, br, weights=weights)


def m2_5() -> LieAlgebra:
    """The 6-dimensional filiform algebra m_2(5).

    Graded by e_i -> i; not naturally graded ([e2, e3] = e5 lives in the
    filtration, its associated graded algebra is m0(5)).
    """
    br = {
        (0, 1): {2: 1},
        (0, 2): {3: 1},
        (0, 3): {4: 1},
        (0, 4): {5: 1},
        (1, 2): {4: 1},
        (1, 3): {5: 1},
    }
    return LieAlgebra(6, br, weights=[1, 2, 3, 4, 5, 6])


def m25_cocycles() -> dict[str, ExteriorForm]:
    """The classes Omega_7, omega_7, omega_5 of H^2(m_2(5))."""
    def f(terms):
        return ExteriorForm(2, 6, terms)

    return {
        "Omega7": f({(0, 5): 1, (1, 4): 1}),
        "omega7": f({(1, 4): 1, (2, 3): -1}),
        "omega5": f({(1, 2): 1}),
    }


def family_g7(t) -> LieAlgebra:
    """Extension of m_2(5) by Omega_7 + t omega_7."""
    c = m25_cocycles()
    cocycle = c["Omega7"] + c["omega7"] * Q(t)
    return central_extension(m2_5(), [cocycle], ["e7"]).algebra


# ---------------------------------------------------------------------------
# free nilpotent algebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HallBasisElement:
    degree: int
    tree: object  # generator index (int) or pair of HallBasisElement indices
    index: int

    @property
    def is_generator(self) -> bool:
        return self.degree == 1


def hall_basis(m: int, c: int) -> list[HallBasisElement]:
    """Hall basis of the free Lie algebra on m generators through degree c.

    Order: by degree, then by (left index, right index) of the bracket.
    [u, v] is admitted when u > v and, if u = [a, b], b <= v.
    """
    elems = [HallBasisElement(1, i, i) for i in range(m)]
    by_degree = {1: list(elems)}
    for d in range(2, c + 1):
        cands = []
        for du in range(1, d):
            dv = d - du
            for u in by_degree.get(du, []):
                for v in by_degree.get(dv, []):
                    if u.index <= v.index:
                        continue
                    if not u.is_generator and elems[u.tree[1]].index > v.index:
                        continue
                    cands.append((u.index, v.index))
        cands.sort()
        by_degree[d] = []
        for pair in cands:
            e = HallBasisElement(d, pair, len(elems))
            elems.append(e)
            by_degree[d].append(e)
    return elems


def hall_name(elems, e: HallBasisElement, gens=None) -> str:
    if e.is_generator:
        return gens[e.tree] if gens else f"x{e.tree + 1}"
    u, v = e.tree
    return f"[{hall_name(elems, elems[u], gens)},{hall_name(elems, elems[v], gens)}]"


def free_nilpotent(m: int, c: int, cap: int = DIM_CAP) -> LieAlgebra:
    """L(m, c): the free Lie algebra on m generators modulo degree > c."""
    if m < 1 or c < 1:
        raise ValueError("need m >= 1 and c >= 1")
    elems = hall_basis(m, c)
    if len(elems) > cap:
        raise ValueError(f"free_nilpotent({m},{c}) has dimension {len(elems)} > cap {cap}")
    lookup = {e.tree: e.index for e in elems if not e.is_generator}
    deg = [e.degree for e in elems]
    memo: dict = {}

    def add(acc, vec, coeff):
        for k, v in vec.items():
            acc[k] = acc.get(k, 0) + coeff * v
            if not acc[k]:
                del acc[k]

    def br(x: int, y: int) -> dict:
        if x == y or deg[x] + deg[y] > c:
            return {}
        if x < y:
            return {k: -v for k, v in br(y, x).items()}
        key = (x, y)
        if key in memo:
            return memo[key]
        ex = elems[x]
        if ex.is_generator or ex.tree[1] <= y:
            out = {lookup[(x, y)]: Fraction(1)}
        else:
            a, b = ex.tree
            # [[a,b],y] = [[a,y],b] + [a,[b,y]]
            out = {}
            for k, v in br(a, y).items():
                add(out, br(k, b), v)
            for k, v in br(b, y).items():
                add(out, br(a, k), v)
        memo[key] = out
        return out

    table = {}
    n = len(elems)
    for i in range(n):
        for j in range(i + 1, n):
            v = br(i, j)
            if v:
                table[(i, j)] = v
    gens = ["a", "b"] if m == 2 else None
    names = [hall_name(elems, e, gens) for e in elems]
    return LieAlgebra(n, table, names, deg)


def witt_dimension(m: int, d: int) -> int:
    """Dimension of the degree-d part of the free Lie algebra (Witt's formula)."""
    total = 0
    for k in range(1, d + 1):
        if d % k == 0:
            total += _mobius(k) * m ** (d // k)
    return total // d


def _mobius(k: int) -> int:
    out, p = 1, 2
    while p * p <= k:
        if k % p == 0:
            k //= p
            if k % p == 0:
                return 0
            out = -out
        p += 1
    return -out if k > 1 else out


# ---------------------------------------------------------------------------
# width-two algebras
# ---------------------------------------------------------------------------

L23_NAMES = ["a1", "b1", "a2", "a3", "b3"]
LT24_NAMES = ["a1", "b1", "a2", "a3", "b3", "a4", "b4"]


def l23() -> LieAlgebra:
    """L(2,3) presented as [a1,b1]=a2, [a1,a2]=a3, [b1,a2]=b3."""
    br = {(0, 1): {2: 1}, (0, 2): {3: 1}, (1, 2): {4: 1}}
    return LieAlgebra(5, br, L23_NAMES, [1, 1, 2, 3, 3])


def l23_cocycles() -> list[ExteriorForm]:
    """a^1^a^3, a^1^b^3 + b^1^a^3, b^1^b^3."""
    return [
        ExteriorForm(2, 5, {(0, 3): 1}),
        ExteriorForm(2, 5, {(0, 4): 1, (1, 3): 1}),
        ExteriorForm(2, 5, {(1, 4): 1}),
    ]


@lru_cache(maxsize=None)
def l_tilde_2_4() -> LieAlgebra:
    br = {
        (0, 1): {2: 1},
        (0, 2): {3: 1},
        (1, 2): {4: 1},
        (0, 3): {5: 1},
        (1, 4): {6: 1},
    }
    return LieAlgebra(7, br, LT24_NAMES, [1, 1, 2, 3, 3, 4, 4])


def ltilde24_cocycles() -> list[ExteriorForm]:
    """Weight-5 basis: a1^a4, a1^b4 + a2^b3, b1^a4 - a2^a3, b1^b4."""
    a1, b1, a2, a3, b3, a4, b4 = range(7)

    def f(t):
        return ExteriorForm(2, 7, t)

    return [
        f({(a1, a4): 1}),
        f({(a1, b4): 1, (a2, b3): 1}),
        f({(b1, a4): 1, (a2, a3): -1}),
        f({(b1, b4): 1}),
    ]


def ltilde24_weight4_cocycle() -> ExteriorForm:
    return ExteriorForm(2, 7, {(0, 4): 1, (1, 3): 1})


def _ltilde_family(coords) -> LieAlgebra:
    basis = ltilde24_cocycles()
    c = ExteriorForm(2, 7)
    for x, f in zip(coords, basis):
        c = c + f * Q(x)
    return central_extension(l_tilde_2_4(), [c], ["a5"]).algebra


def family_Lt(t) -> LieAlgebra:
    """Extension of L~(2,4) by the weight-5 class with coordinates (t : 0 : 1 : 1)."""
    return _ltilde_family((t, 0, 1, 1))


def family_Ltilde(tau) -> LieAlgebra:
    """Extension of L~(2,4) by the weight-5 class with coordinates (0 : tau : 1 : 0)."""
    return _ltilde_family((0, tau, 1, 0))


def h3_plus_k() -> LieAlgebra:
    return direct_sum(heisenberg(), LieAlgebra(1, {}, ["e4"], [1]))


# ---------------------------------------------------------------------------
# name resolution for the command line
# ---------------------------------------------------------------------------


def _param(arg: str, key: str) -> Fraction:
    k, _, v = arg.partition("=")
    if k != key or not v:
        raise ValueError(f"expected {key}=<rational>, got {arg!r}")
    return Fraction(v)


def resolve(name: str) -> LieAlgebra:
    """Parse catalog names like ``m0:4``, ``free:2:3``, ``g7:t=1/2``."""
    head, *args = name.split(":")
    if head == "m0" and len(args) == 1:
        return m0(int(args[0]))
    if head == "m1" and len(args) == 1:
        return m1(int(args[0]))
    if head == "m2_5" and not args:
        return m2_5()
    if head in ("h3", "heisenberg") and not args:
        return heisenberg()
    if head == "abelian" and len(args) == 1:
        return abelian(int(args[0]))
    if head == "free" and len(args) == 2:
        return free_nilpotent(int(args[0]), int(args[1]))
    if head == "l23" and not args:
        return l23()
    if head == "ltilde24" and not args:
        return l_tilde_2_4()
    if head == "g7" and len(args) == 1:
        return family_g7(_param(args[0], "t"))
    if head == "Lt" and len(args) == 1:
        return family_Lt(_param(args[0], "t"))
    if head == "Ltau" and len(args) == 1:
        return family_Ltilde(_param(args[0], "tau"))
    if head == "h3+k" and not args:
        return h3_plus_k()
    raise KeyError(f"unknown catalog name {name!r}")


CATALOG_NAMES = [
    "m0:1", "m0:2", "m0:3", "m0:4", "m0:5", "m0:9",
    "m1:5", "m1:7", "m1:9",
    "m2_5", "h3+k", "abelian:3",
    "free:2:3", "free:2:4", "free:3:2", "l23", "ltilde24",
    "g7:t=0", "g7:t=1", "g7:t=-1",
    "Lt:t=0", "Lt:t=1/8", "Ltau:tau=1",
]
