"""Acceptance criteria 1-10.

Each criterion collects named sub-checks, records a single PASS/FAIL line
(shown in the terminal summary, or printed when run as a script) and then
asserts every sub-check.  Checks whose reference values disagree with exact computation are
left failing on purpose.
"""

from __future__ import annotations

import itertools
import json
import os
import random
import subprocess
import sys
from fractions import Fraction

import oracles
import pytest
import sympy

from nilext import catalog
from nilext.classify import classify_nilpotent_small, enumerate_graded_filiform, isomorphic
from nilext.cohomology import (
    ExteriorForm,
    cohomology,
    differential,
    dual_chain_L,
    homogeneous_cohomology,
    random_form,
)
from nilext.extension import central_extension, verify_extension_theorem
from nilext.lie import abelian, check_jacobi, is_isomorphism, lower_central_series, nil_index
from nilext.linalg import matvec, rank
from nilext.orbits import (
    MODULI,
    OPEN,
    extend_degree_one_map,
    l23_frame,
    l23_orbit_label,
    ltilde24_dual_degree_one,
    ltilde24_frame,
    ltilde24_invariant,
    ltilde24_printed_action,
    m25_automorphism,
    m25_frame,
    m25_normal_form,
    orbit_tangent_dimension,
    quadric_type,
    random_automorphism,
)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = {}

F = Fraction
NONZERO = [F(1), F(-1), F(2), F(-2), F(3), F(1, 2), F(-1, 3)]


class Checks:
    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.items: list[tuple[str, bool, str]] = []

    def add(self, name: str, ok: bool, detail: str = ""):
        self.items.append((name, bool(ok), detail))

    def finish(self):
        failed = [(n, d) for n, ok, d in self.items if not ok]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {self.number:2d} [{status}] {self.title}: {len(self.items) - len(failed)}/{len(self.items)} checks"
        if failed:
            line += "; failing: " + "; ".join(f"{n} ({d})" if d else n for n, d in failed)
        ACCEPTANCE_LINES[self.number] = line
        print(line)
        assert not failed, line


def m0_cocycle(n: int, q: int) -> ExteriorForm:
    """c_{2q+1} = -b^1^a^{2q} + sum_{i=2}^{q} (-1)^i a^i^a^{2q+1-i} on m0(n).

    Basis order of m0(n): a1, b1, a2, ..., an, so a^i has index i (i >= 2),
    a^1 index 0 and b^1 index 1.
    """
    terms = {(1, 2 * q): F(-1)}
    for i in range(2, q + 1):
        terms[(i, 2 * q + 1 - i)] = terms.get((i, 2 * q + 1 - i), 0) + (-1) ** i
    return ExteriorForm(2, n + 1, terms)


# ---------------------------------------------------------------------------


def test_criterion_1_structural():
    ck = Checks(1, "Jacobi, d^2 = 0 and nil-index of m0(k)")
    rng = random.Random(1)
    for name in catalog.CATALOG_NAMES:
        g = catalog.resolve(name)
        ck.add(f"jacobi {name}", not check_jacobi(g) and oracles.jacobi_ok(g))
        bad = 0
        for p in (1, 2):
            if p > g.dim:
                continue
            for _ in range(4):
                w = random_form(rng, g.dim, p, density=0.6)
                if differential(g, differential(g, w)):
                    bad += 1
        ck.add(f"d^2 {name}", bad == 0, f"{bad} nonzero")
    for k in range(2, 10):
        g = catalog.m0(k)
        ck.add(f"nil-index m0({k})", nil_index(g) == k == oracles.nil_index(g), f"{nil_index(g)}")
    ck.finish()


def test_criterion_2_cohomology_of_m0():
    ck = Checks(2, "H^2(m0(n)) and the printed cocycles")
    wrong = []
    for n in range(2, 11):
        g = catalog.m0(n)
        got = cohomology(g, 2).dim
        ck.add(f"package agrees with oracle n={n}", got == oracles.betti(g, 2), f"{got}")
        if got != n // 2:
            wrong.append(f"n={n}: {got} != {n // 2}")
        forms = [m0_cocycle(n, q) for q in range(1, n // 2 + 1)]
        ck.add(f"c_(2q+1) closed n={n}", all(oracles.is_closed(g, c) for c in forms))
        ck.add(f"c_(2q+1) not exact n={n}", not any(oracles.is_exact(g, c) for c in forms))
        ck.add(f"c_(2q+1) independent n={n}", oracles.independent_in_cohomology(g, forms))
    ck.add("dim H^2 = floor(n/2)", not wrong, ", ".join(wrong))
    ck.finish()


def test_criterion_3_dual_chain():
    ck = Checks(3, "L_i = annihilator of g^(i+1)")
    for name in catalog.CATALOG_NAMES:
        g = catalog.resolve(name)
        chain = dual_chain_L(g)
        series = lower_central_series(g)
        s = nil_index(g)
        ok = len(chain) == s + 1
        orc = oracles.lcs_bases(g)
        for i in range(1, len(chain)):
            ann = series[i].annihilator() if i < len(series) else None
            ok &= chain[i] == ann
            mine = sympy.Matrix([[sympy.Rational(x) for x in row] for row in chain[i].basis]) if chain[i].dim else sympy.zeros(0, g.dim)
            theirs = oracles.annihilator_rows(orc[i], g.dim)
            ok &= oracles.same_rowspace(mine, theirs)
        ck.add(name, ok)
    ck.finish()


def _theorem_trials(count: int, seed: int = 2024):
    bases = [
        ("h3", catalog.heisenberg()),
        ("m0(4)", catalog.m0(4)),
        ("m2(5)", catalog.m2_5()),
        ("free(2,3)", catalog.free_nilpotent(2, 3)),
    ]
    rng = random.Random(seed)
    prepared = [(name, g, cohomology(g, 2)) for name, g in bases]
    done = 0
    while done < count:
        name, g, h = prepared[done % len(prepared)]
        m = rng.choice([1, 1, 2])
        xs = [[F(rng.choice([-2, -1, 0, 0, 1, 2])) for _ in range(h.dim)] for _ in range(m)]
        forms = []
        for x in xs:
            mu = random_form(rng, g.dim, 1, density=0.5)
            forms.append(h.form(x) + differential(g, mu))
        if rank(xs) != m:
            continue
        done += 1
        yield name, g, forms


def test_criterion_4_extension_theorem():
    ck = Checks(4, "nil-index rises exactly for sets of filtration s")
    seen = {True: 0, False: 0}
    bad = []
    for t, (name, g, forms) in enumerate(_theorem_trials(120)):
        rep = verify_extension_theorem(g, forms)
        ext = central_extension(g, forms).algebra
        dims = oracles.lcs_dims(ext)
        s = rep.s
        actual = oracles.nil_index(ext) == s and len(dims) > s - 1 and dims[s - 1] == len(forms)
        seen[rep.predicted] += 1
        if rep.predicted != actual or rep.actual != actual:
            bad.append(f"trial {t} on {name}")
    ck.add("120 trials agree with the oracle", not bad, ", ".join(bad[:5]))
    ck.add("both directions exercised", seen[True] >= 10 and seen[False] >= 10, f"{seen}")
    ck.finish()


def test_criterion_5_m25():
    ck = Checks(5, "m2(5): H^2, action, orbit labels, g7 family")
    g = catalog.m2_5()
    ck.add("dim H^2 = 3", cohomology(g, 2).dim == 3 == oracles.betti(g, 2))
    fr = m25_frame()
    rng = random.Random(5)
    bad = 0
    for _ in range(50):
        a = rng.choice(NONZERO)
        b = [rng.choice(NONZERO + [F(0)]) for _ in range(4)]
        al = [rng.choice(NONZERO + [F(0)]) for _ in range(4)]
        phi = m25_automorphism(a, *b, *al)
        M = fr.action(phi)
        b3, b4 = b[0], b[1]
        want = [[a**7, 0, 0], [0, a**7, 0], [0, 2 * a**3 * b4 - a * b3**2, a**5]]
        bad += M != [[F(x) for x in row] for row in want]
    ck.add("action on Omega7, omega7, omega5 for 50 tuples", bad == 0, f"{bad} mismatches")
    reps = [(1, 0, 0), (1, 1, 0), (0, 0, 1), (1, 0, 1), (-1, 0, 1)]
    real = [m25_normal_form(x, "real")[0] for x in reps]
    ck.add("five printed real orbits get five labels", len(set(real)) == 5, f"{real}")
    cplx = {m25_normal_form(x, "complex")[0] for x in reps}
    ck.add("the two rays merge over C", len(cplx) == 4, f"{sorted(cplx)}")
    bad = 0
    for _ in range(100):
        x = [rng.choice(NONZERO + [F(0)] * 3) for _ in range(3)]
        if not any(x):
            continue
        phi = m25_automorphism(rng.choice(NONZERO), *[rng.choice(NONZERO + [F(0)]) for _ in range(8)])
        y = matvec(fr.action(phi), x)
        for fld in ("real", "complex"):
            bad += m25_normal_form(x, fld)[:2] != m25_normal_form(y, fld)[:2]
    ck.add("labels are pullback-invariant", bad == 0, f"{bad} changes")
    ts = [F(0), F(1), F(-1), F(1, 2), F(3)]
    verdicts = []
    for t1, t2 in itertools.combinations(ts, 2):
        verdicts.append(isomorphic(catalog.family_g7(t1), catalog.family_g7(t2)).status)
    ck.add("g7(t1) vs g7(t2) is 'no' for 10 pairs", verdicts == ["no"] * 10, f"{verdicts}")
    ck.finish()


def test_criterion_6_graded_filiform():
    ck = Checks(6, "naturally graded filiform algebras up to dimension 10")
    tree = enumerate_graded_filiform(10)
    counts = tree.counts()
    want = {3: 1, 4: 1, 5: 1, 6: 2, 7: 1, 8: 2, 9: 1, 10: 2}
    ck.add("counts", all(counts.get(d) == c for d, c in want.items()), f"{counts}")
    for m in (3, 4, 5):
        g = catalog.m1(2 * m - 1)
        ck.add(f"H^2_({2 * m})(m1({2 * m - 1})) = 0", homogeneous_cohomology(g, 2, 2 * m).dim == 0)
        nodes = [n for n in tree.canonical(2 * m) if n.label == f"m1({2 * m - 1})"]
        ck.add(f"m1({2 * m - 1}) node is a dead-end", len(nodes) == 1 and nodes[0].status == "dead-end")
    ck.finish()


def test_criterion_7_small_classification():
    ck = Checks(7, "nilpotent algebras of dimension <= 4")
    tree = classify_nilpotent_small(4)
    counts = tree.counts()
    ck.add("2 algebras in dimension 3", counts.get(3) == 2, f"{counts}")
    ck.add("3 algebras in dimension 4", counts.get(4) == 3, f"{counts}")
    named = {
        "abelian(3)": abelian(3),
        "abelian(4)": abelian(4),
        "h3": catalog.heisenberg(),
        "h3+k": catalog.h3_plus_k(),
        "m0(3)": catalog.m0(3),
    }
    labels = {d: sorted(n.label for n in tree.canonical(d)) for d in (3, 4)}
    ck.add("dimension 3 list", labels[3] == ["abelian(3)", "h3"], f"{labels[3]}")
    ck.add("dimension 4 list", labels[4] == ["abelian(4)", "h3+k", "m0(3)"], f"{labels[4]}")
    for node in tree.canonical():
        if node.dim < 3:
            continue
        res = isomorphic(node.algebra, named[node.label])
        ck.add(f"witness for {node.label}", res.status == "yes" and is_isomorphism(res.witness, node.algebra, named[node.label]))
    for node in tree.nodes:
        if node.status == "duplicate":
            target = tree.nodes[node.duplicate_of].algebra
            res = isomorphic(node.algebra, target)
            ck.add(f"duplicate {node.id}", res.status == "yes" and is_isomorphism(res.witness, node.algebra, target))
    ck.add("no undecided nodes", not [n for n in tree.nodes if n.status == "undecided"])
    for d in (3, 4):
        for a, b in itertools.combinations(tree.canonical(d), 2):
            ck.add(f"{a.label} vs {b.label}", isomorphic(a.algebra, b.algebra).status == "no")
    ck.finish()


def _ltilde_true_automorphism(rng):
    """Random graded automorphism of L~(2,4): a torus element, sometimes composed with the swap."""
    g = catalog.l_tilde_2_4()
    a, m = rng.choice(NONZERO), rng.choice(NONZERO)
    A = [[a, F(0)], [F(0), m]] if rng.random() < 0.5 else [[F(0), m], [a, F(0)]]
    phi = extend_degree_one_map(g, A)
    assert phi is not None
    return phi.matrix


def test_criterion_8_width_two():
    ck = Checks(8, "free L(2,3) and L~(2,4)")
    rng = random.Random(8)
    free = catalog.free_nilpotent(2, 3)
    ck.add("dim H^2(L(2,3)) = 3", cohomology(free, 2).dim == 3 == oracles.betti(free, 2))
    grid = [F(v) for v in (-2, -1, 0, 1, 2)]
    pts = [p for p in itertools.product(grid, repeat=3) if any(p)]
    real = {l23_orbit_label(p, "real") for p in pts}
    cplx = {l23_orbit_label(p, "complex") for p in pts}
    # the determinant factor of the action merges the two signs of each rank,
    # so only the zero orbit would bring these to 4 and 3
    ck.add("4 real nonzero-orbit labels", len(real) == 4, f"{len(real)}: {sorted(real)}")
    ck.add("3 complex nonzero-orbit labels", len(cplx) == 3, f"{len(cplx)}: {sorted(cplx)}")
    fr = l23_frame()
    l23 = catalog.l23()
    bad = 0
    for _ in range(200):
        phi = random_automorphism(l23, rng)
        x = [rng.choice(grid) for _ in range(3)]
        y = matvec(fr.action(phi), x)
        bad += any(l23_orbit_label(x, f) != l23_orbit_label(y, f) for f in ("real", "complex"))
    ck.add("l23 labels invariant over 200 automorphisms", bad == 0, f"{bad} changes")

    L = catalog.l_tilde_2_4()
    ck.add("dim H^2_(5) = 4", homogeneous_cohomology(L, 2, 5).dim == 4)
    ck.add("dim H^2_(4) = 1", homogeneous_cohomology(L, 2, 4).dim == 1)

    lt = ltilde24_frame()
    agree = total = 0
    for _ in range(20):
        a, r, m = rng.choice(NONZERO), rng.choice(NONZERO + [F(0)]), rng.choice(NONZERO)
        total += 1
        phi = extend_degree_one_map(L, ltilde24_dual_degree_one(a, r, m))
        if phi is not None and lt.action(phi.matrix) == ltilde24_printed_action(a, r, m):
            agree += 1
    ck.add("printed 4x4 action reproduced by pullback", agree == total, f"{agree}/{total} sampled maps")

    bad = 0
    sampled = 0
    while sampled < 200:
        x = [rng.choice(NONZERO + [F(0)]) for _ in range(4)]
        if not x[3] or x[1] == x[2]:
            continue
        sampled += 1
        y = matvec(lt.action(_ltilde_true_automorphism(rng)), x)
        bad += ltilde24_invariant(x)[:2] != ltilde24_invariant(y)[:2]
    ck.add("t constant on 200 automorphism pullbacks", bad == 0, f"{bad}/200 changed")

    ts = [F(0), F(1, 8), F(1), F(-1), F(2), F(-1, 3)]
    sep = all(
        ltilde24_invariant((t1, 0, 1, 1))[1] != ltilde24_invariant((t2, 0, 1, 1))[1]
        for t1, t2 in itertools.combinations(ts, 2)
    )
    ck.add("t separates (t1:0:1:1) from (t2:0:1:1)", sep)

    below = [F(1, 8) - F(1, 10**k) for k in range(1, 6)] + [F(-3), F(0)]
    above = [F(1, 8) + F(1, 10**k) for k in range(1, 6)] + [F(5)]
    ck.add(
        "quadric type switches exactly at 1/8",
        all(quadric_type(t) == "hyperbolic-paraboloid" for t in below)
        and quadric_type(F(1, 8)) == "parabolic-cylinder"
        and all(quadric_type(t) == "elliptic-paraboloid" for t in above),
    )
    ck.finish()


def test_criterion_9_rigidity():
    ck = Checks(9, "rigidity by orbit tangent rank")
    h3 = catalog.heisenberg()
    for f in ({(0, 2): 1}, {(1, 2): 1}, {(0, 2): 2, (1, 2): -1}):
        st = orbit_tangent_dimension(h3, [ExteriorForm(2, 3, f)]).status
        ck.add(f"h3 point {f} open", st == OPEN, st)
    c = catalog.m25_cocycles()
    for t in (F(0), F(1), F(-2, 3), F(5)):
        st = orbit_tangent_dimension(catalog.m2_5(), [c["Omega7"] + c["omega7"] * t]).status
        ck.add(f"m2(5) Omega7 + {t} omega7 has moduli", st == MODULI, st)
    L = catalog.l_tilde_2_4()
    vs = catalog.ltilde24_cocycles()
    for x in ((F(1, 8), 0, 1, 1), (1, 0, 1, 1), (0, 1, 1, 0), (1, 2, 3, 4)):
        w = ExteriorForm(2, 7)
        for a, v in zip(x, vs):
            w = w + v * F(a)
        st = orbit_tangent_dimension(L, [w]).status
        ck.add(f"L~(2,4) point {x} has moduli", st == MODULI, st)
    ck.finish()


CLI_SUITE = [
    ["catalog"],
    ["catalog", "m0:4"],
    ["check", "--catalog", "m2_5"],
    ["lcs", "--catalog", "free:2:3"],
    ["cohomology", "--catalog", "m0:4", "--degree", "2"],
    ["cohomology", "--catalog", "ltilde24", "--degree", "2", "--weight", "5"],
    ["filtration", "--catalog", "m2_5", "--form", "e1^e6 + e2^e5"],
    ["dual-chain", "--catalog", "l23"],
    ["extend", "--catalog", "h3", "--form", "e2^e3"],
    ["roundtrip", "--catalog", "ltilde24"],
    ["fingerprint", "--catalog", "g7:t=1/2"],
    ["orbit-label", "--family", "m25", "--x", "1,1/2,0"],
    ["orbit-label", "--family", "l23", "--x", "1,0,1", "--field", "complex"],
    ["orbit-label", "--family", "ltilde24", "--x", "1/8,0,1,1"],
    ["orbit-equiv", "--catalog", "m0:3", "--a", "e2^e3 + e1^e4", "--b", "e2^e3", "--seed", "7"],
    ["orbit-equiv", "--catalog", "h3", "--a", "e1^e3", "--b", "2*e1^e3 - e2^e3"],
    ["rigidity", "--catalog", "h3", "--form", "e1^e3"],
    ["quadric-type", "--t", "1/8"],
    ["classify-filiform", "--max-dim", "7", "--seed", "3"],
    ["classify", "--max-dim", "4", "--seed", "3"],
    ["isomorphic", "FILE:Lt:t=1", "FILE:Lt:t=-1", "--seed", "11"],
]


def _run_suite(tmpdir, hashseed: str):
    env = dict(os.environ, PYTHONHASHSEED=hashseed)
    outputs = []
    for argv in CLI_SUITE:
        args = []
        for a in argv:
            if a.startswith("FILE:"):
                name = a[5:]
                path = os.path.join(tmpdir, name.replace(":", "_").replace("=", "_").replace("/", "_") + ".json")
                if not os.path.exists(path):
                    res = subprocess.run([sys.executable, "-m", "nilext", "catalog", name], capture_output=True, check=True)
                    with open(path, "wb") as fh:
                        fh.write(res.stdout)
                a = path
            args.append(a)
        res = subprocess.run([sys.executable, "-m", "nilext", *args], capture_output=True, env=env)
        outputs.append((res.returncode, res.stdout))
    return outputs


def test_criterion_10_determinism(tmp_path):
    ck = Checks(10, "CLI reports are byte-identical across runs")
    first = _run_suite(str(tmp_path), "1")
    second = _run_suite(str(tmp_path), "2")
    for argv, a, b in zip(CLI_SUITE, first, second):
        ok = a == b and a[0] == 0
        if ok and argv[0] != "catalog":
            rep = json.loads(a[1])
            ok = {"command", "inputs", "results", "provenance"} <= set(rep)
        ck.add(" ".join(argv[:3]), ok)
    ck.finish()


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
