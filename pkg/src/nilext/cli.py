"""Command-line front end.  The only module that touches files and streams.

Every subcommand prints one JSON report on stdout:

    {"command": [...], "inputs": {"digest": ...}, "results": {...}, "provenance": {...}}

Rationals are always written as "p/q" strings.  Domain errors print
{"error": {...}} and exit with status 1; usage errors exit with status 2.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
from fractions import Fraction

from . import __version__, catalog
from .classify import classify_nilpotent_small, enumerate_graded_filiform, fingerprint, isomorphic
from .cohomology import (
    ExteriorForm,
    cohomology,
    dual_chain_L,
    form_filtration,
    homogeneous_cohomology,
    set_has_filtration_s,
)
from .extension import adapted_form, central_extension, roundtrip, verify_extension_theorem
from .lie import (
    LieAlgebra,
    check_jacobi,
    is_carnot_layout,
    is_filiform,
    lower_central_series,
    nil_index,
)
from .linalg import Subspace
from .orbits import (
    l23_orbit_label,
    ltilde24_invariant,
    m25_orbit_label,
    orbit_equivalent_graded,
    orbit_tangent_dimension,
    quadric_type,
)

FORMAT_VERSION = 1


class DomainError(Exception):
    def __init__(self, kind: str, message: str, **extra):
        super().__init__(message)
        self.kind = kind
        self.extra = extra


class MalformedFile(DomainError):
    def __init__(self, message: str, position):
        super().__init__("malformed-file", message, position=position)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def rat(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def jsonable(obj):
    """Recursively convert Fractions (and tuples) into JSON-safe values."""
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, Fraction):
        return rat(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return str(obj)


def algebra_to_dict(g: LieAlgebra) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "dim": g.dim,
        "basis": list(g.names),
        "weights": list(g.weights) if g.weights is not None else None,
        "brackets": [
            {"i": i, "j": j, "terms": [{"k": k, "coeff": rat(c)} for k, c in row.items()]}
            for (i, j), row in g.brackets.items()
        ],
    }


def _need(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise MalformedFile(f"missing field {key!r}", where)
    val = obj[key]
    if not isinstance(val, kind) or isinstance(val, bool) and kind is not bool:
        raise MalformedFile(f"field {key!r} has the wrong type", f"{where}.{key}")
    return val


def algebra_from_dict(d) -> LieAlgebra:
    ver = _need(d, "format_version", int, "$")
    if ver != FORMAT_VERSION:
        raise MalformedFile(f"unsupported format_version {ver}", "$.format_version")
    dim = _need(d, "dim", int, "$")
    if dim < 0:
        raise MalformedFile("dim must be non-negative", "$.dim")
    names = _need(d, "basis", list, "$")
    if len(names) != dim or not all(isinstance(x, str) for x in names):
        raise MalformedFile("basis must list one name per dimension", "$.basis")
    weights = d.get("weights")
    if weights is not None and (
        not isinstance(weights, list) or len(weights) != dim or not all(isinstance(w, int) and w >= 1 for w in weights)
    ):
        raise MalformedFile("weights must be positive integers, one per basis vector", "$.weights")
    table = {}
    for a, entry in enumerate(_need(d, "brackets", list, "$")):
        where = f"$.brackets[{a}]"
        i, j = _need(entry, "i", int, where), _need(entry, "j", int, where)
        if not 0 <= i < j < dim:
            raise MalformedFile("need 0 <= i < j < dim", where)
        if (i, j) in table:
            raise MalformedFile(f"duplicate entry for ({i}, {j})", where)
        row = {}
        for b, term in enumerate(_need(entry, "terms", list, where)):
            tw = f"{where}.terms[{b}]"
            k = _need(term, "k", int, tw)
            if not 0 <= k < dim:
                raise MalformedFile("target index out of range", f"{tw}.k")
            raw = _need(term, "coeff", str, tw)
            try:
                row[k] = row.get(k, Fraction(0)) + Fraction(raw)
            except (ValueError, ZeroDivisionError):
                raise MalformedFile(f"coefficient {raw!r} is not a rational", f"{tw}.coeff") from None
        table[(i, j)] = row
    try:
        return LieAlgebra(dim, table, names, weights)
    except ValueError as e:
        raise DomainError("invalid-algebra", str(e)) from None


def parse_algebra_text(text: str) -> LieAlgebra:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedFile(f"invalid JSON: {e.msg}", {"line": e.lineno, "column": e.colno}) from None
    return algebra_from_dict(d)


# forms are written with basis names, e.g. "a1^a3 - 1/2*b1^b3"
_TERM = re.compile(r"\s*([+-]?)\s*(?:([0-9]+(?:/[0-9]+)?)\s*\*\s*)?([^\s+*-]+)\s*")


def parse_form(text: str, g: LieAlgebra) -> ExteriorForm:
    lookup = {name: i for i, name in enumerate(g.names)}
    for i in range(g.dim):
        lookup.setdefault(f"e{i + 1}", i)
    terms: dict = {}
    degree = None
    pos = 0
    text = text.strip()
    if text in ("0", ""):
        raise DomainError("bad-form", "give at least one monomial")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise DomainError("bad-form", f"cannot parse form near {text[pos:]!r}", position=pos)
        sign, coeff, mono = m.groups()
        factors = mono.split("^")
        try:
            idx = tuple(lookup[f] for f in factors)
        except KeyError as e:
            raise DomainError("bad-form", f"unknown basis name {e.args[0]!r}", position=pos) from None
        if degree is None:
            degree = len(idx)
        elif degree != len(idx):
            raise DomainError("bad-form", "mixed degrees in one form", position=pos)
        c = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        f = ExteriorForm(degree, g.dim, {idx: c})
        for k, v in f.terms.items():
            terms[k] = terms.get(k, 0) + v
        pos = m.end()
    return ExteriorForm(degree, g.dim, terms)


def format_form(w: ExteriorForm, g: LieAlgebra) -> str:
    if not w:
        return "0"
    out = ""
    for idx, c in w.terms.items():
        mono = "^".join(g.names[i] for i in idx)
        term = ("" if abs(c) == 1 else f"{abs(c)}*") + mono
        if not out:
            out = ("-" if c < 0 else "") + term
        else:
            out += (" - " if c < 0 else " + ") + term
    return out


def parse_vector(text: str) -> list[Fraction]:
    try:
        return [Fraction(x) for x in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise DomainError("bad-vector", f"cannot parse {text!r} as comma-separated rationals") from None


def subspace_report(s: Subspace) -> dict:
    return {"dim": s.dim, "basis": [list(r) for r in s.basis]}


# ---------------------------------------------------------------------------
# input handling
# ---------------------------------------------------------------------------


class Inputs:
    """Collects everything read so the digest covers it."""

    def __init__(self, stdin):
        self.stdin = stdin
        self._stdin_text = None
        self.record: dict = {}

    def algebra(self, args, source: str | None, key: str = "algebra") -> LieAlgebra:
        name = getattr(args, "catalog", None) if key == "algebra" else None
        if name:
            g = _resolve(name)
        else:
            src = source or "-"
            if src == "-":
                if self._stdin_text is None:
                    self._stdin_text = self.stdin.read()
                text = self._stdin_text
            else:
                try:
                    with open(src, encoding="utf-8") as fh:
                        text = fh.read()
                except OSError as e:
                    raise DomainError("io", f"cannot read {src}: {e.strerror}") from None
            g = parse_algebra_text(text)
        self.record[key] = algebra_to_dict(g)
        return g

    def digest(self) -> str:
        blob = json.dumps(jsonable(self.record), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _resolve(name: str) -> LieAlgebra:
    try:
        return catalog.resolve(name)
    except (KeyError, ValueError) as e:
        raise DomainError("unknown-catalog-name", str(e.args[0]) if e.args else name) from None


def _forms(texts, g):
    return [parse_form(t, g) for t in texts or []]


def _closed_forms(texts, g):
    forms = _forms(texts, g)
    h = cohomology(g, 2)
    for t, f in zip(texts, forms):
        if f.degree != 2 or not h.is_cocycle(f):
            raise DomainError("not-closed", f"form {t!r} is not a closed 2-form")
    return forms


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_check(args, io):
    g = io.algebra(args, args.algebra)
    bad = check_jacobi(g)
    if bad:
        names = [[g.names[i] for i in t] for t in bad]
        raise DomainError("jacobi-violated", f"{len(bad)} basis triples violate the Jacobi identity", triples=names)
    s = nil_index(g)
    out = {"jacobi": "ok", "dim": g.dim, "nilpotent": s is not None, "nil_index": s}
    if s is not None:
        out["filiform"] = is_filiform(g)
        out["carnot_layout"] = bool(is_carnot_layout(g)) if g.weights is not None else None
    return out


def cmd_lcs(args, io):
    g = io.algebra(args, args.algebra)
    series = lower_central_series(g)
    return {
        "dims": [s.dim for s in series],
        "terms": [subspace_report(s) for s in series],
        "nil_index": nil_index(g),
    }


def cmd_cohomology(args, io):
    g = io.algebra(args, args.algebra)
    if args.weight is not None:
        h = homogeneous_cohomology(g, args.degree, args.weight)
    else:
        h = cohomology(g, args.degree)
    return {
        "degree": args.degree,
        "weight": args.weight,
        "dim": h.dim,
        "representatives": [format_form(r, g) for r in h.representatives],
    }


def cmd_filtration(args, io):
    g = io.algebra(args, args.algebra)
    forms = _closed_forms(args.form, g)
    s = args.s if args.s is not None else (nil_index(g) or 0) + 1
    return {
        "filtrations": [form_filtration(g, f) for f in forms],
        "s": s,
        "has_filtration_s": set_has_filtration_s(g, forms, s),
    }


def cmd_dual_chain(args, io):
    g = io.algebra(args, args.algebra)
    chain = dual_chain_L(g)
    series = lower_central_series(g)
    checks = []
    for i in range(1, len(chain)):
        ideal = series[i] if i < len(series) else Subspace(g.dim)
        checks.append(chain[i] == ideal.annihilator())
    return {"dims": [L.dim for L in chain], "chain": [subspace_report(L) for L in chain], "matches_annihilators": checks}


def cmd_extend(args, io):
    g = io.algebra(args, args.algebra)
    forms = _closed_forms(args.form, g)
    ext = central_extension(g, forms, args.names.split(",") if args.names else None)
    rep = verify_extension_theorem(g, forms)
    return {
        "algebra": algebra_to_dict(ext.algebra),
        "nil_index": rep.nil_index,
        "top_ideal_dim": rep.top_ideal_dim,
        "has_filtration_s": rep.predicted,
        "raises_nil_index": rep.actual,
    }


def cmd_roundtrip(args, io):
    g = io.algebra(args, args.algebra)
    rt = roundtrip(g)
    return {
        "base": algebra_to_dict(rt.base),
        "cocycles": [format_form(c, rt.base) for c in rt.cocycles],
        "ideal_dim": rt.ideal_dim,
        "adapted_basis": rt.basis,
        "rebuild_matches": rt.rebuild().same_structure(adapted_form(g, rt)),
    }


def cmd_orbit_label(args, io):
    x = parse_vector(args.x)
    io.record["x"] = x
    need = {"m25": 3, "l23": 3, "ltilde24": 4}[args.family]
    if len(x) != need:
        raise DomainError("bad-vector", f"{args.family} needs {need} coordinates")
    if args.family == "l23":
        return {"label": l23_orbit_label(x, args.field)}
    fn = m25_orbit_label if args.family == "m25" else ltilde24_invariant
    try:
        label, param, rep = fn(x, args.field)
    except ValueError as e:
        raise DomainError("bad-vector", str(e)) from None
    return {"label": label, "parameter": param, "representative": [Fraction(v) for v in rep]}


def cmd_orbit_equiv(args, io):
    g = io.algebra(args, args.algebra)
    a, b = _closed_forms(args.a, g), _closed_forms(args.b, g)
    space = homogeneous_cohomology(g, 2, args.weight) if args.weight is not None else None
    res = orbit_equivalent_graded(g, a, b, args.budget, args.seed, args.field, space=space)
    return {
        "status": res.status,
        "witness": res.witness,
        "change": res.change,
        "invariant": res.invariant,
        "values": res.values,
        "tried": res.tried,
        "notes": res.notes,
    }


def cmd_rigidity(args, io):
    g = io.algebra(args, args.algebra)
    forms = _closed_forms(args.form, g)
    space = homogeneous_cohomology(g, 2, args.weight) if args.weight is not None else None
    t = orbit_tangent_dimension(g, forms, space)
    return {
        "status": t.status,
        "tangent_rank": t.rank,
        "grassmannian_dim": t.grassmannian_dim,
        "derivations_used": t.derivations_used,
        "restricted_to_graded": t.restricted,
    }


def cmd_quadric_type(args, io):
    t = parse_vector(args.t)
    if len(t) != 1:
        raise DomainError("bad-vector", "--t takes one rational")
    io.record["t"] = t[0]
    return {"t": t[0], "type": quadric_type(t[0])}


def _tree_report(tree):
    return {
        "counts": tree.counts(),
        "nodes": [
            {
                "id": n.id,
                "dim": n.dim,
                "parent": n.parent,
                "status": n.status,
                "duplicate_of": n.duplicate_of,
                "label": n.label,
                "notes": n.notes,
                "algebra": algebra_to_dict(n.algebra),
            }
            for n in tree.nodes
        ],
    }


def cmd_classify_filiform(args, io):
    io.record["max_dim"] = args.max_dim
    if args.max_dim < 3:
        raise DomainError("bad-argument", "--max-dim must be at least 3")
    tree = enumerate_graded_filiform(args.max_dim, args.budget, args.seed, jobs=args.jobs)
    return _tree_report(tree)


def cmd_classify(args, io):
    io.record["max_dim"] = args.max_dim
    try:
        tree = classify_nilpotent_small(args.max_dim, args.budget, args.seed, jobs=args.jobs)
    except ValueError as e:
        raise DomainError("bad-argument", str(e)) from None
    return _tree_report(tree)


def cmd_isomorphic(args, io):
    g = io.algebra(args, args.first, "first")
    h = io.algebra(args, args.second, "second")
    res = isomorphic(g, h, args.budget, args.seed, args.field)
    return {
        "status": res.status,
        "witness": res.witness,
        "invariant": res.invariant,
        "values": res.values,
        "notes": res.notes,
    }


def cmd_catalog(args, io):
    if args.name is None:
        return {"names": list(catalog.CATALOG_NAMES)}
    g = _resolve(args.name)
    io.record["name"] = args.name
    return algebra_to_dict(g)


def cmd_fingerprint(args, io):
    g = io.algebra(args, args.algebra)
    f = fingerprint(g)
    return {k: getattr(f, k) for k in f.__dataclass_fields__}


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=200, help="automorphisms to try in witness searches")
    common.add_argument("--field", choices=("real", "complex"), default="real")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for classification")

    p = argparse.ArgumentParser(prog="nilext", description="Nilpotent Lie algebras and central extensions.")
    p.add_argument("--version", action="version", version=f"nilext {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def algebra_cmd(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("algebra", nargs="?", default="-", help="algebra file, '-' for stdin (default)")
        sp.add_argument("--catalog", metavar="NAME", help="use a named algebra instead of a file")
        sp.set_defaults(fn=fn)
        return sp

    algebra_cmd("check", cmd_check, "Jacobi identity, nilpotency, layout")
    algebra_cmd("lcs", cmd_lcs, "lower central series")
    sp = algebra_cmd("cohomology", cmd_cohomology, "cohomology with trivial coefficients")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--weight", type=int)
    sp = algebra_cmd("filtration", cmd_filtration, "filtration of closed 2-forms")
    sp.add_argument("--form", action="append", required=True)
    sp.add_argument("--s", type=int)
    algebra_cmd("dual-chain", cmd_dual_chain, "the chain L_i of subspaces of the dual")
    sp = algebra_cmd("extend", cmd_extend, "central extension by closed 2-forms")
    sp.add_argument("--form", action="append", required=True)
    sp.add_argument("--names", help="comma-separated names for the new vectors")
    algebra_cmd("roundtrip", cmd_roundtrip, "split off the top of the lower central series")
    sp = algebra_cmd("orbit-equiv", cmd_orbit_equiv, "are two spans of classes in one automorphism orbit")
    sp.add_argument("--a", action="append", required=True, metavar="FORM")
    sp.add_argument("--b", action="append", required=True, metavar="FORM")
    sp.add_argument("--weight", type=int, help="work in the weight-homogeneous part of H^2")
    sp = algebra_cmd("rigidity", cmd_rigidity, "infinitesimal orbit dimension on the Grassmannian")
    sp.add_argument("--form", action="append", required=True)
    sp.add_argument("--weight", type=int)
    algebra_cmd("fingerprint", cmd_fingerprint, "isomorphism invariants")

    sp = sub.add_parser("orbit-label", parents=[common], help="orbit label of a point of H^2")
    sp.add_argument("--family", choices=("m25", "l23", "ltilde24"), required=True)
    sp.add_argument("--x", required=True, help="comma-separated coordinates")
    sp.set_defaults(fn=cmd_orbit_label)

    sp = sub.add_parser("quadric-type", parents=[common], help="type of the quadric F_t")
    sp.add_argument("--t", required=True)
    sp.set_defaults(fn=cmd_quadric_type)

    sp = sub.add_parser("classify-filiform", parents=[common], help="naturally graded filiform algebras")
    sp.add_argument("--max-dim", type=int, required=True)
    sp.set_defaults(fn=cmd_classify_filiform)

    sp = sub.add_parser("classify", parents=[common], help="all nilpotent algebras of dimension <= 4")
    sp.add_argument("--max-dim", type=int, required=True)
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("isomorphic", parents=[common], help="decide isomorphism of two algebras")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.set_defaults(fn=cmd_isomorphic)

    sp = sub.add_parser("catalog", parents=[common], help="emit a named algebra as a file")
    sp.add_argument("name", nargs="?")
    sp.set_defaults(fn=cmd_catalog)
    return p


def _emit(obj, stdout):
    stdout.write(json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n")


def run(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    io = Inputs(stdin)
    try:
        results = args.fn(args, io)
    except DomainError as e:
        err = {"type": e.kind, "message": str(e), **e.extra}
        _emit({"command": argv, "error": err}, stdout)
        print(f"error: {e}", file=stderr)
        return 1
    except (ValueError, ArithmeticError) as e:
        _emit({"command": argv, "error": {"type": type(e).__name__, "message": str(e)}}, stdout)
        print(f"error: {e}", file=stderr)
        return 1
    if args.command == "catalog" and args.name is not None:
        # the bare file, so it can be piped into other commands
        _emit(results, stdout)
        print(f"catalog {args.name}: dim {results['dim']}", file=stderr)
        return 0
    report = {
        "command": argv,
        "inputs": {"digest": io.digest()},
        "results": results,
        "provenance": {
            "seed": args.seed,
            "budget": args.budget,
            "field": args.field,
            "jobs": args.jobs,
            "version": __version__,
        },
    }
    _emit(report, stdout)
    print(f"{args.command}: ok", file=stderr)
    return 0


def main():
    sys.exit(run())
