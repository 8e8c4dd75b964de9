import io
import json
import os
import subprocess
import sys

import oracles
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilext import catalog
from nilext.cli import (
    algebra_from_dict,
    algebra_to_dict,
    format_form,
    parse_algebra_text,
    parse_form,
    run,
)
from nilext.cohomology import ExteriorForm
from nilext.lie import LieAlgebra


def call(argv, stdin_text=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdin=io.StringIO(stdin_text), stdout=out, stderr=err)
    return code, json.loads(out.getvalue()) if out.getvalue() else None, err.getvalue()


def write_algebra(tmp_path, g, name="g.json"):
    p = tmp_path / name
    p.write_text(json.dumps(algebra_to_dict(g)))
    return str(p)


@pytest.mark.parametrize("name", catalog.CATALOG_NAMES)
def test_algebra_file_round_trip(name):
    g = catalog.resolve(name)
    h = parse_algebra_text(json.dumps(algebra_to_dict(g)))
    assert h == g and h.names == g.names


def test_catalog_pipes_into_cohomology():
    env = dict(os.environ)
    first = subprocess.run(
        [sys.executable, "-m", "nilext", "catalog", "m0:4"], capture_output=True, text=True, check=True, env=env
    )
    second = subprocess.run(
        [sys.executable, "-m", "nilext", "cohomology", "--degree", "2"],
        input=first.stdout, capture_output=True, text=True, env=env,
    )
    assert second.returncode == 0
    report = json.loads(second.stdout)
    assert report["results"]["dim"] == oracles.betti(catalog.m0(4), 2) == 3
    assert set(report) == {"command", "inputs", "results", "provenance"}


def test_jacobi_violation_exits_1_with_triples(tmp_path):
    bad = LieAlgebra(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {0: 1}})
    code, out, err = call(["check", write_algebra(tmp_path, bad)])
    assert code == 1
    assert out["error"]["type"] == "jacobi-violated"
    assert out["error"]["triples"] == [["e1", "e2", "e3"]]
    assert "error" in err


def test_check_reports_structure():
    code, out, _ = call(["check", "--catalog", "m1:5"])
    assert code == 0
    assert out["results"] == {
        "jacobi": "ok", "dim": 6, "nilpotent": True, "nil_index": 5, "filiform": True, "carnot_layout": True
    }


def test_quadric_type_at_one_eighth():
    for t, want in [("1/8", "parabolic-cylinder"), ("0", "hyperbolic-paraboloid"), ("1", "elliptic-paraboloid")]:
        code, out, _ = call(["quadric-type", "--t", t])
        assert code == 0 and out["results"]["type"] == want


def test_malformed_json_reports_line_and_column():
    code, out, _ = call(["lcs"], '{"format_version": 1,\n  "dim": }')
    assert code == 1
    assert out["error"]["type"] == "malformed-file"
    assert out["error"]["position"] == {"line": 2, "column": 10}


def test_malformed_field_reports_json_path(tmp_path):
    d = algebra_to_dict(catalog.heisenberg())
    d["brackets"][0]["terms"][0]["coeff"] = "1/0"
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(d))
    code, out, _ = call(["lcs", str(p)])
    assert code == 1
    assert out["error"]["position"] == "$.brackets[0].terms[0].coeff"
    d["brackets"][0]["terms"][0]["coeff"] = 1
    p.write_text(json.dumps(d))
    assert call(["lcs", str(p)])[1]["error"]["position"] == "$.brackets[0].terms[0].coeff"


def test_invalid_layout_is_a_domain_error():
    d = algebra_to_dict(catalog.heisenberg())
    d["weights"] = [1, 1, 1]
    code, out, _ = call(["lcs"], json.dumps(d))
    assert code == 1 and out["error"]["type"] == "invalid-algebra"


def test_usage_errors_exit_2(capsys):
    assert run(["cohomology"], stdin=io.StringIO("")) == 2
    assert run(["no-such-command"]) == 2
    assert run(["orbit-label", "--family", "xx", "--x", "1"]) == 2


def test_unknown_catalog_name_exits_1():
    code, out, _ = call(["lcs", "--catalog", "m7:1"])
    assert code == 1 and out["error"]["type"] == "unknown-catalog-name"
    code, out, _ = call(["catalog", "nonsense"])
    assert code == 1


def test_non_closed_form_is_rejected():
    code, out, _ = call(["extend", "--catalog", "m0:3", "--form", "e2^e4"])
    assert code == 1 and out["error"]["type"] == "not-closed"


def test_extend_and_roundtrip():
    code, out, _ = call(["extend", "--catalog", "l23", "--form", "a1^a3", "--form", "b1^b3", "--names", "a4,b4"])
    assert code == 0
    res = out["results"]
    assert algebra_from_dict(res["algebra"]) == catalog.l_tilde_2_4()
    assert res["raises_nil_index"] and res["has_filtration_s"]
    code, out, _ = call(["roundtrip", "--catalog", "ltilde24"])
    assert out["results"]["rebuild_matches"] and out["results"]["ideal_dim"] == 2


def test_orbit_commands():
    code, out, _ = call(["orbit-label", "--family", "m25", "--x", "2,1,0"])
    assert out["results"] == {"label": "line", "parameter": "1/2", "representative": ["1/1", "1/2", "0/1"]}
    code, out, _ = call(["orbit-label", "--family", "l23", "--x", "1,0,1", "--field", "complex"])
    assert out["results"]["label"] == "generic"
    code, out, _ = call(["orbit-label", "--family", "m25", "--x", "0,0,0"])
    assert code == 1
    code, out, _ = call(["orbit-equiv", "--catalog", "h3+k", "--a", "e1^e4", "--b", "e2^e4"])
    assert out["results"]["status"] == "yes"
    code, out, _ = call(["rigidity", "--catalog", "h3", "--form", "e1^e3"])
    assert out["results"]["status"] == "open orbit certified"


def test_isomorphic_on_files(tmp_path):
    a = write_algebra(tmp_path, catalog.family_Lt(1), "a.json")
    b = write_algebra(tmp_path, catalog.family_Lt(-1), "b.json")
    code, out, _ = call(["isomorphic", a, b, "--budget", "400"])
    assert code == 0 and out["results"]["status"] == "yes"


def test_jobs_do_not_change_results():
    _, one, _ = call(["classify-filiform", "--max-dim", "7", "--jobs", "1"])
    _, two, _ = call(["classify-filiform", "--max-dim", "7", "--jobs", "2"])
    assert one["results"] == two["results"]
    assert one["inputs"] == two["inputs"]
    assert two["provenance"]["jobs"] == 2


def test_digest_depends_on_input_only():
    _, a, _ = call(["lcs", "--catalog", "l23", "--seed", "1"])
    _, b, _ = call(["lcs", "--catalog", "l23", "--seed", "2"])
    _, c, _ = call(["lcs", "--catalog", "free:2:3"])
    assert a["inputs"] == b["inputs"] != c["inputs"]


@given(st.dictionaries(st.sampled_from([(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)]),
                       st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool), min_size=1))
def test_form_text_round_trip(terms):
    g = catalog.l23()
    w = ExteriorForm(2, 5, terms)
    if not w:
        return
    assert parse_form(format_form(w, g), g) == w


def test_parse_form_accepts_names_and_generic_indices():
    g = catalog.l23()
    w = parse_form("a1^a3 - 1/2*b1^b3", g)
    assert w == ExteriorForm(2, 5, {(0, 3): 1, (1, 4): "-1/2"})
    assert parse_form("e1^e4 - 1/2*e2^e5", g) == w
    assert parse_form("-b1^a1", g) == ExteriorForm(2, 5, {(0, 1): 1})
