import json

import pytest

from weilrest.cli import main

C2_CONTEXT = {
    "schema_version": 1,
    "group": {"named": {"family": "C", "n": 2}},
    "H": [0],
    "names": {"k": "Q", "l": "Q(zeta3)", "L": "Q(zeta3)"},
}

S3_CONTEXT = {
    "schema_version": 1,
    "group": {"named": {"family": "S", "n": 3}},
    "H": [0, 1],
}

BR_REAL_MODEL = {
    "schema_version": 1,
    "field": "R",
    "group": {"cyclic": 2},
    "index": {"0": 1, "1": 2},
    "maps": [
        {
            "to": "C",
            "degree": 2,
            "target": {"field": "C", "group": {"trivial": True}, "index": {"0": 1}},
            "res": {"type": "zero"},
            "cor": {"type": "zero"},
        }
    ],
}


@pytest.fixture
def c2_context(tmp_path):
    path = tmp_path / "galois_c2.json"
    path.write_text(json.dumps(C2_CONTEXT))
    return str(path)


@pytest.fixture
def s3_context(tmp_path):
    path = tmp_path / "s3_c2.json"
    path.write_text(json.dumps(S3_CONTEXT))
    return str(path)


@pytest.fixture
def br_real_model(tmp_path):
    path = tmp_path / "br_r.json"
    path.write_text(json.dumps(BR_REAL_MODEL))
    return str(path)


def run_json(capsys, argv):
    status = main(argv)
    out = capsys.readouterr().out
    return status, json.loads(out)


def test_restrict_moduli_example(capsys, c2_context):
    status, report = run_json(capsys, ["restrict", "--context", c2_context, "--n", "7"])
    assert status == 0
    assert report["schema_version"] == 1
    assert report["result"]["display"] == {"Q": 7, "Q(zeta3)": 21}


def test_restrict_n1(capsys, c2_context):
    status, report = run_json(capsys, ["restrict", "--context", c2_context, "--n", "1"])
    assert status == 0
    assert report["result"]["display"] == {"Q": 1}


def test_restrict_text_format(capsys, c2_context):
    status = main(["restrict", "--context", c2_context, "--n", "7", "--format", "text"])
    out = capsys.readouterr().out
    assert status == 0
    assert out.strip() == "U(Q)^{⊕7} ⊕ U(Q(zeta3))^{⊕21}"


def test_dimcheck_s3(capsys, s3_context):
    status, report = run_json(capsys, ["dimcheck", "--context", s3_context, "--n", "2"])
    assert status == 0
    assert report["result"]["holds"] is True
    assert report["result"]["total"] == 8


def test_orbits_records(capsys, c2_context):
    status, report = run_json(capsys, ["orbits", "--context", c2_context, "--n", "2"])
    assert status == 0
    result = report["result"]
    assert result["orbit_count"] == result["burnside_count"] == 3
    assert result["orbits"][0] == {
        "rep": [1, 1],
        "size": 1,
        "stab": [0, 1],
        "stab_index": 1,
    }


def test_restrict_class(capsys, c2_context):
    status, report = run_json(
        capsys, ["restrict-class", "--context", c2_context, "--m", "2,1"]
    )
    assert status == 0
    assert report["result"]["display"] == {"Q": 5, "Q(zeta3)": 2}


def test_coverage(capsys, s3_context):
    status, report = run_json(capsys, ["coverage", "--context", s3_context, "--n", "2"])
    assert status == 0
    assert report["result"]["holds"] is True
    assert len(report["result"]["witnesses"]) == 2


def test_excoll(capsys, c2_context):
    status, report = run_json(
        capsys,
        [
            "excoll",
            "--context",
            c2_context,
            "--n",
            "2",
            "--scheme",
            "P1",
            "--dim-x",
            "1",
        ],
    )
    assert status == 0
    ambient = report["result"]["ambient"]
    assert ambient["relation"] == "direct summand of"
    assert ambient["twist_bound"] == 2


def test_polymap_cube(capsys):
    status, report = run_json(capsys, ["polymap", "--map", "power:3"])
    assert status == 0
    result = report["result"]
    assert result["degree"] == 3
    assert result["coefficients"] == {"1": [1], "2": [6], "3": [6]}
    assert result["witness"] is not None


def test_polymap_compose(capsys):
    status, report = run_json(
        capsys, ["polymap", "--map", "compose(power:2,power:2)"]
    )
    assert status == 0
    assert report["result"]["degree"] == 4


def test_polymap_exceeds_bound_exit_code(capsys):
    # scale:2 is fine; an exponential is not expressible, so force a budget error
    status = main(["polymap", "--map", "mul:2", "--budget", "5"])
    err = capsys.readouterr().err
    assert status == 3
    assert json.loads(err.splitlines()[0])["error"]["code"] == "budget_exceeded"


def test_binom_value(capsys):
    status, report = run_json(
        capsys, ["binom", "--ring", "zp:5:8", "--x", "7", "--n", "3"]
    )
    assert status == 0
    assert report["result"]["value"].startswith("35 ")


def test_binom_axioms(capsys):
    status, report = run_json(
        capsys, ["binom", "--ring", "q", "--axioms", "--samples", "15", "--seed", "4"]
    )
    assert status == 0
    assert report["result"]["all_passed"] is True


def test_csa_hom(capsys, br_real_model):
    status, report = run_json(
        capsys,
        ["csa", "hom", "--model", br_real_model, "--class-a", "0", "--class-b", "1"],
    )
    assert status == 0
    assert report["result"]["generator"] == 2


def test_csa_restrict(capsys, br_real_model, c2_context):
    status, report = run_json(
        capsys,
        [
            "csa",
            "restrict",
            "--model",
            br_real_model,
            "--context",
            c2_context,
            "--class",
            "0",
        ],
    )
    assert status == 0
    assert report["result"] == {"class": "0", "degree": 1, "field": "R", "index": 1}


def test_csa_basechange(capsys, br_real_model):
    status, report = run_json(
        capsys,
        [
            "csa",
            "basechange",
            "--model",
            br_real_model,
            "--class-a",
            "0",
            "--class-b",
            "1",
            "--multiple",
            "1",
        ],
    )
    assert status == 0
    assert report["result"]["value"] == 2
    assert report["result"]["generator"] == 1


def test_determinism_byte_identical(capsys, c2_context):
    main(["restrict", "--context", c2_context, "--n", "7"])
    first = capsys.readouterr().out
    main(["restrict", "--context", c2_context, "--n", "7"])
    second = capsys.readouterr().out
    assert first == second


def test_validation_error_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"schema_version": 1, "group": {"named": {"family": "C", "n": 2}}}))
    status = main(["restrict", "--context", str(path), "--n", "2"])
    err = capsys.readouterr().err
    assert status == 2
    assert json.loads(err.splitlines()[0])["error"]["code"] == "validation_error"


def test_parse_error_reports_position(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\"schema_version\": 1,,}")
    status = main(["restrict", "--context", str(path), "--n", "2"])
    err = capsys.readouterr().err
    assert status == 2
    payload = json.loads(err.splitlines()[0])
    assert payload["error"]["code"] == "parse_error"
    assert "line" in payload["error"]["message"]


def test_cap_error_exit_code(capsys, c2_context):
    status = main(["restrict", "--context", c2_context, "--n", "7", "--cap", "10"])
    err = capsys.readouterr().err
    assert status == 3
    assert json.loads(err.splitlines()[0])["error"]["code"] == "enumeration_cap_exceeded"


def test_missing_schema_version(capsys, tmp_path):
    path = tmp_path / "noversion.json"
    path.write_text(json.dumps({"group": {"named": {"family": "C", "n": 2}}, "H": [0]}))
    status = main(["restrict", "--context", str(path), "--n", "2"])
    assert status == 2
