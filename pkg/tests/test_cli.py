import json

import jsonschema
import pytest

from netforms.algebra import ZZ, Matrix
from netforms.cli import load_schema, main
from netforms.forms import AlternatingNet, TernarySymForm, split_form, split_net

SCHEMA = load_schema()


def run(capsys, *argv):
    code = main(list(argv) + ["--json"])
    out = capsys.readouterr().out
    rep = json.loads(out) if out.strip() else None
    if rep is not None:
        jsonschema.validate(rep, SCHEMA)
    return code, rep


@pytest.fixture
def split_net_file(tmp_path):
    path = tmp_path / "net.json"
    path.write_text(json.dumps(split_net(ZZ).to_json()))
    return str(path)


def test_verify_is_deterministic(capsys):
    args = ["verify", "--suite", "arithmetic", "--samples", "3", "--seed", "7", "--json"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    rep = json.loads(first)
    jsonschema.validate(rep, SCHEMA)
    assert "timings" not in rep
    assert rep["inputs"]["seed"] == 7


def test_verify_timings_are_opt_in(capsys):
    code, rep = run(capsys, "verify", "--suite", "identities", "--samples", "2", "--timings")
    assert code == 0 and set(rep["timings"]) == {"identities"}


@pytest.mark.parametrize("suite", ["identities", "roundtrip", "actions", "geometry", "arithmetic"])
def test_verify_suites_pass(capsys, suite):
    code, rep = run(capsys, "verify", "--suite", suite, "--samples", "2")
    assert code == 0 and rep["status"] == "pass"
    assert all(d["suite"] == suite for d in rep["details"])


def test_verify_rejects_zero_samples(capsys):
    assert main(["verify", "--samples", "0"]) == 2
    assert "samples" in capsys.readouterr().err


def test_unknown_subcommand_is_usage_error(capsys):
    assert main(["frobnicate"]) == 2


def test_correspond_split_net_gives_negated_split_form(capsys, split_net_file, tmp_path):
    out = tmp_path / "form.json"
    code, rep = run(capsys, "correspond", "--dir", "net2form", "--in", split_net_file, "--out", str(out))
    assert code == 0
    form = TernarySymForm.from_json(json.loads(out.read_text()))
    assert form.Q == split_form(ZZ).Q.scale(-1)
    assert rep["details"][0]["summary"]["det"] == "1"


def test_correspond_form_to_net(capsys, tmp_path):
    path = tmp_path / "form.json"
    path.write_text(json.dumps(split_form(ZZ).to_json()))
    code, rep = run(capsys, "correspond", "--dir", "form2net", "--in", str(path))
    assert code == 0
    assert AlternatingNet.from_json(rep["details"][0]["image"]) == split_net(ZZ)


def test_correspond_degenerate_net_fails_with_witness(capsys, tmp_path):
    net = split_net(ZZ)
    bad = AlternatingNet(ZZ, net.A, net.B, Matrix.zeros(ZZ, 5))
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad.to_json()))
    code, rep = run(capsys, "correspond", "--dir", "net2form", "--in", str(path))
    assert code == 1 and rep["status"] == "fail"
    assert "(0,0,1)" in rep["details"][0]["message"]


def test_correspond_missing_file(capsys, tmp_path):
    assert main(["correspond", "--dir", "net2form", "--in", str(tmp_path / "nope.json")]) == 2


def test_census_over_f2(capsys):
    code, rep = run(capsys, "census", "--q", "2")
    assert code == 0
    d = rep["details"][0]
    assert d["total"] == 15
    assert d["orbits"] == {"O1": 3, "O1'": 3, "O2": 3, "O3": 6}


def test_census_bad_field(capsys):
    assert main(["census", "--q", "6"]) == 2


def test_lines_and_trisecant(capsys):
    code, rep = run(capsys, "lines", "--q", "7", "--point", "0,-4,0,0,0,1,0")
    assert code == 0
    assert rep["details"][-1]["count"] == 3 and rep["details"][-1]["orbit"] == "O3"
    code, rep = run(capsys, "trisecant", "--q", "2", "--point", "1,0,0,1,0,0,1")
    assert code == 0
    assert rep["details"][-1]["profile"] == [1, 1, 1]
    assert all(d["field"]["p"] == 2 and d["field"]["degree"] == 2 for d in rep["details"][:-1])
    assert ["1", "w", "w+1"] in [d["label"] for d in rep["details"][:-1]]


@pytest.mark.parametrize("point", ["1,1,0,0,0,0,1", "1,2,3", "x,0,0,0,0,0,1"])
def test_bad_points_are_usage_errors(capsys, point):
    assert main(["lines", "--q", "5", "--point", point]) == 2


def test_act_fixture(capsys):
    code, rep = run(capsys, "act", "--char", "2", "--g", "1,1,0,1", "--point", "0,0,0,0,0,1,0")
    assert code == 0
    assert rep["details"][0]["image"] == ["0", "1", "0", "0", "0", "1", "0"]


def test_act_rejects_singular_element(capsys):
    assert main(["act", "--q", "5", "--g", "1,1,1,1", "--point", "0,0,0,0,0,1,0"]) == 2


def test_shafarevich(capsys):
    code, rep = run(capsys, "shafarevich", "--primes", "3")
    assert code == 0 and rep["details"][0]["count"] == 4
    code, rep = run(capsys, "shafarevich", "--primes", "2,3,5")
    assert code == 0 and rep["details"][0]["count"] == 8
    code, rep = run(capsys, "shafarevich", "--r", "4")
    assert rep["details"][0]["count"] == 8
    assert main(["shafarevich", "--primes", "9"]) == 2


def test_local_class(capsys, tmp_path):
    path = tmp_path / "q.json"
    path.write_text(json.dumps([[1, 0, 0], [0, 1, 0], [0, 0, -3]]))
    code, rep = run(capsys, "local-class", "--form", str(path), "--place", "3")
    assert code == 0
    assert rep["details"][0]["class"] == "nonsplit" and rep["details"][0]["good_reduction"] is False
    code, rep = run(capsys, "local-class", "--form", str(path), "--place", "inf")
    assert rep["details"][0]["class"] == "split"
    assert main(["local-class", "--form", str(path), "--place", "4"]) == 2


def test_split_model(capsys):
    code, rep = run(capsys, "split-model")
    assert code == 0
    assert rep["details"][0]["quadrics"][0] == "a0*a4 - a1*a3 + a2^2"
    code, rep = run(capsys, "split-model", "--q", "2")
    assert rep["details"][0]["quadrics"][0] == "a0*a4 + a1*a3 + a2^2"


def test_human_readable_output(capsys):
    assert main(["census", "--q", "3"]) == 0
    assert capsys.readouterr().out.startswith("census: pass")
