import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from coideal.cli import main, parse_object, parse_operator
from coideal.flagcat import FlagObject

DATA = Path(__file__).parent / "data"


@pytest.fixture
def run():
    runner = CliRunner()
    return lambda *args, **kw: runner.invoke(main, list(args), **kw)


@pytest.mark.parametrize("op,poly,expected", [
    ("[2,1]", "t1^2", "t1 + t2"),
    ("j[1,1]", "t1^2", "0"),
    ("j[1,1]", "t1", "1"),
    ("[1,3]", "t3^2", "1"),
])
def test_demazure_command(run, op, poly, expected):
    res = run("demazure", "--op", op, "--poly", poly)
    assert res.exit_code == 0, res.output
    assert res.output.strip() == expected


def test_demazure_rejects_bad_operator(run):
    res = run("demazure", "--op", "j[2,3]", "--poly", "t1")
    assert res.exit_code == 1
    assert "type B operator" in res.output


def test_bubble_command(run):
    res = run("bubble", "--i", "1/2", "--s", "0", "--orient", "cw", "--object", "a=1;r=1;m=2")
    assert res.exit_code == 0 and res.output.strip() == "2"
    res = run("bubble", "--i", "1/2", "--s", "-3", "--orient", "ccw", "--object", "1", "--m", "2")
    assert res.exit_code == 0 and res.output.strip() == "1"


def test_parse_helpers():
    assert parse_object("a=1,2;r=2;m=3") == FlagObject(2, 3, (1, 2))
    assert parse_object("1,2", 4) == FlagObject(2, 4, (1, 2))
    with pytest.raises(ValueError):
        parse_object("r=2")
    assert str(parse_operator("[3,1]", 3)) == "[3,1]"
    with pytest.raises(ValueError):
        parse_operator("(1,2)", 3)


def test_eval_bubble_file(run):
    res = run("eval", "--diagram", str(DATA / "bubble.dgm"), "--all")
    assert res.exit_code == 0
    assert res.output.splitlines() == ["degree 0", "() -> (2)*[]"]


def test_eval_single_vector(run):
    res = run("eval", "--diagram", str(DATA / "sideways_fe.dgm"), "--vector", "0,0")
    assert res.output.splitlines() == ["degree 1", "(0,0) -> (-1)*[1 ⊗ 1]"]
    res = run("eval", "--diagram", str(DATA / "identity.dgm"), "--vector", "1,1")
    assert res.output.splitlines()[1] == "(1,1) -> (1)*[t1 ⊗ t1]"


def test_eval_usage_errors(run, tmp_path):
    res = run("eval", "--diagram", str(DATA / "identity.dgm"))
    assert res.exit_code == 2
    res = run("eval", "--diagram", str(DATA / "identity.dgm"), "--vector", "7,7")
    assert res.exit_code == 1 and "not a basis tuple" in res.output
    bad = tmp_path / "bad.dgm"
    bad.write_text("object a=1; r=1; m=2\nbottom E(1/2)\nlayer cap(1/2,cw)@0\n")
    res = run("eval", "--diagram", str(bad), "--all")
    assert res.exit_code == 1 and "Error" in res.output


def test_verify_core_passes(run):
    res = run("verify", "--suite", "core", "--r", "1", "--m", "2")
    assert res.exit_code == 0
    assert res.output.strip().endswith("ALL PASS")


def test_verify_rejects_zero_rank(run):
    assert run("verify", "--r", "0").exit_code == 2


def test_verify_k0_json(run, tmp_path):
    out = tmp_path / "k0.json"
    res = run("verify", "--suite", "k0", "--r", "2", "--m", "3", "--json", str(out))
    assert res.exit_code == 0
    data = json.loads(out.read_text())
    assert data["k0"]["failures"] == []


def test_jobs_from_environment(run):
    res = run("verify", "--suite", "bubbleslides", "--r", "1", "--m", "2", env={"COIDEAL_JOBS": "2"})
    assert res.exit_code == 0
    assert "jobs=2" in res.output


def test_paper_map_lists_families(run):
    res = run("paper-map")
    assert res.exit_code == 0
    assert "adjunction zigzags: adj" in res.output.splitlines()
