import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from orientcorr.cli import exit_code, run
from orientcorr.verify import InequalityReport, SweepResult


def call(*argv):
    buf = io.StringIO()
    code = run([str(a) for a in argv], buf)
    return code, buf.getvalue()


def call_json(*argv):
    code, text = call(*argv)
    return code, json.loads(text)


def test_verify_lemma1(data_dir):
    code, rep = call_json("verify", "lemma1", "--graph", data_dir / "path.g", "--u", "u", "--p", "1/2")
    assert code == 0 and rep["exit_code"] == 0
    assert rep["subcommand"] == "verify lemma1"
    assert all(e["holds"] and e["diff"]["differences"] == [] for e in rep["entries"])
    s = rep["summary"]
    assert s["checked"] == len(rep["entries"]) == s["held"] and s["violated"] == 0


def test_verify_corollaries(data_dir):
    code, rep = call_json("verify", "corollaries", "--graph", data_dir / "k4-ab.g", "--s", "s", "--a", "a", "--b", "b", "--t", "c")
    assert code == 0
    assert [e["holds"] for e in rep["entries"]] == [True, True, True]


def test_mc(data_dir):
    code, rep = call_json(
        "mc", "--model", "o", "--graph", data_dir / "triangle.g", "--event", "reach:s->a", "--samples", "100000", "--seed", "42"
    )
    assert code == 0
    (e,) = rep["entries"]
    assert abs(float(e["estimate"]) - 0.625) <= 3 * float(e["standard_error"])
    assert rep["summary"]["estimates"] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "lemma1", "--graph", "missing.g", "--u", "u", "--p", "1/2"],
        ["verify", "lemma1", "--graph", "{data}/path.g", "--u", "u", "--p", "0.5"],
        ["verify", "lemma1", "--graph", "{data}/path.g", "--u", "zz", "--p", "1/2"],
        ["verify", "lemma1", "--graph", "{data}/path.g", "--u", "u", "--p", "3/2"],
        ["verify", "corollaries", "--graph", "{data}/triangle.g", "--s", "s", "--a", "a", "--b", "b", "--t", "s"],
        ["verify", "nonsense", "--graph", "{data}/path.g"],
        ["search", "signs", "--n", "9"],
        ["mc", "--model", "x:p=1", "--graph", "{data}/triangle.g", "--event", "true"],
        ["mc", "--model", "o", "--graph", "{data}/triangle.g", "--event", "true", "--samples", "0"],
        ["dist", "--graph", "{data}/path.g", "--u", "u", "--max-states", "2"],
        [],
    ],
)
def test_input_errors_exit_1(data_dir, argv, capsys):
    code, out = call(*[a.format(data=data_dir) for a in argv])
    assert code == 1 and out == ""
    assert "error" in capsys.readouterr().err


def test_reports_are_byte_identical(data_dir):
    argv = ["verify", "oriented-harris", "--graph", data_dir / "triangle.g", "--s", "s"]
    _, a = call_json(*argv)
    _, b = call_json(*argv)
    a.pop("wall_time_s"), b.pop("wall_time_s")
    assert json.dumps(a) == json.dumps(b)
    assert a["input_digest"].startswith("sha256:")
    _, c = call_json(*argv, "--threads", "2")
    assert c["input_digest"] == a["input_digest"]


def test_digest_tracks_inputs(data_dir):
    _, a = call_json("verify", "lemma1", "--graph", data_dir / "path.g", "--u", "u", "--p", "1/2")
    _, b = call_json("verify", "lemma1", "--graph", data_dir / "path.g", "--u", "u", "--p", "1/3")
    assert a["input_digest"] != b["input_digest"]


def test_text_format(data_dir):
    code, text = call("verify", "oriented-harris", "--graph", data_dir / "triangle.g", "--s", "s",
                      "--event", "reach:s->a", "--event", "reach:s->b", "--format", "text")
    lines = text.splitlines()
    assert code == 0
    assert lines[0].startswith("PASS oriented-harris") and "lhs=25/64 <= rhs=1/2" in lines[0]
    assert lines[-1].startswith("verify oriented-harris: checked=1 held=1")


def test_other_subcommands(data_dir):
    code, rep = call_json("bunkbed", "--graph", data_dir / "edge.g", "--u", "x", "--v", "y", "--p", "1/2")
    assert code == 0 and rep["entries"][0]["lhs"] == "9/16" and rep["entries"][0]["rhs"] == "7/16"
    code, rep = call_json("dist", "--graph", data_dir / "path.g", "--u", "u", "--model", "e:p=1/2")
    assert code == 0
    code, rep = call_json("search", "signs", "--n", "3")
    assert code == 0 and rep["summary"]["findings"] == len(rep["entries"])
    for claim, extra in [
        ("lemma2", ["--u", "u", "--v", "w", "--p", "1/3"]),
        ("harris", ["--p", "1/3"]),
        ("oriented-vdbhk", ["--s", "s", "--x", "b", "--event", "reach:s->a", "--event", "reach:s->a"]),
        ("mixed", ["--u", "u", "--pp", "1/3", "--p", "1/2"]),
    ]:
        code, rep = call_json("verify", claim, "--graph", data_dir / "path.g" if claim != "oriented-vdbhk" else data_dir / "triangle.g", *extra)
        assert code == 0, claim
        assert rep["summary"]["violated"] == 0


def test_exit_code_contract():
    ok = InequalityReport("x", {}, Fraction(1), Fraction(2))
    bad = InequalityReport("x", {}, Fraction(2), Fraction(1))
    finding = InequalityReport("bunkbed", {}, Fraction(1), Fraction(2), ">=", conjecture=True)
    broken_cross = InequalityReport("bunkbed", {}, Fraction(1), Fraction(1), ">=", conjecture=True, notes={"crosscheck": False})
    assert exit_code([ok]) == 0
    assert exit_code([ok, finding]) == 3
    assert exit_code([finding, bad]) == 2
    assert exit_code([broken_cross]) == 2
    assert exit_code([SweepResult("s", 1, 0, 0, ["v"])]) == 2


def test_module_entry_point(data_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "orientcorr", "verify", "lemma1", "--graph", str(data_dir / "path.g"), "--u", "u", "--p", "1/2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["tool"] == "orientcorr"
