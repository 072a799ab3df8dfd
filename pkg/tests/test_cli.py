import json
import subprocess
import sys

import jsonschema
import pytest

from bppdiag import schema
from bppdiag.cli import run
from bppdiag.core import parse_json, parse_text


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_moments_formula(capsys):
    code, out, _ = call(capsys, "moments", "--dims", "2,2,2", "--method", "formula")
    assert code == 0
    doc = json.loads(out)
    assert doc["cov"]["0"]["0"] == "4/5"
    assert doc["cov"]["-1"]["1"] == "1/5"
    jsonschema.validate(doc, schema("exact_moments"))


@pytest.mark.parametrize("method", ["enumerate", "dp"])
def test_moments_exact_engines_agree_with_formula(capsys, method):
    _, formula, _ = call(capsys, "moments", "--dims", "2,3,2", "--method", "formula")
    code, out, _ = call(capsys, "moments", "--dims", "2,3,2", "--method", method)
    assert code == 0
    a, b = json.loads(formula), json.loads(out)
    jsonschema.validate(b, schema("exact_moments"))
    assert (a["mean"], a["cov"], a["count"]) == (b["mean"], b["cov"], b["count"])


def test_moments_mc(capsys):
    code, out, _ = call(capsys, "moments", "--dims", "2,2,2", "--method", "mc", "--n", "3000", "--seed", "5")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema("mc_report"))
    assert doc["pass"] is True


def test_moments_mc_failure_exit(capsys):
    code, out, _ = call(capsys, "moments", "--dims", "2,2,2", "--method", "mc", "--n", "3000",
                        "--threshold", "0")
    assert code == 1 and json.loads(out)["pass"] is False


def test_gf(capsys):
    code, out, _ = call(capsys, "gf", "--dims", "1,1,2")
    assert code == 0 and out.strip() == "1 + q + q^2"
    code, out, err = call(capsys, "gf", "--dims", "2,2,2", "--check", "--format", "json")
    assert code == 0 and "equals" in err
    jsonschema.validate(json.loads(out), schema("qpolynomial"))


def test_stanley(capsys):
    code, out, _ = call(capsys, "stanley", "--a", "2", "--b", "2", "--max-degree", "4", "--check")
    doc = json.loads(out)
    assert code == 0 and doc["check"] is True
    jsonschema.validate(doc, schema("stanley"))
    counts = {tuple(r["exponents"]): r["count"] for r in doc["coefficients"]}
    assert counts[(1, 2, 1)] == "2"


def test_sample_formats_and_determinism(capsys):
    _, text, _ = call(capsys, "sample", "--dims", "3,4,5", "--seed", "0x1f")
    _, again, _ = call(capsys, "sample", "--dims", "3,4,5", "--seed", "31")
    assert text == again
    p = parse_text(text)
    _, js, _ = call(capsys, "sample", "--dims", "3,4,5", "--seed", "31", "--format", "json")
    jsonschema.validate(json.loads(js), schema("partition"))
    assert parse_json(js) == p
    code, out, _ = call(capsys, "sample", "--dims", "3,4,5", "--seed", "1", "--method", "mcmc",
                        "--sweeps", "10", "--start", "top")
    assert code == 0 and parse_text(out).dims.c == 5


def test_enumerate(capsys):
    code, out, _ = call(capsys, "enumerate", "--dims", "2,2,1")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 6
    assert [parse_json(x).z for x in lines][0] == ((0, 0), (0, 0))
    _, out, _ = call(capsys, "enumerate", "--dims", "4,4,4", "--count-only")
    assert out.strip() == "232848"


def test_render(capsys, tmp_path, p222):
    src = tmp_path / "p.json"
    src.write_text(json.dumps({"a": 2, "b": 2, "c": 2, "z": [[2, 1], [1, 0]]}))
    dst = tmp_path / "fig.svg"
    assert run(["render", "--in", str(src), "--out", str(dst)]) == 0
    from bppdiag.render import render_svg

    assert dst.read_text() == render_svg(p222)
    code, out, _ = call(capsys, "render", "--in", str(src), "--out", "-", "--no-contours", "--no-sums")
    assert code == 0 and "contour" not in out and 'class="sum"' not in out


def test_verify(capsys):
    code, out, _ = call(capsys, "verify", "--grid", "3,3,3")
    assert code == 0
    assert out.strip().endswith("0 failed")
    assert "harmonicity" in out and "quadratic-identity" in out


def test_bench(capsys):
    code, out, _ = call(capsys, "bench", "--dims", "3,3,3", "--n", "50", "--seed", "2")
    assert code == 0
    jsonschema.validate(json.loads(out), schema("bench"))


@pytest.mark.parametrize("argv", [
    ["moments", "--dims", "2,2"],
    ["moments", "--dims", "0,2,2"],
    ["sample", "--dims", "2,2,2", "--seed", "-4"],
    ["frobnicate"],
    ["enumerate", "--dims", "4,4,4", "--cap", "10"],
])
def test_usage_errors(capsys, argv):
    assert run(argv) == 2


def test_invalid_partition_file(capsys, tmp_path):
    src = tmp_path / "bad.txt"
    src.write_text("2 2 2\n1 2\n0 0\n")
    assert run(["render", "--in", str(src), "--out", str(tmp_path / "x.svg")]) == 2
    assert "row" in capsys.readouterr().err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "bppdiag", "gf", "--dims", "2,2,1"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.strip() == "1 + q + 2*q^2 + q^3 + q^4"
