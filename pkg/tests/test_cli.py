import csv
import json
import subprocess
import sys

import pytest

from borel_lab.cli import main
from borel_lab.cli_util import dumps, parse_complex

ONES = '{"kind":"builtin","name":"ones"}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestComplexLiterals:
    @pytest.mark.parametrize(
        "text,value",
        [("0.5+0i", 0.5), ("3", 3), ("-2i", -2j), ("1 - 2.5i", 1 - 2.5j), ("i", 1j), ("-i", -1j),
         ("1e-3+4e2j", 1e-3 + 400j), (".5-.5i", 0.5 - 0.5j), ("-1e-2-3i", -0.01 - 3j), ("2e+1", 20)],
    )
    def test_parse(self, text, value):
        assert parse_complex(text) == value

    @pytest.mark.parametrize("text", ["", "abc", "1+", "1+2k", "i2", "1+2+3i", "--1"])
    def test_reject(self, text):
        with pytest.raises(ValueError):
            parse_complex(text)


def test_seventeen_digits():
    assert dumps({"x": 0.1}) == '{\n  "x": 0.10000000000000001\n}'
    assert dumps([float("inf")]) == '["inf"]'


class TestSum:
    def test_summable(self, capsys):
        code, out, _ = run(capsys, "sum", "--coeffs", ONES, "--z", "0.5+0i")
        doc = json.loads(out)
        assert code == 0
        assert doc["schema"] == "borel-lab/1"
        assert doc["status"] == "summable"
        assert doc["value"] == [2, 0]

    def test_divergent_exit_two(self, capsys):
        code, out, _ = run(capsys, "sum", "--coeffs", ONES, "--z", "1.5")
        assert code == 2 and json.loads(out)["status"] == "divergent"

    def test_output_round_trips(self, capsys, tmp_path):
        _, out, _ = run(capsys, "sum", "--coeffs", '{"kind":"list","values":[[1,0],[2,0]]}', "--z", "0.25")
        path = tmp_path / "prev.json"
        path.write_text(out)
        code, again, _ = run(capsys, "sum", "--coeffs", str(path), "--z", "0.25")
        assert code == 0 and json.loads(again)["value"] == json.loads(out)["value"]

    def test_deterministic(self, capsys):
        first = run(capsys, "sum", "--coeffs", '{"kind":"builtin","name":"hardy_ex"}', "--z", "1")[1]
        second = run(capsys, "sum", "--coeffs", '{"kind":"builtin","name":"hardy_ex"}', "--z", "1")[1]
        assert first == second

    def test_unknown_knob(self, capsys):
        code, _, err = run(capsys, "sum", "--coeffs", ONES, "--z", "0.5", "--set", "speed=3")
        assert code == 1
        assert "lambda_max" in err and "eps_tail_rel" in err

    def test_knob_applies(self, capsys):
        code, out, _ = run(capsys, "sum", "--coeffs", ONES, "--z", "-1", "--set", "lambda_max=100")
        doc = json.loads(out)
        assert code == 0 and doc["lambda_max"] == 100 and doc["value"] == [0.5, 0]

    def test_bad_json_reports_position(self, capsys):
        code, _, err = run(capsys, "sum", "--coeffs", '{"kind": }', "--z", "0.5")
        assert code == 1 and "line 1" in err and "column" in err

    def test_unknown_catalog(self, capsys):
        code, _, err = run(capsys, "sum", "--coeffs", '{"kind":"builtin","name":"nope"}', "--z", "0.5")
        assert code == 1 and "nope" in err


class TestCircle:
    def test_not_uniform(self, capsys, tmp_path):
        table = tmp_path / "sweep.csv"
        svg = tmp_path / "map.svg"
        code, out, _ = run(capsys, "circle", "--coeffs", ONES, "--r", "1.2", "--csv", str(table), "--svg", str(svg))
        assert code == 2
        assert json.loads(out)["uniform"] is False
        rows = list(csv.DictReader(table.open()))
        assert list(rows[0]) == ["theta", "status", "re", "im", "tail"]
        assert len(rows) == 64 and rows[0]["status"] == "divergent"
        assert svg.read_text().startswith("<svg")

    def test_uniform(self, capsys):
        code, out, _ = run(capsys, "circle", "--coeffs", ONES, "--r", "0.5", "--n-theta", "16")
        assert code == 0 and json.loads(out)["counts"]["summable"] == 16

    def test_csv_deterministic(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for p in (a, b):
            run(capsys, "circle", "--coeffs", '{"kind":"builtin","name":"hardy_ex"}', "--r", "1", "--n-theta", "16", "--csv", str(p))
        assert a.read_bytes() == b.read_bytes()


def test_theorem1(capsys):
    code, out, _ = run(capsys, "theorem1", "--coeffs", ONES, "--r", "0.9", "--n-theta", "16")
    doc = json.loads(out)
    assert code == 0 and doc["hypothesis"] and doc["consistent"]


def test_type(capsys):
    code, out, _ = run(capsys, "type", "--taylor", '{"kind":"builtin","name":"exp","params":{"c":2}}', "--r-grid", "0.2,0.4,0.8", "--n-theta", "16")
    doc = json.loads(out)
    assert code == 0 and doc["best_r"] == 0.4 and doc["type_bound"] == 2.5


class TestPolygon:
    def test_queries(self, capsys):
        code, out, _ = run(capsys, "polygon", "--singularities", "[[1,0]]", "--query", "0.5", "--query", "1", "--query", "2+1i")
        classes = [q["class"] for q in json.loads(out)["queries"]]
        assert code == 0 and classes == ["interior", "boundary", "exterior"]

    def test_inverted(self, capsys):
        _, out, _ = run(capsys, "polygon", "--singularities", "[[1,0]]", "--query", "0.5", "--inverted")
        assert json.loads(out)["queries"][0]["class"] == "exterior"

    def test_svg_vertical_line(self, capsys, tmp_path):
        svg = tmp_path / "pi.svg"
        code, _, _ = run(capsys, "polygon", "--singularities", "[[1,0]]", "--svg", str(svg), "--window", "-3,3,-3,3")
        text = svg.read_text()
        assert code == 0 and 'class="boundary"' in text
        # x = 1 maps to pixel 20 + 4 * 440 / 6
        xs = {tok.split(" ")[0] for tok in text.split('d="')[1].split('"')[0].replace("L", "M").split("M") if tok}
        assert xs == {"313.333"}

    def test_rejects_zero(self, capsys):
        code, _, err = run(capsys, "polygon", "--singularities", "[[0,0]]", "--query", "1")
        assert code == 1 and "empty polygon" in err


class TestFunctionals:
    def test_pair_contour(self, capsys):
        code, out, _ = run(capsys, "pair", "--moments", ONES, "--phi", "builtin:exp", "--contour", "0.5+0i,1.0")
        doc = json.loads(out)
        assert code == 0 and abs(doc["value"][0] - 2.718281828459045) < 1e-8

    def test_pair_multipole(self, capsys):
        code, out, _ = run(capsys, "pair", "--moments", ONES, "--phi", "builtin:s^2")
        assert code == 0 and json.loads(out)["value"] == [1, 0]

    def test_pair_invalid_contour(self, capsys):
        code, out, _ = run(capsys, "pair", "--moments", ONES, "--phi", "builtin:exp", "--contour", "5,1")
        assert code == 2 and json.loads(out)["error"] == "ContourInvalid"

    def test_moments_with_singularities(self, capsys):
        moments = '{"kind":"list","values":[[1,0],[1,0],[1,0]],"singularities":[[3,0]]}'
        code, out, _ = run(capsys, "pair", "--moments", moments, "--phi", "builtin:exp(2*s)", "--contour", "0,1")
        assert code == 0 and abs(json.loads(out)["value"][0] - 5.0) < 1e-8

    def test_gval(self, capsys):
        code, out, _ = run(capsys, "gval", "--moments", ONES, "--s", "3+0i")
        assert code == 0 and json.loads(out)["value"][1] == pytest.approx(0.0795774715459, rel=1e-9)

    def test_gval_boundary(self, capsys):
        code, out, _ = run(capsys, "gval", "--moments", ONES, "--s", "0.5+0.5i")
        assert code == 2 and json.loads(out)["error"] == "NotSummableHere"

    def test_ftcheck(self, capsys):
        code, out, _ = run(capsys, "ftcheck", "--coeffs", '{"kind":"builtin","name":"exp_sigma","params":{"sigma":0.5}}', "--s", "0+2i")
        assert code == 0 and json.loads(out)["abs_diff"] < 1e-8


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog")
    ids = [e["id"] for e in json.loads(out)["entries"]]
    assert code == 0 and "hardy_ex" in ids


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "borel_lab", "catalog"], capture_output=True, text=True)
    assert proc.returncode == 0 and '"schema": "borel-lab/1"' in proc.stdout
