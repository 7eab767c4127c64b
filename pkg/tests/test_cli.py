import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from locc_volumes.cli import CSV_COLUMNS, main

SCHEMA = json.loads((Path(__file__).parents[1] / "docs" / "schema.json").read_text())
W_STATE = "0,0.3333333333333333,0.3333333333333333,0.33333333333333337"


def validate(doc, name):
    jsonschema.validate(doc, {"$ref": f"#/$defs/{name}", "$defs": SCHEMA["$defs"]})


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_schema_is_valid():
    jsonschema.Draft202012Validator.check_schema(SCHEMA)


class TestMeasure:
    def test_w_state(self, capsys):
        code, out, err = run(capsys, "measure", "--class", "w", "--params", "0,0.3333333,0.3333333,0.3333334")
        doc = json.loads(out)
        assert code == 0
        validate(doc, "measure")
        assert doc["Ea"] == pytest.approx(1.0, abs=1e-6) and doc["Es"] == 1.0
        assert err.startswith("config: ") and '"Ea"' not in err

    def test_generic_bit(self, capsys):
        code, out, _ = run(capsys, "measure", "--params", "ghz:0.1,0.2,0.3,0.5,1.0")
        doc = json.loads(out)
        validate(doc, "measure")
        assert doc["bit"] is True and doc["dims"] == {"accessible": 3, "source": 3}

    def test_json_file(self, capsys, tmp_path):
        f = tmp_path / "s.json"
        f.write_text(json.dumps({"class": "ghz", "g1": 0.2, "g2": 0.2, "g3": 0.2, "r": 1.0, "phi": 0.0}))
        code, out, _ = run(capsys, "measure", "--params-file", str(f))
        assert code == 0 and json.loads(out)["dims"] == {"accessible": 4, "source": 0}

    def test_inline_and_file_conflict(self, capsys, tmp_path):
        code, out, err = run(capsys, "measure", "--class", "w", "--params", W_STATE,
                             "--params-file", str(tmp_path / "x.json"))
        assert code == 2 and out == "" and "not both" in err

    def test_class_conflict(self, capsys):
        code, _, _ = run(capsys, "measure", "--class", "ghz", "--params", "w:" + W_STATE)
        assert code == 2

    def test_invalid_state(self, capsys):
        code, out, err = run(capsys, "measure", "--class", "w", "--params", "0.5,0.5,0.5,0.5")
        assert code == 2 and out == "" and "NotNormalized" in err

    def test_seventeen_digits(self, capsys):
        _, out, _ = run(capsys, "measure", "--class", "w", "--params", "0.4,0.2,0.2,0.2")
        assert '"C1": 0.32000000000000006' in out


class TestConvertible:
    def test_w_to_target(self, capsys):
        code, out, _ = run(capsys, "convertible", "--from", "w:" + W_STATE, "--to", "w:0.4,0.2,0.2,0.2")
        assert code == 0
        validate(json.loads(out), "convertDecision")

    def test_not_convertible(self, capsys):
        code, out, _ = run(capsys, "convertible", "--from", "w:0.4,0.2,0.2,0.2", "--to", "w:" + W_STATE)
        doc = json.loads(out)
        assert code == 1 and doc["failedCondition"] == "Inequality_i"

    def test_ghz_target_z(self, capsys):
        code, out, _ = run(capsys, "convertible", "--class", "ghz", "--from", "0.2,0.2,0.2,1,0",
                           "--to", "0.3,0.3,0.3,1,0")
        doc = json.loads(out)
        validate(doc, "convertDecision")
        assert code == 1 and doc["failedCondition"] == "MesPhiConstraint"
        assert doc["targetZ"]["r"] == 1.0

    def test_dimension_mismatch(self, capsys):
        code, _, _ = run(capsys, "convertible", "--from", "bipartite:0.5,0.5", "--to", "bipartite:0.5,0.3,0.2")
        assert code == 2


class TestInvert:
    def test_ghz(self, capsys):
        _, out, _ = run(capsys, "measure", "--params", "ghz:0.1,0.2,0.3,0.5,1.0")
        code, out, _ = run(capsys, "invert", "--class", "ghz", "--measures", out)
        doc = json.loads(out)
        validate(doc, "inversion")
        assert code == 0 and doc["state"]["g1"] == pytest.approx(0.1, abs=1e-8)

    def test_ghz_without_bit(self, capsys):
        _, out, _ = run(capsys, "measure", "--params", "ghz:0.1,0.2,0.3,0.5,1.0")
        doc = json.loads(out)
        doc["bit"] = None
        code, out, err = run(capsys, "invert", "--class", "ghz", "--measures", json.dumps(doc))
        assert code == 3 and out == "" and "BitRequired" in err
        code, out, _ = run(capsys, "invert", "--class", "ghz", "--measures", json.dumps(doc), "--bit", "1")
        assert code == 0

    def test_mes(self, capsys):
        _, out, _ = run(capsys, "measure", "--params", "ghz:0.2,0.2,0.2,1,0")
        code, out, _ = run(capsys, "invert", "--class", "ghz-mes", "--measures", out)
        assert code == 0 and json.loads(out)["state"]["g3"] == pytest.approx(0.2, abs=1e-12)

    def test_vanishing(self, capsys):
        _, out, _ = run(capsys, "measure", "--params", "ghz:0,0.1,0.2,0.5")
        code, out, _ = run(capsys, "invert", "--class", "ghz-vanishing", "--measures", out)
        assert code == 0 and json.loads(out)["state"]["r"] == pytest.approx(0.5, abs=1e-10)

    def test_w_ambiguous(self, capsys):
        code, out, _ = run(capsys, "invert", "--class", "w", "--measures",
                           '{"C1": 0.32000000000000006, "C2": 0.32000000000000006, "Ea": 0.216}')
        doc = json.loads(out)
        validate(doc, "ambiguous")
        assert code == 3 and len(doc["candidates"]) == 2

    def test_missing_key(self, capsys):
        code, _, err = run(capsys, "invert", "--class", "ghz", "--measures", '{"C1": 0.1}')
        assert code == 2 and "missing" in err


class TestSampleAndBipartite:
    def test_csv_columns(self, capsys):
        code, out, _ = run(capsys, "sample", "--class", "w", "-n", "5", "--seed", "1")
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0 and tuple(rows[0]) == CSV_COLUMNS and len(rows) == 6

    def test_json_deterministic(self, capsys):
        _, a, _ = run(capsys, "sample", "--class", "VanishingTwo", "-n", "4", "--seed", "2",
                      "--format", "json", "--r-one")
        _, b, _ = run(capsys, "sample", "--class", "VanishingTwo", "-n", "4", "--seed", "2",
                      "--format", "json", "--r-one")
        assert a == b
        doc = json.loads(a)
        validate(doc, "sample")
        assert all(r["dim_a"] == 4 for r in doc)

    def test_bipartite(self, capsys):
        code, out, _ = run(capsys, "bipartite", "--schmidt", "0.7,0.3")
        doc = json.loads(out)
        validate(doc, "volumeReport")
        assert doc["Ea"] == pytest.approx(0.6, abs=1e-15) and doc["Es"] == pytest.approx(0.6, abs=1e-15)

    def test_bipartite_mc(self, capsys):
        code, out, _ = run(capsys, "bipartite", "--schmidt", "0.5,0.3,0.2", "--method", "mc",
                           "--n", "20000", "--seed", "1")
        assert code == 0 and json.loads(out)["method"] == "MonteCarlo"


class TestVerifyAndUsage:
    def test_verify_small(self, capsys):
        code, out, _ = run(capsys, "verify", "--n", "20000", "--seed", "1", "--per-case", "2",
                           "--cases", "w,ghz-vanishing-one")
        doc = json.loads(out)
        validate(doc, "verification")
        assert code == 0 and doc["pass"]

    def test_verify_unknown_case(self, capsys):
        assert run(capsys, "verify", "--cases", "nope")[0] == 2

    def test_no_subcommand(self, capsys):
        code, out, err = run(capsys)
        assert code == 2 and out == "" and "usage error" in err

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "locc_volumes", "bipartite", "--schmidt", "0.7,0.3"],
                              capture_output=True, text=True, check=False)
        assert proc.returncode == 0 and json.loads(proc.stdout)["Ea"] == pytest.approx(0.6)
        assert proc.stderr.startswith("config: ")
