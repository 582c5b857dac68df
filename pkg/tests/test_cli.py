import csv
import json
import math

import pytest

from waveoracle.cli import main
from waveoracle.dataset import (
    emit_table,
    merge_tables,
    synthesize_device_table,
)
from waveoracle.oracle import example1_oracle, oracle_to_json
from waveoracle.search import TRACE_COLUMNS


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


class TestSearchCommand:
    def test_example1_preset(self, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        assert main(["search", "--preset", "example1",
                     "--out", str(out)]) == 0
        err = capsys.readouterr().err
        assert "queries: 11" in err
        assert "verified: true" in err
        assert "solution [pi]: 0, 0.5, 0.5, 0, 0" in err
        rows = read_csv(out)
        assert rows[0] == list(TRACE_COLUMNS)
        assert len(rows) == 1 + 11

    def test_random_oracle_with_brute_force_check(self, tmp_path):
        out = tmp_path / "t.csv"
        assert main(["search", "--random-seed", "7", "--n", "20",
                     "--check-brute-force", "--out", str(out)]) == 0

    def test_bad_oracle_document(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({
            "n": 2, "deltas": [math.pi / 4, math.pi / 4],
            "sigmas": [1.0, 1.0], "p_ref": 4.0,
            "alphabet": [0.0, math.pi / 2],
        }), encoding="utf-8")
        assert main(["search", "--oracle", str(bad)]) == 2

    def test_missing_oracle_file(self, tmp_path):
        assert main(["search", "--oracle", str(tmp_path / "nope.json")]) == 2

    def test_verification_exit_code(self, tmp_path):
        # unreachable reference power: the search solves the oracle but the
        # confirmation bit stays 0
        doc = json.loads(oracle_to_json(example1_oracle()))
        doc["p_ref"] = 50.0
        path = tmp_path / "strict.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        assert main(["search", "--oracle", str(path)]) == 3

    def test_json_emit(self, tmp_path):
        out = tmp_path / "r.json"
        assert main(["search", "--preset", "example1", "--emit", "json",
                     "--out", str(out)]) == 0
        doc = json.loads(out.read_text(encoding="utf-8"))
        assert doc["queries"] == 11
        assert doc["verified"] is True
        assert len(doc["trace"]) == 11

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["search", "--random-seed", "3", "--n", "9", "--out", str(a)])
        main(["search", "--random-seed", "3", "--n", "9", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestMultisearchCommand:
    def test_example2_preset(self, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        assert main(["multisearch", "--preset", "example2",
                     "--out", str(out)]) == 0
        err = capsys.readouterr().err
        assert "queries: 24" in err
        rows = read_csv(out)
        header = rows[0]
        stage1 = [r for r in rows[1:] if r[1] == "stage 1"]
        assert len(stage1) == 8
        amp_ix = header.index("a_out")
        pi_ix = header.index("phases_pi")
        row2 = stage1[1]
        assert row2[pi_ix] == "0.125;0.125;0.375"
        assert abs(float(row2[amp_ix]) - 2.84675) < 5e-5
        sweep = [r for r in rows[1:] if r[1] == "exhaustive"]
        exact = [r for r in sweep
                 if r[pi_ix] == "0.142857;0;0.5"]
        assert len(exact) == 1
        assert abs(float(exact[0][amp_ix]) - 3.0) < 1e-9

    def test_random_with_check(self, tmp_path):
        assert main(["multisearch", "--random-seed", "3",
                     "--check-brute-force",
                     "--out", str(tmp_path / "t.csv")]) == 0


class TestMarginCommand:
    def test_sweep(self, tmp_path):
        out = tmp_path / "m.csv"
        assert main(["margin", "--n", "2..100", "--out", str(out)]) == 0
        rows = read_csv(out)
        assert rows[0] == ["n", "margin"]
        assert len(rows) == 1 + 99
        values = {int(n): float(m) for n, m in rows[1:]}
        assert 1e-5 <= values[100] <= 1e-3
        assert all(n in values for n in (7, 30, 100))
        ordered = [values[n] for n in range(2, 101)]
        assert all(a > b for a, b in zip(ordered, ordered[1:]))

    def test_single_value(self, tmp_path):
        out = tmp_path / "m.csv"
        assert main(["margin", "--n", "7..7", "--out", str(out)]) == 0
        assert len(read_csv(out)) == 2

    def test_bad_range(self):
        assert main(["margin", "--n", "100..2"]) == 2
        assert main(["margin", "--n", "1..5"]) == 2
        assert main(["margin", "--n", "frog"]) == 2


class TestFactorCommand:
    def test_known_modulus(self, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        assert main(["factor", "--n", "255", "--base", "13",
                     "--out", str(out)]) == 0
        err = capsys.readouterr().err
        assert "period: 4" in err
        assert "converged phase [pi]: 0.333333" in err
        assert "factors: 85, 3" in err
        rows = read_csv(out)
        assert rows[0] == ["k", "f_k", "phi_k", "running_phase",
                           "running_amplitude"]
        assert rows[1][1] == "13"

    def test_larger_modulus(self, capsys):
        assert main(["factor", "--n", "2805", "--base", "13"]) == 0
        err = capsys.readouterr().err
        assert "period: 20" in err

    def test_autonomous_factorization(self, capsys):
        assert main(["factor", "--n", "15"]) == 0
        err = capsys.readouterr().err
        assert "factor: 3" in err or "factor: 5" in err

    def test_bad_modulus(self):
        assert main(["factor", "--n", "3"]) == 2
        assert main(["factor", "--n", "16"]) == 2

    def test_exhausted_budget(self):
        assert main(["factor", "--n", "15", "--attempts", "0"]) == 4

    def test_explicit_length(self, capsys):
        assert main(["factor", "--n", "255", "--base", "13",
                     "--k", "1020"]) == 0
        assert "period: 4" in capsys.readouterr().err


class TestDatasetCommand:
    def test_fixture_preset(self, tmp_path, capsys):
        out = tmp_path / "report.csv"
        assert main(["dataset", "--preset", "example3-fixture",
                     "--out", str(out)]) == 0
        err = capsys.readouterr().err
        assert "segment winner: (18, 4, 4, 4, 18) at 0.95 mV" in err
        assert "queries: 64 vs exhaustive 1024" in err
        rows = read_csv(out)
        kinds = [r[0] for r in rows[1:]]
        assert kinds.count("candidate") == 2
        summary = {r[0]: r[3] for r in rows[1:] if r[3]}
        assert summary["queries_superposition"] == "64"
        assert summary["queries_exhaustive_baseline"] == "1024"

    def test_synthetic_combined_csv(self, tmp_path, capsys):
        deltas = (0.0, 21.0, 21.0, 21.0, 0.0)
        combined = merge_tables(
            synthesize_device_table(deltas, kind="midpoints"),
            synthesize_device_table(deltas))
        path = tmp_path / "synthetic.csv"
        path.write_text(emit_table(combined), encoding="utf-8")
        assert main(["dataset", "--csv", str(path)]) == 0
        err = capsys.readouterr().err
        assert "candidate: (21, 0, 0, 0, 21)" in err

    def test_malformed_csv(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("nope\n", encoding="utf-8")
        assert main(["dataset", "--csv", str(path)]) == 2
