import json
import subprocess
import sys

import pytest

from dircurv.cli import main

TWO_CYCLE_TEXT = "a b\nb a\n"


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def two_cycle_file(tmp_path):
    path = tmp_path / "two_cycle.txt"
    path.write_text(TWO_CYCLE_TEXT)
    return str(path)


class TestAnalyze:
    def test_golden_json(self, two_cycle_file, capsys):
        code, out, _ = run_cli(
            ["analyze", "--alpha", "0.5", "--m", "2", two_cycle_file], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["alpha"] == 0.5
        assert doc["m"] == 2
        row = doc["vertices"][0]
        assert row["label"] == "a"
        assert row["phi"] == 0.5
        assert row["C"] == 0.5
        assert row["K_theorem"] == 0
        assert row["K_optimal"] == 0.5
        assert row["cd_holds"] is True
        assert doc["summary"] == {
            "min_K_theorem": 0, "min_K_optimal": 0.5, "all_cd_hold": True}
        assert "violations" not in doc

    def test_csv_format(self, two_cycle_file, capsys):
        code, out, _ = run_cli(
            ["analyze", "--alpha", "0.5", "--format", "csv", two_cycle_file], capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "label,phi,C,K_theorem,K_optimal,cd_holds"
        assert lines[1] == "a,0.5,0.5,0,0.5,true"

    def test_json_graph_input(self, tmp_path, capsys):
        path = tmp_path / "g.json"
        path.write_text('{"vertices": ["a", "b"], "edges": [[0, 1], [1, 0]]}')
        code, out, _ = run_cli(["analyze", str(path)], capsys)
        assert code == 0
        assert json.loads(out)["vertices"][0]["label"] == "a"

    def test_output_file(self, two_cycle_file, tmp_path, capsys):
        dest = tmp_path / "report.json"
        code, out, _ = run_cli(
            ["analyze", two_cycle_file, "--output", str(dest)], capsys)
        assert code == 0
        assert out == ""
        assert json.loads(dest.read_text())["summary"]["all_cd_hold"] is True

    def test_parse_error_exit_2(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text("a a\n")
        code, _, err = run_cli(["analyze", str(path)], capsys)
        assert code == 2
        assert "parse error" in err

    def test_missing_file_exit_2(self, capsys):
        code, _, err = run_cli(["analyze", "/nonexistent/graph.txt"], capsys)
        assert code == 2

    def test_not_strongly_connected_exit_3(self, tmp_path, capsys):
        path = tmp_path / "path.txt"
        path.write_text("a b\n")
        code, _, err = run_cli(["analyze", str(path)], capsys)
        assert code == 3
        assert "connectivity" in err

    def test_alpha_one_usage_error(self, two_cycle_file, capsys):
        code, _, _ = run_cli(["analyze", "--alpha", "1", two_cycle_file], capsys)
        assert code == 2

    def test_bad_m_usage_error(self, two_cycle_file, capsys):
        code, _, _ = run_cli(["analyze", "--m", "0.5", two_cycle_file], capsys)
        assert code == 2

    def test_c_flag_note_on_stderr(self, tmp_path, capsys):
        path = tmp_path / "cycle3.txt"
        path.write_text("0 1\n1 2\n2 0\n")
        code, _, err = run_cli(["analyze", "--alpha", "0", str(path)], capsys)
        assert code == 0
        assert "C >= 1" in err


class TestVerify:
    def test_ok_exit_zero(self, two_cycle_file, capsys):
        code, out, _ = run_cli(
            ["verify", "--alpha", "0.5", "--samples", "25", "--seed", "9",
             two_cycle_file], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["samples"] == 25
        assert doc["seed"] == 9
        assert doc["K_override"] is None
        assert doc["violations"] == []

    def test_m_inf_accepted(self, two_cycle_file, capsys):
        code, out, _ = run_cli(
            ["verify", "--m", "inf", "--samples", "5", two_cycle_file], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["m"] == "inf"
        assert doc["vertices"][0]["K_optimal"] == 1

    def test_k_override_exit_one_with_witness(self, two_cycle_file, capsys):
        code, out, err = run_cli(
            ["verify", "--K-override", "10", "--samples", "5", two_cycle_file],
            capsys)
        assert code == 1
        doc = json.loads(out)
        assert doc["violations"]
        first = doc["violations"][0]
        assert first["residual"] < 0
        assert len(first["f"]) == 2
        assert "CD violation" in err

    def test_three_cycle_alpha_zero(self, tmp_path, capsys):
        path = tmp_path / "cycle3.txt"
        path.write_text("0 1\n1 2\n2 0\n")
        code, out, _ = run_cli(["verify", "--alpha", "0", str(path)], capsys)
        assert code == 0
        doc = json.loads(out)
        assert all(v["K_theorem"] == 0 for v in doc["vertices"])


class TestGen:
    def test_cycle_golden(self, capsys):
        code, out, _ = run_cli(["gen", "--model", "cycle", "-n", "3"], capsys)
        assert code == 0
        assert out == "0 1\n1 2\n2 0\n"

    def test_complete_count(self, capsys):
        code, out, _ = run_cli(
            ["gen", "--model", "bidirected-complete", "-n", "3"], capsys)
        assert code == 0
        assert len(out.splitlines()) == 6

    def test_random_sc_deterministic_bytes(self, capsys):
        code1, out1, _ = run_cli(
            ["gen", "--model", "random-sc", "-n", "6", "--seed", "42"], capsys)
        code2, out2, _ = run_cli(
            ["gen", "--model", "random-sc", "-n", "6", "--seed", "42"], capsys)
        assert code1 == code2 == 0
        assert out1 == out2

    def test_round_trip_verifies(self, tmp_path, capsys):
        dest = tmp_path / "gen.txt"
        code, _, _ = run_cli(
            ["gen", "--model", "random-sc", "-n", "5", "--seed", "7",
             "--output", str(dest)], capsys)
        assert code == 0
        code, _, _ = run_cli(["verify", "--samples", "10", str(dest)], capsys)
        assert code == 0

    def test_n_too_small(self, capsys):
        code, _, _ = run_cli(["gen", "--model", "cycle", "-n", "1"], capsys)
        assert code == 2

    def test_budget_exhaustion_exit_4(self, capsys):
        code, _, err = run_cli(
            ["gen", "--model", "random-sc", "-n", "8", "-p", "0.01"], capsys)
        assert code == 4
        assert "increase p" in err


class TestDeterminism:
    def test_verify_reports_byte_identical(self, tmp_path):
        graph = tmp_path / "g.txt"
        subprocess.run(
            [sys.executable, "-m", "dircurv", "gen", "--model", "random-sc",
             "-n", "6", "--seed", "42", "--output", str(graph)],
            check=True)
        cmd = [sys.executable, "-m", "dircurv", "verify", "--alpha", "0.5",
               "--samples", "50", "--seed", "42", str(graph)]
        first = subprocess.run(cmd, capture_output=True)
        second = subprocess.run(cmd, capture_output=True)
        assert first.returncode == second.returncode == 0
        assert first.stdout == second.stdout
