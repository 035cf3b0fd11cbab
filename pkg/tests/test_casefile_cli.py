import subprocess
import sys
from pathlib import Path

import pytest

from tomlinks.casefile import (
    CaseFileError,
    bundled_case_names,
    load_bundled,
    parse_case,
    parse_case_text,
)
from tomlinks.cli import main

CASES = Path(__file__).resolve().parent.parent / "src" / "tomlinks" / "cases"


class TestCaseFile:
    def test_bundled_10985(self):
        case = load_bundled("10985").to_fano_case()
        assert case.d == (6, 5, 4, 3)
        assert case.r == 2
        assert case.declared_nodes == 24
        assert case.matrix is not None

    def test_unsorted_ideal_weights(self):
        text = CASES.joinpath("10985.case").read_text().replace(
            "ambient = 1 1 1 6 5 4 3 2", "ambient = 1 1 1 3 5 4 6 2")
        with pytest.raises(CaseFileError, match="ideal weights not sorted"):
            parse_case_text(text)

    def test_centre_mismatch(self):
        text = CASES.joinpath("10985.case").read_text().replace(
            "centre = 1/2(1,1,1)", "centre = 1/3(1,1,1)")
        with pytest.raises(CaseFileError, match="centre index"):
            parse_case_text(text)

    def test_general_matrix_deterministic(self):
        cf = load_bundled("tag-viii")
        assert cf.general_seed is not None
        m1 = cf.to_fano_case().build_matrix(99)
        m2 = cf.to_fano_case().build_matrix(5)
        # the file seed pins the matrix regardless of the trace seed
        assert all(m1.entries[p] == m2.entries[p] for p in m1.entries)

    def test_non_tom_matrix_rejected(self):
        text = CASES.joinpath("10985.case").read_text().replace(
            "m23 = y4", "m23 = x1^3")
        with pytest.raises(CaseFileError, match="Tom_1"):
            parse_case_text(text).to_fano_case()

    def test_missing_file(self):
        with pytest.raises(CaseFileError):
            parse_case("/nonexistent/path.case")

    def test_all_bundled_parse(self):
        names = bundled_case_names()
        assert len(names) >= 22
        for name in names:
            load_bundled(name).to_fano_case()


class TestCli:
    def test_examples_lists_bundled(self, capsys):
        assert main(["examples"]) == 0
        out = capsys.readouterr().out
        assert "10985" in out and "20652" in out

    def test_trace_deterministic(self, capsys):
        assert main(["trace", "--case", "24097", "--seed", "0", "--json"]) == 0
        first = capsys.readouterr().out
        assert main(["trace", "--case", "24097", "--seed", "0", "--json"]) == 0
        second = capsys.readouterr().out
        assert first == second
        assert '"discriminant_degree":6' in first

    def test_trace_tree_report(self, capsys):
        assert main(["trace", "--case", "20652"]) == 0
        out = capsys.readouterr().out
        assert "DelPezzoFibration" in out
        assert "seed = 0" in out

    def test_unproject(self, capsys):
        assert main(["unproject", "--case", "10985"]) == 0
        out = capsys.readouterr().out
        assert "equation_count = 9" in out

    def test_input_error_exit_2(self, capsys):
        assert main(["trace", "--case", "/no/such/file.case"]) == 2

    def test_budget_exceeded_exit_3(self, capsys):
        assert main(["blowup", "--case", "20652", "--budget", "5"]) == 3

    def test_verification_failure_exit_1(self, tmp_path, capsys):
        # a Tom matrix whose unconstrained row vanishes cannot be unprojected
        bad = tmp_path / "bad.case"
        text = CASES.joinpath("20652.case").read_text()
        for key, val in (("m12", "0"), ("m13", "0"), ("m14", "0"), ("m15", "0")):
            text = _replace_entry(text, key, val)
        bad.write_text(text)
        assert main(["unproject", "--case", str(bad)]) == 1

    def test_blowup_skip_oracle(self, capsys):
        assert main(["blowup", "--case", "20652", "--skip-saturation-oracle"]) == 0
        out = capsys.readouterr().out
        assert "deltas" in out

    def test_installed_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "tomlinks.cli", "examples"],
            capture_output=True, text=True)
        assert proc.returncode == 0


def _replace_entry(text: str, key: str, value: str) -> str:
    lines = []
    for line in text.splitlines():
        if line.startswith(f"{key} ="):
            lines.append(f"{key} = {value}")
        else:
            lines.append(line)
    return "\n".join(lines) + "\n"


class TestGolden:
    def test_trace_report_matches_golden(self, capsys):
        golden = CASES / "10985.golden"
        assert main(["trace", "--case", "10985", "--seed", "0"]) == 0
        out = capsys.readouterr().out
        assert out.replace("\r\n", "\n") == golden.read_text().replace("\r\n", "\n")

    def test_mutated_golden_detected(self, tmp_path, capsys):
        golden = (CASES / "10985.golden").read_text()
        assert main(["trace", "--case", "10985", "--seed", "0"]) == 0
        out = capsys.readouterr().out
        mutated = golden.replace("count = 24", "count = 25")
        assert out != mutated
