"""Tests for the command-line front end against the fixture files."""

import io
import json
from pathlib import Path

import pytest

from gs_workbench.cli import run_cli
from gs_workbench.domain import CohomologyReport, ValidationReport
from gs_workbench.formats import read_report


def invoke(*argv: str, env: dict[str, str] | None = None) -> tuple[int, str, str]:
    stream, errors = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), env=env or {}, stream=stream, errors=errors)
    return code, stream.getvalue(), errors.getvalue()


@pytest.fixture
def broken_kc2(tmp_path: Path, fixtures_dir: Path) -> Path:
    """kC2 with a counit that breaks the counit axioms."""
    data = json.loads((fixtures_dir / "kc2.json").read_text(encoding="utf-8"))
    data["counit"] = ["1", "0"]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


class TestValidate:
    """The validate command."""

    def test_valid(self, fixtures_dir: Path):
        code, out, err = invoke("validate", str(fixtures_dir / "h4.json"))
        assert code == 0
        assert out.startswith("algebra h4 over Q, dim 4")
        assert "involutive=false" in out
        assert "antipode order: 4" in out
        assert err == ""

    def test_axiom_failure(self, broken_kc2: Path):
        """A broken algebra is reported with exit code 3."""
        code, out, _ = invoke("validate", str(broken_kc2))
        assert code == 3
        assert "left counit" in out
        assert "failed" in out

    def test_missing_file(self, tmp_path: Path):
        code, out, err = invoke("validate", str(tmp_path / "absent.json"))
        assert code == 2
        assert out == ""
        assert err.startswith("error: ")

    def test_json_report(self, tmp_path: Path, fixtures_dir: Path):
        target = tmp_path / "reports" / "kc2.json"
        code, _, _ = invoke("validate", str(fixtures_dir / "kc2.json"), "--out", str(target))
        assert code == 0
        report = read_report(target.read_text(encoding="utf-8"))
        assert isinstance(report, ValidationReport)
        assert report.antipode_order == 1


class TestCohomology:
    """The cohomology command."""

    def test_table(self, fixtures_dir: Path):
        code, out, _ = invoke("cohomology", str(fixtures_dir / "kc2.json"), "--max-degree", "2")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "diag cohomology of kc2 over Q"
        assert lines[1].split() == ["n", "dim", "rankIn", "rankOut", "betti"]
        assert [line.split()[-1] for line in lines[2:]] == ["1", "0", "0"]

    def test_json_to_stdout(self, fixtures_dir: Path):
        """--out - replaces the table with the JSON report."""
        code, out, _ = invoke("cohomology", str(fixtures_dir / "kc2.json"), "--kind", "total",
                              "--out", "-")
        assert code == 0
        report = read_report(out)
        assert isinstance(report, CohomologyReport)
        assert report.betti == [1, 0, 0]

    def test_prime_reduction(self, fixtures_dir: Path):
        code, out, _ = invoke("cohomology", str(fixtures_dir / "kc3.json"), "--prime", "5",
                              "--max-degree", "1")
        assert code == 0
        assert "kc3_f5 over F5" in out
        assert "heuristic" in out

    def test_cyclic_needs_involutive(self, fixtures_dir: Path):
        code, _, err = invoke("cohomology", str(fixtures_dir / "h4.json"), "--kind", "cyclic")
        assert code == 2
        assert "error:" in err

    def test_resource_guard(self, fixtures_dir: Path):
        code, _, err = invoke("cohomology", str(fixtures_dir / "kc2.json"),
                              env={"GS_MATERIALIZE_LIMIT": "5"})
        assert code == 4
        assert "exceeds limit 5" in err

    def test_bad_environment(self, fixtures_dir: Path):
        code, _, err = invoke("cohomology", str(fixtures_dir / "kc2.json"),
                              env={"GS_THREADS": "many"})
        assert code == 2
        assert "GS_THREADS" in err

    def test_flag_overrides_environment(self, fixtures_dir: Path):
        code, _, _ = invoke("cohomology", str(fixtures_dir / "kc2.json"), "--threads", "1",
                            env={"GS_THREADS": "many"})
        assert code == 0


class TestBracket:
    """The bracket command."""

    def test_random(self, fixtures_dir: Path):
        code, out, _ = invoke("bracket", str(fixtures_dir / "kc2.json"), "--deg", "1", "1",
                              "--random", "2", "0")
        assert code == 0
        assert out.splitlines() == [
            "gerstenhaber of kc2 in degrees (1, 1)",
            "trial 0: nnz=0, zero",
            "trial 1: nnz=0, zero",
        ]

    def test_class_out_of_range(self, fixtures_dir: Path):
        code, _, err = invoke("bracket", str(fixtures_dir / "kc2.json"), "--deg", "1", "1",
                              "--class", "0", "0")
        assert code == 2
        assert "outside" in err

    def test_degrees_required(self, fixtures_dir: Path):
        with pytest.raises(SystemExit) as info:
            invoke("bracket", str(fixtures_dir / "kc2.json"))
        assert info.value.code == 2


class TestVerify:
    """The verify command."""

    def test_hopf_suite(self, fixtures_dir: Path):
        code, out, _ = invoke("verify", str(fixtures_dir / "kc3.json"), "--suite", "hopf")
        assert code == 0
        assert out.startswith("suite hopf on kc3 (seed 0, 10 trials): passed")

    def test_failing_suite(self, broken_kc2: Path):
        """Suites run on algebras that fail their axioms and report the failure."""
        code, out, _ = invoke("verify", str(broken_kc2), "--suite", "hopf")
        assert code == 1
        assert "FAILED" in out
        assert "witness for left counit [hopf algebra axiom]: g" in out

    def test_unknown_suite(self, fixtures_dir: Path):
        with pytest.raises(SystemExit):
            invoke("verify", str(fixtures_dir / "kc2.json"), "--suite", "homotopy")
