"""Tests for the JSON interchange of algebras, cochains and reports."""

import json
from pathlib import Path
from typing import Any

import pytest

from gs_workbench.domain import (
    BracketKind,
    BracketReport,
    BracketResult,
    ComplexKind,
    VerificationReport,
)
from gs_workbench.errors import AxiomViolation, SchemaError
from gs_workbench.exactfield import FieldSpec
from gs_workbench.formats import (
    FixtureManifest,
    cochain_to_dict,
    hopf_from_dict,
    load_hopf,
    loads,
    read_cochain,
    read_hopf,
    read_report,
    save_hopf,
    write_cochain,
    write_hopf,
    write_report,
)
from gs_workbench.gscomplex import Cochain, cohomology, random_cochain, trial_rng
from gs_workbench.hopf import HopfAlgebraData, builtin_algebras, same_structure, validate
from gs_workbench.operad import check_operad_axioms

FIXTURE_FILES = ["kc2", "kc3", "ks3", "duals3", "h4", "kc2_f3", "kc3_f5", "h4_f7"]
TWINS = [("kc2_f3", "kc2", 3), ("kc3_f5", "kc3", 5), ("h4_f7", "h4", 7)]


def fixture_text(fixtures_dir: Path, name: str) -> str:
    return (fixtures_dir / f"{name}.json").read_text(encoding="utf-8")


def kc2_data(fixtures_dir: Path) -> dict[str, Any]:
    return json.loads(fixture_text(fixtures_dir, "kc2"))


def pointer_of(data: Any) -> str:
    with pytest.raises(SchemaError) as info:
        hopf_from_dict(data)
    return info.value.pointer


class TestHopfFiles:
    """Canonical algebra files."""

    @pytest.mark.parametrize("name", FIXTURE_FILES)
    def test_byte_identical_round_trip(self, fixtures_dir: Path, name: str):
        """Reading and writing a canonical file reproduces it exactly."""
        text = fixture_text(fixtures_dir, name)
        assert write_hopf(read_hopf(text)) == text

    @pytest.mark.parametrize("name", ["kc2", "kc3", "ks3", "duals3", "h4"])
    def test_files_match_builtins(self, fixtures_dir: Path,
                                  algebras: dict[str, HopfAlgebraData], name: str):
        """The rational fixtures are the built-in algebras written out."""
        assert write_hopf(algebras[name]) == fixture_text(fixtures_dir, name)

    @pytest.mark.parametrize(("name", "source", "p"), TWINS)
    def test_prime_twins(self, fixtures_dir: Path, algebras: dict[str, HopfAlgebraData],
                         name: str, source: str, p: int):
        """The F_p fixtures are reductions of the rational ones."""
        reduced = algebras[source].over(FieldSpec.prime(p))
        assert reduced.name == name
        assert write_hopf(reduced) == fixture_text(fixtures_dir, name)

    def test_negative_one_mod_seven(self, fixtures_dir: Path):
        """Prime-field scalars are written as their canonical residues."""
        data = json.loads(fixture_text(fixtures_dir, "h4_f7"))
        assert "6" in {entry[-1] for entry in data["antipode"]}
        assert "-1" not in json.dumps(data)

    def test_save_and_load(self, tmp_path: Path, h4: HopfAlgebraData):
        path = tmp_path / "h4.json"
        save_hopf(h4, path)
        assert same_structure(load_hopf(path), h4)


class TestSchemaErrors:
    """Malformed algebra files are rejected with a pointer to the problem."""

    def test_bad_scalar(self, fixtures_dir: Path):
        data = kc2_data(fixtures_dir)
        data["unit"][1] = "1/0"
        assert pointer_of(data) == "/unit/1"

    def test_malformed_scalar(self, fixtures_dir: Path):
        data = kc2_data(fixtures_dir)
        data["mult"][2][3] = "one"
        assert pointer_of(data) == "/mult/2/3"

    def test_number_instead_of_string(self, fixtures_dir: Path):
        data = kc2_data(fixtures_dir)
        data["counit"][0] = 1
        assert pointer_of(data) == "/counit/0"

    def test_unknown_key(self, fixtures_dir: Path):
        data = kc2_data(fixtures_dir)
        data["grading"] = [0, 0]
        assert pointer_of(data) == "/grading"

    def test_missing_key(self, fixtures_dir: Path):
        data = kc2_data(fixtures_dir)
        del data["antipode"]
        assert pointer_of(data) == "/antipode"

    def test_dim_mismatch(self, fixtures_dir: Path):
        data = kc2_data(fixtures_dir)
        data["dim"] = 3
        assert pointer_of(data) == "/dim"

    def test_index_out_of_range(self, fixtures_dir: Path):
        data = kc2_data(fixtures_dir)
        data["comult"][1][2] = 2
        assert pointer_of(data) == "/comult/1/2"

    def test_unknown_field_kind(self, fixtures_dir: Path):
        data = kc2_data(fixtures_dir)
        data["field"] = {"kind": "R"}
        assert pointer_of(data) == "/field/kind"

    def test_truncated_file(self, fixtures_dir: Path):
        """Invalid JSON is a schema error at the document root."""
        text = fixture_text(fixtures_dir, "kc2")
        with pytest.raises(SchemaError) as info:
            read_hopf(text[: len(text) // 2])
        assert info.value.pointer == ""
        assert "invalid JSON" in str(info.value)
        assert info.value.exit_code == 2

    def test_missing_file(self, tmp_path: Path):
        with pytest.raises(SchemaError, match="cannot read"):
            load_hopf(tmp_path / "absent.json")

    def test_axiom_failure_on_load(self, tmp_path: Path, fixtures_dir: Path):
        """Well-formed files that break an axiom are refused unless soft."""
        data = kc2_data(fixtures_dir)
        data["counit"] = ["1", "0"]
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        with pytest.raises(AxiomViolation):
            load_hopf(path)
        assert not validate(load_hopf(path, soft=True)).passed


class TestCochains:
    """Cochain files."""

    def test_round_trip(self, h4: HopfAlgebraData):
        f = random_cochain(h4, 2, 2, trial_rng(3, 0))
        assert read_cochain(write_cochain(f), h4) == f

    def test_off_diagonal(self, h4: HopfAlgebraData):
        """Cochains with p ≠ q carry both degrees instead of an arity."""
        f = random_cochain(h4, 1, 2, trial_rng(3, 1))
        data = cochain_to_dict(f)
        assert "arity" not in data
        assert (data["p"], data["q"]) == (1, 2)
        assert read_cochain(write_cochain(f), h4) == f

    def test_arity_and_degrees_conflict(self, kc2: HopfAlgebraData):
        data = cochain_to_dict(Cochain.identity(kc2))
        data["p"] = 1
        with pytest.raises(SchemaError, match="either arity"):
            read_cochain(json.dumps(data), kc2)

    def test_field_must_match(self, kc2: HopfAlgebraData):
        """A cochain over Q cannot be read against an F_p algebra."""
        data = cochain_to_dict(Cochain.identity(kc2))
        other = builtin_algebras(FieldSpec.prime(3))["kc2"]
        with pytest.raises(SchemaError) as info:
            read_cochain(json.dumps(data), other)
        assert info.value.pointer == "/matrix/field"

    def test_wrong_shape(self, kc2: HopfAlgebraData):
        data = cochain_to_dict(Cochain.identity(kc2))
        data["arity"] = 2
        with pytest.raises(SchemaError) as info:
            read_cochain(json.dumps(data), kc2)
        assert info.value.pointer == "/matrix"


class TestReports:
    """Strict report readers."""

    def test_validation_round_trip(self, h4: HopfAlgebraData):
        report = validate(h4)
        assert read_report(write_report(report)) == report

    def test_cohomology_round_trip(self, kc2: HopfAlgebraData):
        report = cohomology(kc2, ComplexKind.TOTAL, 2)
        text = write_report(report)
        assert '"rankIn"' in text
        assert read_report(text) == report

    def test_verification_list_round_trip(self, kc2: HopfAlgebraData):
        reports = [check_operad_axioms(kc2, 1, 1, 0), VerificationReport("bv", "kc2")]
        assert read_report(write_report(reports)) == reports

    def test_bracket_round_trip(self, kc2: HopfAlgebraData):
        value = cochain_to_dict(Cochain.identity(kc2))
        report = BracketReport(
            "kc2", BracketKind.CUP, (1, 1),
            (BracketResult("trial 0", 2, True, False, value),), seed=4,
        )
        assert read_report(write_report(report)) == report

    def test_unrecognised_report(self):
        with pytest.raises(SchemaError, match="unrecognised report"):
            read_report('{"algebra": "kc2"}')

    def test_unknown_key_in_report(self, kc2: HopfAlgebraData):
        data = json.loads(write_report(validate(kc2)))
        data["axioms"][0]["severity"] = "high"
        with pytest.raises(SchemaError) as info:
            read_report(json.dumps(data))
        assert info.value.pointer == "/axioms/0/severity"

    def test_inconsistent_betti(self, kc2: HopfAlgebraData):
        data = json.loads(write_report(cohomology(kc2, ComplexKind.DIAGONAL, 1)))
        data["degrees"][1]["betti"] = 7
        with pytest.raises(SchemaError) as info:
            read_report(json.dumps(data))
        assert info.value.pointer == "/degrees/1/betti"


class TestManifest:
    """The fixture index."""

    def test_every_file_exists(self, fixtures_dir: Path, manifest: FixtureManifest):
        names = {entry.name for entry in manifest.fixtures}
        assert names == set(FIXTURE_FILES)
        for entry in manifest.fixtures:
            assert (fixtures_dir / entry.file).is_file()
            assert entry.provenance == "DERIVED"

    def test_round_trip(self, manifest: FixtureManifest):
        assert FixtureManifest.from_dict(loads(json.dumps(manifest.to_dict()))) == manifest

    def test_unknown_entry(self, manifest: FixtureManifest):
        with pytest.raises(KeyError):
            manifest.entry("kc5")

    def test_sweedler_has_no_pinned_betti(self, manifest: FixtureManifest):
        assert manifest.entry("h4").betti is None
        assert manifest.entry("h4").flags["involutive"] is False
