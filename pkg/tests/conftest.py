"""Shared fixtures: the built-in algebras and the in-repo fixture files."""

from pathlib import Path

import pytest

from gs_workbench.exactfield import FieldSpec
from gs_workbench.formats import FixtureManifest
from gs_workbench.hopf import HopfAlgebraData, builtin_algebras

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    """Directory holding the fixture algebras."""
    return FIXTURES


@pytest.fixture(scope="session")
def manifest() -> FixtureManifest:
    """Pinned fixture values."""
    return FixtureManifest.load(FIXTURES / "manifest.json")


@pytest.fixture(scope="session")
def algebras() -> dict[str, HopfAlgebraData]:
    """The built-in fixture algebras over Q."""
    return dict(builtin_algebras(FieldSpec.rationals()))


@pytest.fixture(scope="session")
def kc2(algebras: dict[str, HopfAlgebraData]) -> HopfAlgebraData:
    return algebras["kc2"]


@pytest.fixture(scope="session")
def kc3(algebras: dict[str, HopfAlgebraData]) -> HopfAlgebraData:
    return algebras["kc3"]


@pytest.fixture(scope="session")
def ks3(algebras: dict[str, HopfAlgebraData]) -> HopfAlgebraData:
    return algebras["ks3"]


@pytest.fixture(scope="session")
def duals3(algebras: dict[str, HopfAlgebraData]) -> HopfAlgebraData:
    return algebras["duals3"]


@pytest.fixture(scope="session")
def h4(algebras: dict[str, HopfAlgebraData]) -> HopfAlgebraData:
    return algebras["h4"]
