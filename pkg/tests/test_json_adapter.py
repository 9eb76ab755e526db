"""Tests for the filesystem adapters."""

import io
from pathlib import Path

import pytest

from gs_workbench.domain import VerificationReport
from gs_workbench.errors import AxiomViolation
from gs_workbench.formats import read_report, write_hopf
from gs_workbench.hopf import HopfAlgebraData, same_structure
from gs_workbench.json_adapter import JsonAlgebraStore, JsonReportSink


class TestJsonAlgebraStore:
    """Test JsonAlgebraStore."""

    @pytest.mark.asyncio
    async def test_save_then_load(self, tmp_path: Path, duals3: HopfAlgebraData):
        store = JsonAlgebraStore()
        path = tmp_path / "nested" / "duals3.json"
        await store.save(duals3, path)
        assert path.read_text(encoding="utf-8") == write_hopf(duals3)
        assert same_structure(await store.load(path), duals3)

    @pytest.mark.asyncio
    async def test_soft_load(self, tmp_path: Path, kc2: HopfAlgebraData):
        """Axiom failures only raise on a strict load."""
        path = tmp_path / "broken.json"
        path.write_text(write_hopf(kc2).replace('"counit": [\n    "1",\n    "1"',
                                                '"counit": [\n    "1",\n    "0"'),
                        encoding="utf-8")
        store = JsonAlgebraStore()
        with pytest.raises(AxiomViolation):
            await store.load(path)
        assert (await store.load(path, soft=True)).name == "kc2"


class TestJsonReportSink:
    """Test JsonReportSink."""

    @pytest.mark.asyncio
    async def test_emit_to_stream(self):
        stream = io.StringIO()
        report = VerificationReport("hopf", "kc2", seed=3, trials=1)
        await JsonReportSink(stream=stream).emit(report)
        assert read_report(stream.getvalue()) == report
        assert stream.getvalue().endswith("}\n")

    @pytest.mark.asyncio
    async def test_emit_to_file(self, tmp_path: Path):
        report = [VerificationReport("hopf", "kc2"), VerificationReport("bv", "kc2")]
        target = tmp_path / "out" / "verify.json"
        await JsonReportSink().emit(report, target)
        assert read_report(target.read_text(encoding="utf-8")) == report
