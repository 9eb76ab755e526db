"""Filesystem adapters for algebra files and reports."""

import asyncio
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

import structlog

from gs_workbench.domain import Report
from gs_workbench.formats import load_hopf, save_hopf, write_report
from gs_workbench.hopf import HopfAlgebraData

log = structlog.get_logger()


@dataclass
class JsonAlgebraStore:
    """Adapter reading and writing Hopf algebra interchange files."""

    async def load(self, path: Path, *, soft: bool = False) -> HopfAlgebraData:
        """Load and validate an algebra from disk."""
        algebra = await asyncio.to_thread(load_hopf, path, soft=soft)
        await log.ainfo("algebra_loaded", path=str(path), algebra=algebra.name,
                        dim=algebra.dim, field=algebra.field.label)
        return algebra

    async def save(self, algebra: HopfAlgebraData, path: Path) -> None:
        """Write an algebra in canonical form."""
        path.parent.mkdir(parents=True, exist_ok=True)
        await asyncio.to_thread(save_hopf, algebra, path)
        await log.ainfo("algebra_saved", path=str(path), algebra=algebra.name)


@dataclass
class JsonReportSink:
    """Adapter writing canonical JSON reports to a file or a stream."""

    stream: TextIO | None = None

    async def emit(self, report: Report, destination: Path | None = None) -> None:
        """Write the report to destination, or to the stream when destination is None."""
        text = write_report(report)
        if destination is None:
            out = self.stream or sys.stdout
            out.write(text)
            out.flush()
            return
        destination.parent.mkdir(parents=True, exist_ok=True)
        await asyncio.to_thread(destination.write_text, text, encoding="utf-8")
        await log.ainfo("report_written", path=str(destination), size=len(text))
