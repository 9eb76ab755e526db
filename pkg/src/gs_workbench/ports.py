"""Port interfaces using typing.Protocol.

Ports define the boundaries between the computational core and its
surroundings: the algebra the tensor calculus evaluates against, where
algebra files come from, and where reports go.
"""

from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any, Protocol

from gs_workbench.domain import Report
from gs_workbench.exactfield import FieldSpec
from gs_workbench.hopf import HopfAlgebraData
from gs_workbench.tensorcalc import MapKind, SparseMat


class HopfStructure(Protocol):
    """Structure maps of a finite-dimensional Hopf algebra on a fixed basis."""

    @property
    def dim(self) -> int: ...

    @property
    def field(self) -> FieldSpec: ...

    def structure_matrix(self, kind: MapKind) -> SparseMat:
        """Matrix of an elementary structure map."""
        ...

    def structure_terms(
        self, kind: MapKind
    ) -> Mapping[tuple[int, ...], Sequence[tuple[tuple[int, ...], Any]]]:
        """Column-wise term table: input basis tuple -> (output tuple, coefficient) pairs."""
        ...


class AlgebraStore(Protocol):
    """Port for reading and writing algebra interchange files."""

    async def load(self, path: Path, *, soft: bool = False) -> HopfAlgebraData:
        """Load and validate an algebra. With soft=True axiom failures are tolerated."""
        ...

    async def save(self, algebra: HopfAlgebraData, path: Path) -> None:
        """Write an algebra in canonical form."""
        ...


class ReportSink(Protocol):
    """Port for emitting reports."""

    async def emit(self, report: Report, destination: Path | None = None) -> None:
        """Write a report to a file, or to standard output when destination is None."""
        ...
