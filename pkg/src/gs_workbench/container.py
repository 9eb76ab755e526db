"""Dependency injection container.

Wires adapters to use cases for the hexagonal architecture.
"""

from dataclasses import dataclass, field
from typing import TextIO

from gs_workbench.domain import RunConfig
from gs_workbench.json_adapter import JsonAlgebraStore, JsonReportSink
from gs_workbench.usecases import (
    ComputeCohomology,
    EvaluateBracket,
    RunVerification,
    ValidateAlgebra,
)


@dataclass
class Container:
    """Dependency injection container for the workbench."""

    config: RunConfig
    stream: TextIO | None = field(default=None, repr=False)

    @property
    def threads(self) -> int:
        return self.config.threads

    def algebra_store(self) -> JsonAlgebraStore:
        """Create algebra file adapter."""
        return JsonAlgebraStore()

    def report_sink(self) -> JsonReportSink:
        """Create report adapter writing to the configured stream."""
        return JsonReportSink(stream=self.stream)

    def validate_algebra(self) -> ValidateAlgebra:
        """Create ValidateAlgebra use case."""
        return ValidateAlgebra(store=self.algebra_store(), threads=self.threads)

    def compute_cohomology(self) -> ComputeCohomology:
        """Create ComputeCohomology use case."""
        return ComputeCohomology(store=self.algebra_store(), threads=self.threads)

    def evaluate_bracket(self) -> EvaluateBracket:
        """Create EvaluateBracket use case."""
        return EvaluateBracket(store=self.algebra_store(), threads=self.threads)

    def run_verification(self) -> RunVerification:
        """Create RunVerification use case."""
        return RunVerification(store=self.algebra_store(), threads=self.threads)
