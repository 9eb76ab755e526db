"""Use cases implementing the workbench commands.

Use cases orchestrate ports and the computational core. They contain no
file I/O directly; CPU work runs in worker threads under a semaphore and
results are reassembled by index, so reports never depend on scheduling.
"""

import asyncio
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import partial
from typing import Any, TypeVar

import structlog

from gs_workbench.cyclic import (
    VANISHING_DEGREES,
    bv_suite,
    cyclic_gs_cohomology,
    cyclic_suite,
    e3_bracket,
    finite_dim_vanishing_suite,
    require_involutive,
)
from gs_workbench.domain import (
    BracketKind,
    BracketReport,
    BracketResult,
    Clause,
    CohomologyReport,
    ComplexKind,
    RunConfig,
    Suite,
    ValidationReport,
    VerificationReport,
)
from gs_workbench.errors import BadCharacteristic, IndexOutOfRange, ResourceLimit
from gs_workbench.exactfield import FieldSpec
from gs_workbench.formats import cochain_to_dict
from gs_workbench.gscomplex import (
    Cochain,
    betti_consistency,
    bicomplex_check,
    cocycle_basis,
    cohomology_report,
    cohomology_representatives,
    diagonal_total_agreement,
    differential_rank,
    is_coboundary,
    is_cocycle,
)
from gs_workbench.hopf import HopfAlgebraData, validate
from gs_workbench.operad import (
    bracket,
    check_diff_identity,
    check_gerstenhaber_identities,
    check_operad_axioms,
    cup,
    random_cocycle,
)
from gs_workbench.ports import AlgebraStore
from gs_workbench.tensorcalc import Limits, limits

log = structlog.get_logger()

T = TypeVar("T")

CONSISTENCY_PRIMES = (5, 7)

Part = Callable[[], Sequence[Clause]]


async def run_bounded(jobs: Sequence[Callable[[], T]], threads: int) -> list[T]:
    """Run blocking jobs in worker threads, at most `threads` at a time, in job order."""
    semaphore = asyncio.Semaphore(threads)

    async def run(job: Callable[[], T]) -> T:
        async with semaphore:
            return await asyncio.to_thread(job)

    return list(await asyncio.gather(*(run(job) for job in jobs)))


def config_limits(config: RunConfig) -> Limits:
    return Limits(materialize=config.materialize_limit, work=config.work_limit)


async def load_algebra(store: AlgebraStore, config: RunConfig, *,
                       soft: bool = False) -> HopfAlgebraData:
    """Load the input algebra, reduced mod the configured prime if any."""
    algebra = await store.load(config.input_path, soft=soft)
    if config.prime is not None:
        algebra = await asyncio.to_thread(algebra.over, FieldSpec.prime(config.prime))
    return algebra


@dataclass
class ValidateAlgebra:
    """Use case for checking the Hopf axioms of an algebra file."""

    store: AlgebraStore
    threads: int = 1

    async def execute(self, config: RunConfig) -> ValidationReport:
        """Axiom table, flags and antipode order; failures are reported, not raised."""
        algebra = await load_algebra(self.store, config, soft=True)
        report = await asyncio.to_thread(validate, algebra)
        await log.ainfo("validation_finished", algebra=algebra.name, passed=report.passed,
                        involutive=report.flags.involutive)
        return report


def _representatives(algebra: HopfAlgebraData, n: int) -> list[dict[str, Any]]:
    return [cochain_to_dict(f) for f in cohomology_representatives(algebra, n)]


@dataclass
class ComputeCohomology:
    """Use case for Betti tables of the diagonal, total or cyclic complex."""

    store: AlgebraStore
    threads: int = 1

    async def execute(self, config: RunConfig) -> CohomologyReport:
        """Compute the table in degrees 0..max_degree."""
        algebra = await load_algebra(self.store, config)
        with limits(config_limits(config)):
            if config.kind is ComplexKind.CYCLIC:
                report = await asyncio.to_thread(
                    cyclic_gs_cohomology, algebra, config.max_degree, config.u_trunc)
            else:
                report = await self.plain(algebra, config)
        await log.ainfo("cohomology_computed", algebra=algebra.name, kind=config.kind.value,
                        betti=report.betti)
        return report

    async def plain(self, algebra: HopfAlgebraData, config: RunConfig) -> CohomologyReport:
        degrees = range(config.max_degree + 1)
        ranks = await run_bounded(
            [partial(differential_rank, algebra, config.kind, n) for n in degrees], self.threads)
        reps: list[list[dict[str, Any]]] = []
        if config.with_bases and config.kind is ComplexKind.DIAGONAL:
            reps = await run_bounded(
                [partial(_representatives, algebra, n) for n in degrees], self.threads)
        return cohomology_report(algebra, config.kind, ranks, reps)


def _binary(kind: BracketKind) -> Callable[[Cochain, Cochain], Cochain]:
    match kind:
        case BracketKind.GERSTENHABER:
            return bracket
        case BracketKind.CUP:
            return cup
        case BracketKind.E3:
            return e3_bracket


def evaluate_pair(kind: BracketKind, f: Cochain, g: Cochain, label: str) -> BracketResult:
    """Apply the operation and certify the result's class."""
    value = _binary(kind)(f, g)
    closed = is_cocycle(value)
    preimage = is_coboundary(value) if closed else None
    exact = value.is_zero or preimage is not None
    return BracketResult(
        label=label,
        nnz=value.mat.nnz,
        is_cocycle=closed,
        is_coboundary=exact,
        value=cochain_to_dict(value),
        preimage=None if preimage is None else cochain_to_dict(preimage),
    )


@dataclass
class EvaluateBracket:
    """Use case for products and brackets of cocycles."""

    store: AlgebraStore
    threads: int = 1

    async def execute(self, config: RunConfig) -> BracketReport:
        """Evaluate on chosen basis cocycles, or on seeded random cocycle pairs."""
        algebra = await load_algebra(self.store, config)
        p, q = config.degrees
        if config.bracket_kind is BracketKind.E3:
            require_involutive(algebra, "e3 bracket")
        with limits(config_limits(config)):
            if config.classes is not None:
                pairs = await self.basis_pair(algebra, config.classes, p, q)
                seed = None
            else:
                pairs = [
                    (random_cocycle(algebra, p, config.seed, 2 * t),
                     random_cocycle(algebra, q, config.seed, 2 * t + 1),
                     f"trial {t}")
                    for t in range(config.trials)
                ]
                seed = config.seed
            results = await run_bounded(
                [partial(evaluate_pair, config.bracket_kind, f, g, label)
                 for f, g, label in pairs],
                self.threads,
            )
        report = BracketReport(algebra.name, config.bracket_kind, (p, q), tuple(results), seed)
        await log.ainfo("bracket_evaluated", algebra=algebra.name,
                        kind=config.bracket_kind.value, degrees=[p, q], count=len(results))
        return report

    async def basis_pair(self, algebra: HopfAlgebraData, classes: tuple[int, int], p: int,
                         q: int) -> list[tuple[Cochain, Cochain, str]]:
        zp, zq = await run_bounded(
            [partial(cocycle_basis, algebra, p), partial(cocycle_basis, algebra, q)], self.threads)
        i, j = classes
        if not 0 <= i < len(zp):
            raise IndexOutOfRange(f"class {i} outside the {len(zp)} degree-{p} basis cocycles")
        if not 0 <= j < len(zq):
            raise IndexOutOfRange(f"class {j} outside the {len(zq)} degree-{q} basis cocycles")
        return [(zp[i], zq[j], f"classes ({i}, {j})")]


def agreement_degree(algebra: HopfAlgebraData, cap: int) -> int:
    """Top degree for the diagonal vs total comparison; two-dimensional algebras reach 3."""
    return 3 if algebra.dim == 2 else min(cap, 2)


def suite_parts(suite: Suite, algebra: HopfAlgebraData, config: RunConfig) -> list[Part]:
    """Independent pieces of work making up one suite, in report order."""
    cap, trials, seed = config.arity_cap, config.trials, config.seed
    match suite:
        case Suite.HOPF:
            return [lambda: validate(algebra).axioms]
        case Suite.BICOMPLEX:
            parts: list[Part] = [
                lambda: bicomplex_check(algebra, cap, cap).clauses,
                lambda: [diagonal_total_agreement(algebra, agreement_degree(algebra, cap))],
            ]
            if not algebra.field.is_prime_field:
                parts.append(lambda: betti_consistency(algebra, CONSISTENCY_PRIMES, min(cap, 2)))
            return parts
        case Suite.OPERAD:
            return [
                lambda: check_operad_axioms(algebra, cap, trials, seed).clauses,
                lambda: check_diff_identity(algebra, cap, trials, seed).clauses,
                lambda: check_gerstenhaber_identities(algebra, cap, trials, seed).clauses,
            ]
        case Suite.CYCLIC:
            return [lambda: cyclic_suite(algebra, cap, trials, seed).clauses]
        case Suite.BV:
            return [lambda: bv_suite(algebra, trials, seed).clauses]
        case Suite.FINITE_DIM:
            return [lambda: finite_dim_vanishing_suite(
                algebra, VANISHING_DEGREES, trials, seed).clauses]


def guarded_part(suite: Suite, index: int, part: Part, tolerant: bool) -> list[Clause]:
    """Run one part; a resource limit (or, when tolerant, an unmet hypothesis) skips it."""
    name = f"{suite.value} part {index}"
    try:
        return list(part())
    except ResourceLimit as exc:
        return [Clause.skipped(name, "resource guard", str(exc))]
    except BadCharacteristic as exc:
        if not tolerant:
            raise
        return [Clause.skipped(name, "hypothesis not met", str(exc))]


@dataclass
class RunVerification:
    """Use case for the verification suites."""

    store: AlgebraStore
    threads: int = 1

    async def execute(self, config: RunConfig) -> VerificationReport | list[VerificationReport]:
        """One report for a single suite, a list in suite order for all of them."""
        algebra = await load_algebra(self.store, config, soft=True)
        suites = list(Suite) if config.suite is None else [config.suite]
        tolerant = config.suite is None
        jobs: list[Callable[[], list[Clause]]] = []
        owners: list[Suite] = []
        for suite in suites:
            for index, part in enumerate(suite_parts(suite, algebra, config)):
                jobs.append(partial(guarded_part, suite, index, part, tolerant))
                owners.append(suite)
        with limits(config_limits(config)):
            results = await run_bounded(jobs, self.threads)
        reports = []
        for suite in suites:
            clauses = tuple(c for owner, part in zip(owners, results, strict=True)
                            if owner is suite for c in part)
            report = VerificationReport(suite.value, algebra.name, clauses, config.seed,
                                        config.trials)
            reports.append(report)
            await log.ainfo("suite_finished", suite=suite.value, algebra=algebra.name,
                            clauses=len(clauses), passed=report.passed)
        return reports if config.suite is None else reports[0]
