"""Report value objects, enums and run configuration.

This module holds no computation. Every report has a to_dict producing the
camelCase JSON contract and a strict from_dict that rejects unknown keys
with the JSON pointer of the offending key.
"""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Self

from gs_workbench.errors import InputError, SchemaError


class ClauseStatus(Enum):
    """Outcome of one checked identity."""

    PASSED = "passed"
    FAILED = "failed"
    SKIPPED = "skipped"


class ComplexKind(Enum):
    """Which cochain complex a cohomology table was computed from."""

    DIAGONAL = "diag"
    TOTAL = "total"
    CYCLIC = "cyclic"


class Suite(Enum):
    """Verification suites, in the order `verify --suite all` runs them."""

    HOPF = "hopf"
    BICOMPLEX = "bicomplex"
    OPERAD = "operad"
    CYCLIC = "cyclic"
    BV = "bv"
    FINITE_DIM = "finite-dim"


class BracketKind(Enum):
    """Binary operations on diagonal cochains exposed by the bracket command."""

    GERSTENHABER = "gerstenhaber"
    CUP = "cup"
    E3 = "e3"


def check_keys(data: Any, allowed: Iterable[str], pointer: str,
               required: Iterable[str] = ()) -> Mapping[str, Any]:
    """Reject non-objects, unknown keys and missing required keys."""
    if not isinstance(data, Mapping):
        raise SchemaError(pointer, "expected an object")
    allowed_set = set(allowed)
    mapping: Mapping[str, Any] = data
    for key in mapping:
        if key not in allowed_set:
            raise SchemaError(f"{pointer}/{key}", "unknown key")
    for key in required:
        if key not in mapping:
            raise SchemaError(f"{pointer}/{key}", "missing required key")
    return mapping


@dataclass(frozen=True)
class Clause:
    """One checked identity with its outcome."""

    name: str
    ref: str
    status: ClauseStatus
    detail: str = ""
    witness: str | None = None

    @property
    def passed(self) -> bool:
        return self.status is ClauseStatus.PASSED

    @classmethod
    def check(cls, name: str, ref: str, ok: bool, detail: str = "",
              witness: str | None = None) -> Self:
        status = ClauseStatus.PASSED if ok else ClauseStatus.FAILED
        return cls(name, ref, status, detail, None if ok else witness)

    @classmethod
    def witnessed(cls, name: str, ref: str, ok: bool, witness: str, detail: str = "") -> Self:
        """A check whose witness is part of the result, kept even when it passes."""
        status = ClauseStatus.PASSED if ok else ClauseStatus.FAILED
        return cls(name, ref, status, detail, witness)

    @classmethod
    def skipped(cls, name: str, ref: str, detail: str) -> Self:
        return cls(name, ref, ClauseStatus.SKIPPED, detail)

    def to_dict(self) -> dict[str, Any]:
        result: dict[str, Any] = {
            "name": self.name,
            "paperRef": self.ref,
            "status": self.status.value,
            "detail": self.detail,
        }
        if self.witness is not None:
            result["witness"] = self.witness
        return result

    @classmethod
    def from_dict(cls, data: Any, pointer: str = "") -> Self:
        d = check_keys(data, ("name", "paperRef", "status", "detail", "witness"), pointer,
                       required=("name", "paperRef", "status"))
        try:
            status = ClauseStatus(d["status"])
        except ValueError as exc:
            raise SchemaError(f"{pointer}/status", f"unknown status {d['status']!r}") from exc
        return cls(
            name=str(d["name"]),
            ref=str(d["paperRef"]),
            status=status,
            detail=str(d.get("detail", "")),
            witness=d.get("witness"),
        )


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one verification suite on one algebra."""

    suite: str
    algebra: str
    clauses: tuple[Clause, ...] = ()
    seed: int = 0
    trials: int = 0

    @property
    def passed(self) -> bool:
        return all(c.status is not ClauseStatus.FAILED for c in self.clauses)

    def failures(self) -> list[Clause]:
        return [c for c in self.clauses if c.status is ClauseStatus.FAILED]

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "algebra": self.algebra,
            "clauses": [c.to_dict() for c in self.clauses],
            "seed": self.seed,
            "trials": self.trials,
        }

    @classmethod
    def from_dict(cls, data: Any, pointer: str = "") -> Self:
        d = check_keys(data, ("suite", "algebra", "clauses", "seed", "trials"), pointer,
                       required=("suite", "algebra", "clauses"))
        clauses = d["clauses"]
        if not isinstance(clauses, list):
            raise SchemaError(f"{pointer}/clauses", "expected a list")
        return cls(
            suite=str(d["suite"]),
            algebra=str(d["algebra"]),
            clauses=tuple(
                Clause.from_dict(c, f"{pointer}/clauses/{k}") for k, c in enumerate(clauses)
            ),
            seed=int(d.get("seed", 0)),
            trials=int(d.get("trials", 0)),
        )


@dataclass(frozen=True)
class AlgebraFlags:
    """Derived properties of a Hopf algebra."""

    involutive: bool
    cocommutative: bool
    commutative: bool

    def to_dict(self) -> dict[str, bool]:
        return {
            "involutive": self.involutive,
            "cocommutative": self.cocommutative,
            "commutative": self.commutative,
        }

    @classmethod
    def from_dict(cls, data: Any, pointer: str = "") -> Self:
        d = check_keys(data, ("involutive", "cocommutative", "commutative"), pointer,
                       required=("involutive", "cocommutative", "commutative"))
        return cls(bool(d["involutive"]), bool(d["cocommutative"]), bool(d["commutative"]))


@dataclass(frozen=True)
class ValidationReport:
    """Axiom table and flags of a Hopf algebra."""

    algebra: str
    field: str
    dim: int
    axioms: tuple[Clause, ...]
    flags: AlgebraFlags
    antipode_order: int | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.axioms)

    def failed_axioms(self) -> list[str]:
        return [c.name for c in self.axioms if not c.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "algebra": self.algebra,
            "field": self.field,
            "dim": self.dim,
            "axioms": [c.to_dict() for c in self.axioms],
            "flags": self.flags.to_dict(),
            "antipodeOrder": self.antipode_order,
        }

    @classmethod
    def from_dict(cls, data: Any, pointer: str = "") -> Self:
        d = check_keys(data, ("algebra", "field", "dim", "axioms", "flags", "antipodeOrder"),
                       pointer, required=("algebra", "field", "dim", "axioms", "flags"))
        return cls(
            algebra=str(d["algebra"]),
            field=str(d["field"]),
            dim=int(d["dim"]),
            axioms=tuple(
                Clause.from_dict(c, f"{pointer}/axioms/{k}") for k, c in enumerate(d["axioms"])
            ),
            flags=AlgebraFlags.from_dict(d["flags"], f"{pointer}/flags"),
            antipode_order=d.get("antipodeOrder"),
        )


@dataclass(frozen=True)
class DegreeRow:
    """One degree of a cohomology table."""

    n: int
    dim: int
    rank_in: int
    rank_out: int
    representatives: tuple[dict[str, Any], ...] = ()

    @property
    def betti(self) -> int:
        return self.dim - self.rank_out - self.rank_in

    def to_dict(self) -> dict[str, Any]:
        result: dict[str, Any] = {
            "n": self.n,
            "dim": self.dim,
            "rankIn": self.rank_in,
            "rankOut": self.rank_out,
            "betti": self.betti,
        }
        if self.representatives:
            result["representatives"] = list(self.representatives)
        return result

    @classmethod
    def from_dict(cls, data: Any, pointer: str = "") -> Self:
        d = check_keys(data, ("n", "dim", "rankIn", "rankOut", "betti", "representatives"),
                       pointer, required=("n", "dim", "rankIn", "rankOut"))
        row = cls(int(d["n"]), int(d["dim"]), int(d["rankIn"]), int(d["rankOut"]),
                  tuple(d.get("representatives", ())))
        if "betti" in d and int(d["betti"]) != row.betti:
            raise SchemaError(f"{pointer}/betti", "inconsistent with dim and ranks")
        return row


@dataclass(frozen=True)
class CohomologyReport:
    """Betti table of one complex over one field."""

    algebra: str
    field: str
    kind: ComplexKind
    degrees: tuple[DegreeRow, ...]
    heuristic: bool = False
    u_trunc: int | None = None

    @property
    def betti(self) -> list[int]:
        return [row.betti for row in self.degrees]

    def to_dict(self) -> dict[str, Any]:
        result: dict[str, Any] = {
            "algebra": self.algebra,
            "field": self.field,
            "kind": self.kind.value,
            "degrees": [row.to_dict() for row in self.degrees],
            "heuristic": self.heuristic,
        }
        if self.u_trunc is not None:
            result["uTrunc"] = self.u_trunc
        return result

    @classmethod
    def from_dict(cls, data: Any, pointer: str = "") -> Self:
        d = check_keys(data, ("algebra", "field", "kind", "degrees", "heuristic", "uTrunc"),
                       pointer, required=("algebra", "field", "kind", "degrees"))
        try:
            kind = ComplexKind(d["kind"])
        except ValueError as exc:
            raise SchemaError(f"{pointer}/kind", f"unknown kind {d['kind']!r}") from exc
        return cls(
            algebra=str(d["algebra"]),
            field=str(d["field"]),
            kind=kind,
            degrees=tuple(
                DegreeRow.from_dict(r, f"{pointer}/degrees/{k}") for k, r in enumerate(d["degrees"])
            ),
            heuristic=bool(d.get("heuristic", False)),
            u_trunc=d.get("uTrunc"),
        )


@dataclass(frozen=True)
class BracketResult:
    """One evaluated product of two cocycles."""

    label: str
    nnz: int
    is_cocycle: bool
    is_coboundary: bool
    value: dict[str, Any] | None = None
    preimage: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        result: dict[str, Any] = {
            "label": self.label,
            "nnz": self.nnz,
            "isCocycle": self.is_cocycle,
            "isCoboundary": self.is_coboundary,
        }
        if self.value is not None:
            result["value"] = self.value
        if self.preimage is not None:
            result["preimage"] = self.preimage
        return result

    @classmethod
    def from_dict(cls, data: Any, pointer: str = "") -> Self:
        d = check_keys(data, ("label", "nnz", "isCocycle", "isCoboundary", "value", "preimage"),
                       pointer, required=("label", "nnz", "isCocycle", "isCoboundary"))
        return cls(str(d["label"]), int(d["nnz"]), bool(d["isCocycle"]),
                   bool(d["isCoboundary"]), d.get("value"), d.get("preimage"))


@dataclass(frozen=True)
class BracketReport:
    """Products of cocycles in fixed degrees."""

    algebra: str
    kind: BracketKind
    degrees: tuple[int, int]
    results: tuple[BracketResult, ...]
    seed: int | None = None

    def to_dict(self) -> dict[str, Any]:
        result: dict[str, Any] = {
            "algebra": self.algebra,
            "kind": self.kind.value,
            "degrees": list(self.degrees),
            "results": [r.to_dict() for r in self.results],
        }
        if self.seed is not None:
            result["seed"] = self.seed
        return result

    @classmethod
    def from_dict(cls, data: Any, pointer: str = "") -> Self:
        d = check_keys(data, ("algebra", "kind", "degrees", "results", "seed"), pointer,
                       required=("algebra", "kind", "degrees", "results"))
        p, q = d["degrees"]
        return cls(
            algebra=str(d["algebra"]),
            kind=BracketKind(d["kind"]),
            degrees=(int(p), int(q)),
            results=tuple(
                BracketResult.from_dict(r, f"{pointer}/results/{k}")
                for k, r in enumerate(d["results"])
            ),
            seed=d.get("seed"),
        )


Report = VerificationReport | ValidationReport | CohomologyReport | BracketReport | list[
    VerificationReport
]


@dataclass(frozen=True)
class RunConfig:
    """Everything one command needs; identical configs give identical reports."""

    command: str
    input_path: Path
    prime: int | None = None
    kind: ComplexKind = ComplexKind.DIAGONAL
    max_degree: int = 2
    u_trunc: int = 1
    suite: Suite | None = None
    arity_cap: int = 2
    trials: int = 10
    seed: int = 0
    bracket_kind: BracketKind = BracketKind.GERSTENHABER
    degrees: tuple[int, int] = (1, 1)
    classes: tuple[int, int] | None = None
    with_bases: bool = False
    out: Path | None = None
    materialize_limit: int = 70_000
    work_limit: int = 200_000_000
    threads: int = 4
    soft: bool = False

    def __post_init__(self) -> None:
        if self.max_degree < 0 or self.u_trunc < 0 or self.arity_cap < 0 or self.trials < 0:
            raise InputError("degree caps, truncation depth and trials must be non-negative")
        if self.threads < 1:
            raise InputError("thread cap must be at least 1")
