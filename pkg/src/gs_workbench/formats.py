"""JSON interchange for algebras, cochains and reports.

Canonical form: UTF-8, two-space indent, keys in schema order, sparse
entries sorted by their index tuples, LF line endings, trailing newline.
Writing the result of reading canonical text reproduces it byte for byte.
"""

import json
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Self

import structlog

from gs_workbench.domain import (
    BracketReport,
    CohomologyReport,
    Report,
    ValidationReport,
    VerificationReport,
    check_keys,
)
from gs_workbench.errors import InputError, SchemaError
from gs_workbench.exactfield import FieldKind, FieldSpec
from gs_workbench.gscomplex import Cochain
from gs_workbench.hopf import HopfAlgebraData, require_valid
from gs_workbench.tensorcalc import SparseMat

log = structlog.get_logger()

HOPF_KEYS = ("name", "field", "dim", "basis", "mult", "comult", "unit", "counit", "antipode")
COCHAIN_KEYS = ("algebra", "arity", "p", "q", "matrix")
MATRIX_KEYS = ("rows", "cols", "field", "entries")


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def loads(text: str, pointer: str = "") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(pointer, f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def field_from_dict(data: Any, pointer: str) -> FieldSpec:
    d = check_keys(data, ("kind", "p"), pointer, required=("kind",))
    try:
        kind = FieldKind(d["kind"])
    except ValueError as exc:
        raise SchemaError(f"{pointer}/kind", f"unknown field kind {d['kind']!r}") from exc
    if kind is FieldKind.PRIME and not isinstance(d.get("p"), int):
        raise SchemaError(f"{pointer}/p", "prime fields need an integer modulus")
    try:
        return FieldSpec.from_dict(dict(d))
    except InputError as exc:
        raise SchemaError(pointer, str(exc)) from exc


def _scalar(field: FieldSpec, value: Any, pointer: str) -> Any:
    if not isinstance(value, str):
        raise SchemaError(pointer, "scalars are strings")
    try:
        return field.from_text(value)
    except InputError as exc:
        raise SchemaError(pointer, str(exc)) from exc


def _index(value: Any, bound: int, pointer: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value < bound:
        raise SchemaError(pointer, f"expected an index below {bound}")
    return value


def _entries(data: Any, width: int, bound: int, field: FieldSpec,
             pointer: str) -> list[tuple[Any, ...]]:
    """Rows of `width` indices followed by one scalar."""
    if not isinstance(data, list):
        raise SchemaError(pointer, "expected a list")
    rows: list[tuple[Any, ...]] = []
    for n, item in enumerate(data):
        here = f"{pointer}/{n}"
        if not isinstance(item, list) or len(item) != width + 1:
            raise SchemaError(here, f"expected {width} indices and a scalar")
        indices = [_index(v, bound, f"{here}/{k}") for k, v in enumerate(item[:width])]
        rows.append((*indices, _scalar(field, item[width], f"{here}/{width}")))
    return rows


def _vector(data: Any, d: int, field: FieldSpec, pointer: str) -> list[Any]:
    if not isinstance(data, list) or len(data) != d:
        raise SchemaError(pointer, f"expected {d} scalars")
    return [_scalar(field, v, f"{pointer}/{k}") for k, v in enumerate(data)]


def hopf_to_dict(h: HopfAlgebraData) -> dict[str, Any]:
    d, field = h.dim, h.field
    text = field.to_text
    mult = sorted((c // d, c % d, r, text(v)) for r, c, v in h.mult.entries())
    comult = sorted((c, r // d, r % d, text(v)) for r, c, v in h.comult.entries())
    antipode = sorted((c, r, text(v)) for r, c, v in h.antipode.entries())
    unit = [text(h.unit.get(k, 0)) for k in range(d)]
    counit = [text(h.counit.get(0, k)) for k in range(d)]
    return {
        "name": h.name,
        "field": field.to_dict(),
        "dim": d,
        "basis": list(h.basis),
        "mult": [list(e) for e in mult],
        "comult": [list(e) for e in comult],
        "unit": unit,
        "counit": counit,
        "antipode": [list(e) for e in antipode],
    }


def hopf_from_dict(data: Any, pointer: str = "") -> HopfAlgebraData:
    d = check_keys(data, HOPF_KEYS, pointer, required=HOPF_KEYS)
    field = field_from_dict(d["field"], f"{pointer}/field")
    basis = d["basis"]
    if not isinstance(basis, list) or not all(isinstance(b, str) for b in basis):
        raise SchemaError(f"{pointer}/basis", "expected a list of labels")
    dim = d["dim"]
    if dim != len(basis):
        raise SchemaError(f"{pointer}/dim", f"dim {dim} but {len(basis)} basis labels")
    if not isinstance(d["name"], str):
        raise SchemaError(f"{pointer}/name", "expected a string")
    return HopfAlgebraData.build(
        d["name"],
        field,
        basis,
        mult=_entries(d["mult"], 3, dim, field, f"{pointer}/mult"),
        comult=_entries(d["comult"], 3, dim, field, f"{pointer}/comult"),
        unit=_vector(d["unit"], dim, field, f"{pointer}/unit"),
        counit=_vector(d["counit"], dim, field, f"{pointer}/counit"),
        antipode=_entries(d["antipode"], 2, dim, field, f"{pointer}/antipode"),
    )


def read_hopf(text: str) -> HopfAlgebraData:
    return hopf_from_dict(loads(text))


def write_hopf(h: HopfAlgebraData) -> str:
    return dumps(hopf_to_dict(h))


def load_hopf(path: Path, *, soft: bool = False) -> HopfAlgebraData:
    """Read and validate an algebra file; axiom failures are fatal unless soft."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError("", f"cannot read {path}: {exc.strerror}") from exc
    h = read_hopf(text)
    require_valid(h, soft=soft)
    log.debug("hopf_loaded", path=str(path), algebra=h.name, dim=h.dim)
    return h


def save_hopf(h: HopfAlgebraData, path: Path) -> None:
    path.write_text(write_hopf(h), encoding="utf-8")


def matrix_from_dict(data: Any, field: FieldSpec, pointer: str = "") -> SparseMat:
    d = check_keys(data, MATRIX_KEYS, pointer, required=MATRIX_KEYS)
    own = field_from_dict(d["field"], f"{pointer}/field")
    if own != field:
        raise SchemaError(f"{pointer}/field", f"matrix over {own.label}, expected {field.label}")
    rows, cols = d["rows"], d["cols"]
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 0 or cols < 0:
        raise SchemaError(pointer, "rows and cols are non-negative integers")
    entries = d["entries"]
    if not isinstance(entries, list):
        raise SchemaError(f"{pointer}/entries", "expected a list")
    items: list[tuple[int, int, Any]] = []
    for n, item in enumerate(entries):
        here = f"{pointer}/entries/{n}"
        if not isinstance(item, list) or len(item) != 3:
            raise SchemaError(here, "expected [row, col, scalar]")
        items.append((_index(item[0], rows, f"{here}/0"), _index(item[1], cols, f"{here}/1"),
                      _scalar(field, item[2], f"{here}/2")))
    return SparseMat.from_entries(rows, cols, items, field)


def cochain_to_dict(f: Cochain) -> dict[str, Any]:
    result: dict[str, Any] = {"algebra": f.hopf.name}
    if f.p == f.q:
        result["arity"] = f.p
    else:
        result["p"], result["q"] = f.p, f.q
    result["matrix"] = f.mat.to_dict()
    return result


def cochain_from_dict(data: Any, h: HopfAlgebraData, pointer: str = "") -> Cochain:
    d = check_keys(data, COCHAIN_KEYS, pointer, required=("algebra", "matrix"))
    if "arity" in d:
        if "p" in d or "q" in d:
            raise SchemaError(pointer, "give either arity or p and q")
        p = q = d["arity"]
    elif "p" in d and "q" in d:
        p, q = d["p"], d["q"]
    else:
        raise SchemaError(pointer, "missing arity")
    if not isinstance(p, int) or not isinstance(q, int) or p < 0 or q < 0:
        raise SchemaError(pointer, "degrees are non-negative integers")
    mat = matrix_from_dict(d["matrix"], h.field, f"{pointer}/matrix")
    try:
        return Cochain(p, q, mat, h)
    except InputError as exc:
        raise SchemaError(f"{pointer}/matrix", str(exc)) from exc


def read_cochain(text: str, h: HopfAlgebraData) -> Cochain:
    return cochain_from_dict(loads(text), h)


def write_cochain(f: Cochain) -> str:
    return dumps(cochain_to_dict(f))


def report_to_data(report: Report) -> Any:
    if isinstance(report, list):
        return [r.to_dict() for r in report]
    return report.to_dict()


def write_report(report: Report) -> str:
    return dumps(report_to_data(report))


REPORT_READERS: dict[str, Callable[[Any, str], Report]] = {
    "suite": VerificationReport.from_dict,
    "axioms": ValidationReport.from_dict,
    "degrees": CohomologyReport.from_dict,
    "results": BracketReport.from_dict,
}


def report_from_data(data: Any, pointer: str = "") -> Report:
    """Strict reader; the report type is recognised by its distinguishing key."""
    if isinstance(data, list):
        return [VerificationReport.from_dict(item, f"{pointer}/{k}")
                for k, item in enumerate(data)]
    if not isinstance(data, dict):
        raise SchemaError(pointer, "expected a report object")
    for key, reader in REPORT_READERS.items():
        if key in data:
            if key == "degrees" and "results" in data:
                continue
            return reader(data, pointer)
    raise SchemaError(pointer, "unrecognised report")


def read_report(text: str) -> Report:
    return report_from_data(loads(text))


@dataclass(frozen=True)
class FixtureEntry:
    """One pinned fixture with the command that re-derives its values."""

    name: str
    file: str
    flags: dict[str, bool]
    betti: list[int] | None = None
    provenance: str = "DERIVED"
    command: str = ""

    def to_dict(self) -> dict[str, Any]:
        result: dict[str, Any] = {"name": self.name, "file": self.file, "flags": self.flags}
        if self.betti is not None:
            result["betti"] = self.betti
        result["provenance"] = self.provenance
        result["command"] = self.command
        return result

    @classmethod
    def from_dict(cls, data: Any, pointer: str = "") -> Self:
        d = check_keys(data, ("name", "file", "flags", "betti", "provenance", "command"), pointer,
                       required=("name", "file", "flags"))
        betti = d.get("betti")
        return cls(
            name=str(d["name"]),
            file=str(d["file"]),
            flags={str(k): bool(v) for k, v in dict(d["flags"]).items()},
            betti=None if betti is None else [int(b) for b in betti],
            provenance=str(d.get("provenance", "DERIVED")),
            command=str(d.get("command", "")),
        )


@dataclass(frozen=True)
class FixtureManifest:
    """Index of the in-repo fixture algebras and their pinned values."""

    fixtures: tuple[FixtureEntry, ...]

    def entry(self, name: str) -> FixtureEntry:
        for fixture in self.fixtures:
            if fixture.name == name:
                return fixture
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        return {"fixtures": [f.to_dict() for f in self.fixtures]}

    @classmethod
    def from_dict(cls, data: Any, pointer: str = "") -> Self:
        d = check_keys(data, ("fixtures",), pointer, required=("fixtures",))
        return cls(tuple(FixtureEntry.from_dict(f, f"{pointer}/fixtures/{k}")
                         for k, f in enumerate(d["fixtures"])))

    @classmethod
    def load(cls, path: Path) -> Self:
        return cls.from_dict(loads(path.read_text(encoding="utf-8")))
