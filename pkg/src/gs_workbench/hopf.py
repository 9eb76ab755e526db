"""Finite-dimensional Hopf algebras given by structure constants.

Structure tensors are stored as SparseMat on the fixed basis: mult is d×d²,
comult d²×d, unit d×1, counit 1×d, antipode d×d. Axioms are checked as exact
equalities of compiled tensor words, never by sampling.
"""

from collections.abc import Callable, Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property, wraps
from itertools import permutations
from typing import Any, ParamSpec, Self, TypeVar

import structlog

from gs_workbench.domain import AlgebraFlags, Clause, ValidationReport
from gs_workbench.errors import AxiomViolation, BadCharacteristic, InvalidGroupTable, ShapeMismatch
from gs_workbench.exactfield import FieldSpec
from gs_workbench.tensorcalc import (
    Circuit,
    MapKind,
    SparseMat,
    Terms,
    TensorWord,
    compile_word,
    first_difference,
    matrix_terms,
    multi_index,
    rank_and_kernel,
)

log = structlog.get_logger()

P = ParamSpec("P")
R = TypeVar("R")


@dataclass(frozen=True)
class GroupTable:
    """A finite group by its multiplication table."""

    labels: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.labels)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @property
    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(n))

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]],
                   labels: Sequence[str] | None = None) -> Self:
        """Validate a multiplication table and derive identity and inverses."""
        n = len(table)
        if n == 0:
            raise InvalidGroupTable("empty table")
        rows = tuple(tuple(int(x) for x in row) for row in table)
        if any(len(row) != n or any(not 0 <= x < n for x in row) for row in rows):
            raise InvalidGroupTable("table is not closed on its elements")
        names = tuple(labels) if labels is not None else tuple(str(k) for k in range(n))
        if len(names) != n:
            raise InvalidGroupTable(f"{len(names)} labels for {n} elements")
        identity = next(
            (e for e in range(n) if all(rows[e][a] == a and rows[a][e] == a for a in range(n))),
            None,
        )
        if identity is None:
            raise InvalidGroupTable("no identity element")
        for a in range(n):
            for b in range(n):
                ab = rows[a][b]
                for c in range(n):
                    if rows[ab][c] != rows[a][rows[b][c]]:
                        raise InvalidGroupTable(f"not associative at ({a}, {b}, {c})")
        inverse: list[int] = []
        for a in range(n):
            inv = next((b for b in range(n) if rows[a][b] == identity), None)
            if inv is None or rows[inv][a] != identity:
                raise InvalidGroupTable(f"element {a} has no inverse")
            inverse.append(inv)
        return cls(names, rows, identity, tuple(inverse))


def cyclic_group(n: int) -> GroupTable:
    """C_n with labels e, g, g^2, ..."""
    labels = ["e", "g"] + [f"g^{k}" for k in range(2, n)]
    return GroupTable.from_table(
        [[(a + b) % n for b in range(n)] for a in range(n)], labels[:n]
    )


def symmetric_group(n: int) -> GroupTable:
    """S_n on lexicographically ordered permutations, (a·b)(x) = a(b(x))."""
    perms = list(permutations(range(n)))
    index = {p: k for k, p in enumerate(perms)}
    table = [[index[tuple(a[b[x]] for x in range(n))] for b in perms] for a in perms]
    return GroupTable.from_table(table, ["".join(str(x) for x in p) for p in perms])


@dataclass(frozen=True, eq=False)
class HopfAlgebraData:
    """A Hopf algebra with invertible antipode on a fixed basis."""

    name: str
    field: FieldSpec
    basis: tuple[str, ...]
    mult: SparseMat
    comult: SparseMat
    unit: SparseMat
    counit: SparseMat
    antipode: SparseMat
    antipode_inv: SparseMat | None

    def __post_init__(self) -> None:
        d = len(self.basis)
        expected = {
            "mult": (d, d * d),
            "comult": (d * d, d),
            "unit": (d, 1),
            "counit": (1, d),
            "antipode": (d, d),
        }
        for attr, shape in expected.items():
            mat: SparseMat = getattr(self, attr)
            if mat.shape != shape:
                raise ShapeMismatch(f"{attr} has shape {mat.shape}, expected {shape}")
            if mat.field != self.field:
                raise ShapeMismatch(f"{attr} is over {mat.field.label}, not {self.field.label}")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def build(
        cls,
        name: str,
        field: FieldSpec,
        basis: Sequence[str],
        mult: Iterable[tuple[int, int, int, Any]],
        comult: Iterable[tuple[int, int, int, Any]],
        unit: Sequence[Any],
        counit: Sequence[Any],
        antipode: Iterable[tuple[int, int, Any]],
    ) -> Self:
        """Assemble from coefficient lists with domain-element values.

        mult (i, j, k, c): e_i·e_j has c on e_k; comult (i, j, k, c): Δ(e_i)
        has c on e_j⊗e_k; antipode (i, j, c): S(e_i) has c on e_j.
        """
        d = len(basis)
        if len(unit) != d or len(counit) != d:
            raise ShapeMismatch(f"unit/counit of length {len(unit)}/{len(counit)} for dim {d}")
        m = SparseMat.from_entries(d, d * d, ((k, i * d + j, c) for i, j, k, c in mult), field)
        delta = SparseMat.from_entries(
            d * d, d, ((j * d + k, i, c) for i, j, k, c in comult), field
        )
        eta = SparseMat.from_entries(d, 1, ((k, 0, c) for k, c in enumerate(unit)), field)
        eps = SparseMat.from_entries(1, d, ((0, k, c) for k, c in enumerate(counit)), field)
        s = SparseMat.from_entries(d, d, ((j, i, c) for i, j, c in antipode), field)
        return cls(name, field, tuple(basis), m, delta, eta, eps, s, s.inverse())

    def structure_matrix(self, kind: MapKind) -> SparseMat:
        match kind:
            case MapKind.MULT:
                return self.mult
            case MapKind.COMULT:
                return self.comult
            case MapKind.UNIT:
                return self.unit
            case MapKind.COUNIT:
                return self.counit
            case MapKind.ANTIPODE:
                return self.antipode
            case MapKind.ANTIPODE_INV:
                if self.antipode_inv is None:
                    raise AxiomViolation(self.name, ["antipode invertible"])
                return self.antipode_inv
            case MapKind.IDENTITY:
                return SparseMat.identity(self.dim, self.field)
            case _:
                raise ValueError(f"{kind} is not a structure map")

    @cached_property
    def _term_tables(self) -> dict[MapKind, Terms]:
        tables: dict[MapKind, Terms] = {}
        arities = {
            MapKind.MULT: (2, 1),
            MapKind.COMULT: (1, 2),
            MapKind.UNIT: (0, 1),
            MapKind.COUNIT: (1, 0),
            MapKind.ANTIPODE: (1, 1),
            MapKind.IDENTITY: (1, 1),
        }
        if self.antipode_inv is not None:
            arities[MapKind.ANTIPODE_INV] = (1, 1)
        for kind, (a_in, a_out) in arities.items():
            tables[kind] = matrix_terms(self.structure_matrix(kind), a_in, a_out, self.dim)
        return tables

    def structure_terms(self, kind: MapKind) -> Terms:
        if kind is MapKind.ANTIPODE_INV and self.antipode_inv is None:
            raise AxiomViolation(self.name, ["antipode invertible"])
        return self._term_tables[kind]

    def over(self, field: FieldSpec) -> "HopfAlgebraData":
        """Reduce a rational algebra to a prime field."""
        if field == self.field:
            return self
        if self.field.is_prime_field:
            raise BadCharacteristic(f"cannot change {self.field.label} to {field.label}")

        def reduce(mat: SparseMat) -> SparseMat:
            q = self.field.domain
            return SparseMat.from_entries(
                mat.rows,
                mat.cols,
                ((i, j, field.element(int(q.numer(v)), int(q.denom(v))))
                 for i, j, v in mat.entries()),
                field,
            )

        s = reduce(self.antipode)
        return HopfAlgebraData(
            name=f"{self.name}_{field.label.lower()}",
            field=field,
            basis=self.basis,
            mult=reduce(self.mult),
            comult=reduce(self.comult),
            unit=reduce(self.unit),
            counit=reduce(self.counit),
            antipode=s,
            antipode_inv=s.inverse(),
        )

    @cached_property
    def flags(self) -> AlgebraFlags:
        d = self.dim
        identity = SparseMat.identity(d, self.field)
        swap_c = Circuit(1)
        a, b = swap_c.split(swap_c.inputs[0], 2)
        co_op = compile_word(swap_c.word([b, a]), self)
        op_c = Circuit(2)
        x, y = op_c.inputs
        op = compile_word(op_c.word([op_c.mult(y, x)]), self)
        return AlgebraFlags(
            involutive=self.antipode @ self.antipode == identity,
            cocommutative=co_op == self.comult,
            commutative=op == self.mult,
        )

    @cached_property
    def derived(self) -> dict[Hashable, Any]:
        """Operators computed from this algebra, released together with it."""
        return {}

    @property
    def is_involutive(self) -> bool:
        return self.flags.involutive


def per_algebra(func: Callable[P, R]) -> Callable[P, R]:
    """Memoize an operator in the `derived` table of its algebra, the last positional argument."""

    @wraps(func)
    def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
        hopf = args[-1] if args else None
        if kwargs or not isinstance(hopf, HopfAlgebraData):
            name = getattr(func, "__name__", "operator")
            raise TypeError(f"{name} takes the algebra as its last positional argument")
        key = (func, args[:-1])
        table = hopf.derived
        if key not in table:
            table[key] = func(*args, **kwargs)
        return table[key]

    return wrapper


def same_structure(
h: HopfAlgebraData, k: HopfAlgebraData) -> bool:
    """Equality of the defining tensors (names and labels ignored)."""
    return (
        h.field == k.field
        and h.dim == k.dim
        and h.mult == k.mult
        and h.comult == k.comult
        and h.unit == k.unit
        and h.counit == k.counit
        and h.antipode == k.antipode
    )


def _identity_word(n: int) -> TensorWord:
    return TensorWord(n)


def _axiom_words(h: HopfAlgebraData) -> list[tuple[str, TensorWord, TensorWord]]:
    """Pairs of words whose compiled matrices must agree."""
    axioms: list[tuple[str, TensorWord, TensorWord]] = []

    c = Circuit(3)
    u, v, w = c.inputs
    lhs = c.word([c.mult(c.mult(u, v), w)])
    c = Circuit(3)
    u, v, w = c.inputs
    axioms.append(("associativity", lhs, c.word([c.mult(u, c.mult(v, w))])))

    c = Circuit(1)
    axioms.append(("left unit", c.word([c.mult(c.unit(), c.inputs[0])]), _identity_word(1)))
    c = Circuit(1)
    axioms.append(("right unit", c.word([c.mult(c.inputs[0], c.unit())]), _identity_word(1)))

    c = Circuit(1)
    a, b = c.split(c.inputs[0], 2)
    a1, a2 = c.split(a, 2)
    lhs = c.word([a1, a2, b])
    c = Circuit(1)
    a, b = c.split(c.inputs[0], 2)
    b1, b2 = c.split(b, 2)
    axioms.append(("coassociativity", lhs, c.word([a, b1, b2])))

    c = Circuit(1)
    a, b = c.split(c.inputs[0], 2)
    c.counit(a)
    axioms.append(("left counit", c.word([b]), _identity_word(1)))
    c = Circuit(1)
    a, b = c.split(c.inputs[0], 2)
    c.counit(b)
    axioms.append(("right counit", c.word([a]), _identity_word(1)))

    c = Circuit(2)
    u, v = c.inputs
    lhs = c.word(c.split(c.mult(u, v), 2))
    c = Circuit(2)
    u1, u2 = c.split(c.inputs[0], 2)
    v1, v2 = c.split(c.inputs[1], 2)
    axioms.append(("comultiplicative", lhs, c.word([c.mult(u1, v1), c.mult(u2, v2)])))

    c = Circuit(2)
    c.counit(c.mult(*c.inputs))
    lhs = c.word([])
    c = Circuit(2)
    c.counit(c.inputs[0])
    c.counit(c.inputs[1])
    axioms.append(("counit multiplicative", lhs, c.word([])))

    c = Circuit(0)
    lhs = c.word(c.split(c.unit(), 2))
    c = Circuit(0)
    axioms.append(("unit comultiplicative", lhs, c.word([c.unit(), c.unit()])))

    c = Circuit(0)
    c.counit(c.unit())
    axioms.append(("counit of unit", c.word([]), _identity_word(0)))

    def counit_unit() -> TensorWord:
        c = Circuit(1)
        c.counit(c.inputs[0])
        return c.word([c.unit()])

    c = Circuit(1)
    a, b = c.split(c.inputs[0], 2)
    axioms.append(("left antipode", c.word([c.mult(c.antipode(a), b)]), counit_unit()))
    c = Circuit(1)
    a, b = c.split(c.inputs[0], 2)
    axioms.append(("right antipode", c.word([c.mult(a, c.antipode(b))]), counit_unit()))

    if h.antipode_inv is not None:
        c = Circuit(1)
        a, b = c.split(c.inputs[0], 2)
        axioms.append(
            ("co-opposite antipode", c.word([c.mult(c.antipode_inv(b), a)]), counit_unit())
        )
    return axioms


def _witness(h: HopfAlgebraData, lhs: SparseMat, rhs: SparseMat, arity: int) -> str | None:
    pos = first_difference(lhs, rhs)
    if pos is None:
        return None
    digits = multi_index(pos[1], arity, h.dim)
    return "⊗".join(h.basis[k] for k in digits) if digits else "1"


def validate(h: HopfAlgebraData) -> ValidationReport:
    """Check every Hopf axiom exactly; failures carry the first failing basis input."""
    clauses: list[Clause] = []
    for name, lhs_word, rhs_word in _axiom_words(h):
        lhs = compile_word(lhs_word, h)
        rhs = compile_word(rhs_word, h)
        clauses.append(
            Clause.check(name, "hopf algebra axiom", lhs == rhs,
                         witness=_witness(h, lhs, rhs, lhs_word.arity_in))
        )
    clauses.append(
        Clause.check("antipode invertible", "hopf algebra axiom", h.antipode_inv is not None,
                     witness="S is singular")
    )
    report = ValidationReport(
        algebra=h.name,
        field=h.field.label,
        dim=h.dim,
        axioms=tuple(clauses),
        flags=h.flags,
        antipode_order=antipode_order(h),
    )
    log.info("algebra_validated", algebra=h.name, passed=report.passed,
             failed=report.failed_axioms())
    return report


def antipode_order(h: HopfAlgebraData, limit: int = 64) -> int | None:
    """Smallest k ≥ 1 with S^k = id, or None up to the limit."""
    identity = SparseMat.identity(h.dim, h.field)
    power = h.antipode
    for k in range(1, limit + 1):
        if power == identity:
            return k
        power = h.antipode @ power
    return None


def primitive_elements(h: HopfAlgebraData) -> list[SparseMat]:
    """Basis of {x : Δx = x⊗1 + 1⊗x}."""
    c = Circuit(1)
    left = c.word([c.inputs[0], c.unit()])
    c = Circuit(1)
    right = c.word([c.unit(), c.inputs[0]])
    operator = h.comult - compile_word(left, h) - compile_word(right, h)
    _, kernel = rank_and_kernel(operator)
    return kernel


def _values(field: FieldSpec, items: Iterable[tuple[Any, ...]]) -> list[tuple[Any, ...]]:
    return [(*idx, field.element(c)) for *idx, c in items]


def group_algebra(group: GroupTable, field: FieldSpec,
                  name: str = "group_algebra") -> HopfAlgebraData:
    """k[G]: grouplike basis, Δ(g) = g⊗g, S(g) = g⁻¹."""
    n = group.order
    one = field.one
    return HopfAlgebraData.build(
        name,
        field,
        group.labels,
        mult=[(a, b, group.mul(a, b), one) for a in range(n) for b in range(n)],
        comult=[(a, a, a, one) for a in range(n)],
        unit=[one if a == group.identity else field.zero for a in range(n)],
        counit=[one] * n,
        antipode=[(a, group.inverse[a], one) for a in range(n)],
    )


def dual_group_algebra(group: GroupTable, field: FieldSpec,
                       name: str = "dual_group_algebra") -> HopfAlgebraData:
    """k^G: indicator functions δ_g with pointwise product and convolution coproduct."""
    n = group.order
    one = field.one
    return HopfAlgebraData.build(
        name,
        field,
        tuple(f"d_{label}" for label in group.labels),
        mult=[(a, a, a, one) for a in range(n)],
        comult=[(group.mul(a, b), a, b, one) for a in range(n) for b in range(n)],
        unit=[one] * n,
        counit=[one if a == group.identity else field.zero for a in range(n)],
        antipode=[(a, group.inverse[a], one) for a in range(n)],
    )


SWEEDLER_MULT = [
    (0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 2, 1), (0, 3, 3, 1),
    (1, 0, 1, 1), (1, 1, 0, 1), (1, 2, 3, 1), (1, 3, 2, 1),
    (2, 0, 2, 1), (2, 1, 3, -1),
    (3, 0, 3, 1), (3, 1, 2, -1),
]
SWEEDLER_COMULT = [
    (0, 0, 0, 1), (1, 1, 1, 1),
    (2, 2, 0, 1), (2, 1, 2, 1),
    (3, 3, 1, 1), (3, 0, 3, 1),
]
SWEEDLER_ANTIPODE = [(0, 0, 1), (1, 1, 1), (2, 3, -1), (3, 2, 1)]


def sweedler_h4(field: FieldSpec, name: str = "h4") -> HopfAlgebraData:
    """Sweedler's four-dimensional algebra on 1, g, x, gx.

    g² = 1, x² = 0, xg = −gx, Δg = g⊗g, Δx = x⊗1 + g⊗x, S(g) = g, S(x) = −gx.
    """
    if field.characteristic == 2:
        raise BadCharacteristic("Sweedler's algebra needs characteristic different from 2")
    return HopfAlgebraData.build(
        name,
        field,
        ("1", "g", "x", "gx"),
        mult=_values(field, SWEEDLER_MULT),
        comult=_values(field, SWEEDLER_COMULT),
        unit=[field.one, field.zero, field.zero, field.zero],
        counit=[field.one, field.one, field.zero, field.zero],
        antipode=_values(field, SWEEDLER_ANTIPODE),
    )


def builtin_algebras(field: FieldSpec | None = None) -> Mapping[str, HopfAlgebraData]:
    """The fixture algebras by name."""
    k = field or FieldSpec.rationals()
    algebras = {
        "kc2": group_algebra(cyclic_group(2), k, "kc2"),
        "kc3": group_algebra(cyclic_group(3), k, "kc3"),
        "ks3": group_algebra(symmetric_group(3), k, "ks3"),
        "duals3": dual_group_algebra(symmetric_group(3), k, "duals3"),
    }
    if k.characteristic != 2:
        algebras["h4"] = sweedler_h4(k, "h4")
    return algebras


def require_valid(h: HopfAlgebraData, *, soft: bool = False) -> ValidationReport:
    """Validate and raise AxiomViolation on failure unless soft."""
    report = validate(h)
    if not report.passed and (not soft or h.antipode_inv is None):
        raise AxiomViolation(h.name, report.failed_axioms())
    return report
