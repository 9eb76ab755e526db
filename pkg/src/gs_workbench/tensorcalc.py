"""Sparse exact matrices on tensor-power bases and the tensor-word calculus.

A basis vector of H^{⊗n} is a tuple (i_1, ..., i_n) of basis indices; its
linear index is Σ i_k·d^{n−k}, leftmost factor most significant. Every
matrix in the workbench uses this convention.

Sweedler-notation formulas are written with a Circuit: wires carry tensor
factors, and each operation (split, multiply, antipode, counit, apply a
cochain) appends layers to a TensorWord. Compiling a word propagates each
input basis tuple through the layers, merging equal tuples after every
layer, which keeps the intermediate support small for the sparse structure
tensors of the algebras we handle.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import TYPE_CHECKING, Any, Self

import structlog
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from gs_workbench.errors import (
    CrossCheckFailure,
    DegreeMismatch,
    MixedFields,
    ResourceLimit,
    ShapeMismatch,
    UnknownCochainRef,
)
from gs_workbench.exactfield import FieldSpec

if TYPE_CHECKING:
    from gs_workbench.ports import HopfStructure

log = structlog.get_logger()

Dod = dict[int, dict[int, Any]]


@dataclass(frozen=True)
class Limits:
    """Resource guards for matrix assembly."""

    materialize: int = 70_000
    work: int = 200_000_000


_LIMITS: ContextVar[Limits] = ContextVar("gs_workbench_limits", default=Limits())


def current_limits() -> Limits:
    return _LIMITS.get()


def set_limits(limits: Limits) -> None:
    _LIMITS.set(limits)


@contextmanager
def limits(value: Limits) -> Iterator[Limits]:
    """Temporarily install resource guards."""
    token = _LIMITS.set(value)
    try:
        yield value
    finally:
        _LIMITS.reset(token)


def linear_index(digits: Sequence[int], d: int) -> int:
    """Linear index of a multi-index, most significant digit first."""
    index = 0
    for digit in digits:
        index = index * d + digit
    return index


def multi_index(index: int, n: int, d: int) -> tuple[int, ...]:
    """Inverse of linear_index for a degree-n tuple."""
    digits = [0] * n
    for k in range(n - 1, -1, -1):
        index, digits[k] = divmod(index, d)
    return tuple(digits)


class SparseMat:
    """A sparse matrix over an exact field.

    Wraps a sparse sympy DomainMatrix; explicit zeros are never stored.
    """

    __slots__ = ("dm", "field")

    def __init__(self, dm: DomainMatrix, field: FieldSpec) -> None:
        if dm.domain != field.domain:
            raise MixedFields(f"matrix over {dm.domain} tagged as {field.label}")
        self.dm = dm.to_sparse()
        self.field = field

    @classmethod
    def from_dod(cls, dod: Mapping[int, Mapping[int, Any]], shape: tuple[int, int],
                 field: FieldSpec) -> Self:
        clean: Dod = {}
        for i, row in dod.items():
            kept = {j: v for j, v in row.items() if v}
            if kept:
                clean[i] = kept
        return cls(DomainMatrix(clean, shape, field.domain), field)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int, Any]],
                     field: FieldSpec) -> Self:
        """Build from (row, col, value) triples; repeated positions are summed."""
        dod: Dod = {}
        for i, j, v in entries:
            if not (0 <= i < rows and 0 <= j < cols):
                raise ShapeMismatch(f"entry ({i}, {j}) outside {rows}x{cols}")
            row = dod.setdefault(i, {})
            row[j] = row[j] + v if j in row else v
        return cls.from_dod(dod, (rows, cols), field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: FieldSpec) -> Self:
        return cls(DomainMatrix({}, (rows, cols), field.domain), field)

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> Self:
        one = field.one
        return cls(DomainMatrix({i: {i: one} for i in range(n)}, (n, n), field.domain), field)

    @property
    def rows(self) -> int:
        return self.dm.shape[0]

    @property
    def cols(self) -> int:
        return self.dm.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.dm.shape

    def dod(self) -> Dod:
        """Rows as {row: {col: value}}, empty rows omitted."""
        return {i: dict(row) for i, row in self.dm.rep.items() if row}

    def entries(self) -> list[tuple[int, int, Any]]:
        """Nonzero entries in row-major order."""
        return [(i, j, v) for i, row in sorted(self.dod().items()) for j, v in sorted(row.items())]

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self.dm.rep.values())

    @property
    def is_zero(self) -> bool:
        return self.nnz == 0

    def get(self, i: int, j: int) -> Any:
        return self.dm.rep.get(i, {}).get(j, self.field.zero)

    def check_same(self, other: SparseMat) -> None:
        if self.field != other.field:
            raise MixedFields(f"{self.field.label} vs {other.field.label}")

    def __matmul__(self, other: SparseMat) -> SparseMat:
        self.check_same(other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        return SparseMat(self.dm.matmul(other.dm), self.field)

    def __add__(self, other: SparseMat) -> SparseMat:
        self.check_same(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} + {other.shape}")
        return SparseMat(self.dm.add(other.dm), self.field)

    def __sub__(self, other: SparseMat) -> SparseMat:
        self.check_same(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} - {other.shape}")
        return SparseMat(self.dm.sub(other.dm), self.field)

    def __neg__(self) -> SparseMat:
        return SparseMat(self.dm.neg(), self.field)

    def scale(self, value: Any) -> SparseMat:
        """Multiply every entry by a field element (or a Python int)."""
        factor = self.field.domain.convert(value)
        scaled = {i: {j: v * factor for j, v in row.items()} for i, row in self.dod().items()}
        return SparseMat.from_dod(scaled, self.shape, self.field)

    def signed(self, sign: int) -> SparseMat:
        return self if sign > 0 else -self

    def transpose(self) -> SparseMat:
        return SparseMat(self.dm.transpose(), self.field)

    @property
    def T(self) -> SparseMat:  # noqa: N802
        return self.transpose()

    def power(self, k: int) -> SparseMat:
        if self.rows != self.cols:
            raise ShapeMismatch(f"power of non-square {self.shape}")
        result = SparseMat.identity(self.rows, self.field)
        for _ in range(k):
            result = self @ result
        return result

    def hstack(self, *others: SparseMat) -> SparseMat:
        for other in others:
            self.check_same(other)
            if other.rows != self.rows:
                raise ShapeMismatch(f"hstack of {self.shape} and {other.shape}")
        return SparseMat(self.dm.hstack(*(o.dm for o in others)), self.field)

    def column(self, j: int) -> SparseMat:
        """The j-th column as a cols=1 matrix."""
        dod = {i: {0: row[j]} for i, row in self.dm.rep.items() if j in row}
        return SparseMat.from_dod(dod, (self.rows, 1), self.field)

    def columns(self) -> dict[int, dict[int, Any]]:
        """Columns as {col: {row: value}}."""
        return self.transpose().dod()

    def inverse(self) -> SparseMat | None:
        """Matrix inverse, or None when singular."""
        try:
            return SparseMat(self.dm.to_dense().inv().to_sparse(), self.field)
        except DMNonInvertibleMatrixError:
            return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMat):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.dod() == other.dod()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"SparseMat({self.rows}x{self.cols}, nnz={self.nnz}, {self.field.label})"

    def to_dict(self) -> dict[str, Any]:
        """Interchange form with row-major sorted entries."""
        return {
            "rows": self.rows,
            "cols": self.cols,
            "field": self.field.to_dict(),
            "entries": [[i, j, self.field.to_text(v)] for i, j, v in self.entries()],
        }


def first_difference(a: SparseMat, b: SparseMat) -> tuple[int, int] | None:
    """Position of the first (row-major) entry where two matrices differ."""
    diff = (a - b).entries()
    if not diff:
        return None
    i, j, _ = diff[0]
    return i, j


def kron(a: SparseMat, b: SparseMat) -> SparseMat:
    """Kronecker product; a acts on the leftmost block of factors."""
    a.check_same(b)
    br, bc = b.shape
    bdod = b.dod()
    dod: Dod = {}
    for ia, arow in a.dod().items():
        for ib, brow in bdod.items():
            dod[ia * br + ib] = {
                ja * bc + jb: va * vb for ja, va in arow.items() for jb, vb in brow.items()
            }
    return SparseMat.from_dod(dod, (a.rows * br, a.cols * bc), a.field)


@dataclass(frozen=True)
class Perm:
    """Permutation of tensor factors: factor k moves to position images[k]."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(len(self.images))):
            raise DegreeMismatch(f"not a permutation: {self.images}")

    @property
    def size(self) -> int:
        return len(self.images)

    @property
    def sources(self) -> tuple[int, ...]:
        """sources[j] is the factor that lands at position j."""
        inv = [0] * len(self.images)
        for k, pos in enumerate(self.images):
            inv[pos] = k
        return tuple(inv)

    def apply(self, factors: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(factors[k] for k in self.sources)

    def compose(self, other: Perm) -> Perm:
        """self ∘ other: apply other first."""
        if other.size != self.size:
            raise DegreeMismatch("composing permutations of different sizes")
        return Perm(tuple(self.images[other.images[k]] for k in range(self.size)))

    def inverse(self) -> Perm:
        return Perm(self.sources)

    @classmethod
    def identity(cls, n: int) -> Perm:
        return cls(tuple(range(n)))


def factor_permutation(n: int, perm: Perm, d: int, field: FieldSpec) -> SparseMat:
    """Permutation matrix of a factor permutation on H^{⊗n}."""
    if perm.size != n:
        raise DegreeMismatch(f"permutation of {perm.size} factors on degree {n}")
    one = field.one
    dod: Dod = {}
    for col in range(d**n):
        row = linear_index(perm.apply(multi_index(col, n, d)), d)
        dod[row] = {col: one}
    return SparseMat.from_dod(dod, (d**n, d**n), field)


class MapKind(Enum):
    """Elementary maps a tensor word is built from."""

    IDENTITY = "identity"
    MULT = "mult"
    COMULT = "comult"
    UNIT = "unit"
    COUNIT = "counit"
    ANTIPODE = "antipode"
    ANTIPODE_INV = "antipodeInv"
    PERMUTE = "permute"
    COCHAIN = "cochain"


STRUCTURE_ARITY: dict[MapKind, tuple[int, int]] = {
    MapKind.IDENTITY: (1, 1),
    MapKind.MULT: (2, 1),
    MapKind.COMULT: (1, 2),
    MapKind.UNIT: (0, 1),
    MapKind.COUNIT: (1, 0),
    MapKind.ANTIPODE: (1, 1),
    MapKind.ANTIPODE_INV: (1, 1),
}


@dataclass(frozen=True)
class ElementaryMap:
    """One elementary map with its tensor arities."""

    kind: MapKind
    arity_in: int
    arity_out: int
    ref: str | Perm | None = None

    @classmethod
    def structure(cls, kind: MapKind) -> Self:
        arity_in, arity_out = STRUCTURE_ARITY[kind]
        return cls(kind, arity_in, arity_out)

    @classmethod
    def cochain(cls, ref: str, p: int, q: int) -> Self:
        return cls(MapKind.COCHAIN, p, q, ref)

    @classmethod
    def permutation(cls, perm: Perm) -> Self:
        return cls(MapKind.PERMUTE, perm.size, perm.size, perm)


@dataclass(frozen=True)
class Layer:
    """id^{left} ⊗ map ⊗ id^{right}."""

    left: int
    map: ElementaryMap
    right: int

    @property
    def in_degree(self) -> int:
        return self.left + self.map.arity_in + self.right

    @property
    def out_degree(self) -> int:
        return self.left + self.map.arity_out + self.right


@dataclass(frozen=True)
class TensorWord:
    """A composable pipeline of layers, applied first to last."""

    arity_in: int
    layers: tuple[Layer, ...] = ()

    def __post_init__(self) -> None:
        width = self.arity_in
        for k, layer in enumerate(self.layers):
            if layer.in_degree != width:
                raise DegreeMismatch(
                    f"layer {k} expects degree {layer.in_degree}, receives {width}"
                )
            width = layer.out_degree

    @property
    def arity_out(self) -> int:
        return self.layers[-1].out_degree if self.layers else self.arity_in

    @property
    def max_width(self) -> int:
        return max([self.arity_in, *(layer.out_degree for layer in self.layers)])

    def then(self, other: TensorWord) -> TensorWord:
        """Apply self, then other."""
        if other.arity_in != self.arity_out:
            raise DegreeMismatch(f"cannot feed degree {self.arity_out} into {other.arity_in}")
        return TensorWord(self.arity_in, self.layers + other.layers)

    def cochain_refs(self) -> list[str]:
        return [
            layer.map.ref
            for layer in self.layers
            if layer.map.kind is MapKind.COCHAIN and isinstance(layer.map.ref, str)
        ]


@dataclass(frozen=True)
class Wire:
    """Handle on one tensor factor inside a Circuit."""

    ident: int


@dataclass
class _Split:
    legs: list[int]
    remainder: int
    done: int = 0


class Circuit:
    """Wire-level builder for tensor words.

    Splits are lazy: split(w, k) hands out k leg wires but emits comultiplications
    only when a leg is first used, peeling legs off the front of the remaining
    factor. Consuming legs promptly keeps the compiled word narrow.
    """

    def __init__(self, arity: int) -> None:
        self.arity = arity
        self._counter = 0
        self._live: list[int] = []
        self._layers: list[Layer] = []
        self._splits: dict[int, _Split] = {}
        self._consumed: set[int] = set()
        self.inputs: list[Wire] = []
        for _ in range(arity):
            ident = self._fresh()
            self._live.append(ident)
            self.inputs.append(Wire(ident))

    def _fresh(self) -> int:
        self._counter += 1
        return self._counter

    def _emit(self, emap: ElementaryMap, inputs: list[int], outputs: list[int]) -> None:
        chosen = set(inputs)
        others = [w for w in self._live if w not in chosen]
        target = others + inputs
        if target != self._live:
            where = {w: k for k, w in enumerate(target)}
            perm = Perm(tuple(where[w] for w in self._live))
            self._layers.append(Layer(0, ElementaryMap.permutation(perm), 0))
        self._layers.append(Layer(len(others), emap, 0))
        self._live = others + outputs

    def _materialize(self, wire: Wire) -> int:
        if wire.ident in self._consumed:
            raise ValueError(f"wire {wire.ident} used twice")
        record = self._splits.get(wire.ident)
        if record is None:
            if wire.ident not in self._live:
                raise ValueError(f"wire {wire.ident} is not live")
            return wire.ident
        target = record.legs.index(wire.ident)
        while record.done <= target:
            leg = record.legs[record.done]
            if record.done == len(record.legs) - 1:
                self._live[self._live.index(record.remainder)] = leg
            else:
                rest = self._fresh()
                self._emit(ElementaryMap.structure(MapKind.COMULT), [record.remainder], [leg, rest])
                record.remainder = rest
            del self._splits[leg]
            record.done += 1
        return wire.ident

    def _use(self, wire: Wire) -> int:
        ident = self._materialize(wire)
        self._consumed.add(ident)
        return ident

    def _op(self, emap: ElementaryMap, wires: Sequence[Wire]) -> list[Wire]:
        inputs = [self._use(w) for w in wires]
        outputs = [self._fresh() for _ in range(emap.arity_out)]
        self._emit(emap, inputs, outputs)
        return [Wire(o) for o in outputs]

    def split(self, wire: Wire, k: int) -> list[Wire]:
        """Sweedler legs w_(1), ..., w_(k); k = 0 applies the counit."""
        if k < 0:
            raise DegreeMismatch(f"cannot split into {k} legs")
        if k == 0:
            self.counit(wire)
            return []
        if k == 1:
            return [wire]
        remainder = self._use(wire)
        legs = [self._fresh() for _ in range(k)]
        record = _Split(legs, remainder)
        for leg in legs:
            self._splits[leg] = record
        return [Wire(leg) for leg in legs]

    def mult(self, a: Wire, b: Wire) -> Wire:
        return self._op(ElementaryMap.structure(MapKind.MULT), [a, b])[0]

    def product(self, wires: Sequence[Wire]) -> Wire:
        """Ordered product; the unit when empty."""
        if not wires:
            return self.unit()
        acc = wires[0]
        for w in wires[1:]:
            acc = self.mult(acc, w)
        return acc

    def unit(self) -> Wire:
        return self._op(ElementaryMap.structure(MapKind.UNIT), [])[0]

    def counit(self, wire: Wire) -> None:
        self._op(ElementaryMap.structure(MapKind.COUNIT), [wire])

    def antipode(self, wire: Wire) -> Wire:
        return self._op(ElementaryMap.structure(MapKind.ANTIPODE), [wire])[0]

    def antipode_inv(self, wire: Wire) -> Wire:
        return self._op(ElementaryMap.structure(MapKind.ANTIPODE_INV), [wire])[0]

    def apply(self, ref: str, wires: Sequence[Wire], q: int) -> list[Wire]:
        """Feed wires to the named cochain with q outputs."""
        return self._op(ElementaryMap.cochain(ref, len(wires), q), wires)

    def left_act(self, x: Wire, wires: Sequence[Wire]) -> list[Wire]:
        """Diagonal left action x ⊳ (w_1 ⊗ ... ⊗ w_n); through ε when n = 0."""
        legs = self.split(x, len(wires))
        return [self.mult(a, w) for a, w in zip(legs, wires, strict=True)]

    def right_act(self, wires: Sequence[Wire], x: Wire) -> list[Wire]:
        """Diagonal right action (w_1 ⊗ ... ⊗ w_n) ◁ x; through ε when n = 0."""
        legs = self.split(x, len(wires))
        return [self.mult(w, a) for w, a in zip(wires, legs, strict=True)]

    def word(self, outputs: Sequence[Wire]) -> TensorWord:
        """Finish the circuit with the given outputs in order."""
        idents = [self._materialize(w) for w in outputs]
        if self._splits:
            raise ValueError(f"unused Sweedler legs: {sorted(self._splits)}")
        if sorted(idents) != sorted(self._live) or len(set(idents)) != len(idents):
            raise ValueError("circuit outputs must be exactly the live wires")
        if idents != self._live:
            where = {w: k for k, w in enumerate(idents)}
            perm = Perm(tuple(where[w] for w in self._live))
            self._layers.append(Layer(0, ElementaryMap.permutation(perm), 0))
            self._live = list(idents)
        return TensorWord(self.arity, tuple(self._layers))


Terms = Mapping[tuple[int, ...], Sequence[tuple[tuple[int, ...], Any]]]


def matrix_terms(mat: SparseMat, arity_in: int, arity_out: int, d: int) -> Terms:
    """Column-wise term table of a map H^{⊗p} → H^{⊗q}."""
    table: dict[tuple[int, ...], list[tuple[tuple[int, ...], Any]]] = {}
    for col, column in mat.columns().items():
        table[multi_index(col, arity_in, d)] = [
            (multi_index(row, arity_out, d), v) for row, v in sorted(column.items())
        ]
    return table


class _Budget:
    def __init__(self, what: str) -> None:
        self.what = what
        self.limit = current_limits().work
        self.spent = 0

    def spend(self, amount: int) -> None:
        self.spent += amount
        if self.spent > self.limit:
            raise ResourceLimit(self.what, self.spent, self.limit)


def _term_tables(word: TensorWord, hopf: HopfStructure, cochains: Mapping[str, SparseMat],
                 hole: str | None) -> list[Terms | None]:
    d = hopf.dim
    cache: dict[str, Terms] = {}
    tables: list[Terms | None] = []
    for layer in word.layers:
        emap = layer.map
        if emap.kind is MapKind.PERMUTE or (emap.kind is MapKind.COCHAIN and emap.ref == hole):
            tables.append(None)
        elif emap.kind is MapKind.COCHAIN:
            ref = str(emap.ref)
            if ref not in cochains:
                raise UnknownCochainRef(f"no cochain named {ref!r}")
            mat = cochains[ref]
            if mat.shape != (d**emap.arity_out, d**emap.arity_in):
                raise DegreeMismatch(
                    f"cochain {ref!r} has shape {mat.shape}, "
                    f"expected {(d**emap.arity_out, d**emap.arity_in)}"
                )
            if ref not in cache:
                cache[ref] = matrix_terms(mat, emap.arity_in, emap.arity_out, d)
            tables.append(cache[ref])
        else:
            tables.append(hopf.structure_terms(emap.kind))
    return tables


State = dict[tuple[tuple[int, ...], tuple[int, int] | None], Any]


def _propagate(word: TensorWord, state: State, tables: list[Terms | None], d: int,
               hole: str | None, budget: _Budget) -> State:
    for layer, table in zip(word.layers, tables, strict=True):
        emap = layer.map
        lo = layer.left
        hi = lo + emap.arity_in
        nxt: State = {}
        if emap.kind is MapKind.PERMUTE:
            assert isinstance(emap.ref, Perm)
            sources = emap.ref.sources
            for (factors, tag), c in state.items():
                nxt[(tuple(factors[k] for k in sources), tag)] = c
            state = nxt
            continue
        if table is None:
            outs = [(fo, linear_index(fo, d)) for fo in product(range(d), repeat=emap.arity_out)]
            budget.spend(len(state) * len(outs))
            for (factors, _), c in state.items():
                fi = linear_index(factors[lo:hi], d)
                head, tail = factors[:lo], factors[hi:]
                for fo, lin in outs:
                    nxt[(head + fo + tail, (lin, fi))] = c
            state = nxt
            continue
        for (factors, tag), c in state.items():
            terms = table.get(factors[lo:hi])
            if not terms:
                continue
            budget.spend(len(terms))
            head, tail = factors[:lo], factors[hi:]
            for out, a in terms:
                key = (head + out + tail, tag)
                prev = nxt.get(key)
                nxt[key] = c * a if prev is None else prev + c * a
        state = {k: v for k, v in nxt.items() if v}
    return state


def compile_word(word: TensorWord, hopf: HopfStructure,
                 cochains: Mapping[str, SparseMat] | None = None) -> SparseMat:
    """Matrix (d^{out} × d^{in}) of the composite linear map of a word."""
    d, field = hopf.dim, hopf.field
    tables = _term_tables(word, hopf, cochains or {}, hole=None)
    budget = _Budget("compile")
    n_in, n_out = word.arity_in, word.arity_out
    dod: Dod = {}
    for col in range(d**n_in):
        state: State = {(multi_index(col, n_in, d), None): field.one}
        for (factors, _), value in _propagate(word, state, tables, d, None, budget).items():
            dod.setdefault(linear_index(factors, d), {})[col] = value
    return SparseMat.from_dod(dod, (d**n_out, d**n_in), field)


def operator_matrix(word: TensorWord, hopf: HopfStructure, hole: str = "f",
                    cochains: Mapping[str, SparseMat] | None = None) -> SparseMat:
    """Matrix of f ↦ word[f] on row-major vectorized cochains.

    The word must use the cochain named ``hole`` exactly once. Entry (r, c)
    of a d^q × d^p cochain sits at index r·d^p + c.
    """
    holes = [layer.map for layer in word.layers
             if layer.map.kind is MapKind.COCHAIN and layer.map.ref == hole]
    if len(holes) != 1:
        raise DegreeMismatch(f"cochain {hole!r} must occur exactly once, found {len(holes)}")
    p, q = holes[0].arity_in, holes[0].arity_out
    d, field = hopf.dim, hopf.field
    tables = _term_tables(word, hopf, cochains or {}, hole=hole)
    budget = _Budget("operator")
    n_in, n_out = word.arity_in, word.arity_out
    size_in = d**n_in
    dp = d**p
    dod: Dod = {}
    for col in range(size_in):
        state: State = {(multi_index(col, n_in, d), None): field.one}
        for (factors, tag), value in _propagate(word, state, tables, d, hole, budget).items():
            assert tag is not None
            row = linear_index(factors, d) * size_in + col
            target = dod.setdefault(row, {})
            key = tag[0] * dp + tag[1]
            target[key] = target[key] + value if key in target else value
    return SparseMat.from_dod(dod, (d**n_out * size_in, d ** (p + q)), field)


def structure_layer_matrix(layer: Layer, hopf: HopfStructure,
                           cochains: Mapping[str, SparseMat]) -> SparseMat:
    """Kronecker-expanded matrix of one layer."""
    d, field = hopf.dim, hopf.field
    emap = layer.map
    if emap.kind is MapKind.PERMUTE:
        assert isinstance(emap.ref, Perm)
        return factor_permutation(emap.arity_in, emap.ref, d, field)
    if emap.kind is MapKind.COCHAIN:
        ref = str(emap.ref)
        if ref not in cochains:
            raise UnknownCochainRef(f"no cochain named {ref!r}")
        core = cochains[ref]
    elif emap.kind is MapKind.IDENTITY:
        core = SparseMat.identity(d, field)
    else:
        core = hopf.structure_matrix(emap.kind)
    left = SparseMat.identity(d**layer.left, field)
    right = SparseMat.identity(d**layer.right, field)
    return kron(left, kron(core, right))


def compile_layerwise(word: TensorWord, hopf: HopfStructure,
                      cochains: Mapping[str, SparseMat] | None = None) -> SparseMat:
    """Same matrix as compile_word, by multiplying materialized layers."""
    d = hopf.dim
    widest = d**word.max_width
    limit = current_limits().materialize
    if widest > limit:
        raise ResourceLimit("layerwise compile", widest, limit)
    result = SparseMat.identity(d**word.arity_in, hopf.field)
    for layer in word.layers:
        result = structure_layer_matrix(layer, hopf, cochains or {}) @ result
    return result


def iterated_coproduct(k: int, hopf: HopfStructure) -> SparseMat:
    """Δ^k : H → H^{⊗(k+1)}, with Δ^{-1} = ε and Δ^0 = id."""
    if k < -1:
        raise DegreeMismatch(f"iterated coproduct of order {k}")
    circuit = Circuit(1)
    legs = circuit.split(circuit.inputs[0], k + 1)
    return compile_word(circuit.word(legs), hopf)


def left_diagonal_action(p: int, hopf: HopfStructure) -> SparseMat:
    """u ⊗ x ↦ u ⊳ x on H ⊗ H^{⊗p}."""
    circuit = Circuit(p + 1)
    x, *ws = circuit.inputs
    return compile_word(circuit.word(circuit.left_act(x, ws)), hopf)


def right_diagonal_action(p: int, hopf: HopfStructure) -> SparseMat:
    """x ⊗ u ↦ x ◁ u on H^{⊗p} ⊗ H."""
    circuit = Circuit(p + 1)
    *ws, x = circuit.inputs
    return compile_word(circuit.word(circuit.right_act(ws, x)), hopf)


def rank(a: SparseMat) -> int:
    """Exact rank, eliminating along the shorter side."""
    if a.rows == 0 or a.cols == 0 or a.is_zero:
        return 0
    target = a if a.rows <= a.cols else a.transpose()
    return int(target.dm.rank())


def dense_rank(a: SparseMat) -> int:
    """Rank by dense elimination; an independent oracle for rank."""
    if a.rows == 0 or a.cols == 0:
        return 0
    return int(a.dm.to_dense().rank())


def rank_and_kernel(a: SparseMat) -> tuple[int, list[SparseMat]]:
    """Exact rank and a verified kernel basis (as column vectors)."""
    field = a.field
    if a.cols == 0:
        return 0, []
    if a.rows == 0 or a.is_zero:
        one = field.one
        basis = [SparseMat.from_dod({j: {0: one}}, (a.cols, 1), field) for j in range(a.cols)]
        return 0, basis
    null = SparseMat(a.dm.nullspace(), field)
    basis = [null.transpose().column(k) for k in range(null.rows)]
    for v in basis:
        if not (a @ v).is_zero:
            raise CrossCheckFailure("kernel vector fails A·v = 0")
    r = a.cols - len(basis)
    log.debug("rank_and_kernel", shape=a.shape, rank=r, nullity=len(basis))
    return r, basis


def solve_many(a: SparseMat, rhs: Sequence[SparseMat]) -> list[SparseMat | None]:
    """Solve A·x = b for several right-hand sides with one elimination.

    Each solution is verified by substitution; inconsistent systems give None.
    """
    for b in rhs:
        a.check_same(b)
        if b.shape != (a.rows, 1):
            raise ShapeMismatch(f"right-hand side {b.shape} for matrix {a.shape}")
    if not rhs:
        return []
    field = a.field
    if a.cols == 0:
        return [SparseMat.zeros(0, 1, field) if b.is_zero else None for b in rhs]
    if a.rows == 0:
        return [SparseMat.zeros(a.cols, 1, field) for _ in rhs]
    stacked = a.hstack(*rhs)
    reduced, pivots = stacked.dm.rref()
    rows = {i: dict(row) for i, row in reduced.to_sparse().rep.items()}
    pivot_cols = [c for c in pivots if c < a.cols]
    r = len(pivot_cols)
    solutions: list[SparseMat | None] = []
    for k, b in enumerate(rhs):
        col = a.cols + k
        if any(col in rows.get(i, {}) for i in range(r, a.rows)):
            solutions.append(None)
            continue
        dod = {pc: {0: rows[i][col]} for i, pc in enumerate(pivot_cols) if col in rows.get(i, {})}
        x = SparseMat.from_dod(dod, (a.cols, 1), field)
        if a @ x != b:
            raise CrossCheckFailure("solution fails substitution check")
        solutions.append(x)
    return solutions


def solve(a: SparseMat, b: SparseMat) -> SparseMat | None:
    """Some x with A·x = b, or None."""
    return solve_many(a, [b])[0]


def column_space_pivots(a: SparseMat) -> tuple[int, ...]:
    """Pivot columns of the reduced row echelon form of A."""
    if a.rows == 0 or a.cols == 0 or a.is_zero:
        return ()
    _, pivots = a.dm.rref()
    return tuple(int(p) for p in pivots)

