"""The Gerstenhaber-Schack bicomplex, its diagonal and total complexes, and cohomology.

A cochain in C^{p,q} = Hom(H^{⊗p}, H^{⊗q}) is a d^q × d^p matrix. Coface and
codegeneracy maps are returned as operator matrices acting on row-major
vectorized cochains (entry (r, c) at index r·d^p + c), so every identity of
the bicomplex becomes an equality of sparse matrices.

Total complex sign convention: δ_total = δ^v + (−1)^p δ^h on C^{p,q}.
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any, Self

import numpy as np
import structlog

from gs_workbench.domain import (
    Clause,
    CohomologyReport,
    ComplexKind,
    DegreeRow,
    VerificationReport,
)
from gs_workbench.errors import (
    CrossCheckFailure,
    IndexOutOfRange,
    NotInField,
    ResourceLimit,
    ShapeMismatch,
)
from gs_workbench.exactfield import FieldSpec
from gs_workbench.hopf import HopfAlgebraData, per_algebra
from gs_workbench.tensorcalc import (
    Circuit,
    SparseMat,
    Wire,
    column_space_pivots,
    current_limits,
    first_difference,
    operator_matrix,
    rank,
    rank_and_kernel,
    solve,
)

log = structlog.get_logger()

RANDOM_SCALARS = (-2, -1, 1, 2, 3)


@dataclass(frozen=True, eq=False)
class Cochain:
    """An element of Hom(H^{⊗p}, H^{⊗q})."""

    p: int
    q: int
    mat: SparseMat
    hopf: HopfAlgebraData

    def __post_init__(self) -> None:
        d = self.hopf.dim
        if self.mat.shape != (d**self.q, d**self.p):
            raise ShapeMismatch(
                f"cochain of bidegree ({self.p}, {self.q}) needs shape "
                f"{(d**self.q, d**self.p)}, got {self.mat.shape}"
            )

    @property
    def arity(self) -> int:
        if self.p != self.q:
            raise ShapeMismatch(f"bidegree ({self.p}, {self.q}) is not diagonal")
        return self.p

    def vec(self) -> SparseMat:
        """Row-major vectorization as a d^{p+q} × 1 column."""
        cols = self.mat.cols
        dod = {r * cols + c: {0: v} for r, c, v in self.mat.entries()}
        return SparseMat.from_dod(dod, (self.mat.rows * cols, 1), self.mat.field)

    @classmethod
    def from_vec(cls, vec: SparseMat, p: int, q: int, hopf: HopfAlgebraData) -> Self:
        d = hopf.dim
        cols = d**p
        if vec.shape != (d ** (p + q), 1):
            raise ShapeMismatch(f"vector of shape {vec.shape} for bidegree ({p}, {q})")
        entries = [(divmod(i, cols), v) for i, _, v in vec.entries()]
        return cls(p, q, SparseMat.from_entries(d**q, cols, ((r, c, v) for (r, c), v in entries),
                                                vec.field), hopf)

    @classmethod
    def zero(cls, hopf: HopfAlgebraData, p: int, q: int) -> Self:
        d = hopf.dim
        return cls(p, q, SparseMat.zeros(d**q, d**p, hopf.field), hopf)

    @classmethod
    def identity(cls, hopf: HopfAlgebraData, n: int = 1) -> Self:
        return cls(n, n, SparseMat.identity(hopf.dim**n, hopf.field), hopf)

    def _same(self, other: "Cochain") -> None:
        if (self.p, self.q) != (other.p, other.q) or self.hopf is not other.hopf:
            raise ShapeMismatch(f"({self.p}, {self.q}) vs ({other.p}, {other.q})")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._same(other)
        return Cochain(self.p, self.q, self.mat + other.mat, self.hopf)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._same(other)
        return Cochain(self.p, self.q, self.mat - other.mat, self.hopf)

    def __neg__(self) -> "Cochain":
        return Cochain(self.p, self.q, -self.mat, self.hopf)

    def scale(self, value: Any) -> "Cochain":
        return Cochain(self.p, self.q, self.mat.scale(value), self.hopf)

    def signed(self, sign: int) -> "Cochain":
        return self if sign > 0 else -self

    def apply(self, operator: SparseMat, p: int, q: int) -> "Cochain":
        """Image under an operator matrix landing in C^{p,q}."""
        return Cochain.from_vec(operator @ self.vec(), p, q, self.hopf)

    @property
    def is_zero(self) -> bool:
        return self.mat.is_zero

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.p, self.q) == (other.p, other.q) and self.mat == other.mat

    __hash__ = None  # type: ignore[assignment]


def trial_rng(seed: int, trial: int, salt: int = 0) -> np.random.Generator:
    """Independent generator per (seed, trial, salt)."""
    return np.random.default_rng(np.random.SeedSequence([seed, trial, salt]))


def random_cochain(hopf: HopfAlgebraData, p: int, q: int, rng: np.random.Generator) -> Cochain:
    """Sparse random cochain: about three entries per column from a small scalar set."""
    d = hopf.dim
    rows, cols = d**q, d**p
    k = min(3, rows)
    field = hopf.field
    entries: list[tuple[int, int, Any]] = []
    for col in range(cols):
        picked = rng.choice(rows, size=k, replace=False)
        values = rng.choice(RANDOM_SCALARS, size=k)
        entries.extend(
            (int(r), col, field.element(int(v))) for r, v in zip(picked, values, strict=True)
        )
    return Cochain(p, q, SparseMat.from_entries(rows, cols, entries, field), hopf)


def _range_check(name: str, index: int, lo: int, hi: int) -> None:
    if not lo <= index <= hi:
        raise IndexOutOfRange(f"{name} index {index} outside [{lo}, {hi}]")


def hole_operator(circuit: Circuit, outputs: Sequence[Wire], hopf: HopfAlgebraData) -> SparseMat:
    return operator_matrix(circuit.word(outputs), hopf, hole="f")


@per_algebra
def coface_v(i: int, p: int, q: int, hopf: HopfAlgebraData) -> SparseMat:
    """δ^v_i : C^{p,q} → C^{p+1,q} (Hochschild direction)."""
    _range_check("vertical coface", i, 0, p + 1)
    c = Circuit(p + 1)
    u = c.inputs
    if i == 0:
        out = c.left_act(u[0], c.apply("f", u[1:], q))
    elif i == p + 1:
        out = c.right_act(c.apply("f", u[:p], q), u[p])
    else:
        out = c.apply("f", [*u[: i - 1], c.mult(u[i - 1], u[i]), *u[i + 1 :]], q)
    return hole_operator(c, out, hopf)


@per_algebra
def codeg_v(j: int, p: int, q: int, hopf: HopfAlgebraData) -> SparseMat:
    """σ^v_j : C^{p,q} → C^{p−1,q}, inserting the unit at argument j."""
    _range_check("vertical codegeneracy", j, 0, p - 1)
    c = Circuit(p - 1)
    u = c.inputs
    out = c.apply("f", [*u[:j], c.unit(), *u[j:]], q)
    return hole_operator(c, out, hopf)


@per_algebra
def coface_h(i: int, p: int, q: int, hopf: HopfAlgebraData) -> SparseMat:
    """δ^h_i : C^{p,q} → C^{p,q+1} (coHochschild direction)."""
    _range_check("horizontal coface", i, 0, q + 1)
    c = Circuit(p)
    u = c.inputs
    if i == 0:
        legs = [c.split(w, 2) for w in u]
        head = c.product([leg[0] for leg in legs])
        out = [head, *c.apply("f", [leg[1] for leg in legs], q)]
    elif i == q + 1:
        legs = [c.split(w, 2) for w in u]
        fo = c.apply("f", [leg[0] for leg in legs], q)
        out = [*fo, c.product([leg[1] for leg in legs])]
    else:
        fo = c.apply("f", u, q)
        out = [*fo[: i - 1], *c.split(fo[i - 1], 2), *fo[i:]]
    return hole_operator(c, out, hopf)


@per_algebra
def codeg_h(j: int, p: int, q: int, hopf: HopfAlgebraData) -> SparseMat:
    """σ^h_j : C^{p,q} → C^{p,q−1}, applying the counit to output j."""
    _range_check("horizontal codegeneracy", j, 0, q - 1)
    c = Circuit(p)
    fo = c.apply("f", c.inputs, q)
    c.counit(fo[j])
    return hole_operator(c, [*fo[:j], *fo[j + 1 :]], hopf)


@per_algebra
def diag_coface(i: int, n: int, hopf: HopfAlgebraData) -> SparseMat:
    """δ^diag_i : C^n → C^{n+1} from its closed formula."""
    _range_check("diagonal coface", i, 0, n + 1)
    c = Circuit(n + 1)
    u = c.inputs
    if i == 0:
        a0, b0 = c.split(u[0], 2)
        legs = [c.split(w, 2) for w in u[1:]]
        head = c.product([a0, *(leg[0] for leg in legs)])
        fo = c.apply("f", [leg[1] for leg in legs], n)
        out = [head, *c.left_act(b0, fo)]
    elif i == n + 1:
        a, b = c.split(u[n], 2)
        legs = [c.split(w, 2) for w in u[:n]]
        fo = c.apply("f", [leg[0] for leg in legs], n)
        tail = c.product([*(leg[1] for leg in legs), b])
        out = [*c.right_act(fo, a), tail]
    else:
        fo = c.apply("f", [*u[: i - 1], c.mult(u[i - 1], u[i]), *u[i + 1 :]], n)
        out = [*fo[: i - 1], *c.split(fo[i - 1], 2), *fo[i:]]
    return hole_operator(c, out, hopf)


@per_algebra
def diag_codeg(j: int, n: int, hopf: HopfAlgebraData) -> SparseMat:
    """σ^diag_j : C^n → C^{n−1}: unit into argument j, counit on output j."""
    _range_check("diagonal codegeneracy", j, 0, n - 1)
    c = Circuit(n - 1)
    u = c.inputs
    fo = c.apply("f", [*u[:j], c.unit(), *u[j:]], n)
    c.counit(fo[j])
    return hole_operator(c, [*fo[:j], *fo[j + 1 :]], hopf)


def alternating_sum(mats: Sequence[SparseMat]) -> SparseMat:
    total = mats[0]
    for k, mat in enumerate(mats[1:], start=1):
        total = total - mat if k % 2 else total + mat
    return total


@per_algebra
def delta_v(p: int, q: int, hopf: HopfAlgebraData) -> SparseMat:
    return alternating_sum([coface_v(i, p, q, hopf) for i in range(p + 2)])


@per_algebra
def delta_h(p: int, q: int, hopf: HopfAlgebraData) -> SparseMat:
    return alternating_sum([coface_h(i, p, q, hopf) for i in range(q + 2)])


@per_algebra
def delta_diag(n: int, hopf: HopfAlgebraData) -> SparseMat:
    """δ^diag = Σ_i (−1)^i δ^diag_i : C^n → C^{n+1}."""
    return alternating_sum([diag_coface(i, n, hopf) for i in range(n + 2)])


@per_algebra
def total_differential(n: int, hopf: HopfAlgebraData) -> SparseMat:
    """δ^v + (−1)^p δ^h on ⊕_{p+q=n} C^{p,q}; block p sits at offset p·d^n."""
    d = hopf.dim
    block_in, block_out = d**n, d ** (n + 1)
    dod: dict[int, dict[int, Any]] = {}

    def place(mat: SparseMat, row_block: int, col_block: int) -> None:
        for r, c, v in mat.entries():
            row = dod.setdefault(row_block * block_out + r, {})
            key = col_block * block_in + c
            row[key] = row[key] + v if key in row else v

    for p in range(n + 1):
        q = n - p
        place(delta_v(p, q, hopf), p + 1, p)
        place(delta_h(p, q, hopf).signed(1 if p % 2 == 0 else -1), p, p)
    return SparseMat.from_dod(dod, ((n + 2) * block_out, (n + 1) * block_in), hopf.field)


def complex_dim(hopf: HopfAlgebraData, kind: ComplexKind, n: int, u_trunc: int = 0) -> int:
    """Dimension in degree n; the cyclic complex sums C^{n−2k} for k ≤ u_trunc."""
    d = hopf.dim
    if n < 0:
        return 0
    if kind is ComplexKind.CYCLIC:
        return sum(d ** (2 * (n - 2 * k)) for k in range(u_trunc + 1) if n - 2 * k >= 0)
    return d ** (2 * n) if kind is ComplexKind.DIAGONAL else (n + 1) * d**n


def differential(hopf: HopfAlgebraData, kind: ComplexKind, n: int) -> SparseMat:
    if kind is ComplexKind.DIAGONAL:
        return delta_diag(n, hopf)
    if kind is ComplexKind.TOTAL:
        return total_differential(n, hopf)
    raise ValueError(f"{kind} has no plain differential")


def guarded_rank(mat: SparseMat, what: str) -> int:
    """Rank, refusing matrices above the materialization threshold."""
    limit = current_limits().materialize
    size = min(mat.rows, mat.cols)
    if size > limit:
        raise ResourceLimit(what, size, limit)
    return rank(mat)


def differential_rank(hopf: HopfAlgebraData, kind: ComplexKind, n: int) -> int:
    """Rank of the differential leaving degree n."""
    limit = current_limits().materialize
    dim = complex_dim(hopf, kind, n)
    if dim > limit:
        raise ResourceLimit(f"{kind.value} differential in degree {n}", dim, limit)
    r = guarded_rank(differential(hopf, kind, n), f"{kind.value} differential in degree {n}")
    log.info("differential_rank_computed", algebra=hopf.name, kind=kind.value, n=n, rank=r)
    return r


def cohomology_report(hopf: HopfAlgebraData, kind: ComplexKind, ranks: Sequence[int],
                      representatives: Sequence[Sequence[dict[str, Any]]] = (),
                      u_trunc: int | None = None) -> CohomologyReport:
    """Betti table from the ranks of δ_0, ..., δ_nMax."""
    rows = []
    for n, rank_out in enumerate(ranks):
        rank_in = ranks[n - 1] if n > 0 else 0
        reps = tuple(representatives[n]) if n < len(representatives) else ()
        row = DegreeRow(n, complex_dim(hopf, kind, n, u_trunc or 0), rank_in, rank_out, reps)
        if row.betti < 0:
            raise CrossCheckFailure(f"negative Betti number in degree {n}")
        rows.append(row)
    return CohomologyReport(
        algebra=hopf.name,
        field=hopf.field.label,
        kind=kind,
        degrees=tuple(rows),
        heuristic=hopf.field.is_prime_field,
        u_trunc=u_trunc,
    )


def cohomology(hopf: HopfAlgebraData, kind: ComplexKind = ComplexKind.DIAGONAL,
               n_max: int = 2) -> CohomologyReport:
    """Betti numbers of the diagonal or total complex in degrees 0..n_max."""
    ranks = [differential_rank(hopf, kind, n) for n in range(n_max + 1)]
    return cohomology_report(hopf, kind, ranks)


def cocycle_basis(hopf: HopfAlgebraData, n: int) -> list[Cochain]:
    """Basis of Z^n_diag in elimination pivot order."""
    _, kernel = rank_and_kernel(delta_diag(n, hopf))
    return [Cochain.from_vec(v, n, n, hopf) for v in kernel]


def cohomology_representatives(hopf: HopfAlgebraData, n: int) -> list[Cochain]:
    """Cocycles spanning a complement of B^n in Z^n."""
    cocycles = cocycle_basis(hopf, n)
    if not cocycles:
        return []
    z = cocycles[0].vec().hstack(*(f.vec() for f in cocycles[1:]))
    if n == 0:
        return cocycles
    image = delta_diag(n - 1, hopf)
    pivots = column_space_pivots(image.hstack(z))
    chosen = [p - image.cols for p in pivots if p >= image.cols]
    return [cocycles[k] for k in chosen]


def is_cocycle(f: Cochain) -> bool:
    return (delta_diag(f.arity, f.hopf) @ f.vec()).is_zero


def is_coboundary(f: Cochain) -> Cochain | None:
    """A verified preimage under δ^diag, or None."""
    n = f.arity
    if n == 0:
        return None
    x = solve(delta_diag(n - 1, f.hopf), f.vec())
    return None if x is None else Cochain.from_vec(x, n - 1, n - 1, f.hopf)


def betti_consistency(hopf: HopfAlgebraData, primes: Sequence[int], n_max: int) -> list[Clause]:
    """Compare diagonal Betti numbers over Q with their reductions mod each prime."""
    base = cohomology(hopf, ComplexKind.DIAGONAL, n_max).betti
    clauses: list[Clause] = []
    for prime in primes:
        name = f"betti over {hopf.field.label} vs F{prime}"
        try:
            reduced = hopf.over(FieldSpec.prime(prime))
        except NotInField as exc:
            clauses.append(Clause.skipped(name, "multi-prime consistency", str(exc)))
            continue
        other = cohomology(reduced, ComplexKind.DIAGONAL, n_max).betti
        clauses.append(Clause.check(name, "multi-prime consistency", other == base,
                                    detail=f"{base} vs {other}", witness=str(other)))
    return clauses


def diagonal_total_agreement(hopf: HopfAlgebraData, n_max: int) -> Clause:
    """Diagonal and total Betti numbers agree degreewise."""
    name = f"diagonal vs total betti, n ≤ {n_max}"
    ref = "diagonal complex computes total cohomology"
    try:
        diag = cohomology(hopf, ComplexKind.DIAGONAL, n_max).betti
        total = cohomology(hopf, ComplexKind.TOTAL, n_max).betti
    except ResourceLimit as exc:
        return Clause.skipped(name, ref, str(exc))
    return Clause.check(name, ref, diag == total, detail=f"{diag} vs {total}", witness=str(total))


def matrix_clause(name: str, ref: str, lhs: SparseMat, rhs: SparseMat) -> Clause:
    """Clause for an exact matrix identity with the first differing entry as witness."""
    pos = first_difference(lhs, rhs)
    witness = None if pos is None else f"entry {pos}"
    return Clause.check(name, ref, pos is None, witness=witness)


def zero_clause(name: str, ref: str, mat: SparseMat) -> Clause:
    return matrix_clause(name, ref, mat, SparseMat.zeros(mat.rows, mat.cols, mat.field))


class Faces:
    """Coface and codegeneracy provider for the bicomplex checks."""

    def __init__(self, hopf: HopfAlgebraData) -> None:
        self.hopf = hopf

    def coface_v(self, i: int, p: int, q: int) -> SparseMat:
        return coface_v(i, p, q, self.hopf)

    def codeg_v(self, j: int, p: int, q: int) -> SparseMat:
        return codeg_v(j, p, q, self.hopf)

    def coface_h(self, i: int, p: int, q: int) -> SparseMat:
        return coface_h(i, p, q, self.hopf)

    def codeg_h(self, j: int, p: int, q: int) -> SparseMat:
        return codeg_h(j, p, q, self.hopf)

    def diag_coface(self, i: int, n: int) -> SparseMat:
        return diag_coface(i, n, self.hopf)

    def diag_codeg(self, j: int, n: int) -> SparseMat:
        return diag_codeg(j, n, self.hopf)

    def delta_v(self, p: int, q: int) -> SparseMat:
        return alternating_sum([self.coface_v(i, p, q) for i in range(p + 2)])

    def delta_h(self, p: int, q: int) -> SparseMat:
        return alternating_sum([self.coface_h(i, p, q) for i in range(q + 2)])


Coface = Callable[[int, int], SparseMat]


def cosimplicial_clauses(label: str, coface: Coface, codeg: Coface, n: int,
                         dim: Callable[[int], int], field: FieldSpec) -> list[Clause]:
    """The cosimplicial identities with source degree n, one clause per family."""
    ref = "cosimplicial identities"
    clauses: list[Clause] = []

    def first_failure(pairs: list[tuple[str, SparseMat, SparseMat]]) -> Clause | None:
        for tag, lhs, rhs in pairs:
            pos = first_difference(lhs, rhs)
            if pos is not None:
                return Clause.check(f"{label}: {tag.split('[')[0]}", ref, False,
                                    witness=f"{tag} at entry {pos}")
        return None

    cofaces = [
        (f"δ_jδ_i [i={i}, j={j}, n={n}]", coface(j, n + 1) @ coface(i, n),
         coface(i, n + 1) @ coface(j - 1, n))
        for j in range(n + 3) for i in range(j)
    ]
    passed = Clause.check(f"{label}: δ_jδ_i = δ_iδ_(j-1), n={n}", ref, True)
    clauses.append(first_failure(cofaces) or passed)
    if n >= 2:
        codegs = [
            (f"σ_jσ_i [i={i}, j={j}, n={n}]", codeg(j, n - 1) @ codeg(i, n),
             codeg(i, n - 1) @ codeg(j + 1, n))
            for j in range(n - 1) for i in range(j + 1)
        ]
        clauses.append(first_failure(codegs)
                       or Clause.check(f"{label}: σ_jσ_i = σ_iσ_(j+1), n={n}", ref, True))
    mixed: list[tuple[str, SparseMat, SparseMat]] = []
    identity = SparseMat.identity(dim(n), field)
    for j in range(n + 1):
        for i in range(n + 2):
            lhs = codeg(j, n + 1) @ coface(i, n)
            if i < j:
                rhs = coface(i, n - 1) @ codeg(j - 1, n)
            elif i in (j, j + 1):
                rhs = identity
            else:
                rhs = coface(i - 1, n - 1) @ codeg(j, n)
            mixed.append((f"σ_jδ_i [i={i}, j={j}, n={n}]", lhs, rhs))
    clauses.append(first_failure(mixed) or Clause.check(f"{label}: σ_jδ_i relations, n={n}",
                                                        ref, True))
    return clauses


def bicomplex_check(hopf: HopfAlgebraData, p_max: int = 2, q_max: int = 2,
                    faces: Faces | None = None) -> VerificationReport:
    """Exact checks of the bi-cosimplicial structure up to the given caps."""
    f = faces or Faces(hopf)
    d = hopf.dim
    clauses: list[Clause] = []
    zero_ref = "differential squares to zero"
    for q in range(q_max + 1):
        for p in range(p_max):
            clauses.append(zero_clause(f"(δ^v)² = 0 at ({p}, {q})", zero_ref,
                                       f.delta_v(p + 1, q) @ f.delta_v(p, q)))
    for p in range(p_max + 1):
        for q in range(q_max):
            clauses.append(zero_clause(f"(δ^h)² = 0 at ({p}, {q})", zero_ref,
                                       f.delta_h(p, q + 1) @ f.delta_h(p, q)))
    for p in range(p_max + 1):
        for q in range(q_max + 1):
            clauses.append(matrix_clause(
                f"δ^vδ^h = δ^hδ^v at ({p}, {q})", "bicomplex commutation",
                f.delta_v(p, q + 1) @ f.delta_h(p, q), f.delta_h(p + 1, q) @ f.delta_v(p, q)))
    for q in range(q_max + 1):
        for n in range(p_max + 1):
            clauses.extend(cosimplicial_clauses(
                f"vertical (q={q})", lambda i, m, q=q: f.coface_v(i, m, q),
                lambda j, m, q=q: f.codeg_v(j, m, q), n, lambda m, q=q: d ** (m + q),
                hopf.field))
    for p in range(p_max + 1):
        for n in range(q_max + 1):
            clauses.extend(cosimplicial_clauses(
                f"horizontal (p={p})", lambda i, m, p=p: f.coface_h(i, p, m),
                lambda j, m, p=p: f.codeg_h(j, p, m), n, lambda m, p=p: d ** (m + p),
                hopf.field))
    for n in range(min(p_max, q_max) + 1):
        clauses.extend(cosimplicial_clauses(
            "diagonal", f.diag_coface, f.diag_codeg, n, lambda m: d ** (2 * m), hopf.field))
        for i in range(n + 2):
            explicit = f.diag_coface(i, n)
            clauses.append(matrix_clause(f"δ^diag_{i} = δ^v_{i}δ^h_{i}, n={n}", "diagonal faces",
                                         explicit, f.coface_v(i, n, n + 1) @ f.coface_h(i, n, n)))
            clauses.append(matrix_clause(f"δ^diag_{i} = δ^h_{i}δ^v_{i}, n={n}", "diagonal faces",
                                         explicit, f.coface_h(i, n + 1, n) @ f.coface_v(i, n, n)))
        for j in range(n):
            clauses.append(matrix_clause(f"σ^diag_{j} = σ^v_{j}σ^h_{j}, n={n}", "diagonal faces",
                                         f.diag_codeg(j, n), f.codeg_v(j, n, n - 1)
                                         @ f.codeg_h(j, n, n)))
        diag = alternating_sum([f.diag_coface(i, n) for i in range(n + 2)])
        diag_next = alternating_sum([f.diag_coface(i, n + 1) for i in range(n + 3)])
        clauses.append(zero_clause(f"(δ^diag)² = 0 at n={n}", zero_ref, diag_next @ diag))
    report = VerificationReport("bicomplex", hopf.name, tuple(clauses))
    log.info("bicomplex_checked", algebra=hopf.name, clauses=len(clauses), passed=report.passed)
    return report
