"""Cyclic structure on the Gerstenhaber-Schack complexes.

Columns C^{•,q} carry τ_alg, rows C^{p,•} carry τ_coalg, and the diagonal
carries their product τ_diag. All operators use the inverted convention in
which S⁻¹ is fed into the cochain, and τ_0 = id on every degree-zero space.

Operators are returned as matrices on vectorized cochains (see gscomplex);
the cyclic operad checks act on single cochains through compiled words,
which keeps high arities affordable.
"""

from collections.abc import Callable, Sequence
from functools import cache, partial
from typing import Any

import structlog

from gs_workbench.domain import Clause, CohomologyReport, ComplexKind, VerificationReport
from gs_workbench.errors import (
    ArityError,
    BadCharacteristic,
    CrossCheckFailure,
    IndexOutOfRange,
    NotACocycle,
    NotInvolutive,
    ResourceLimit,
)
from gs_workbench.gscomplex import (
    Cochain,
    codeg_h,
    codeg_v,
    coface_h,
    coface_v,
    cocycle_basis,
    cohomology_report,
    complex_dim,
    delta_diag,
    diag_codeg,
    diag_coface,
    guarded_rank,
    hole_operator,
    is_coboundary,
    is_cocycle,
    matrix_clause,
    random_cochain,
    trial_rng,
    zero_clause,
)
from gs_workbench.hopf import HopfAlgebraData, per_algebra, primitive_elements
from gs_workbench.operad import (
    OperadElement,
    bracket,
    circ,
    cochain_clause,
    cup,
    delta,
    guarded_clause,
    merge_clauses,
    multiplication,
    random_cocycle,
)
from gs_workbench.tensorcalc import (
    Circuit,
    SparseMat,
    TensorWord,
    compile_word,
    current_limits,
    first_difference,
    operator_matrix,
    solve_many,
)

log = structlog.get_logger()

NOT_INVOLUTIVE = "hypothesis not met: S² ≠ id"


def _identity(h: HopfAlgebraData, p: int, q: int) -> SparseMat:
    return SparseMat.identity(h.dim ** (p + q), h.field)


def require_involutive(h: HopfAlgebraData, what: str) -> None:
    if not h.is_involutive:
        raise NotInvolutive(f"{what} needs S² = id, and {h.name} is not involutive")


def _check_degree(name: str, n: int, lo: int) -> None:
    if n < lo:
        raise IndexOutOfRange(f"{name} needs degree at least {lo}, got {n}")


# Transfers to the adjoint pictures


@per_algebra
def xi(p: int, q: int, h: HopfAlgebraData) -> SparseMat:
    """f ↦ f(u_(1)) ◁ S(u¹_(2)⋯u^p_(2)) on C^{p,q}."""
    _check_degree("xi", min(p, q), 0)
    c = Circuit(p)
    legs = [c.split(w, 2) for w in c.inputs]
    fo = c.apply("f", [a for a, _ in legs], q)
    out = c.right_act(fo, c.antipode(c.product([b for _, b in legs])))
    return hole_operator(c, out, h)


@per_algebra
def xi_inv(p: int, q: int, h: HopfAlgebraData) -> SparseMat:
    """f ↦ f(u_(1)) ◁ (u¹_(2)⋯u^p_(2))."""
    _check_degree("xi_inv", min(p, q), 0)
    c = Circuit(p)
    legs = [c.split(w, 2) for w in c.inputs]
    fo = c.apply("f", [a for a, _ in legs], q)
    out = c.right_act(fo, c.product([b for _, b in legs]))
    return hole_operator(c, out, h)


@per_algebra
def eta_transfer(p: int, n: int, h: HopfAlgebraData) -> SparseMat:
    """f ↦ S(u¹_(1)⋯u^p_(1)) ⊳ f(u_(2)) on C^{p,n}."""
    _check_degree("eta", min(p, n), 0)
    c = Circuit(p)
    legs = [c.split(w, 2) for w in c.inputs]
    x = c.antipode(c.product([a for a, _ in legs]))
    out = c.left_act(x, c.apply("f", [b for _, b in legs], n))
    return hole_operator(c, out, h)


@per_algebra
def eta_inv(p: int, n: int, h: HopfAlgebraData) -> SparseMat:
    _check_degree("eta_inv", min(p, n), 0)
    c = Circuit(p)
    legs = [c.split(w, 2) for w in c.inputs]
    x = c.product([a for a, _ in legs])
    out = c.left_act(x, c.apply("f", [b for _, b in legs], n))
    return hole_operator(c, out, h)


# Column operators


@per_algebra
def tau_ad(n: int, q: int, h: HopfAlgebraData) -> SparseMat:
    """Para-cocyclic operator on Hom(H^{⊗n}, ad(H^{⊗q}))."""
    _check_degree("tau_ad", n, 0)
    if n == 0:
        return _identity(h, 0, q)
    c = Circuit(n)
    u = c.inputs
    heads = [c.split(w, 3) for w in u[:-1]]
    last = c.split(u[-1], 2)
    z = c.antipode_inv(c.product([*(leg[1] for leg in heads), last[0]]))
    a = c.product([*(leg[2] for leg in heads), last[1]])
    fo = c.apply("f", [z, *(leg[0] for leg in heads)], q)
    a1, a2 = c.split(a, 2)
    out = c.left_act(a1, c.right_act(fo, c.antipode(a2)))
    return hole_operator(c, out, h)


@per_algebra
def tau_alg(n: int, q: int, h: HopfAlgebraData) -> SparseMat:
    """Para-cocyclic operator on the column C^{n,q}.

    (τf)(u) = (u¹_(3)⋯u^n_(3))
              ⊳ f(S⁻¹(u¹_(2)⋯u^n_(2)), u¹_(1), …, u^{n−1}_(1)) ◁ u^n_(1)
    """
    _check_degree("tau_alg", n, 0)
    if n == 0:
        return _identity(h, 0, q)
    c = Circuit(n)
    u = c.inputs
    heads = [c.split(w, 3) for w in u[:-1]]
    last = c.split(u[-1], 3)
    z = c.antipode_inv(c.product([*(leg[1] for leg in heads), last[1]]))
    fo = c.apply("f", [z, *(leg[0] for leg in heads)], q)
    left = c.product([*(leg[2] for leg in heads), last[2]])
    out = c.left_act(left, c.right_act(fo, last[0]))
    return hole_operator(c, out, h)


@per_algebra
def tau_alg_power_closed(n: int, q: int, h: HopfAlgebraData) -> SparseMat:
    """Closed form of τ_alg^{n+1}: (U5·S⁻¹U2) ⊳ f(S⁻²u_(3)) ◁ (S⁻¹U4·U1).

    U_j denotes the ordered product u¹_(j)⋯u^n_(j).
    """
    _check_degree("tau_alg_power_closed", n, 0)
    c = Circuit(n)
    legs = [c.split(w, 5) for w in c.inputs]
    right = c.mult(c.antipode_inv(c.product([leg[3] for leg in legs])),
                   c.product([leg[0] for leg in legs]))
    left = c.mult(c.product([leg[4] for leg in legs]),
                  c.antipode_inv(c.product([leg[1] for leg in legs])))
    args = [c.antipode_inv(c.antipode_inv(leg[2])) for leg in legs]
    out = c.left_act(left, c.right_act(c.apply("f", args, q), right))
    return hole_operator(c, out, h)


# Row operators


@per_algebra
def tau_coad(p: int, n: int, h: HopfAlgebraData) -> SparseMat:
    """Para-cocyclic operator on rows through the coadjoint coaction."""
    _check_degree("tau_coad", p, 0)
    _check_degree("tau_coad", n, 0)
    if n == 0:
        return _identity(h, p, 0)
    c = Circuit(p)
    legs = [c.split(w, 3) for w in c.inputs]
    fo = c.apply("f", [leg[1] for leg in legs], n)
    tail = c.mult(c.antipode(c.product([leg[0] for leg in legs])),
                  c.product([leg[2] for leg in legs]))
    out = c.left_act(c.antipode(fo[0]), [*fo[1:], tail])
    return hole_operator(c, out, h)


@per_algebra
def tau_coalg(p: int, n: int, h: HopfAlgebraData) -> SparseMat:
    """(τf)(u) = (U1·S(f¹(u_(2)))) ⊳ (f²(u_(2)), …, fⁿ(u_(2)), U3)."""
    _check_degree("tau_coalg", p, 0)
    _check_degree("tau_coalg", n, 0)
    if n == 0:
        return _identity(h, p, 0)
    c = Circuit(p)
    legs = [c.split(w, 3) for w in c.inputs]
    fo = c.apply("f", [leg[1] for leg in legs], n)
    x = c.mult(c.product([leg[0] for leg in legs]), c.antipode(fo[0]))
    out = c.left_act(x, [*fo[1:], c.product([leg[2] for leg in legs])])
    return hole_operator(c, out, h)


@per_algebra
def tau_coalg_power_closed(p: int, n: int, h: HopfAlgebraData) -> SparseMat:
    """Closed form of τ_coalg^{n+1}: (U1·S U4) ⊳ S^{⊗2}f(u_(3)) ◁ (S U2·U5)."""
    _check_degree("tau_coalg_power_closed", n, 0)
    c = Circuit(p)
    legs = [c.split(w, 5) for w in c.inputs]
    left = c.mult(c.product([leg[0] for leg in legs]),
                  c.antipode(c.product([leg[3] for leg in legs])))
    right = c.mult(c.antipode(c.product([leg[1] for leg in legs])),
                   c.product([leg[4] for leg in legs]))
    fo = [c.antipode(c.antipode(w)) for w in c.apply("f", [leg[2] for leg in legs], n)]
    out = c.left_act(left, c.right_act(fo, right))
    return hole_operator(c, out, h)


# The diagonal


@cache
def tau_diag_word(n: int) -> TensorWord:
    """τ_diag as a word over the cochain "f" of arity n."""
    _check_degree("tau_diag", n, 0)
    c = Circuit(n)
    if n == 0:
        return c.word(c.apply("f", [], 0))
    u = c.inputs
    heads = [c.split(w, 3) for w in u[:-1]]
    last = c.split(u[-1], n)
    z = c.antipode_inv(c.product([*(leg[2] for leg in heads), last[-1]]))
    fo = c.apply("f", [z, *(leg[1] for leg in heads)], n)
    x = c.product([*(leg[0] for leg in heads), c.antipode(fo[0])])
    tail = [c.mult(fo[j], last[j - 1]) for j in range(1, n)]
    out = c.left_act(x, [*tail, c.unit()])
    return c.word(out)


@per_algebra
def tau_diag(n: int, h: HopfAlgebraData) -> SparseMat:
    """τ_diag on C^n, cross-checked against τ_alg·τ_coalg at bidegree (n, n)."""
    direct = operator_matrix(tau_diag_word(n), h, hole="f")
    if n > 0:
        product = tau_alg(n, n, h) @ tau_coalg(n, n, h)
        pos = first_difference(direct, product)
        if pos is not None:
            raise CrossCheckFailure(f"τ_diag differs from τ_alg·τ_coalg at n={n}, entry {pos}")
    return direct


@cache
def twist_word(n: int) -> TensorWord:
    c = Circuit(n)
    args = [c.antipode_inv(c.antipode_inv(w)) for w in c.inputs]
    return c.word([c.antipode(c.antipode(w)) for w in c.apply("f", args, n)])


@per_algebra
def twist_operator(n: int, h: HopfAlgebraData) -> SparseMat:
    """f ↦ (S²)^{⊗n} ∘ f ∘ (S⁻²)^{⊗n} on C^{n,n}."""
    _check_degree("twist", n, 0)
    return operator_matrix(twist_word(n), h, hole="f")


def _act(word: TensorWord, f: Cochain) -> Cochain:
    n = f.arity
    return Cochain(n, n, compile_word(word, f.hopf, {"f": f.mat}), f.hopf)


def cyclic_tau(f: OperadElement) -> OperadElement:
    """τ_diag applied to one cochain."""
    return _act(tau_diag_word(f.arity), f)


def twist(f: OperadElement) -> OperadElement:
    return _act(twist_word(f.arity), f)


def identity_defect(mat: SparseMat) -> tuple[int, int] | None:
    """First entry where a square matrix differs from the identity."""
    return first_difference(mat, SparseMat.identity(mat.rows, mat.field))


# Connes' coboundary


@per_algebra
def norm_operator(m: int, h: HopfAlgebraData) -> SparseMat:
    """N_m = Σ_{i=0}^{m} (−1)^{im} τ^i on C^m."""
    tau = tau_diag(m, h)
    total = power = _identity(h, m, m)
    for i in range(1, m + 1):
        power = tau @ power
        total = total + power.signed(-1 if i * m % 2 else 1)
    return total


@per_algebra
def connes_B(n: int, h: HopfAlgebraData) -> SparseMat:  # noqa: N802
    """B_n = N_{n−1} σ_{n−1} τ_n (1 − (−1)^n τ_n) : C^n → C^{n−1}."""
    require_involutive(h, "Connes' coboundary")
    _check_degree("Connes' coboundary", n, 1)
    tau = tau_diag(n, h)
    inner = _identity(h, n, n) - tau.signed(1 if n % 2 == 0 else -1)
    return norm_operator(n - 1, h) @ diag_codeg(n - 1, n, h) @ tau @ inner


def apply_B(f: OperadElement) -> OperadElement:  # noqa: N802
    """B on one cochain, through word actions rather than the full operator."""
    h = f.hopf
    require_involutive(h, "Connes' coboundary")
    n = f.arity
    _check_degree("Connes' coboundary", n, 1)
    g = cyclic_tau(f - cyclic_tau(f).signed(1 if n % 2 == 0 else -1))
    g = g.apply(diag_codeg(n - 1, n, h), n - 1, n - 1)
    total, power = g, g
    for i in range(1, n):
        power = cyclic_tau(power)
        total = total + power.signed(-1 if i * (n - 1) % 2 else 1)
    return total


# Para-cocyclic relations

Operator = Callable[[int], SparseMat]
Face = Callable[[int, int], SparseMat]
Pair = tuple[str, SparseMat, SparseMat]


def family_clause(name: str, ref: str,
                  pairs: Sequence[Pair] | Callable[[], Sequence[Pair]]) -> Clause:
    """One clause for a family of matrix identities; the first mismatch is the witness."""
    try:
        items = pairs() if callable(pairs) else pairs
    except ResourceLimit as exc:
        return Clause.skipped(name, ref, f"resource limit: {exc}")
    for tag, lhs, rhs in items:
        pos = first_difference(lhs, rhs)
        if pos is not None:
            return Clause.check(name, ref, False, witness=f"{tag} at entry {pos}")
    return Clause.check(name, ref, True, detail=f"{len(items)} identities")


def paracocyclic_pairs(tau: Operator, coface: Face, codeg: Face, n_max: int) -> list[Pair]:
    """Para-cocyclic relations up to degree n_max.

    τδ_i = δ_{i−1}τ, τδ_0 = δ_n, τσ_i = σ_{i−1}τ and τσ_0 = σ_nτ².
    """
    pairs: list[Pair] = []
    for n in range(1, n_max + 1):
        for i in range(1, n + 1):
            pairs.append((f"τδ_{i} = δ_{i - 1}τ, n={n}", tau(n) @ coface(i, n - 1),
                          coface(i - 1, n - 1) @ tau(n - 1)))
        pairs.append((f"τδ_0 = δ_{n}, n={n}", tau(n) @ coface(0, n - 1), coface(n, n - 1)))
    for n in range(n_max):
        for i in range(1, n + 1):
            pairs.append((f"τσ_{i} = σ_{i - 1}τ, n={n}", tau(n) @ codeg(i, n + 1),
                          codeg(i - 1, n + 1) @ tau(n + 1)))
        pairs.append((f"τσ_0 = σ_{n}τ², n={n}", tau(n) @ codeg(0, n + 1),
                       codeg(n, n + 1) @ tau(n + 1).power(2)))
    return pairs


def power_commutation_pairs(tau: Operator, coface: Face, codeg: Face, n_max: int) -> list[Pair]:
    """τ^{n+1} commutes with every coface and codegeneracy."""
    powers = [tau(n).power(n + 1) for n in range(n_max + 1)]
    pairs: list[Pair] = []
    for n in range(n_max):
        pairs.extend(
            (f"τ^(n+1) δ_{i}, n={n}", powers[n + 1] @ coface(i, n), coface(i, n) @ powers[n])
            for i in range(n + 2)
        )
        pairs.extend(
            (f"τ^(n+1) σ_{j}, n={n + 1}", powers[n] @ codeg(j, n + 1),
             codeg(j, n + 1) @ powers[n + 1])
            for j in range(n + 1)
        )
    return pairs


def paracyclic_check(h: HopfAlgebraData, n_max: int = 2, q_max: int = 2) -> VerificationReport:
    """Para-cocyclic relations on columns, rows and the diagonal, plus commutation.

    Columns q ≤ q_max and rows p ≤ q_max are checked up to cyclic degree n_max.
    """
    clauses: list[Clause] = []
    ref = "para-cocyclic relations"
    for q in range(q_max + 1):
        ops = (partial(_column_tau, q=q, h=h), partial(_column_coface, q=q, h=h),
               partial(_column_codeg, q=q, h=h))
        clauses.append(family_clause(f"τ_alg on column q={q}", ref,
                                     partial(paracocyclic_pairs, *ops, n_max)))
        clauses.append(family_clause(f"τ_alg^(n+1) central on column q={q}",
                                     "power commutes with the cosimplicial maps",
                                     partial(power_commutation_pairs, *ops, n_max)))
    for p in range(q_max + 1):
        ops = (partial(_row_tau, p=p, h=h), partial(_row_coface, p=p, h=h),
               partial(_row_codeg, p=p, h=h))
        clauses.append(family_clause(f"τ_coalg on row p={p}", ref,
                                     partial(paracocyclic_pairs, *ops, n_max)))
        clauses.append(family_clause(f"τ_coalg^(n+1) central on row p={p}",
                                     "power commutes with the cosimplicial maps",
                                     partial(power_commutation_pairs, *ops, n_max)))
    diag = (partial(_diag_tau, h=h), partial(_diag_coface, h=h), partial(_diag_codeg, h=h))
    clauses.append(family_clause("τ_diag on the diagonal", ref,
                                 partial(paracocyclic_pairs, *diag, n_max)))

    def commutation() -> list[Pair]:
        return [
            (f"({p}, {q})", tau_alg(p, q, h) @ tau_coalg(p, q, h),
             tau_coalg(p, q, h) @ tau_alg(p, q, h))
            for p in range(1, n_max + 1) for q in range(1, q_max + 1)
        ]

    clauses.append(
        family_clause("τ_alg τ_coalg = τ_coalg τ_alg", "bi-para-cocyclic", commutation))

    def closed_forms() -> list[Pair]:
        pairs: list[Pair] = []
        for n in range(1, n_max + 1):
            for m in range(q_max + 1):
                pairs.append((f"τ_alg^{n + 1} at ({n}, {m})", tau_alg(n, m, h).power(n + 1),
                              tau_alg_power_closed(n, m, h)))
                pairs.append((f"τ_coalg^{n + 1} at ({m}, {n})", tau_coalg(m, n, h).power(n + 1),
                              tau_coalg_power_closed(m, n, h)))
        return pairs

    clauses.append(family_clause("iterated powers equal their closed forms", "power formulas",
                                 closed_forms))
    clauses.append(transfer_clause(h, n_max, q_max))

    def invertible() -> Clause:
        full = [guarded_rank(op, "invertibility") == op.rows
                for op in (tau_alg(1, 1, h), tau_coalg(1, 1, h), tau_ad(1, 1, h), tau_diag(1, h))]
        return Clause.check("τ invertible at (1, 1)", "invertibility", all(full),
                            witness=str(full))

    clauses.append(guarded_clause("τ invertible at (1, 1)", "invertibility", invertible))
    report = VerificationReport("cyclic", h.name, tuple(clauses))
    log.info("paracyclic_checked", algebra=h.name, n_max=n_max, q_max=q_max, passed=report.passed)
    return report


def _column_tau(n: int, *, q: int, h: HopfAlgebraData) -> SparseMat:
    return tau_alg(n, q, h)


def _column_coface(i: int, m: int, *, q: int, h: HopfAlgebraData) -> SparseMat:
    return coface_v(i, m, q, h)


def _column_codeg(j: int, m: int, *, q: int, h: HopfAlgebraData) -> SparseMat:
    return codeg_v(j, m, q, h)


def _row_tau(n: int, *, p: int, h: HopfAlgebraData) -> SparseMat:
    return tau_coalg(p, n, h)


def _row_coface(i: int, m: int, *, p: int, h: HopfAlgebraData) -> SparseMat:
    return coface_h(i, p, m, h)


def _row_codeg(j: int, m: int, *, p: int, h: HopfAlgebraData) -> SparseMat:
    return codeg_h(j, p, m, h)


def _diag_tau(n: int, *, h: HopfAlgebraData) -> SparseMat:
    return tau_diag(n, h)


def _diag_coface(i: int, m: int, *, h: HopfAlgebraData) -> SparseMat:
    return diag_coface(i, m, h)


def _diag_codeg(j: int, m: int, *, h: HopfAlgebraData) -> SparseMat:
    return diag_codeg(j, m, h)


def transfer_clause(h: HopfAlgebraData, n_max: int, q_max: int) -> Clause:
    """Transfers are mutually inverse and conjugate the adjoint operators to τ_alg, τ_coalg."""

    def pairs() -> list[Pair]:
        result: list[Pair] = []
        for n in range(n_max + 1):
            for m in range(q_max + 1):
                ident = _identity(h, n, m)
                result.append((f"ξ⁻¹ξ at ({n}, {m})", xi_inv(n, m, h) @ xi(n, m, h), ident))
                result.append((f"η⁻¹η at ({m}, {n})", eta_inv(m, n, h) @ eta_transfer(m, n, h),
                               ident))
                result.append((f"τ_alg = ξ⁻¹τ_adξ at ({n}, {m})", tau_alg(n, m, h),
                               xi_inv(n, m, h) @ tau_ad(n, m, h) @ xi(n, m, h)))
                result.append((f"τ_coalg = η⁻¹τ_coadη at ({m}, {n})", tau_coalg(m, n, h),
                               eta_inv(m, n, h) @ tau_coad(m, n, h) @ eta_transfer(m, n, h)))
        return result

    return family_clause("transfers", "transfer isomorphisms", pairs)


def _defect_label(pos: tuple[int, int] | None) -> str:
    return "identity" if pos is None else f"differs at entry {pos}"


def factor_powers_clause(n: int, h: HopfAlgebraData, alg_pos: tuple[int, int] | None,
                         coalg_pos: tuple[int, int] | None) -> Clause:
    """Witnesses for τ_alg^{n+1} ≠ id and τ_coalg^{n+1} ≠ id.

    Without cocommutativity the factors are only para-cocyclic, so both powers
    being the identity is a failure there.
    """
    trivial = alg_pos is None and coalg_pos is None
    witness = f"τ_alg^(n+1): {_defect_label(alg_pos)}; τ_coalg^(n+1): {_defect_label(coalg_pos)}"
    return Clause.witnessed(f"factor powers, n={n}", "para-cocyclic, not cocyclic",
                            h.flags.cocommutative or not trivial, witness)


def cylindrical_check(n: int, h: HopfAlgebraData) -> VerificationReport:
    """τ_coalg^{n+1} τ_alg^{n+1} equals the S²-twist at bidegree (n, n)."""
    _check_degree("cylindrical check", n, 1)
    ref = "cylindrical relation"
    alg = tau_alg(n, n, h).power(n + 1)
    coalg = tau_coalg(n, n, h).power(n + 1)
    twisted = twist_operator(n, h)
    alg_pos, coalg_pos = identity_defect(alg), identity_defect(coalg)
    twist_pos = identity_defect(twisted)
    clauses = [
        matrix_clause(f"τ_coalg^(n+1) τ_alg^(n+1) = S²-twist, n={n}", ref, coalg @ alg, twisted),
        Clause.check(f"S²-twist trivial exactly when involutive, n={n}", ref,
                     (twist_pos is None) == h.is_involutive,
                     detail=f"twist = id: {twist_pos is None}",
                     witness=None if twist_pos is None else f"entry {twist_pos}"),
        factor_powers_clause(n, h, alg_pos, coalg_pos),
    ]
    report = VerificationReport("cyclic", h.name, tuple(clauses))
    log.info("cylindrical_checked", algebra=h.name, n=n, passed=report.passed)
    return report


# Mixed complex and cyclic cohomology


def mixed_complex_check(h: HopfAlgebraData, n_max: int = 2) -> VerificationReport:
    """B² = 0 and δB + Bδ = 0 on the diagonal complex."""
    if not h.is_involutive:
        skipped = (Clause.skipped("B² = 0", "mixed complex", NOT_INVOLUTIVE),
                   Clause.skipped("δB + Bδ = 0", "mixed complex", NOT_INVOLUTIVE))
        return VerificationReport("cyclic", h.name, skipped)
    clauses: list[Clause] = []
    for n in range(2, n_max + 1):
        name = f"B² = 0 on C^{n}"
        clauses.append(guarded_clause(name, "mixed complex", partial(_b_squared, h, n, name)))
    for n in range(n_max):
        name = f"δB + Bδ = 0 on C^{n}"
        clauses.append(guarded_clause(name, "mixed complex", partial(_anticommutator, h, n, name)))
    report = VerificationReport("cyclic", h.name, tuple(clauses))
    log.info("mixed_complex_checked", algebra=h.name, n_max=n_max, passed=report.passed)
    return report


def _b_squared(h: HopfAlgebraData, n: int, name: str) -> Clause:
    return zero_clause(name, "mixed complex", connes_B(n - 1, h) @ connes_B(n, h))


def _anticommutator(h: HopfAlgebraData, n: int, name: str) -> Clause:
    total = connes_B(n + 1, h) @ delta_diag(n, h)
    if n >= 1:
        total = total + delta_diag(n - 1, h) @ connes_B(n, h)
    return zero_clause(name, "mixed complex", total)


def cyclic_components(n: int, u_trunc: int) -> list[tuple[int, int]]:
    """(inner degree, power of u) pairs making up total degree n."""
    return [(n - 2 * k, k) for k in range(u_trunc + 1) if n - 2 * k >= 0]


def cyclic_differential(h: HopfAlgebraData, n: int, u_trunc: int) -> SparseMat:
    """δ + uB from total degree n to n + 1, columns C^{n−2k} stacked by k."""
    require_involutive(h, "cyclic cohomology")
    d = h.dim
    source = cyclic_components(n, u_trunc)
    target = cyclic_components(n + 1, u_trunc)
    col_offset = {k: sum(d ** (2 * m) for m, j in source if j < k) for _, k in source}
    row_offset = {k: sum(d ** (2 * m) for m, j in target if j < k) for _, k in target}
    dod: dict[int, dict[int, Any]] = {}

    def place(mat: SparseMat, row_block: int, col_block: int) -> None:
        for r, c, v in mat.entries():
            row = dod.setdefault(row_offset[row_block] + r, {})
            key = col_offset[col_block] + c
            row[key] = row[key] + v if key in row else v

    for m, k in source:
        place(delta_diag(m, h), k, k)
        if m >= 1 and k + 1 in row_offset:
            place(connes_B(m, h), k + 1, k)
    shape = (complex_dim(h, ComplexKind.CYCLIC, n + 1, u_trunc),
             complex_dim(h, ComplexKind.CYCLIC, n, u_trunc))
    return SparseMat.from_dod(dod, shape, h.field)


def cyclic_gs_cohomology(h: HopfAlgebraData, n_max: int = 2, u_trunc: int = 1) -> CohomologyReport:
    """Betti numbers of the u-truncated complex (C_diag[u], δ + uB)."""
    require_involutive(h, "cyclic cohomology")
    if n_max < 0 or u_trunc < 0:
        raise IndexOutOfRange("degree cap and truncation depth must be non-negative")
    limit = current_limits().materialize
    ranks: list[int] = []
    previous: SparseMat | None = None
    for n in range(n_max + 1):
        dim = complex_dim(h, ComplexKind.CYCLIC, n, u_trunc)
        if dim > limit:
            raise ResourceLimit(f"cyclic differential in degree {n}", dim, limit)
        current = cyclic_differential(h, n, u_trunc)
        if previous is not None and not (current @ previous).is_zero:
            raise CrossCheckFailure(f"(δ + uB)² ≠ 0 in degree {n}")
        ranks.append(guarded_rank(current, f"cyclic differential in degree {n}"))
        previous = current
        log.info("cyclic_degree_computed", algebra=h.name, n=n, rank=ranks[-1])
    return cohomology_report(h, ComplexKind.CYCLIC, ranks, u_trunc=u_trunc)


# Cyclic operad


def _inner_slot_clause(f: OperadElement, i: int, g: OperadElement, label: str) -> Clause:
    return cochain_clause(label, "cyclic compatibility, slot i ≥ 2",
                          cyclic_tau(circ(f, i, g)), circ(cyclic_tau(f), i - 1, g))


def _first_slot_clause(f: OperadElement, g: OperadElement, label: str) -> Clause:
    return cochain_clause(label, "cyclic compatibility, slot 1",
                          cyclic_tau(circ(f, 1, g)), circ(cyclic_tau(g), g.arity, cyclic_tau(f)))


def _tau_power(f: OperadElement, k: int) -> OperadElement:
    for _ in range(k):
        f = cyclic_tau(f)
    return f


def _cyclicity_clause(f: OperadElement, label: str) -> Clause:
    p = f.arity
    target = f if f.hopf.is_involutive else twist(f)
    return cochain_clause(label, "cyclicity", _tau_power(f, p + 1), target)


def check_cyclic_operad(h: HopfAlgebraData, arity_cap: int = 2, trials: int = 10,
                        seed: int = 0) -> VerificationReport:
    """Compatibility of τ_diag with partial composition, cyclicity and τμ = μ."""
    arity_cap = max(1, arity_cap)
    first: list[Clause] = []
    second: list[Clause] = []
    third: list[Clause] = []
    for t in range(trials):
        rng = trial_rng(seed, t, 13)
        p = int(rng.integers(1, arity_cap + 1))
        q = int(rng.integers(0, arity_cap + 1))
        f = random_cochain(h, p, p, rng)
        g = random_cochain(h, q, q, rng)
        if p >= 2:
            i = int(rng.integers(2, p + 1))
            label = f"trial {t}: (p,q)=({p},{q}), i={i}"
            first.append(guarded_clause(label, "cyclic compatibility",
                                        partial(_inner_slot_clause, f, i, g, label)))
        if q >= 1:
            label = f"trial {t}: (p,q)=({p},{q})"
            second.append(guarded_clause(label, "cyclic compatibility",
                                         partial(_first_slot_clause, f, g, label)))
        k = int(rng.integers(0, arity_cap + 1))
        label = f"trial {t}: arity {k}"
        x = random_cochain(h, k, k, rng)
        third.append(guarded_clause(label, "cyclicity", partial(_cyclicity_clause, x, label)))

    cyclicity = merge_clauses("τ^(p+1) = id", "cyclicity", third)
    if not h.is_involutive and cyclicity.passed:
        cyclicity = Clause.skipped("τ^(p+1) = id", "cyclicity",
                                   f"{NOT_INVOLUTIVE}; τ^(p+1) equals the S²-twist "
                                   f"({cyclicity.detail})")
    mu = multiplication(h)
    fixes_mu = (cochain_clause("τμ = μ", "cyclic multiplication", cyclic_tau(mu), mu)
                if h.is_involutive
                else Clause.skipped("τμ = μ", "cyclic multiplication", NOT_INVOLUTIVE))
    clauses = [
        merge_clauses("τ(f ∘_i g) = τf ∘_(i−1) g", "cyclic compatibility, slot i ≥ 2",
                      first),
        merge_clauses("τ(f ∘_1 g) = τg ∘_q τf", "cyclic compatibility, slot 1", second),
        cyclicity,
        fixes_mu,
    ]

    def fixed_instance() -> Clause:
        rng = trial_rng(seed, 0, 14)
        f = random_cochain(h, 2, 2, rng)
        g = random_cochain(h, 2, 2, rng)
        label = "fixed instance: f, g of arity 2, τ(f ∘_1 g) = τg ∘_2 τf"
        return _first_slot_clause(f, g, label)

    clauses.append(guarded_clause("fixed instance: f, g of arity 2", "cyclic compatibility",
                                  fixed_instance))
    report = VerificationReport("cyclic", h.name, tuple(clauses), seed, trials)
    log.info("cyclic_operad_checked", algebra=h.name, trials=trials, passed=report.passed)
    return report


# BV and e3


def _require_cocycle(f: OperadElement, which: str) -> None:
    if not is_cocycle(f):
        raise NotACocycle(f"{which} argument of arity {f.arity} is not a cocycle")


def bv_defect(f: OperadElement, g: OperadElement) -> tuple[OperadElement, OperadElement | None]:
    """{f,g} + (−1)^p Bf⌣g + f⌣Bg − (−1)^p B(f⌣g) and a verified preimage under δ.

    The BV identity holds on cohomology, so the defect is exact but in
    general non-zero at chain level.
    """
    h = f.hopf
    require_involutive(h, "BV defect")
    p, q = f.arity, g.arity
    if p + q == 0:
        raise ArityError("BV defect of two arity-0 cocycles")
    _require_cocycle(f, "first")
    _require_cocycle(g, "second")
    sign = -1 if p % 2 else 1
    defect = bracket(f, g)
    if p >= 1:
        defect = defect + cup(apply_B(f), g).signed(sign)
    if q >= 1:
        defect = defect + cup(f, apply_B(g))
    defect = defect - apply_B(cup(f, g)).signed(sign)
    return defect, is_coboundary(defect)


def e3_bracket(f: OperadElement, g: OperadElement) -> OperadElement:
    """{{f, g}} = (−1)^p (Bf)⌣(Bg), of arity p + q − 2."""
    h = f.hopf
    require_involutive(h, "e3 bracket")
    p, q = f.arity, g.arity
    if p + q < 2:
        raise ArityError(f"e3 bracket of arities ({p}, {q}) has negative degree")
    if p == 0 or q == 0:
        return Cochain.zero(h, p + q - 2, p + q - 2)
    return cup(apply_B(f), apply_B(g)).signed(-1 if p % 2 else 1)


def is_exact(x: OperadElement) -> bool:
    """Zero, or a coboundary with a verified preimage."""
    return x.is_zero or (x.arity > 0 and is_coboundary(x) is not None)


def _perturbed_cocycle(h: HopfAlgebraData, n: int, seed: int, trial: int) -> OperadElement:
    """A cocycle plus a random coboundary, so that representatives are not basis-aligned."""
    z = random_cocycle(h, n, seed, trial)
    if n == 0:
        return z
    return z + delta(random_cochain(h, n - 1, n - 1, trial_rng(seed, trial, 19 + n)))


def _bv_trial(h: HopfAlgebraData, p: int, q: int, seed: int, t: int, label: str) -> Clause:
    f = _perturbed_cocycle(h, p, seed, 2 * t)
    g = _perturbed_cocycle(h, q, seed, 2 * t + 1)
    defect, preimage = bv_defect(f, g)
    return Clause.check(label, "BV identity", preimage is not None,
                        detail=f"defect nnz={defect.mat.nnz}",
                        witness=f"defect nnz={defect.mat.nnz}")


def _e3_trial(h: HopfAlgebraData, p: int, q: int, seed: int, t: int, label: str) -> Clause:
    f = _perturbed_cocycle(h, p, seed, 2 * t)
    g = _perturbed_cocycle(h, q, seed, 2 * t + 1)
    k = random_cochain(h, p - 1, p - 1, trial_rng(seed, t, 23))
    shifted = e3_bracket(f + delta(k), g)
    return Clause.check(label, "e3 bracket on cohomology", is_exact(shifted - e3_bracket(f, g)))


BV_DEGREES = ((1, 1), (1, 2))


def bv_suite(h: HopfAlgebraData, trials: int = 10, seed: int = 0) -> VerificationReport:
    """BV defects of random cocycle pairs are exact; e3 descends to cohomology."""
    if not h.is_involutive:
        clauses = (Clause.skipped("BV defect exact", "BV identity", NOT_INVOLUTIVE),
                   Clause.skipped("e3 bracket well defined", "e3 bracket on cohomology",
                                  NOT_INVOLUTIVE))
        return VerificationReport("bv", h.name, clauses, seed, trials)
    defects: list[Clause] = []
    shifts: list[Clause] = []
    for t in range(trials):
        p, q = BV_DEGREES[t % len(BV_DEGREES)]
        label = f"trial {t}: degrees ({p}, {q})"
        defects.append(guarded_clause(label, "BV identity",
                                      partial(_bv_trial, h, p, q, seed, t, label)))
        shifts.append(guarded_clause(label, "e3 bracket on cohomology",
                                     partial(_e3_trial, h, p, q, seed, t, label)))
    zero = Cochain.zero(h, 1, 1)
    zero_defect, _ = bv_defect(zero, zero)
    clauses = (
        merge_clauses("BV defect exact", "BV identity", defects),
        merge_clauses("e3 bracket well defined", "e3 bracket on cohomology", shifts),
        Clause.check("BV defect of zero cocycles", "BV identity", zero_defect.is_zero),
    )
    report = VerificationReport("bv", h.name, clauses, seed, trials)
    log.info("bv_suite_finished", algebra=h.name, trials=trials, passed=report.passed)
    return report


# Vanishing of the bracket in finite dimension


def _evaluation_at_units(n: int, h: HopfAlgebraData) -> tuple[SparseMat, SparseMat]:
    """f ↦ f(1, …, 1) as an operator, and the vector 1^{⊗n}."""
    c = Circuit(0)
    operator = hole_operator(c, c.apply("f", [c.unit() for _ in range(n)], n), h)
    c = Circuit(0)
    ones = compile_word(c.word([c.unit() for _ in range(n)]), h)
    return operator, ones


def auxiliary_identities(n: int,
                         h: HopfAlgebraData) -> list[tuple[str, SparseMat, SparseMat | None]]:
    """Linear identities every degree-n cohomology class satisfies.

    Each entry is (name, L, extra) where the identity reads L(f) ∈ span(extra)
    (extra None meaning L(f) = 0).
    """
    identities: list[tuple[str, SparseMat, SparseMat | None]] = []
    insertion = codeg_v(0, n, n, h).signed(-1)
    for i in range(2, n + 1):
        insertion = insertion + codeg_v(i - 1, n, n, h).signed(-1 if i % 2 else 1)
    identities.append(("alternating unit insertion vanishes", insertion, None))
    identities.append(("coaction symmetry",
                       coface_h(n + 1, n, n, h) - coface_h(0, n, n, h), None))
    if n == 2:
        coassoc = coface_h(1, 2, 2, h) - coface_h(2, 2, 2, h)
        identities.append(("(Δ⊗id)g = (id⊗Δ)g", coassoc, None))
    evaluation, ones = _evaluation_at_units(n, h)
    if n % 2:
        identities.append(("f(1, …, 1) = 0 in odd degree", evaluation, None))
    else:
        identities.append(("f(1, …, 1) ∈ k·1^{⊗n} in even degree", evaluation, ones))
    return identities


def modulo_coboundaries(operator: SparseMat, extra: SparseMat | None, n: int,
                        cocycles: Sequence[Cochain]) -> list[bool]:
    """For each cocycle f, whether L(f + δb) lies in span(extra) for some b."""
    h = cocycles[0].hopf
    a = operator @ delta_diag(n - 1, h)
    if extra is not None:
        a = a.hstack(extra)
    solutions = solve_many(a, [-(operator @ f.vec()) for f in cocycles])
    return [x is not None for x in solutions]


def _identity_clause(name: str, n: int, operator: SparseMat, extra: SparseMat | None,
                     cocycle_basis_of: Callable[[], Sequence[Cochain]]) -> Clause:
    ref = "auxiliary cocycle identities"
    label = f"{name}, degree {n}"
    cocycles = cocycle_basis_of()
    if not cocycles:
        return Clause.check(label, ref, True, detail="no cocycles")
    results = modulo_coboundaries(operator, extra, n, cocycles)
    failing = [k for k, ok in enumerate(results) if not ok]
    return Clause.check(label, ref, not failing, detail=f"{len(cocycles)} basis cocycles",
                        witness=f"basis cocycle {failing[0]}" if failing else None)


def exact_all(values: Sequence[OperadElement]) -> list[bool]:
    """is_exact for elements of one arity, with a single elimination."""
    result = [x.is_zero for x in values]
    pending = [k for k, ok in enumerate(result) if not ok]
    if not pending or values[0].arity == 0:
        return result
    first = values[0]
    solutions = solve_many(delta_diag(first.arity - 1, first.hopf),
                           [values[k].vec() for k in pending])
    for k, x in zip(pending, solutions, strict=True):
        result[k] = x is not None
    return result


VANISHING_DEGREES = ((1, 1), (1, 2), (2, 2))


def finite_dim_vanishing_suite(h: HopfAlgebraData,
                               deg_pairs: Sequence[tuple[int, int]] = VANISHING_DEGREES,
                               trials: int = 10, seed: int = 0) -> VerificationReport:
    """The Gerstenhaber bracket on cohomology vanishes for finite-dimensional H."""
    if h.field.is_prime_field:
        raise BadCharacteristic(
            f"the vanishing suite needs characteristic 0, {h.name} is over {h.field.label}")
    primitives = primitive_elements(h)
    clauses = [Clause.check("no nonzero primitive elements", "primitive elements",
                            not primitives, witness=f"{len(primitives)} primitives")]
    bases: dict[int, list[Cochain]] = {}

    def basis(n: int) -> list[Cochain]:
        if n not in bases:
            bases[n] = cocycle_basis(h, n)
        return bases[n]

    for n in (1, 2):
        for name, operator, extra in auxiliary_identities(n, h):
            clauses.append(guarded_clause(
                f"{name}, degree {n}", "auxiliary cocycle identities",
                partial(_identity_clause, name, n, operator, extra, partial(basis, n))))

    for p, q in deg_pairs:
        name = f"bracket of cocycles vanishes, degrees ({p}, {q})"

        def pairs(p: int = p, q: int = q, name: str = name) -> Clause:
            zp, zq = basis(p), basis(q)
            if not zp or not zq:
                return Clause.check(name, "bracket vanishes in cohomology", True,
                                    detail="no cocycles")
            labels = [f"cocycles ({i}, {j})" for i in range(len(zp)) for j in range(len(zq))]
            values = [bracket(x, y) for x in zp for y in zq]
            results = [Clause.check(label, "bracket vanishes in cohomology", ok,
                                    witness=f"nnz={value.mat.nnz}")
                       for label, value, ok in zip(labels, values, exact_all(values), strict=True)]
            return merge_clauses(name, "bracket vanishes in cohomology", results)

        clauses.append(guarded_clause(name, "bracket vanishes in cohomology", pairs))
    report = VerificationReport("finite-dim", h.name, tuple(clauses), seed, trials)
    log.info("finite_dim_suite_finished", algebra=h.name, passed=report.passed)
    return report


def cyclic_suite(h: HopfAlgebraData, arity_cap: int = 2, trials: int = 10,
                 seed: int = 0) -> VerificationReport:
    """Every cyclic-structure check in one report."""
    cap = max(1, arity_cap)
    parts = [paracyclic_check(h, cap, cap)]
    parts.extend(cylindrical_check(n, h) for n in range(1, cap + 1))
    parts.append(mixed_complex_check(h, cap))
    parts.append(check_cyclic_operad(h, cap, trials, seed))
    clauses = tuple(c for part in parts for c in part.clauses)
    return VerificationReport("cyclic", h.name, clauses, seed, trials)
