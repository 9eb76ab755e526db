"""Operad with multiplication on the diagonal complex.

Elements of arity n are diagonal cochains Hom(H^{⊗n}, H^{⊗n}). The partial
composition f ∘_i g is built as a single Circuit over the named cochains
"f" and "g"; every derived operation (cup, brace, bracket) is expressed
through it.
"""

from collections.abc import Callable
from functools import partial

import structlog

from gs_workbench.domain import Clause, ClauseStatus, VerificationReport
from gs_workbench.errors import ArityError, CrossCheckFailure, ResourceLimit
from gs_workbench.gscomplex import (
    Cochain,
    cocycle_basis,
    delta_diag,
    diag_codeg,
    diag_coface,
    is_coboundary,
    is_cocycle,
    matrix_clause,
    random_cochain,
    trial_rng,
)
from gs_workbench.hopf import HopfAlgebraData, per_algebra
from gs_workbench.tensorcalc import Circuit, Wire, compile_word

log = structlog.get_logger()

OperadElement = Cochain


@per_algebra
def multiplication(h: HopfAlgebraData) -> OperadElement:
    """μ(u, v) = Δ(uv)."""
    c = Circuit(2)
    mat = compile_word(c.word(c.split(c.mult(*c.inputs), 2)), h)
    return Cochain(2, 2, mat, h)


def identity_element(h: HopfAlgebraData) -> OperadElement:
    """𝟙 = id_H."""
    return Cochain.identity(h, 1)


def unit_element(h: HopfAlgebraData) -> OperadElement:
    """e = 1 in Hom(K, K)."""
    return Cochain.identity(h, 0)


def _check_pair(f: OperadElement, g: OperadElement) -> tuple[int, int]:
    if f.hopf is not g.hopf:
        raise ArityError("operands belong to different algebras")
    return f.arity, g.arity


def circ(f: OperadElement, i: int, g: OperadElement) -> OperadElement:
    """Partial composition f ∘_i g of arity p + q − 1."""
    p, q = _check_pair(f, g)
    h = f.hopf
    n = p + q - 1
    if i < 1:
        raise ArityError(f"composition slot {i} must be at least 1")
    if n < 0:
        raise ArityError("composition of two arity-0 elements")
    if p == 0 or i > p:
        return Cochain.zero(h, n, n)
    cochains = {"f": f.mat, "g": g.mat}
    c = Circuit(n)
    u = c.inputs
    if q == 0:
        fo = c.apply("f", [*u[: i - 1], c.unit(), *u[i - 1 :]], p)
        c.counit(fo[i - 1])
        mat = compile_word(c.word([*fo[: i - 1], *fo[i:]]), h, cochains)
        return Cochain(n, n, mat.scale(g.mat.get(0, 0)), h)

    head_args = u[: i - 1]
    tail = u[i - 1 :]
    width = 4 if i >= 2 else 3
    legs = [c.split(w, width) for w in tail]
    a_legs = [leg[0] for leg in legs] if i >= 2 else []
    b_legs = [leg[-3] for leg in legs]
    s_legs = [leg[-2] for leg in legs]
    c_legs = [leg[-1] for leg in legs]

    a_prod = c.product(a_legs) if i >= 2 else None
    g_out = c.apply("g", b_legs[:q], q)
    later_b = b_legs[q:]
    g_part = g_out if not later_b else c.right_act(g_out, c.product(later_b))
    x = c.antipode_inv(c.product(s_legs))
    second: list[Wire]
    if a_prod is not None:
        x1, x2 = c.split(x, 2)
        second = [*c.split(c.mult(x1, a_prod), i - 1), *c.left_act(x2, g_part)]
    else:
        second = c.left_act(x, g_part)

    f_args = [*head_args, c.product(c_legs[:q]), *c_legs[q:]]
    fo = c.apply("f", f_args, p)
    first = [*fo[: i - 1], *c.split(fo[i - 1], q), *fo[i:]]
    out = [c.mult(a, b) for a, b in zip(first, second, strict=False)]
    out.extend(first[len(second) :])
    return Cochain(n, n, compile_word(c.word(out), h, cochains), h)


def cup_closed_form(f: OperadElement, g: OperadElement) -> OperadElement:
    """f(u_(1)) ◁ v_(1) ⊗ u_(2) ⊳ g(v_(2)), with u the first p and v the last q arguments."""
    p, q = _check_pair(f, g)
    h = f.hopf
    c = Circuit(p + q)
    u_legs = [c.split(w, 2) for w in c.inputs[:p]]
    v_legs = [c.split(w, 2) for w in c.inputs[p:]]
    left = c.right_act(c.apply("f", [a for a, _ in u_legs], p), c.product([a for a, _ in v_legs]))
    right = c.left_act(c.product([b for _, b in u_legs]), c.apply("g", [b for _, b in v_legs], q))
    mat = compile_word(c.word([*left, *right]), h, {"f": f.mat, "g": g.mat})
    return Cochain(p + q, p + q, mat, h)


def cup(f: OperadElement, g: OperadElement) -> OperadElement:
    """f ⌣ g = (μ ∘_2 g) ∘_1 f, cross-checked against the closed form."""
    mu = multiplication(f.hopf)
    result = circ(circ(mu, 2, g), 1, f)
    if result != cup_closed_form(f, g):
        raise CrossCheckFailure(f"cup product disagrees with its closed form at ({f.p}, {g.p})")
    return result


def brace(f: OperadElement, g: OperadElement) -> OperadElement:
    """f{g} = Σ_i (−1)^{(q−1)(i−1)} f ∘_i g."""
    p, q = _check_pair(f, g)
    n = p + q - 1
    if n < 0:
        raise ArityError("brace of two arity-0 elements")
    total = Cochain.zero(f.hopf, n, n)
    for i in range(1, p + 1):
        total = total + circ(f, i, g).signed(-1 if (q - 1) * (i - 1) % 2 else 1)
    return total


def bracket(f: OperadElement, g: OperadElement) -> OperadElement:
    """Gerstenhaber bracket {f, g} = f{g} − (−1)^{(p−1)(q−1)} g{f}."""
    p, q = _check_pair(f, g)
    sign = -1 if (p - 1) * (q - 1) % 2 else 1
    return brace(f, g) - brace(g, f).signed(sign)


def delta(f: OperadElement) -> OperadElement:
    n = f.arity
    return f.apply(delta_diag(n, f.hopf), n + 1, n + 1)


def cochain_clause(name: str, ref: str, lhs: OperadElement, rhs: OperadElement) -> Clause:
    return matrix_clause(name, ref, lhs.mat, rhs.mat)


def guarded_clause(name: str, ref: str, build: Callable[[], Clause]) -> Clause:
    try:
        return build()
    except ResourceLimit as exc:
        return Clause.skipped(name, ref, f"resource limit: {exc}")


def merge_clauses(name: str, ref: str, results: list[Clause]) -> Clause:
    """Fold per-trial results into one clause; the first failure wins."""
    for result in results:
        if result.status is ClauseStatus.FAILED:
            return Clause.check(name, ref, False, detail=result.name, witness=result.witness)
    skipped = [r for r in results if r.status is ClauseStatus.SKIPPED]
    if results and len(skipped) == len(results):
        return Clause.skipped(name, ref, skipped[0].detail)
    return Clause.check(name, ref, True, detail=f"{len(results) - len(skipped)} instances")


def operad_associativity(f: OperadElement, i: int, g: OperadElement, j: int,
                         k: OperadElement) -> tuple[OperadElement, OperadElement]:
    """Both sides of the associativity relation for (f ∘_i g) ∘_j k."""
    q, r = g.arity, k.arity
    lhs = circ(circ(f, i, g), j, k)
    if j < i:
        rhs = circ(circ(f, j, k), i + r - 1, g)
    elif j < q + i:
        rhs = circ(f, i, circ(g, j - i + 1, k))
    else:
        rhs = circ(circ(f, j - q + 1, k), i, g)
    return lhs, rhs


def _associativity_clause(label: str, f: OperadElement, i: int, g: OperadElement, j: int,
                           k: OperadElement) -> Clause:
    return cochain_clause(label, "operad associativity", *operad_associativity(f, i, g, j, k))


def associativity_case(i: int, j: int, q: int) -> str:
    if j < i:
        return "parallel"
    if j < q + i:
        return "nested"
    return "parallel-after"


def check_operad_axioms(h: HopfAlgebraData, arity_cap: int = 2, trials: int = 10,
                        seed: int = 0) -> VerificationReport:
    """Associativity in all three cases, units, the zero rule and μ's own relations."""
    ref_assoc = "operad associativity"
    arity_cap = max(1, arity_cap)
    mu, one, e = multiplication(h), identity_element(h), unit_element(h)
    by_case: dict[str, list[Clause]] = {"parallel": [], "nested": [], "parallel-after": []}
    units: list[Clause] = []
    zeros: list[Clause] = []
    for t in range(trials):
        rng = trial_rng(seed, t, 1)
        p = int(rng.integers(1, arity_cap + 1))
        q = int(rng.integers(0, arity_cap + 1))
        r = int(rng.integers(0, arity_cap + 1))
        f = random_cochain(h, p, p, rng)
        g = random_cochain(h, q, q, rng)
        k = random_cochain(h, r, r, rng)
        i = int(rng.integers(1, p + 1))
        slots = p + q - 1
        if slots >= 1:
            j = int(rng.integers(1, slots + 1))
            case = associativity_case(i, j, q)
            label = f"trial {t}: (p,q,r)=({p},{q},{r}), i={i}, j={j}"
            by_case[case].append(guarded_clause(
                label, ref_assoc, partial(_associativity_clause, label, f, i, g, j, k)))
        units.append(cochain_clause(f"trial {t}: 𝟙 ∘_1 f", "operad unit", circ(one, 1, f), f))
        units.extend(
            cochain_clause(f"trial {t}: f ∘_{s} 𝟙", "operad unit", circ(f, s, one), f)
            for s in range(1, p + 1)
        )
        scalar = random_cochain(h, 0, 0, rng)
        zeros.append(cochain_clause(f"trial {t}: arity-0 ∘_1 f", "zero composition",
                                    circ(scalar, 1, f), Cochain.zero(h, p - 1, p - 1)))
        zeros.append(cochain_clause(f"trial {t}: f ∘_(p+1) g", "zero composition",
                                    circ(f, p + 1, g), Cochain.zero(h, p + q - 1, p + q - 1)))

    clauses = [
        merge_clauses("associativity, j < i", ref_assoc, by_case["parallel"]),
        merge_clauses("associativity, i ≤ j < q + i", ref_assoc, by_case["nested"]),
        merge_clauses("associativity, j ≥ q + i", ref_assoc, by_case["parallel-after"]),
        merge_clauses("composition unit", "operad unit", units),
        merge_clauses("zero compositions", "zero composition", zeros),
        cochain_clause("μ ∘_1 μ = μ ∘_2 μ", "multiplication element",
                       circ(mu, 1, mu), circ(mu, 2, mu)),
        cochain_clause("μ ∘_1 e = 𝟙", "multiplication element", circ(mu, 1, e), one),
        cochain_clause("μ ∘_2 e = 𝟙", "multiplication element", circ(mu, 2, e), one),
    ]

    def fixed_instance() -> Clause:
        rng = trial_rng(seed, 0, 2)
        f = random_cochain(h, 2, 2, rng)
        g = random_cochain(h, 3, 3, rng)
        k = random_cochain(h, 1, 1, rng)
        return cochain_clause("fixed instance (p,q,r)=(2,3,1), i=2, j=3", ref_assoc,
                              *operad_associativity(f, 2, g, 3, k))

    clauses.append(guarded_clause("fixed instance (p,q,r)=(2,3,1), i=2, j=3", ref_assoc,
                                  fixed_instance))
    report = VerificationReport("operad", h.name, tuple(clauses), seed, trials)
    log.info("operad_axioms_checked", algebra=h.name, trials=trials, passed=report.passed)
    return report


def check_diff_identity(h: HopfAlgebraData, n_cap: int = 2, trials: int = 1,
                        seed: int = 0) -> VerificationReport:
    """δ^diag against the operadic differential, faces and degeneracies."""
    mu, e = multiplication(h), unit_element(h)
    ref = "differential from the multiplication"
    clauses: list[Clause] = []
    for n in range(n_cap + 1):
        diffs: list[Clause] = []
        faces: list[Clause] = []
        for t in range(trials):
            f = random_cochain(h, n, n, trial_rng(seed, t, 3 + n))
            vec_delta = delta(f)
            diffs.append(cochain_clause(f"trial {t}", ref, vec_delta,
                                 bracket(mu, f).signed(-1 if n % 2 == 0 else 1)))
            faces.append(cochain_clause(f"trial {t}: δ_0 = μ ∘_2 f", "operadic cofaces",
                                 f.apply(diag_coface(0, n, h), n + 1, n + 1), circ(mu, 2, f)))
            faces.extend(
                cochain_clause(f"trial {t}: δ_{i} = f ∘_{i} μ", "operadic cofaces",
                        f.apply(diag_coface(i, n, h), n + 1, n + 1), circ(f, i, mu))
                for i in range(1, n + 1)
            )
            faces.append(cochain_clause(f"trial {t}: δ_{n + 1} = μ ∘_1 f", "operadic cofaces",
                                 f.apply(diag_coface(n + 1, n, h), n + 1, n + 1), circ(mu, 1, f)))
            faces.extend(
                cochain_clause(f"trial {t}: σ_{j} = f ∘_{j + 1} e", "operadic codegeneracies",
                        f.apply(diag_codeg(j, n, h), n - 1, n - 1), circ(f, j + 1, e))
                for j in range(n)
            )
        clauses.append(merge_clauses(f"δf = (−1)^(p+1) {{μ, f}} at arity {n}", ref, diffs))
        clauses.append(merge_clauses(f"operadic faces at arity {n}", "operadic cofaces", faces))
    report = VerificationReport("operad", h.name, tuple(clauses), seed, trials)
    log.info("diff_identity_checked", algebra=h.name, n_cap=n_cap, passed=report.passed)
    return report


def _coboundary_clause(name: str, ref: str, x: OperadElement) -> Clause:
    ok = is_cocycle(x) and is_coboundary(x) is not None
    return Clause.check(name, ref, ok, witness=f"nnz={x.mat.nnz}")


def check_gerstenhaber_identities(h: HopfAlgebraData, arity_cap: int = 2, trials: int = 5,
                                  seed: int = 0) -> VerificationReport:
    """Leibniz, Jacobi, antisymmetry and well-definedness on cohomology."""
    mu, one = multiplication(h), identity_element(h)
    cap = max(1, min(arity_cap, 2))
    leibniz: list[Clause] = []
    jacobi: list[Clause] = []
    antisym: list[Clause] = []
    assoc: list[Clause] = []
    descends: list[Clause] = []
    for t in range(trials):
        rng = trial_rng(seed, t, 7)
        p, q, r = (int(rng.integers(1, cap + 1)) for _ in range(3))
        f = random_cochain(h, p, p, rng)
        g = random_cochain(h, q, q, rng)
        k = random_cochain(h, r, r, rng)
        sign_p = -1 if p % 2 else 1
        leibniz.append(cochain_clause(f"trial {t}: ({p},{q})", "Leibniz rule", delta(cup(f, g)),
                               cup(delta(f), g) + cup(f, delta(g)).signed(sign_p)))
        jsign = -1 if (p - 1) * (q - 1) % 2 else 1
        jacobi.append(cochain_clause(
            f"trial {t}: ({p},{q},{r})", "graded Jacobi",
            bracket(f, bracket(g, k)),
            bracket(bracket(f, g), k) + bracket(g, bracket(f, k)).signed(jsign)))
        antisym.append(cochain_clause(f"trial {t}: ({p},{q})", "graded antisymmetry",
                               bracket(f, g), -bracket(g, f).signed(jsign)))
        if p + q + r <= 4:
            assoc.append(cochain_clause(f"trial {t}: ({p},{q},{r})", "cup associativity",
                                 cup(cup(f, g), k), cup(f, cup(g, k))))
        a = random_cochain(h, p - 1, p - 1, rng)
        b = random_cochain(h, q - 1, q - 1, rng)
        fa, gb = delta(a), delta(b)
        descends.append(_coboundary_clause(f"trial {t}: {{δa, δb}}", "bracket on cohomology",
                                           bracket(fa, gb)))
        descends.append(_coboundary_clause(f"trial {t}: δa ⌣ δb", "cup on cohomology",
                                           cup(fa, gb)))
    clauses = [
        merge_clauses("δ(f⌣g) = δf⌣g + (−1)^p f⌣δg", "Leibniz rule", leibniz),
        merge_clauses("graded Jacobi identity", "graded Jacobi", jacobi),
        merge_clauses("graded antisymmetry", "graded antisymmetry", antisym),
        merge_clauses("cup associativity", "cup associativity", assoc),
        merge_clauses("products of coboundaries are coboundaries", "products on cohomology",
                      descends),
        cochain_clause("{μ, μ} = 0", "multiplication element", bracket(mu, mu),
                       Cochain.zero(h, 3, 3)),
        cochain_clause("𝟙 ⌣ 𝟙 = μ", "cup product", cup(one, one), mu),
    ]
    cocycles = cocycle_basis(h, 1)
    closed: list[Clause] = []
    for x in range(len(cocycles)):
        for y in range(len(cocycles)):
            fx, fy = cocycles[x], cocycles[y]
            closed.append(Clause.check(f"cocycles ({x}, {y})", "products of cocycles",
                                       is_cocycle(bracket(fx, fy)) and is_cocycle(cup(fx, fy))))
    clauses.append(
        merge_clauses("products of cocycles are cocycles", "products of cocycles", closed)
        if closed
        else Clause.check("products of cocycles are cocycles", "products of cocycles", True,
                          detail="no degree-1 cocycles")
    )
    report = VerificationReport("operad", h.name, tuple(clauses), seed, trials)
    log.info("gerstenhaber_identities_checked", algebra=h.name, passed=report.passed)
    return report


def random_cocycle(h: HopfAlgebraData, n: int, seed: int, trial: int) -> OperadElement:
    """A seeded combination of cocycle basis elements (zero when Z^n = 0)."""
    basis = cocycle_basis(h, n)
    rng = trial_rng(seed, trial, 11 + n)
    total = Cochain.zero(h, n, n)
    for f in basis:
        total = total + f.scale(int(rng.integers(-2, 3)))
    return total
