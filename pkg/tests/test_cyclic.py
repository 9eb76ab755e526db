"""Tests for the cyclic operators, cyclic cohomology, BV and vanishing checks."""

import pytest

from gs_workbench.cyclic import (
    bv_defect,
    bv_suite,
    check_cyclic_operad,
    connes_B,
    cyclic_gs_cohomology,
    cyclic_tau,
    cylindrical_check,
    e3_bracket,
    exact_all,
    factor_powers_clause,
    finite_dim_vanishing_suite,
    is_exact,
    mixed_complex_check,
    paracyclic_check,
    tau_alg,
    tau_alg_power_closed,
    tau_coalg,
    tau_coalg_power_closed,
    tau_diag,
    twist_operator,
)
from gs_workbench.domain import ClauseStatus, ComplexKind
from gs_workbench.errors import ArityError, BadCharacteristic, NotACocycle, NotInvolutive
from gs_workbench.exactfield import FieldSpec
from gs_workbench.gscomplex import Cochain, random_cochain, trial_rng
from gs_workbench.hopf import HopfAlgebraData, builtin_algebras
from gs_workbench.operad import delta, multiplication, random_cocycle
from gs_workbench.tensorcalc import SparseMat


def identity(h: HopfAlgebraData, n: int) -> SparseMat:
    return SparseMat.identity(h.dim ** (2 * n), h.field)


class TestOperators:
    """τ_alg, τ_coalg, τ_diag and the S²-twist."""

    def test_diagonal_power_is_the_twist(self, h4: HopfAlgebraData):
        """τ_diag^{n+1} is the S²-twist, which is not the identity for Sweedler's algebra."""
        assert tau_diag(1, h4).power(2) == twist_operator(1, h4)
        assert twist_operator(1, h4) != identity(h4, 1)

    def test_involutive_diagonal_is_cyclic(self, kc2: HopfAlgebraData):
        """For S² = id, τ_diag^{n+1} = id."""
        assert tau_diag(1, kc2).power(2) == identity(kc2, 1)
        assert tau_diag(2, kc2).power(3) == identity(kc2, 2)

    @pytest.mark.parametrize("n", [1, pytest.param(2, marks=pytest.mark.slow)])
    def test_factors_are_only_para_cyclic(self, duals3: HopfAlgebraData, n: int):
        """Each factor alone fails cyclicity even when their product is cyclic."""
        alg = tau_alg(n, n, duals3).power(n + 1)
        coalg = tau_coalg(n, n, duals3).power(n + 1)
        assert alg != identity(duals3, n)
        assert coalg != identity(duals3, n)
        assert coalg @ alg == identity(duals3, n)
        assert tau_diag(n, duals3).power(n + 1) == identity(duals3, n)

    def test_closed_form_powers(self, h4: HopfAlgebraData):
        """The (n+1)-st powers match their Sweedler closed forms."""
        assert tau_alg(1, 2, h4).power(2) == tau_alg_power_closed(1, 2, h4)
        assert tau_coalg(2, 1, h4).power(2) == tau_coalg_power_closed(2, 1, h4)

    def test_degree_zero(self, h4: HopfAlgebraData):
        """τ_0 is the identity."""
        assert tau_diag(0, h4) == identity(h4, 0)

    def test_tau_fixes_mu(self, kc3: HopfAlgebraData):
        """τμ = μ."""
        mu = multiplication(kc3)
        assert cyclic_tau(mu) == mu

    def test_connes_b_needs_involutive(self, h4: HopfAlgebraData):
        """B is only defined when S² = id."""
        with pytest.raises(NotInvolutive):
            connes_B(1, h4)


class TestChecks:
    """Para-cyclic, cylindrical and mixed-complex reports."""

    @pytest.mark.parametrize("name", ["kc2", "h4"])
    def test_paracyclic(self, algebras: dict[str, HopfAlgebraData], name: str):
        """Para-cocyclic relations hold on columns, rows and the diagonal."""
        report = paracyclic_check(algebras[name], 1, 1)
        assert report.passed, [(c.name, c.witness) for c in report.failures()]

    def test_paracyclic_degree_two(self, kc2: HopfAlgebraData):
        report = paracyclic_check(kc2, 2, 2)
        assert report.passed, [(c.name, c.witness) for c in report.failures()]

    @pytest.mark.parametrize("name", ["kc2", "duals3", "h4"])
    def test_cylindrical(self, algebras: dict[str, HopfAlgebraData], name: str):
        """τ_coalg^{n+1} τ_alg^{n+1} equals the twist, trivial exactly when involutive."""
        report = cylindrical_check(1, algebras[name])
        assert report.passed, [(c.name, c.witness) for c in report.failures()]

    @pytest.mark.parametrize("n", [1, pytest.param(2, marks=pytest.mark.slow)])
    def test_cylindrical_witnesses(self, duals3: HopfAlgebraData, n: int):
        """The factor powers clause records where both powers leave the identity."""
        report = cylindrical_check(n, duals3)
        assert report.passed, [(c.name, c.witness) for c in report.failures()]
        powers = next(c for c in report.clauses if c.name == f"factor powers, n={n}")
        assert powers.witness is not None
        assert powers.witness.count("differs at entry") == 2

    def test_factor_powers_need_cocommutative(self, duals3: HopfAlgebraData,
                                              kc2: HopfAlgebraData):
        """Trivial powers only pass for cocommutative algebras."""
        assert factor_powers_clause(1, kc2, None, None).passed
        clause = factor_powers_clause(1, duals3, None, None)
        assert clause.status is ClauseStatus.FAILED
        assert clause.witness == "τ_alg^(n+1): identity; τ_coalg^(n+1): identity"
        assert factor_powers_clause(1, duals3, (0, 1), None).passed

    def test_mixed_complex(self, kc2: HopfAlgebraData):
        """B² = 0 and δB + Bδ = 0."""
        report = mixed_complex_check(kc2, 2)
        assert report.passed, [(c.name, c.witness) for c in report.failures()]
        assert len(report.clauses) == 3

    def test_mixed_complex_skipped(self, h4: HopfAlgebraData):
        """Without S² = id the clauses are skipped, not failed."""
        report = mixed_complex_check(h4, 2)
        assert report.passed
        assert all(c.status is ClauseStatus.SKIPPED for c in report.clauses)


class TestCyclicCohomology:
    """Betti numbers of δ + uB."""

    def test_group_algebra(self, kc2: HopfAlgebraData):
        """The u-shifted degree-zero class survives in degree 2."""
        report = cyclic_gs_cohomology(kc2, 2, 1)
        assert report.kind is ComplexKind.CYCLIC
        assert report.u_trunc == 1
        assert report.betti == [1, 0, 1]

    def test_no_truncation_is_diagonal(self, kc2: HopfAlgebraData):
        """With u-truncation 0 the complex is the diagonal one."""
        assert cyclic_gs_cohomology(kc2, 2, 0).betti == [1, 0, 0]

    def test_not_involutive(self, h4: HopfAlgebraData):
        """Sweedler's algebra has no cyclic cohomology here."""
        with pytest.raises(NotInvolutive) as info:
            cyclic_gs_cohomology(h4, 1, 1)
        assert info.value.exit_code == 2


class TestCyclicOperad:
    """τ_diag against partial composition."""

    def test_involutive(self, kc2: HopfAlgebraData):
        report = check_cyclic_operad(kc2, 2, 3, 0)
        assert report.passed, [(c.name, c.witness) for c in report.failures()]

    def test_sweedler_cyclicity_is_skipped(self, h4: HopfAlgebraData):
        """The compatibility relations hold; τ^{p+1} = id is reported as not applicable."""
        report = check_cyclic_operad(h4, 1, 2, 0)
        assert report.passed, [(c.name, c.witness) for c in report.failures()]
        cyclicity = next(c for c in report.clauses if c.name == "τ^(p+1) = id")
        assert cyclicity.status is ClauseStatus.SKIPPED


class TestBV:
    """BV defects and the e3 bracket."""

    def test_suite(self, kc2: HopfAlgebraData):
        report = bv_suite(kc2, 2, 0)
        assert report.suite == "bv"
        assert report.passed, [(c.name, c.witness) for c in report.failures()]

    def test_suite_skipped(self, h4: HopfAlgebraData):
        """Every BV clause is skipped for a non-involutive algebra."""
        report = bv_suite(h4, 2, 0)
        assert report.passed
        assert all(c.status is ClauseStatus.SKIPPED for c in report.clauses)

    @pytest.mark.parametrize("name", [
        "kc2",
        "kc3",
        pytest.param("ks3", marks=pytest.mark.slow),
        pytest.param("duals3", marks=pytest.mark.slow),
    ])
    @pytest.mark.parametrize(("p", "q"), [(1, 1), (1, 2)])
    def test_defect_is_exact(self, algebras: dict[str, HopfAlgebraData], name: str, p: int,
                             q: int):
        """BV defects of ten cocycle pairs have verified preimages."""
        h = algebras[name]
        for t in range(10):
            f = random_cocycle(h, p, 0, 2 * t)
            g = random_cocycle(h, q, 0, 2 * t + 1)
            defect, preimage = bv_defect(f, g)
            assert defect.arity == p + q - 1
            assert defect.is_zero or preimage is not None

    def test_defect_needs_cocycles(self, kc3: HopfAlgebraData):
        """Arguments are checked for closedness."""
        f = random_cochain(kc3, 1, 1, trial_rng(0, 0))
        with pytest.raises(NotACocycle):
            bv_defect(f, f)

    def test_e3(self, kc2: HopfAlgebraData, h4: HopfAlgebraData):
        """{{f, g}} has arity p + q − 2 and needs S² = id."""
        f = random_cocycle(kc2, 1, 0, 0)
        assert e3_bracket(f, f).arity == 0
        with pytest.raises(ArityError):
            e3_bracket(Cochain.zero(kc2, 0, 0), Cochain.zero(kc2, 1, 1))
        with pytest.raises(NotInvolutive):
            e3_bracket(Cochain.zero(h4, 1, 1), Cochain.zero(h4, 1, 1))


class TestFiniteDimensional:
    """Vanishing of the bracket on cohomology."""

    def test_group_algebra(self, kc2: HopfAlgebraData):
        report = finite_dim_vanishing_suite(kc2)
        assert report.suite == "finite-dim"
        assert report.passed, [(c.name, c.witness) for c in report.failures()]
        names = [c.name for c in report.clauses]
        for p, q in ((1, 1), (1, 2), (2, 2)):
            assert f"bracket of cocycles vanishes, degrees ({p}, {q})" in names

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["ks3", "h4"])
    def test_every_basis_pair_in_degree_two(self, algebras: dict[str, HopfAlgebraData],
                                            name: str):
        """All pairs of basis 2-cocycles bracket to coboundaries."""
        report = finite_dim_vanishing_suite(algebras[name])
        assert report.passed, [(c.name, c.witness) for c in report.failures()]
        top = next(c for c in report.clauses
                   if c.name == "bracket of cocycles vanishes, degrees (2, 2)")
        assert top.status is ClauseStatus.PASSED

    def test_exact_all(self, kc3: HopfAlgebraData):
        """Batched exactness agrees with the single-element test."""
        boundary = delta(random_cochain(kc3, 1, 1, trial_rng(2, 0)))
        generic = random_cochain(kc3, 2, 2, trial_rng(2, 1))
        values = [boundary, Cochain.zero(kc3, 2, 2), generic]
        assert exact_all(values) == [True, True, False]
        assert exact_all(values) == [is_exact(x) for x in values]

    def test_prime_field_refused(self):
        """The suite is a characteristic-zero statement."""
        h = builtin_algebras(FieldSpec.prime(5))["kc2"]
        with pytest.raises(BadCharacteristic):
            finite_dim_vanishing_suite(h)
