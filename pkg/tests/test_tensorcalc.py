"""Tests for sparse matrices and the tensor-word calculus."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gs_workbench.errors import DegreeMismatch, ResourceLimit, ShapeMismatch, UnknownCochainRef
from gs_workbench.exactfield import FieldSpec
from gs_workbench.hopf import HopfAlgebraData
from gs_workbench.tensorcalc import (
    Circuit,
    ElementaryMap,
    Layer,
    Limits,
    MapKind,
    Perm,
    SparseMat,
    TensorWord,
    compile_layerwise,
    compile_word,
    current_limits,
    dense_rank,
    factor_permutation,
    iterated_coproduct,
    kron,
    left_diagonal_action,
    limits,
    linear_index,
    multi_index,
    operator_matrix,
    rank,
    rank_and_kernel,
    right_diagonal_action,
    solve,
)

Q = FieldSpec.rationals()


def mat(rows: int, cols: int, values: list[int], field: FieldSpec = Q) -> SparseMat:
    entries = [(k // cols, k % cols, field.element(v)) for k, v in enumerate(values) if v]
    return SparseMat.from_entries(rows, cols, entries, field)


def vec(m: SparseMat) -> SparseMat:
    """Row-major vectorization as a column."""
    return SparseMat.from_entries(
        m.rows * m.cols, 1, ((i * m.cols + j, 0, v) for i, j, v in m.entries()), m.field
    )


def twisted_product_word() -> TensorWord:
    """u ⊗ v ↦ S(v_(2))·f(u·v_(1)) as a word with one cochain hole."""
    c = Circuit(2)
    u, v = c.inputs
    v1, v2 = c.split(v, 2)
    (fu,) = c.apply("f", [c.mult(u, v1)], 1)
    return c.word([c.mult(c.antipode(v2), fu)])


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.integers(-3, 3), min_size=r * c, max_size=r * c).map(
            lambda vs: mat(r, c, vs)
        )
    )
)


class TestIndexing:
    """Linear indices of basis tuples."""

    @given(st.integers(1, 5), st.integers(0, 4), st.data())
    def test_bijection(self, d: int, n: int, data: st.DataObject):
        """multi_index inverts linear_index."""
        index = data.draw(st.integers(0, d**n - 1))
        digits = multi_index(index, n, d)
        assert len(digits) == n
        assert linear_index(digits, d) == index

    def test_most_significant_first(self):
        """The leftmost factor is the most significant digit."""
        assert linear_index((1, 0, 2), 3) == 11
        assert multi_index(11, 3, 3) == (1, 0, 2)


class TestSparseMat:
    """Construction and arithmetic of sparse exact matrices."""

    def test_repeated_entries_are_summed(self):
        """from_entries adds values at the same position."""
        m = SparseMat.from_entries(2, 2, [(0, 0, Q.one), (0, 0, Q.element(2))], Q)
        assert m.get(0, 0) == Q.element(3)
        assert m.nnz == 1

    def test_zeros_are_dropped(self):
        """Cancelling entries leave no explicit zero."""
        m = SparseMat.from_entries(1, 1, [(0, 0, Q.one), (0, 0, Q.element(-1))], Q)
        assert m.is_zero

    def test_out_of_range_entry(self):
        """Entries outside the shape are refused."""
        with pytest.raises(ShapeMismatch):
            SparseMat.from_entries(2, 2, [(2, 0, Q.one)], Q)

    def test_shape_checks(self):
        """Mismatched shapes raise instead of broadcasting."""
        with pytest.raises(ShapeMismatch):
            mat(2, 3, [1] * 6) @ mat(2, 3, [1] * 6)
        with pytest.raises(ShapeMismatch):
            mat(2, 2, [1] * 4) + mat(2, 3, [1] * 6)

    def test_power_and_inverse(self):
        """A rotation by a quarter turn has order four."""
        r = mat(2, 2, [0, -1, 1, 0])
        identity = SparseMat.identity(2, Q)
        assert r.power(4) == identity
        assert r.power(2) != identity
        assert r.inverse() == r.power(3)

    def test_singular_inverse(self):
        """A singular matrix has no inverse."""
        assert mat(2, 2, [1, 2, 2, 4]).inverse() is None

    def test_to_dict(self):
        """Entries are written row-major with canonical scalar text."""
        m = SparseMat.from_entries(2, 2, [(1, 0, Q.element(1, 2)), (0, 1, Q.element(-3))], Q)
        assert m.to_dict() == {
            "rows": 2,
            "cols": 2,
            "field": {"kind": "Q"},
            "entries": [[0, 1, "-3"], [1, 0, "1/2"]],
        }

    def test_kron(self):
        """Kronecker products of identities are identities; shapes multiply."""
        assert kron(SparseMat.identity(2, Q), SparseMat.identity(3, Q)) == SparseMat.identity(6, Q)
        k = kron(mat(1, 2, [1, 2]), mat(2, 1, [3, 4]))
        assert k.shape == (2, 2)
        assert k.entries() == [(0, 0, Q.element(3)), (0, 1, Q.element(6)),
                               (1, 0, Q.element(4)), (1, 1, Q.element(8))]

    @given(matrices, matrices)
    def test_kron_mixed_product(self, a: SparseMat, b: SparseMat):
        """(A ⊗ B)(Aᵀ ⊗ Bᵀ) = AAᵀ ⊗ BBᵀ."""
        assert kron(a, b) @ kron(a.T, b.T) == kron(a @ a.T, b @ b.T)


class TestPermutations:
    """Factor permutations and their matrices."""

    @given(st.permutations(range(4)), st.permutations(range(4)))
    def test_matrix_is_a_homomorphism(self, a: list[int], b: list[int]):
        """The matrix of a composite is the product of matrices."""
        pa, pb = Perm(tuple(a)), Perm(tuple(b))
        lhs = factor_permutation(4, pa.compose(pb), 2, Q)
        rhs = factor_permutation(4, pa, 2, Q) @ factor_permutation(4, pb, 2, Q)
        assert lhs == rhs
        assert pa.compose(pa.inverse()) == Perm.identity(4)

    def test_apply(self):
        """Factor k moves to position images[k]."""
        assert Perm((1, 2, 0)).apply(("a", "b", "c")) == ("c", "a", "b")  # type: ignore[arg-type]

    def test_not_a_permutation(self):
        """Repeated images are refused."""
        with pytest.raises(DegreeMismatch):
            Perm((0, 0, 1))


class TestTensorWords:
    """Compilation of tensor words against a Hopf algebra."""

    def test_degree_mismatch(self):
        """A layer must accept the width produced by its predecessor."""
        with pytest.raises(DegreeMismatch):
            TensorWord(1, (Layer(0, ElementaryMap.structure(MapKind.MULT), 0),))

    def test_iterated_coproduct(self, h4: HopfAlgebraData):
        """Δ^{-1} = ε, Δ^0 = id, Δ^1 = Δ."""
        assert iterated_coproduct(-1, h4) == h4.counit
        assert iterated_coproduct(0, h4) == SparseMat.identity(4, h4.field)
        assert iterated_coproduct(1, h4) == h4.comult
        assert iterated_coproduct(3, h4).shape == (4**4, 4)

    def test_diagonal_actions(self, kc2: HopfAlgebraData, h4: HopfAlgebraData):
        """On one tensor factor the actions are the product; g acts on every factor of kC2."""
        assert left_diagonal_action(1, h4) == h4.mult
        assert right_diagonal_action(1, h4) == h4.mult
        action = left_diagonal_action(2, kc2)
        assert action.get(linear_index((1, 0), 2), linear_index((1, 0, 1), 2)) == Q.one
        assert action.nnz == 8

    def test_layerwise_agrees(self, h4: HopfAlgebraData, ks3: HopfAlgebraData):
        """Propagation and materialized layer products give the same matrix."""
        for h in (h4, ks3):
            c = Circuit(2)
            u, v = c.inputs
            u1, u2, u3 = c.split(u, 3)
            word = c.word([c.mult(c.antipode(u3), v), c.mult(u1, u2)])
            assert compile_word(word, h) == compile_layerwise(word, h)

    def test_cochain_layers(self, kc3: HopfAlgebraData):
        """Named cochains are substituted by their matrices."""
        f = mat(3, 9, [1, 0, 2, 0, 0, 0, 0, 0, 1,
                       0, 0, 0, 3, 0, 0, 0, 0, 0,
                       0, 1, 0, 0, 0, 0, 0, -1, 0])
        c = Circuit(2)
        (out,) = c.apply("f", c.inputs, 1)
        word = c.word([c.antipode(out)])
        assert compile_word(word, kc3, {"f": f}) == kc3.antipode @ f
        assert compile_layerwise(word, kc3, {"f": f}) == kc3.antipode @ f

    def test_unknown_cochain(self, kc2: HopfAlgebraData):
        """Every referenced cochain must be supplied."""
        c = Circuit(1)
        word = c.word(c.apply("g", c.inputs, 1))
        with pytest.raises(UnknownCochainRef):
            compile_word(word, kc2)

    def test_operator_matrix(self, h4: HopfAlgebraData):
        """The operator of a word applied to vec(f) is vec of the word at f."""
        word = twisted_product_word()
        op = operator_matrix(word, h4)
        d = h4.dim
        values = [(k * 7) % 5 - 2 for k in range(d * d)]
        f = mat(d, d, values)
        assert op @ vec(f) == vec(compile_word(word, h4, {"f": f}))

    def test_hole_must_occur_once(self, kc2: HopfAlgebraData):
        """operator_matrix needs exactly one occurrence of the hole."""
        c = Circuit(1)
        word = c.word([c.antipode(c.inputs[0])])
        with pytest.raises(DegreeMismatch):
            operator_matrix(word, kc2)

    def test_wire_used_twice(self):
        """A consumed wire cannot be reused."""
        c = Circuit(1)
        w = c.inputs[0]
        c.antipode(w)
        with pytest.raises(ValueError, match="used twice"):
            c.antipode(w)

    def test_unused_legs(self):
        """Every Sweedler leg must be consumed or output."""
        c = Circuit(1)
        a, _ = c.split(c.inputs[0], 2)
        with pytest.raises(ValueError, match="unused Sweedler legs"):
            c.word([a])


class TestLimits:
    """Resource guards."""

    def test_materialize_limit(self, kc3: HopfAlgebraData):
        """Layerwise compilation refuses matrices wider than the guard."""
        c = Circuit(1)
        word = c.word(c.split(c.inputs[0], 3))
        with limits(Limits(materialize=10)), pytest.raises(ResourceLimit) as info:
            compile_layerwise(word, kc3)
        assert info.value.estimate == 27
        assert info.value.exit_code == 4

    def test_work_limit(self, h4: HopfAlgebraData):
        """Propagation stops once the term budget is spent."""
        with limits(Limits(work=5)), pytest.raises(ResourceLimit):
            iterated_coproduct(3, h4)

    def test_limits_are_restored(self):
        """The context manager reinstalls the previous guards."""
        before = current_limits()
        with limits(Limits(materialize=1, work=1)):
            assert current_limits().materialize == 1
        assert current_limits() == before


class TestLinearAlgebra:
    """Exact rank, kernels and solving."""

    @given(matrices)
    def test_rank_matches_dense_oracle(self, a: SparseMat):
        """Sparse and dense elimination agree; rank-nullity holds."""
        r, kernel = rank_and_kernel(a)
        assert rank(a) == dense_rank(a) == r
        assert r + len(kernel) == a.cols
        assert all((a @ v).is_zero for v in kernel)

    @given(matrices, st.data())
    def test_solve_consistent(self, a: SparseMat, data: st.DataObject):
        """A right-hand side in the column space is solved exactly."""
        values = data.draw(st.lists(st.integers(-3, 3), min_size=a.cols, max_size=a.cols))
        b = a @ mat(a.cols, 1, values)
        x = solve(a, b)
        assert x is not None
        assert a @ x == b

    def test_solve_inconsistent(self):
        """A right-hand side outside the column space gives None."""
        assert solve(mat(2, 2, [1, 0, 0, 0]), mat(2, 1, [0, 1])) is None

    def test_prime_field_rank(self):
        """Rank depends on the characteristic."""
        values = [1, 2, 3, 4]
        assert rank(mat(2, 2, values)) == 2
        assert rank(mat(2, 2, values, FieldSpec.prime(2))) == 1
