"""Tests for exact scalars over Q and prime fields."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gs_workbench.errors import (
    BadCharacteristic,
    DivisionByZero,
    MalformedScalar,
    MixedFields,
    NotInField,
    ZeroDenominator,
)
from gs_workbench.exactfield import ExactScalar, FieldKind, FieldSpec, parse_scalar, render_scalar

Q = FieldSpec.rationals()
F7 = FieldSpec.prime(7)
F101 = FieldSpec.prime(101)

fields = st.sampled_from([Q, F7, F101])
nums = st.integers(min_value=-10**6, max_value=10**6)
dens = st.integers(min_value=1, max_value=10**6)


class TestFieldSpec:
    """Construction and parsing of field specifications."""

    def test_rationals(self):
        """The rationals have characteristic zero and label Q."""
        assert Q.kind is FieldKind.RATIONALS
        assert Q.characteristic == 0
        assert not Q.is_prime_field
        assert Q.label == "Q"

    def test_prime(self):
        """A prime field carries its modulus."""
        assert F7.characteristic == 7
        assert F7.is_prime_field

    @pytest.mark.parametrize("p", [0, 1, 4, 9, 2**31 + 11])
    def test_rejects_non_primes(self, p: int):
        """Moduli must be primes below 2^31."""
        with pytest.raises(BadCharacteristic):
            FieldSpec.prime(p)

    @pytest.mark.parametrize("text", ["Q", "F7", "Fp:7"])
    def test_parse(self, text: str):
        """Both prime field spellings are accepted."""
        expected = Q if text == "Q" else F7
        assert FieldSpec.parse(text) == expected

    def test_parse_rejects_garbage(self):
        """Unknown field names are refused."""
        with pytest.raises(BadCharacteristic):
            FieldSpec.parse("R")

    def test_dict_round_trip(self):
        """to_dict and from_dict are inverse."""
        assert FieldSpec.from_dict(F7.to_dict()) == F7
        assert FieldSpec.from_dict(Q.to_dict()) == Q


class TestScalarText:
    """Canonical text of scalars."""

    @pytest.mark.parametrize(
        ("text", "expected"),
        [("3/6", "1/2"), ("-4/2", "-2"), ("0/5", "0"), (" 7 ", "7"), ("2/-4", "-1/2")],
    )
    def test_rationals_reduce(self, text: str, expected: str):
        """Fractions are reduced with the sign on the numerator."""
        assert render_scalar(parse_scalar(text, Q)) == expected

    @pytest.mark.parametrize(("text", "expected"), [("-1", "6"), ("1/3", "5"), ("15", "1")])
    def test_prime_residues(self, text: str, expected: str):
        """Prime field elements render as residues in [0, p)."""
        assert render_scalar(parse_scalar(text, F7)) == expected

    @pytest.mark.parametrize("text", ["1.5", "abc", "", "1/2/3", "0x10"])
    def test_malformed(self, text: str):
        """Anything other than n or n/m is malformed."""
        with pytest.raises(MalformedScalar):
            parse_scalar(text, Q)

    def test_zero_denominator(self):
        """n/0 is refused."""
        with pytest.raises(ZeroDenominator):
            parse_scalar("1/0", Q)

    def test_not_in_field(self):
        """A denominator divisible by p has no image in F_p."""
        with pytest.raises(NotInField):
            parse_scalar("1/7", F7)

    @given(fields, nums, dens)
    def test_parse_render_round_trip(self, field: FieldSpec, num: int, den: int):
        """parse(render(x)) == x."""
        if field.p is not None and den % field.p == 0:
            return
        x = ExactScalar.of(field, num, den)
        assert parse_scalar(render_scalar(x), field) == x


class TestArithmetic:
    """Field axioms on exact scalars."""

    @given(fields, nums, nums, nums)
    def test_ring_laws(self, field: FieldSpec, a: int, b: int, c: int):
        """Addition and multiplication are associative and distributive."""
        x, y, z = (ExactScalar.of(field, v) for v in (a, b, c))
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert (x + y) - y == x
        assert -(-x) == x

    @given(fields, nums, nums)
    def test_division_inverts_multiplication(self, field: FieldSpec, a: int, b: int):
        """(a·b)/b = a whenever b ≠ 0."""
        x, y = ExactScalar.of(field, a), ExactScalar.of(field, b)
        if y.is_zero:
            return
        assert (x * y) / y == x

    def test_division_by_zero(self):
        """Inverting zero raises."""
        with pytest.raises(DivisionByZero):
            ExactScalar.of(F7, 0).inv()
        with pytest.raises(DivisionByZero):
            ExactScalar.of(Q, 1) / ExactScalar.of(Q, 0)

    def test_mixed_fields(self):
        """Operands over different fields are refused."""
        with pytest.raises(MixedFields):
            ExactScalar.of(Q, 1) + ExactScalar.of(F7, 1)

    def test_prime_wraps(self):
        """Arithmetic in F_7 is modular."""
        assert str(ExactScalar.of(F7, 5) + ExactScalar.of(F7, 4)) == "2"
        assert str(ExactScalar.of(F7, 3).inv()) == "5"
