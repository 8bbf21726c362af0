"""Tests for exact polynomials and factored forms."""

import pytest

from latticefactor.poset import (
    FactoredForm,
    LaurentPolynomial,
    Polynomial,
    nonnegative_integer_factorization,
)


class TestPolynomial:
    """Arithmetic and printing."""

    def test_printing(self):
        assert str(Polynomial((2, -3, 1))) == "t^2 - 3t + 2"
        assert str(Polynomial((0, -1))) == "-t"
        assert str(Polynomial(())) == "0"
        assert str(Polynomial((-6, 11, -6, 1))) == "t^3 - 6t^2 + 11t - 6"

    def test_trailing_zeros_are_stripped(self):
        assert Polynomial((1, 0, 0)) == Polynomial((1,))
        assert Polynomial((0,)).is_zero()

    def test_from_roots(self):
        assert Polynomial.from_roots([1, 2]) == Polynomial((2, -3, 1))
        assert Polynomial.from_roots([], t_power=2) == Polynomial.monomial(2)

    def test_arithmetic(self):
        t = Polynomial.monomial(1)
        assert (t - 1) * (t - 2) == Polynomial((2, -3, 1))
        assert (t + 1) ** 2 == Polynomial((1, 2, 1))
        assert 3 - t == Polynomial((3, -1))
        assert -t == Polynomial((0, -1))

    def test_evaluation(self):
        p = Polynomial((2, -3, 1))
        assert p(1) == 0
        assert p(2) == 0
        assert p(3) == 2

    def test_shift(self):
        p = Polynomial((0, 0, 1))
        assert p.shift(-2) == Polynomial((1,))
        assert p.shift(1) == Polynomial.monomial(3)
        with pytest.raises(ValueError):
            Polynomial((2, -3, 1)).shift(-1)

    def test_degree_and_lowest_degree(self):
        p = Polynomial((0, 0, 3, 1))
        assert p.degree == 3
        assert p.leading_coefficient == 1
        assert p.lowest_degree() == 2

    def test_dict_form(self):
        p = Polynomial((2, -3, 1))
        assert p.to_dict() == {"coeffs": [2, -3, 1]}
        assert Polynomial.from_dict(p.to_dict()) == p


class TestFactoredForm:
    def test_printing(self):
        assert str(FactoredForm(1, (1, 2))) == "t (t - 1) (t - 2)"
        assert str(FactoredForm(0, (1, 2, 3))) == "(t - 1) (t - 2) (t - 3)"
        assert str(FactoredForm(0, ())) == "1"

    def test_negative_t_power_absorbed_by_zero_roots(self):
        form = FactoredForm(-1, (0, 2))
        assert form.is_polynomial()
        assert form.expand() == Polynomial((-2, 1))

    def test_negative_t_power_without_zero_roots(self):
        form = FactoredForm(-1, (1,))
        assert not form.is_polynomial()
        with pytest.raises(ValueError):
            form.expand()

    def test_negative_roots_rejected(self):
        with pytest.raises(ValueError):
            FactoredForm(0, (-1,))

    def test_to_dict(self):
        assert FactoredForm(2, (1, 3)).to_dict() == {"t_power": 2, "roots": [1, 3]}


class TestLaurentPolynomial:
    def test_normalization(self):
        laurent = LaurentPolynomial(-2, Polynomial((0, 1, 1)))
        assert laurent.offset == -1
        assert laurent.body == Polynomial((1, 1))

    def test_from_terms(self):
        laurent = LaurentPolynomial.from_terms({-1: 1, 0: -2})
        assert laurent.terms() == {-1: 1, 0: -2}
        assert not laurent.is_polynomial()
        with pytest.raises(ValueError):
            laurent.to_polynomial()

    def test_multiplication(self):
        a = LaurentPolynomial.from_terms({-1: 1})
        b = LaurentPolynomial.from_polynomial(Polynomial((0, 0, 1)))
        assert (a * b).to_polynomial() == Polynomial((0, 1))


@pytest.mark.parametrize(
    "coeffs, expected",
    [
        ((-6, 11, -6, 1), FactoredForm(0, (1, 2, 3))),
        ((0, 0, 1), FactoredForm(2, ())),
        ((0, 2, -3, 1), FactoredForm(1, (1, 2))),
        ((1, -2, 1), FactoredForm(0, (1, 1))),
    ],
)
def test_nonnegative_factorization(coeffs, expected):
    assert nonnegative_integer_factorization(Polynomial(coeffs)) == expected


@pytest.mark.parametrize(
    "coeffs",
    [
        (1, 0, -2, 1),   # t^3 - 2t^2 + 1 has irrational roots
        (1, 0, 1),       # t^2 + 1
        (2, 1),          # t + 2 has a negative root
        (0, 2),          # not monic
        (),
    ],
)
def test_no_nonnegative_factorization(coeffs):
    assert nonnegative_integer_factorization(Polynomial(coeffs)) is None
