import math
from fractions import Fraction

import mpmath
import pytest

from modules.core.errors import ConvergenceError, DomainError
from modules.special.special_fn import (
    HypergeometricParams,
    euler_transform,
    gamma,
    hyp2f1,
    hyp2f1_at_one,
    hyp2f1_derivative,
    pochhammer,
    polynomial_coefficients,
    rgamma,
)


@pytest.mark.parametrize('x, expected', [
    (1.0, 1.0),
    (0.5, 1.7724538509055160),
    (6.0, 120.0),
    (-0.5, -2.0 * math.sqrt(math.pi)),
    (3.7, float(mpmath.gamma(3.7))),
    (0.01, float(mpmath.gamma(0.01))),
])
def test_gamma_values(x, expected):
    assert gamma(x) == pytest.approx(expected, rel=1e-13)


def test_gamma_poles():
    with pytest.raises(DomainError):
        gamma(0)
    with pytest.raises(DomainError):
        gamma(-3.0)
    assert rgamma(-2) == 0.0
    assert rgamma(5) == pytest.approx(1.0 / 24.0)


def test_pochhammer_exact():
    assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)
    assert pochhammer(-2, 3) == 0
    assert pochhammer(1.5, 0) == 1.0


def test_series_truncated_by_zero_parameter():
    assert hyp2f1(HypergeometricParams(0.3, 0, 1.1), 0.7) == 1.0


def test_linear_polynomial():
    b, c, x = 0.4, 1.3, 0.6
    assert hyp2f1(HypergeometricParams(-1, b, c), x) == pytest.approx(1.0 - b / c * x, abs=1e-15)


def test_exact_polynomial_in_rationals():
    params = HypergeometricParams(Fraction(-2), Fraction(1, 2), Fraction(3, 2))
    assert polynomial_coefficients(params) == [Fraction(1), Fraction(-2, 3), Fraction(1, 5)]
    assert hyp2f1(params, Fraction(1, 3)) == Fraction(4, 5)
    assert params.terminating_degree() == 2


@pytest.mark.parametrize('a, b, c, x', [
    (0.3, 0.7, 1.1, 0.5),
    (0.3, 0.7, 1.1, 0.9),
    (0.2, 0.3, 1.4, 0.999),
    (-0.5, 1.25, 0.75, 0.8),
    (1.5, 2.5, 1.2, 0.3),
])
def test_hyp2f1_against_mpmath(a, b, c, x):
    expected = float(mpmath.hyp2f1(a, b, c, x))
    assert hyp2f1(HypergeometricParams(a, b, c), x) == pytest.approx(expected, rel=1e-10)


def test_euler_transform_matches_direct_value():
    params = HypergeometricParams(0.3, 0.7, 1.1)
    assert euler_transform(params, 0.9) == pytest.approx(hyp2f1(params, 0.9), rel=1e-11)
    assert euler_transform(params, 0.0) == pytest.approx(1.0)
    linear = HypergeometricParams(-1, 0.4, 1.3)
    assert euler_transform(linear, 0.6) == pytest.approx(1.0 - 0.4 / 1.3 * 0.6, rel=1e-12)


def test_gauss_summation():
    assert hyp2f1_at_one(HypergeometricParams(0.3, 0, 1.7)) == 1.0
    assert hyp2f1_at_one(HypergeometricParams(-1, 0.4, 1.3)) == pytest.approx(1.0 - 0.4 / 1.3)
    expected = float(mpmath.hyp2f1(0.2, 0.3, 1.5, 1))
    assert hyp2f1_at_one(HypergeometricParams(0.2, 0.3, 1.5)) == pytest.approx(expected, rel=1e-12)


def test_gauss_summation_requires_positive_excess():
    with pytest.raises(DomainError):
        hyp2f1_at_one(HypergeometricParams(0.5, 0.7, 1.1))


def test_argument_outside_unit_interval():
    with pytest.raises(DomainError):
        hyp2f1(HypergeometricParams(0.3, 0.7, 1.1), 1.0)


def test_nonpositive_integer_c_is_a_pole():
    with pytest.raises(DomainError):
        HypergeometricParams(1, 1, -2)
    # Termina antes do polo
    HypergeometricParams(-1, 1, -2)


def test_derivative_shift_identity():
    a, b, c, x = 0.3, 0.7, 1.1, 0.4
    expected = a * b / c * float(mpmath.hyp2f1(a + 1, b + 1, c + 1, x))
    assert hyp2f1_derivative(HypergeometricParams(a, b, c), x) == pytest.approx(expected, rel=1e-12)
    assert hyp2f1_derivative(HypergeometricParams(-1, 0.4, 1.3), 0.2, order=2) == 0.0


def test_integer_excess_near_one_does_not_converge():
    config = {'series_max_terms': 1000}
    with pytest.raises(ConvergenceError):
        hyp2f1(HypergeometricParams(1.0, 1.0, 2.0), 1.0 - 1e-9, config)
