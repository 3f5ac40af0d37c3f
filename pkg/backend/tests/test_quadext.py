from fractions import Fraction

import pytest

from modules.core.errors import SingularityError
from modules.verification.quadext import QuadExtScalar, det3, null_vector, solve


def test_sqrt_reduces_to_square_free_part():
    root = QuadExtScalar.sqrt(Fraction(12, 25))
    assert (root.a, root.b, root.d) == (0, Fraction(2, 5), 3)
    assert root * root == Fraction(12, 25)


def test_sqrt_of_perfect_square_is_rational():
    root = QuadExtScalar.sqrt(Fraction(49, 4))
    assert root.is_rational
    assert root == Fraction(7, 2)


def test_negative_radicand():
    with pytest.raises(ValueError):
        QuadExtScalar.sqrt(-2)


def test_field_operations():
    x = QuadExtScalar(1, 1, 2)
    y = QuadExtScalar(Fraction(1, 2), -3, 2)
    assert (x * y) / y == x
    assert x * x.inverse() == 1
    assert x.norm == -1
    assert (x + y) - y == x
    assert str(x) == '1+1*sqrt(2)'
    assert float(x) == pytest.approx(2.414213562373095)


def test_mixed_radicands_are_rejected():
    with pytest.raises(ValueError):
        QuadExtScalar(0, 1, 2) + QuadExtScalar(0, 1, 3)


def test_zero_division():
    with pytest.raises(ZeroDivisionError):
        QuadExtScalar(0).inverse()


def test_exact_solve():
    r2 = QuadExtScalar.sqrt(2)
    matrix = [[r2, 1, 0], [0, 2, r2], [1, 0, 1]]
    x = [QuadExtScalar(1), r2, QuadExtScalar(Fraction(1, 3))]
    rhs = [sum((m * v for m, v in zip(row, x)), QuadExtScalar(0)) for row in matrix]
    assert solve(matrix, rhs) == x


def test_singular_system():
    with pytest.raises(SingularityError):
        solve([[1, 2, 3], [2, 4, 6], [0, 0, 1]], [1, 2, 3])


def test_null_vector_of_rank_two_matrix():
    matrix = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert det3([[QuadExtScalar(v) for v in row] for row in matrix]) == 0
    vector = null_vector(matrix)
    for row in matrix:
        assert sum((QuadExtScalar(m) * v for m, v in zip(row, vector)), QuadExtScalar(0)) == 0
    assert any(vector)


@pytest.mark.parametrize("func", [QuadExtScalar.__init__, QuadExtScalar.sqrt, QuadExtScalar.inverse, det3, solve, null_vector])
def test_signatures_are_plain(func):
    assert func.__annotations__ == {}
