"""
Aritmética exata em Q(sqrt(d)) e álgebra linear 3x3 sobre o corpo.
"""
import math
from fractions import Fraction

from ..core.errors import SingularityError
from ..core.utils import fraction_to_string


def _square_free(n):
    """Escreve n > 0 como s^2 * f com f livre de quadrados."""
    s, f = 1, 1
    p = 2
    while p * p <= n and p < 1_000_000:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            f *= p
        p += 1 if p == 2 else 2
    return s, f * n


class QuadExtScalar:
    """Elemento a + b sqrt(d) com a, b racionais e d inteiro livre de quadrados."""

    __slots__ = ('_a', '_b', '_d')

    def __init__(self, a, b=0, d=1):
        self._a = Fraction(a)
        self._b = Fraction(b)
        self._d = int(d)
        if self._d == 1:
            self._a, self._b = self._a + self._b, Fraction(0)

    @property
    def a(self):
        return self._a

    @property
    def b(self):
        return self._b

    @property
    def d(self):
        return self._d

    @classmethod
    def sqrt(cls, value):
        """Raiz quadrada exata de um racional não negativo."""
        value = Fraction(value)
        if value < 0:
            raise ValueError(f"Radicando negativo: {value}")
        if value == 0:
            return cls(0)
        # sqrt(n/m) = sqrt(n m)/m
        s, f = _square_free(value.numerator * value.denominator)
        return cls(0, Fraction(s, value.denominator), f) if f != 1 else cls(Fraction(s, value.denominator))

    @property
    def is_rational(self):
        return self._b == 0

    def _coerce(self, other):
        if isinstance(other, QuadExtScalar):
            if other._b != 0 and self._b != 0 and other._d != self._d:
                raise ValueError(f"Radicandos incompatíveis: {self._d} e {other._d}")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExtScalar(other, 0, self._d)
        return None

    def _field(self, other):
        return self._d if self._b != 0 else other._d

    def __repr__(self):
        return f"QuadExtScalar({self._a}, {self._b}, {self._d})"

    def __str__(self):
        if self._b == 0:
            return fraction_to_string(self._a)
        return f"{fraction_to_string(self._a)}{'+' if self._b > 0 else '-'}{fraction_to_string(abs(self._b))}*sqrt({self._d})"

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, float) else None
        if other is None:
            return NotImplemented
        return self._a == other._a and self._b == other._b

    def __hash__(self):
        return hash((self._a, self._b, self._d if self._b else 1))

    def __bool__(self):
        return self._a != 0 or self._b != 0

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadExtScalar(self._a + other._a, self._b + other._b, self._field(other))

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return QuadExtScalar(-self._a, -self._b, self._d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = self._field(other)
        return QuadExtScalar(
            self._a * other._a + d * self._b * other._b,
            self._a * other._b + self._b * other._a,
            d,
        )

    def __rmul__(self, other):
        return self * other

    def conjugate(self):
        return QuadExtScalar(self._a, -self._b, self._d)

    @property
    def norm(self):
        return self._a * self._a - self._d * self._b * self._b

    def inverse(self):
        norm = self.norm
        if norm == 0:
            raise ZeroDivisionError("Divisão por zero em Q(sqrt(d))")
        return QuadExtScalar(self._a / norm, -self._b / norm, self._d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QuadExtScalar(Fraction(other), 0, self._d) * self.inverse()

    def __float__(self):
        return float(self._a) + float(self._b) * math.sqrt(self._d)

    def is_integer(self):
        return self._b == 0 and self._a.denominator == 1


def as_scalar(value):
    return value if isinstance(value, QuadExtScalar) else QuadExtScalar(value)


def det3(matrix):
    """Determinante 3x3 por cofatores."""
    (a, b, c), (d, e, f), (g, h, i) = matrix
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def mat_vec(matrix, vector):
    return [sum((entry * component for entry, component in zip(row, vector)), QuadExtScalar(0)) for row in matrix]


def mat_sub_scalar(matrix, value):
    """matrix - value * Id."""
    return [[entry - value if i == j else entry for j, entry in enumerate(row)] for i, row in enumerate(matrix)]


def solve(matrix, rhs):
    """
    Resolve matrix x = rhs por Gauss-Jordan exato.

    Raises:
        SingularityError: Matriz sem pivô não nulo
    """
    n = len(matrix)
    rows = [[as_scalar(v) for v in row] + [as_scalar(r)] for row, r in zip(matrix, rhs)]
    for i in range(n):
        pivot = next((j for j in range(i, n) if rows[j][i]), None)
        if pivot is None:
            raise SingularityError("Sistema linear singular")
        rows[i], rows[pivot] = rows[pivot], rows[i]
        inv = rows[i][i].inverse()
        rows[i] = [v * inv for v in rows[i]]
        for j in range(n):
            if j != i and rows[j][i]:
                factor = rows[j][i]
                rows[j] = [v - factor * w for v, w in zip(rows[j], rows[i])]
    return [row[n] for row in rows]


def null_vector(matrix):
    """Vetor não nulo do núcleo de uma matriz 3x3 de posto 2."""
    n = len(matrix)
    rows = [[as_scalar(v) for v in row] for row in matrix]
    pivots = []
    r = 0
    for col in range(n):
        pivot = next((j for j in range(r, n) if rows[j][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for j in range(n):
            if j != r and rows[j][col]:
                factor = rows[j][col]
                rows[j] = [v - factor * w for v, w in zip(rows[j], rows[r])]
        pivots.append(col)
        r += 1
    free = [col for col in range(n) if col not in pivots]
    if not free:
        raise SingularityError("Matriz invertível: núcleo trivial")
    vector = [QuadExtScalar(0)] * n
    vector[free[0]] = QuadExtScalar(1)
    for row, col in zip(rows, pivots):
        vector[col] = -row[free[0]]
    return vector
