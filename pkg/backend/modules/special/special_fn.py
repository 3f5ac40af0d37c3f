"""
Função gama e função hipergeométrica de Gauss 2F1 para argumentos reais.

A série de 2F1 é somada diretamente para x moderado; perto de x=1 usa-se a
fórmula de conexão em 1-x (quando c-a-b não é inteiro) ou a transformação de
Euler. Séries terminantes (a ou b inteiro não positivo) são somadas de forma
exata, em Fraction quando todos os argumentos são racionais.
"""
import math
import numbers
from fractions import Fraction

import attr

from ..core.config import DEFAULT_CONFIG
from ..core.errors import ConvergenceError, DomainError
from ..core.utils import get_logger

logger = get_logger('special')

# Coeficientes de Lanczos (g = 7, n = 9)
_LANCZOS_G = 7.0
_LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


def _is_nonpositive_integer(value):
    if isinstance(value, numbers.Rational):
        return Fraction(value).denominator == 1 and value <= 0
    if isinstance(value, float):
        return value <= 0 and value.is_integer()
    return False


def _sin_pi(x):
    # Reduz módulo 2 antes de multiplicar por pi: a subtração de inteiros é exata
    reduced = x - 2.0 * round(x / 2.0)
    return math.sin(math.pi * reduced)


def _lanczos_gamma(x):
    # Válido para x >= 0.5
    x -= 1.0
    series = _LANCZOS_COEFFICIENTS[0]
    for i in range(1, len(_LANCZOS_COEFFICIENTS)):
        series += _LANCZOS_COEFFICIENTS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    if x < 140.0:
        return _SQRT_TWO_PI * math.pow(t, x + 0.5) * math.exp(-t) * series
    return math.exp(math.log(_SQRT_TWO_PI * series) + (x + 0.5) * math.log(t) - t)


def gamma(x):
    """
    Função gama real, aproximação de Lanczos com reflexão para x < 1/2.

    Args:
        x (float): Argumento real

    Returns:
        float: Gamma(x)

    Raises:
        DomainError: Se x é um inteiro não positivo (polo)
    """
    x = float(x)
    if _is_nonpositive_integer(x):
        raise DomainError(f"Polo da função gama em x={x}")
    if x < 0.5:
        return math.pi / (_sin_pi(x) * _lanczos_gamma(1.0 - x))
    if x.is_integer() and x <= 171:
        return float(math.factorial(int(x) - 1))
    return _lanczos_gamma(x)


def rgamma(x):
    """Recíproca 1/Gamma(x), igual a zero nos polos."""
    if _is_nonpositive_integer(float(x)):
        return 0.0
    return 1.0 / gamma(x)


def pochhammer(value, n):
    """
    Símbolo de Pochhammer (value)_n = value (value+1) ... (value+n-1).

    Exato quando `value` é int ou Fraction.
    """
    result = Fraction(1) if isinstance(value, numbers.Rational) else 1.0
    for k in range(n):
        result *= value + k
    return result


@attr.s(auto_attribs=True, frozen=True)
class HypergeometricParams:
    """Parâmetros (a, b; c) de 2F1; `exact` marca parâmetros racionais exatos."""

    a: object
    b: object
    c: object
    exact: bool = False

    def __attrs_post_init__(self):
        if _is_nonpositive_integer(self.c) and not self._terminates_before_pole():
            raise DomainError(f"c={self.c} é inteiro não positivo (polo da série)")

    def _terminates_before_pole(self):
        degree = self.terminating_degree()
        return degree is not None and degree < -int(self.c)

    def terminating_degree(self):
        """Grau n do polinômio quando a ou b vale -n; None caso contrário."""
        degrees = []
        for value in (self.a, self.b):
            if isinstance(value, numbers.Rational) and Fraction(value).denominator == 1 and value <= 0:
                degrees.append(-int(value))
            elif self.exact and isinstance(value, float) and value <= 0 and value.is_integer():
                degrees.append(-int(value))
        return min(degrees) if degrees else None

    def shifted(self, m=1):
        """Parâmetros (a+m, b+m; c+m) da m-ésima derivada."""
        return HypergeometricParams(self.a + m, self.b + m, self.c + m, self.exact)

    @property
    def excess(self):
        """c - a - b."""
        return self.c - self.a - self.b


def _settings(config):
    config = config or DEFAULT_CONFIG
    return (
        config.get('series_tolerance', DEFAULT_CONFIG['series_tolerance']),
        config.get('series_max_terms', DEFAULT_CONFIG['series_max_terms']),
        config.get('one_minus_x_switch', DEFAULT_CONFIG['one_minus_x_switch']),
    )


def polynomial_coefficients(params):
    """
    Coeficientes (a)_k (b)_k / ((c)_k k!) do polinômio terminante.

    Args:
        params (HypergeometricParams): Parâmetros com a ou b inteiro não positivo

    Returns:
        list: Coeficientes, exatos se os parâmetros forem racionais
    """
    degree = params.terminating_degree()
    if degree is None:
        raise DomainError("A série não termina: nem a nem b é inteiro não positivo")
    exact = all(isinstance(v, numbers.Rational) for v in (params.a, params.b, params.c))
    coefficient = Fraction(1) if exact else 1.0
    coefficients = [coefficient]
    for k in range(degree):
        coefficient = coefficient * (params.a + k) * (params.b + k) / ((params.c + k) * (k + 1))
        coefficients.append(coefficient)
    return coefficients


def _polynomial_value(params, x):
    value = 0
    for coefficient in reversed(polynomial_coefficients(params)):
        value = value * x + coefficient
    return value


def _direct_series(a, b, c, x, tolerance, max_terms):
    term = 1.0
    total = 1.0
    peak = 1.0
    small = 0
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x
        total += term
        peak = max(peak, abs(term))
        if abs(term) <= tolerance * max(abs(total), 1e-3 * peak):
            small += 1
            if small >= 3:
                return total, True
        else:
            small = 0
    return total, False


def _connection_one_minus_x(params, x, tolerance, max_terms):
    a, b, c = float(params.a), float(params.b), float(params.c)
    s = c - a - b
    y = 1.0 - x
    first_factor = gamma(c) * gamma(s) * rgamma(c - a) * rgamma(c - b)
    second_factor = gamma(c) * gamma(-s) * rgamma(a) * rgamma(b)
    total = 0.0
    converged = True
    if first_factor != 0.0:
        value, ok = _direct_series(a, b, 1.0 - s, y, tolerance, max_terms)
        total += first_factor * value
        converged &= ok
    if second_factor != 0.0:
        value, ok = _direct_series(c - a, c - b, 1.0 + s, y, tolerance, max_terms)
        total += second_factor * math.pow(y, s) * value
        converged &= ok
    return total, converged


def _check_argument(x):
    if not 0 <= x < 1:
        raise DomainError(f"x={x} fora de [0, 1)")


def hyp2f1(params, x, config=None):
    """
    Avalia 2F1(a, b; c; x) para 0 <= x < 1.

    Args:
        params (HypergeometricParams): Parâmetros (a, b; c)
        x (float | Fraction): Argumento em [0, 1)
        config (dict, optional): Tolerância, limite de termos e ponto de troca para 1-x

    Returns:
        float | Fraction: Valor da função (Fraction para polinômios racionais em x racional)

    Raises:
        DomainError: Argumento fora de [0, 1)
        ConvergenceError: Série não convergiu e nenhuma transformação se aplica
    """
    _check_argument(x)
    if params.terminating_degree() is not None:
        return _polynomial_value(params, x)
    tolerance, max_terms, switch = _settings(config)
    a, b, c = float(params.a), float(params.b), float(params.c)
    x = float(x)
    excess = c - a - b

    if x > switch and abs(excess - round(excess)) > 1e-3:
        value, converged = _connection_one_minus_x(params, x, tolerance, max_terms)
        if converged:
            return value

    value, converged = _direct_series(a, b, c, x, tolerance, max_terms)
    if converged:
        return value

    # Euler acelera o decaimento dos termos quando c - a - b < 0
    if excess < 0:
        value, converged = _direct_series(c - a, c - b, c, x, tolerance, max_terms)
        if converged:
            return math.pow(1.0 - x, excess) * value

    raise ConvergenceError(
        f"2F1({params.a}, {params.b}; {params.c}; {x}) não convergiu em {max_terms} termos"
    )


def euler_transform(params, x, config=None):
    """
    Lado direito da transformação de Euler: (1-x)^(c-a-b) 2F1(c-a, c-b; c; x).

    Args:
        params (HypergeometricParams): Parâmetros (a, b; c)
        x (float): Argumento em [0, 1)

    Returns:
        float: Valor, que coincide com hyp2f1(params, x)
    """
    _check_argument(x)
    transformed = HypergeometricParams(params.c - params.a, params.c - params.b, params.c, params.exact)
    if transformed.terminating_degree() is not None:
        return (1.0 - float(x)) ** float(params.excess) * float(_polynomial_value(transformed, x))
    return math.pow(1.0 - float(x), float(params.excess)) * hyp2f1(transformed, x, config)


def hyp2f1_at_one(params):
    """
    Soma de Gauss: 2F1(a, b; c; 1) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)).

    Args:
        params (HypergeometricParams): Parâmetros com Re(c-a-b) > 0

    Returns:
        float | Fraction: Valor em x=1 (exato para polinômios racionais)

    Raises:
        DomainError: Se Re(c-a-b) <= 0 (série divergente em x=1)
    """
    if params.terminating_degree() is not None:
        return _polynomial_value(params, Fraction(1) if params.exact else 1.0)
    excess = params.excess
    if float(excess.real if isinstance(excess, complex) else excess) <= 0:
        raise DomainError(f"Re(c-a-b)={excess} <= 0: 2F1 diverge em x=1")
    a, b, c = float(params.a), float(params.b), float(params.c)
    return gamma(c) * gamma(c - a - b) * rgamma(c - a) * rgamma(c - b)


def hyp2f1_derivative(params, x, order=1, config=None):
    """
    Derivada de ordem `order` em x: (a)_m (b)_m / (c)_m 2F1(a+m, b+m; c+m; x).

    Args:
        params (HypergeometricParams): Parâmetros (a, b; c)
        x (float): Argumento em [0, 1)
        order (int): Ordem m da derivada

    Returns:
        float: Valor da derivada
    """
    factor = pochhammer(params.a, order) * pochhammer(params.b, order) / pochhammer(params.c, order)
    if factor == 0:
        return 0.0
    return float(factor) * float(hyp2f1(params.shifted(order), x, config))
