"""
Tabelas de Fourier theta_n(xi) da função de dois pontos de LLE em p = 2,
recursão entre modos, médias integrais e o caso eta_2 = 4 - q.

h(z, zbar) = sum_n theta_n(xi) z^n com xi = |z|^2 e theta_{-n} = xi^n theta_n.
"""
import math

import attr
import numpy as np
from scipy import interpolate

from ..core.errors import DomainError
from ..core.statistics import fit_loglog_slope
from ..core.utils import get_logger
from ..special.special_fn import (
    HypergeometricParams,
    gamma,
    hyp2f1,
    hyp2f1_at_one,
    hyp2f1_derivative,
    rgamma,
)

logger = get_logger('lle')

# Janela de r^2 usada nos ajustes de inclinação das tabelas
SLOPE_WINDOW = (1.0 - 1e-3, 1.0 - 1e-4)


@attr.s(auto_attribs=True)
class FourierMode:
    """theta_n e sua derivada; sem derivada analítica usa-se um spline cúbico."""

    value: object
    derivative: object = None

    def __call__(self, xi):
        return self.value(xi)

    def prime(self, xi):
        if self.derivative is None:
            self.derivative = _spline_derivative(self.value)
        return self.derivative(xi)


def _spline_derivative(func, upper=0.999, size=4001):
    grid = np.linspace(0.0, upper, size)
    spline = interpolate.CubicSpline(grid, [func(x) for x in grid])
    derivative = spline.derivative()
    return lambda xi: float(derivative(xi))


def zero_mode():
    return FourierMode(lambda xi: 0.0, lambda xi: 0.0)


@attr.s(auto_attribs=True)
class FourierTable:
    """
    Coeficientes theta_0..theta_N truncados (theta_n = 0 para n > N).

    `eta` guarda os valores do símbolo eta_n para n = 0..N.
    """

    q: float
    eta: dict
    modes: list
    label: str = ''

    def __attrs_post_init__(self):
        if not self.modes:
            raise DomainError("A tabela de Fourier precisa de pelo menos theta_0")
        theta0 = self.modes[0](0.0)
        if theta0 != 0 and abs(theta0 - 1.0) > 1e-9:
            raise DomainError(f"theta_0(0) = {theta0}, esperado 1")

    @property
    def truncation(self):
        return len(self.modes) - 1

    def eta_of(self, n):
        n = abs(n)
        if n == 0:
            return 0.0
        if n not in self.eta:
            raise DomainError(f"eta_{n} ausente da tabela")
        return float(np.real(self.eta[n]))

    def theta(self, n, xi):
        if n < 0:
            return xi ** (-n) * self.theta(-n, xi)
        if n > self.truncation:
            return 0.0
        return self.modes[n](xi)

    def theta_prime(self, n, xi):
        if n < 0:
            m = -n
            return m * xi ** (m - 1) * self.theta(m, xi) + xi ** m * self.theta_prime(m, xi)
        if n > self.truncation:
            return 0.0
        return self.modes[n].prime(xi)

    def with_eta(self, eta):
        return attr.evolve(self, eta=dict(eta))


def fourier_recursion_residual(table, n, xi):
    """
    Lado esquerdo da equação do n-ésimo modo de Fourier.

    2 xi (xi-1) theta_n' - (eta_n + n + (eta_n + 2q - n - 6) xi) theta_n
        + xi (eta_n + n + q - 2) theta_{n+1} + (eta_n - n + q - 2) theta_{n-1}

    Args:
        table (FourierTable): Tabela com theta_{n-1}, theta_n, theta_{n+1}
        n (int): Modo
        xi (float): Ponto em [0, 1)

    Returns:
        float: Resíduo (zero para soluções exatas)
    """
    eta_n = table.eta_of(n)
    q = table.q
    return (
        2.0 * xi * (xi - 1.0) * table.theta_prime(n, xi)
        - (eta_n + n + (eta_n + 2.0 * q - n - 6.0) * xi) * table.theta(n, xi)
        + xi * (eta_n + n + q - 2.0) * table.theta(n + 1, xi)
        + (eta_n - n + q - 2.0) * table.theta(n - 1, xi)
    )


def integral_means_from_table(table, r):
    """I(r)/2pi = (1 + r^2) theta_0(r^2) - 2 r^2 theta_1(r^2)."""
    if not 0 < r < 1:
        raise DomainError(f"r={r} fora de (0, 1)")
    x = r * r
    return (1.0 + x) * table.theta(0, x) - 2.0 * x * table.theta(1, x)


def integral_means_slope(table, r2_values=None):
    """
    Inclinação de log I contra log 1/(1 - r^2).

    Args:
        table (FourierTable): Tabela resolvida
        r2_values (array, optional): Valores de r^2 (padrão: 5 pontos na janela de ajuste)

    Returns:
        SlopeFit: Ajuste por mínimos quadrados
    """
    if r2_values is None:
        r2_values = 1.0 - np.geomspace(1.0 - SLOPE_WINDOW[0], 1.0 - SLOPE_WINDOW[1], 5)
    r2_values = np.asarray(r2_values, dtype=float)
    values = [integral_means_from_table(table, math.sqrt(x)) for x in r2_values]
    return fit_loglog_slope(1.0 / (1.0 - r2_values), values)


# Soluções algébricas em eta_1 = 3 - q e eta_1 = 1 - q

def closed_form_table(case, q):
    """
    Tabelas fechadas das duas retas integráveis.

    Args:
        case (str): 'eta1_3mq' (theta_0 = (1-xi)^-(3-q), theta_n = 0 para n >= 1)
            ou 'eta1_1mq' (theta_0 = (1+xi)(1-xi)^-(4-q), theta_1 = -2/(2-q) (1-xi)^-(4-q))
        q (float): Expoente

    Returns:
        FourierTable: Tabela com derivadas analíticas
    """
    if case == 'eta1_3mq':
        if q >= 3:
            raise DomainError(f"eta_1 = 3 - q requer q < 3 (q={q})")
        delta = 3.0 - q
        theta0 = FourierMode(
            lambda xi: (1.0 - xi) ** -delta,
            lambda xi: delta * (1.0 - xi) ** (-delta - 1.0),
        )
        return FourierTable(q=q, eta={1: 3.0 - q}, modes=[theta0, zero_mode()], label=case)
    if case == 'eta1_1mq':
        if q > 1:
            raise DomainError(f"eta_1 = 1 - q requer q <= 1 (q={q})")
        delta = 4.0 - q
        factor = -2.0 / (2.0 - q)
        theta0 = FourierMode(
            lambda xi: (1.0 + xi) * (1.0 - xi) ** -delta,
            lambda xi: (1.0 - xi) ** -delta + delta * (1.0 + xi) * (1.0 - xi) ** (-delta - 1.0),
        )
        theta1 = FourierMode(
            lambda xi: factor * (1.0 - xi) ** -delta,
            lambda xi: factor * delta * (1.0 - xi) ** (-delta - 1.0),
        )
        return FourierTable(q=q, eta={1: 1.0 - q}, modes=[theta0, theta1], label=case)
    raise DomainError(f"Caso desconhecido: {case}")


# Caso eta_2 = 4 - q

def _snap_integer(value, tolerance=1e-10):
    nearest = round(value)
    if nearest <= 0 and abs(value - nearest) < tolerance:
        return int(nearest)
    return value


def z_4mq(q, eta1):
    """Z = eta_1^2 - 2(2-q)(eta_1 + q - 3) = (q-3)^2 + (eta_1 + q - 2)^2 - 1."""
    return eta1 * eta1 - 2.0 * (2.0 - q) * (eta1 + q - 3.0)


def check_domain_4mq(q, eta1):
    if q > 4 or eta1 < 1.0 - q / 4.0 - 1e-12:
        raise DomainError(f"(q, eta_1)=({q}, {eta1}) fora de D_(4-q): q <= 4, eta_1 >= 1 - q/4")


def beta_4mq(q, eta1):
    """beta(2, q) = 3 - q + (sqrt(Z) - eta_1)/2 em D_(4-q)."""
    check_domain_4mq(q, eta1)
    return 3.0 - q + 0.5 * (math.sqrt(max(z_4mq(q, eta1), 0.0)) - eta1)


def sle_line_beta(q):
    """Espectro na reta SLE eta_1 = 1 - q/4: 1 - q/4 para q >= 12/5 e 4 - 3q/2 abaixo."""
    if q >= 12.0 / 5.0:
        return 1.0 - 0.25 * q
    return 4.0 - 1.5 * q


@attr.s(auto_attribs=True)
class Solution4mq:
    """Solução hipergeométrica do ramo (+) com theta_j = (1-x)^(-delta) f_j."""

    q: float
    eta1: float
    delta: float
    beta: float
    params: object
    table: FourierTable
    asymptotic_constant: float = None

    @property
    def f0_degree(self):
        """Grau do polinômio f_0 quando a série termina; None caso contrário."""
        if self.params is None:
            return 0
        return self.params.terminating_degree()

    def to_dict(self):
        return {
            'q': self.q,
            'eta1': self.eta1,
            'delta': self.delta,
            'beta': self.beta,
            'asymptotic_constant': self.asymptotic_constant,
            'f0_degree': self.f0_degree,
        }


def _theta_modes(delta, f0, f0_prime, f1, f1_prime):
    def theta(f):
        return lambda x: (1.0 - x) ** -delta * f(x)

    def theta_prime(f, f_prime):
        return lambda x: delta * (1.0 - x) ** (-delta - 1.0) * f(x) + (1.0 - x) ** -delta * f_prime(x)

    return [
        FourierMode(theta(f0), theta_prime(f0, f0_prime)),
        FourierMode(theta(f1), theta_prime(f1, f1_prime)),
    ]


def _solve_q2(eta1, config):
    # Limite q -> 2: f_0 = 1, delta = 1
    k = (eta1 - 1.0) / (2.0 * eta1)
    s = (1.0 - eta1) / (1.0 + eta1)
    params = HypergeometricParams(1, _snap_integer(0.5 * (3.0 - eta1)), 0.5 * (3.0 + eta1))
    if k == 0:
        modes = _theta_modes(1.0, lambda x: 1.0, lambda x: 0.0, lambda x: 0.0, lambda x: 0.0)
        table = FourierTable(q=2.0, eta={1: eta1, 2: 2.0}, modes=modes, label='eta2_4mq')
        return Solution4mq(q=2.0, eta1=eta1, delta=1.0, beta=1.0, params=None, table=table, asymptotic_constant=2.0)

    def f1(x):
        return k * (1.0 - s * (1.0 - x) * float(hyp2f1(params, x, config)))

    def f1_prime(x):
        return k * s * (float(hyp2f1(params, x, config)) - (1.0 - x) * hyp2f1_derivative(params, x, 1, config))

    modes = _theta_modes(1.0, lambda x: 1.0, lambda x: 0.0, f1, f1_prime)
    table = FourierTable(q=2.0, eta={1: eta1, 2: 2.0}, modes=modes, label='eta2_4mq')
    return Solution4mq(
        q=2.0, eta1=eta1, delta=1.0, beta=1.0, params=None, table=table,
        asymptotic_constant=1.0 + 1.0 / eta1,
    )


def solve_4mq(q, eta1, config=None):
    """
    Resolve o sistema theta_0, theta_1 com eta_2 = 4 - q pelo ramo (+).

    f_0 = 2F1(a+, b+; c; x) com a+ = eta_1/2 - sqrt(Z)/2, b+ = 1/2 - sqrt(Z)/2,
    c = (1 + eta_1)/2, e f_1 = (a f_0 + (x-1) f_0')/(2-q). Em q = 2 usa as
    fórmulas-limite.

    Args:
        q (float): Expoente (<= 4)
        eta1 (float): eta(1) >= 1 - q/4
        config (dict, optional): Parâmetros da série hipergeométrica

    Returns:
        Solution4mq: delta+, tabela {theta_0, theta_1}, beta(2, q) e constante assintótica

    Raises:
        DomainError: Fora de D_(4-q)
    """
    check_domain_4mq(q, eta1)
    if abs(q - 2.0) < 1e-12:
        return _solve_q2(eta1, config)

    root = math.sqrt(max(z_4mq(q, eta1), 0.0))
    a = _snap_integer(0.5 * eta1 - 0.5 * root)
    b = _snap_integer(0.5 - 0.5 * root)
    c = 0.5 * (1.0 + eta1)
    params = HypergeometricParams(a, b, c)
    delta = 3.0 - q - float(a)
    denominator = 2.0 - q

    def f0(x):
        return float(hyp2f1(params, x, config))

    def f0_prime(x):
        return hyp2f1_derivative(params, x, 1, config)

    def f1(x):
        return (float(a) * f0(x) + (x - 1.0) * f0_prime(x)) / denominator

    def f1_prime(x):
        return ((float(a) + 1.0) * f0_prime(x) + (x - 1.0) * hyp2f1_derivative(params, x, 2, config)) / denominator

    table = FourierTable(
        q=q, eta={1: eta1, 2: 4.0 - q}, modes=_theta_modes(delta, f0, f0_prime, f1, f1_prime), label='eta2_4mq'
    )
    constant = None
    if root > 0:
        constant = 2.0 * (1.0 - float(a) / denominator) * float(hyp2f1_at_one(params))
    else:
        logger.warning("Z = 0 em (q, eta_1)=(%s, %s): constante assintótica indefinida", q, eta1)
    return Solution4mq(
        q=q, eta1=eta1, delta=delta, beta=3.0 - q + 0.5 * (root - eta1),
        params=params, table=table, asymptotic_constant=constant,
    )


def minus_branch_constant(q, eta1):
    """
    Constante assintótica calculada pelo ramo (-).

    2 (1 - (c - b-)/(2-q)) Gamma(c) Gamma(a- + b- - c) / (Gamma(a-) Gamma(b-)),
    que coincide com a do ramo (+).
    """
    check_domain_4mq(q, eta1)
    if abs(q - 2.0) < 1e-12:
        raise DomainError("minus_branch_constant requer q != 2")
    root = math.sqrt(max(z_4mq(q, eta1), 0.0))
    if root == 0:
        raise DomainError("minus_branch_constant requer Z > 0")
    a_minus = 0.5 * eta1 + 0.5 * root
    b_minus = 0.5 + 0.5 * root
    c = 0.5 * (1.0 + eta1)
    return (
        2.0 * (1.0 - (c - b_minus) / (2.0 - q))
        * gamma(c) * gamma(a_minus + b_minus - c) * rgamma(a_minus) * rgamma(b_minus)
    )


# Famílias algébricas (f_j polinomiais)

@attr.s(auto_attribs=True, frozen=True)
class AlgebraicFamily:
    """
    Curva de soluções polinomiais de grau n no plano (q, eta_1).

    kind 'hyperbola' (a+ = -n) ou 'ellipse' (b+ = -n, com sinal +1 ou -1).
    """

    kind: str
    n: int
    sign: int = 1
    q_window: tuple = (-math.inf, 4.0)

    def contains(self, q):
        return self.q_window[0] - 1e-12 <= q <= self.q_window[1] + 1e-12

    def eta1(self, q):
        if self.kind == 'hyperbola':
            return ((2.0 - q) * (3.0 - q) - 2.0 * self.n ** 2) / (2.0 - q + 2.0 * self.n)
        return 2.0 - q + self.sign * math.sqrt((2.0 * self.n + 1.0) ** 2 + (2.0 - q) * (q - 4.0))

    def beta(self, q):
        if self.kind == 'hyperbola':
            return 3.0 - q + self.n
        root = math.sqrt((2.0 * self.n + 1.0) ** 2 + (2.0 - q) * (q - 4.0))
        return 0.5 * (2.0 * self.n + 5.0 - q - self.sign * root)

    def point(self, q):
        if not self.contains(q):
            raise DomainError(f"q={q} fora da janela {self.q_window} da família {self.kind} n={self.n}")
        return self.eta1(q), self.beta(q)

    def to_dict(self):
        return attr.asdict(self)


def _ellipse_left(n):
    return 3.0 - math.sqrt((2.0 * n + 1.0) ** 2 + 1.0)


def algebraic_families_4mq(n):
    """
    Famílias de grau n: hipérbole a+ = -n e ramos da elipse b+ = -n.

    Janelas: hipérbole q <= 8/3 (n=0), q <= 0 (n=1), q <= 2 - 2n (n >= 2);
    elipse b+ = 0 apenas ramo (+) em [8/5, 16/5]; b+ = -n, n >= 1: (+) em
    [3 - sqrt((2n+1)^2 + 1), 4] e (-) em [3 - sqrt((2n+1)^2 + 1), min(8(1-n)/5, 4/3)].

    Returns:
        list: AlgebraicFamily
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"n={n} deve ser inteiro >= 0")
    n = int(n)
    if n == 0:
        hyperbola_max = 8.0 / 3.0
    elif n == 1:
        hyperbola_max = 0.0
    else:
        hyperbola_max = 2.0 - 2.0 * n
    families = [AlgebraicFamily('hyperbola', n, 1, (-math.inf, hyperbola_max))]
    if n == 0:
        families.append(AlgebraicFamily('ellipse', 0, 1, (8.0 / 5.0, 16.0 / 5.0)))
    else:
        left = _ellipse_left(n)
        families.append(AlgebraicFamily('ellipse', n, 1, (left, 4.0)))
        families.append(AlgebraicFamily('ellipse', n, -1, (left, min(1.6 * (1.0 - n), 4.0 / 3.0))))
    return families


def hyperbola_point(n, q):
    """(eta_1, beta) na hipérbole a+ = -n."""
    return algebraic_families_4mq(n)[0].point(q)


def ellipse_point(n, q, sign=1):
    """(eta_1, beta) na elipse b+ = -n, ramo `sign`."""
    for family in algebraic_families_4mq(n)[1:]:
        if family.sign == sign:
            return family.point(q)
    raise DomainError(f"A elipse b+ = -{n} não tem ramo {sign:+d}")
