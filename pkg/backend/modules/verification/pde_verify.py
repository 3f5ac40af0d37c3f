"""
Operador de dois pontos P(D) e verificação das soluções exatas por resíduo.

Convenção de deriva: o transporte em z1 leva -ia e o de zbar2 leva +ia, de
modo que o gerador de Lévy é o do símbolo DriftedBrownian(kappa, -a).
"""
import cmath

import attr
import numpy as np

from ..analysis.lle_spectra import fourier_recursion_residual
from ..core.config import get_setting
from ..core.errors import DomainError
from ..core.utils import get_logger

logger = get_logger('pde')


@attr.s(auto_attribs=True, frozen=True)
class CandidateG:
    """G(z1, w) = (1-z1)^alpha (1-w)^conj(alpha) (1 - z1 w)^(-kappa |alpha|^2/2), w = zbar2."""

    alpha: complex
    kappa: float
    a: float = 0.0

    @property
    def K(self):
        return 0.5 * self.kappa * abs(self.alpha) ** 2

    def log_value(self, z1, w):
        alpha = complex(self.alpha)
        return alpha * cmath.log(1.0 - z1) + alpha.conjugate() * cmath.log(1.0 - w) - self.K * cmath.log(1.0 - z1 * w)

    def value(self, z1, w):
        return cmath.exp(self.log_value(z1, w))

    def log_derivatives(self, z1, w):
        """
        Derivadas de L = log G.

        Returns:
            dict: d1, d2, d11, d22, d12
        """
        alpha = complex(self.alpha)
        alpha_bar = alpha.conjugate()
        K = self.K
        u, v, s = 1.0 - z1, 1.0 - w, 1.0 - z1 * w
        return {
            'd1': -alpha / u + K * w / s,
            'd2': -alpha_bar / v + K * z1 / s,
            'd11': -alpha / u ** 2 + K * w * w / s ** 2,
            'd22': -alpha_bar / v ** 2 + K * z1 * z1 / s ** 2,
            'd12': K / s ** 2,
        }


def check_margin(z1, w, margin):
    distance = min(abs(1.0 - z1), abs(1.0 - w), abs(1.0 - z1 * w))
    if distance < margin:
        raise DomainError(f"Ponto ({z1}, {w}) a {distance:.3e} das singularidades (margem {margin})")


def abc_coefficients(alpha, p, q, params):
    """
    Coeficientes de P(d)(1-z)^alpha = A (1-z)^alpha + B (1-z)^(alpha-1) + C (1-z)^(alpha-2).

    Returns:
        tuple: (A, B, C) complexos, com A + B + C = 0
    """
    kappa, a = params.kappa, params.a
    A = -0.5 * kappa * alpha ** 2 + (1.0 - 1j * a) * alpha + p - q
    B = kappa * alpha ** 2 - (0.5 * kappa + 3.0 - 1j * a) * alpha + q
    C = -0.5 * kappa * alpha ** 2 + (2.0 + 0.5 * kappa) * alpha - p
    return complex(A), complex(B), complex(C)


def single_operator(alpha, p, q, params, z):
    """
    P(d)(1-z)^alpha com derivadas analíticas:
    -kappa/2 (z d)^2 + ((z+1)/(z-1) - ia) z d + p - q + q/(1-z) - p/(1-z)^2.
    """
    kappa, a = params.kappa, params.a
    f = cmath.exp(alpha * cmath.log(1.0 - z))
    f1 = -alpha * f / (1.0 - z)
    f2 = alpha * (alpha - 1.0) * f / (1.0 - z) ** 2
    euler = z * f1
    euler2 = z * f1 + z * z * f2
    return (
        -0.5 * kappa * euler2
        + ((z + 1.0) / (z - 1.0) - 1j * a) * euler
        + (p - q + q / (1.0 - z) - p / (1.0 - z) ** 2) * f
    )


def _operator_over_g(candidate, p, q, params, z1, w, derivatives):
    d = derivatives
    # Operadores de Euler divididos por G
    e1 = z1 * d['d1']
    e2 = w * d['d2']
    e11 = z1 * d['d1'] + z1 * z1 * (d['d11'] + d['d1'] ** 2)
    e22 = w * d['d2'] + w * w * (d['d22'] + d['d2'] ** 2)
    e12 = z1 * w * (d['d12'] + d['d1'] * d['d2'])
    p_bar, q_bar = complex(p).conjugate(), complex(q).conjugate()
    a = params.a
    return (
        -0.5 * params.kappa * (e11 - 2.0 * e12 + e22)
        + ((z1 + 1.0) / (z1 - 1.0) - 1j * a) * e1
        + ((w + 1.0) / (w - 1.0) + 1j * a) * e2
        + p - q + p_bar - q_bar
        - p / (1.0 - z1) ** 2 + q / (1.0 - z1)
        - p_bar / (1.0 - w) ** 2 + q_bar / (1.0 - w)
    )


def residual(candidate, p, q, params, z1, z2bar, config=None):
    """
    P(D)G no ponto (z1, zbar2) a partir das derivadas logarítmicas fechadas.

    Args:
        candidate (CandidateG): Função candidata
        p, q (complex): Expoentes
        params (SleParams): (kappa, a)
        z1, z2bar (complex): Ponto de avaliação
        config (dict, optional): Margem de avaliação

    Returns:
        complex: Resíduo

    Raises:
        DomainError: Ponto a menos da margem de 1-z1, 1-zbar2 ou 1-z1 zbar2
    """
    check_margin(z1, z2bar, get_setting(config, 'evaluation_margin'))
    ratio = _operator_over_g(candidate, p, q, params, z1, z2bar, candidate.log_derivatives(z1, z2bar))
    return ratio * candidate.value(z1, z2bar)


def residual_finite_difference(candidate, p, q, params, z1, z2bar, step=1e-5, config=None):
    """Mesmo resíduo com derivadas por diferenças centrais de log G."""
    check_margin(z1, z2bar, get_setting(config, 'evaluation_margin'))
    h = step
    L = candidate.log_value

    derivatives = {
        'd1': (L(z1 + h, z2bar) - L(z1 - h, z2bar)) / (2 * h),
        'd2': (L(z1, z2bar + h) - L(z1, z2bar - h)) / (2 * h),
        'd11': (L(z1 + h, z2bar) - 2 * L(z1, z2bar) + L(z1 - h, z2bar)) / h ** 2,
        'd22': (L(z1, z2bar + h) - 2 * L(z1, z2bar) + L(z1, z2bar - h)) / h ** 2,
        'd12': (
            L(z1 + h, z2bar + h) - L(z1 + h, z2bar - h) - L(z1 - h, z2bar + h) + L(z1 - h, z2bar - h)
        ) / (4 * h * h),
    }
    ratio = _operator_over_g(candidate, p, q, params, z1, z2bar, derivatives)
    return ratio * candidate.value(z1, z2bar)


def apply_generator(symbol, monomials):
    """
    Ação modo a modo do gerador de Lévy: Lambda(z^k zbar^l) = -eta(k - l) z^k zbar^l.

    Args:
        symbol (LevySymbol): Símbolo
        monomials (dict): {(k, l): coeficiente}

    Returns:
        dict: {(k, l): -eta(k - l) * coeficiente}
    """
    return {(k, l): -complex(symbol.eta(float(k - l))) * coefficient for (k, l), coefficient in monomials.items()}


def levy_mode_residual(table, symbol, xi_grid):
    """
    Norma máxima do resíduo da recursão de Fourier por modo |n| <= N,
    com eta_n tomado do símbolo.

    Returns:
        dict: {n: max |resíduo| sobre a grade}
    """
    if table.truncation < 1:
        raise DomainError("A tabela precisa de pelo menos theta_0 e theta_1")
    N = table.truncation
    eta_values = {n: float(np.real(symbol.eta(float(n)))) for n in range(1, N + 2)}
    with_symbol = table.with_eta(eta_values)
    return {
        n: max(abs(fourier_recursion_residual(with_symbol, n, float(xi))) for xi in xi_grid)
        for n in range(-N, N + 1)
    }


def residual_report(candidate, p, q, params, points, config=None):
    """
    Relatório JSON dos resíduos em uma lista de pontos (z1, zbar2).

    Returns:
        dict: Resíduos relativos por ponto, norma máxima e parâmetros
    """
    entries = []
    for z1, z2bar in points:
        value = residual(candidate, p, q, params, z1, z2bar, config)
        relative = abs(value) / abs(candidate.value(z1, z2bar))
        entries.append({'z1': [z1.real, z1.imag], 'z2bar': [z2bar.real, z2bar.imag], 'relative_residual': relative})
    max_norm = max((entry['relative_residual'] for entry in entries), default=0.0)
    logger.info("Resíduo relativo máximo de P(D)G: %.3e em %d pontos", max_norm, len(entries))
    return {
        'alpha': [complex(candidate.alpha).real, complex(candidate.alpha).imag],
        'kappa': params.kappa,
        'a': params.a,
        'p': [complex(p).real, complex(p).imag],
        'q': [complex(q).real, complex(q).imag],
        'points': entries,
        'max_relative_residual': max_norm,
    }
