"""
Mapas exatos da espiral logarítmica exp((1+ia)t), o caso kappa = 0.

Todas as potências complexas usam a representação em faixa
exp(c * Log xi(z)) com xi(z) = i(1-z)/(1+z) no semiplano superior, de modo
que nenhum corte de ramo cruza o círculo de integração.
"""
import cmath
import math
import warnings

import attr
import numpy as np
from scipy import integrate

from ..core.config import get_setting
from ..core.errors import DomainError, QuadratureError
from ..core.statistics import fit_loglog_slope
from ..core.utils import get_logger
from .spectrum_types import Branch, SpectrumResult

logger = get_logger('spiral')


@attr.s(auto_attribs=True, frozen=True)
class SpiralParams:
    a: float

    @property
    def exponent(self):
        """gamma = 2/(1-ia) = 2(1+ia)/(1+a^2)."""
        return 2.0 / (1.0 - 1j * self.a)


def _check_point(z):
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(1.0 - z) == 0) or np.any(np.abs(1.0 + z) == 0):
        raise DomainError("Phi não está definida em z = +1 ou z = -1")
    return z


def strip_log(z):
    """Log xi(z), xi = i(1-z)/(1+z); a parte imaginária fica em (0, pi) no disco."""
    z = _check_point(z)
    return np.log(1j * (1.0 - z) / (1.0 + z))


def log_phi(z, a):
    """log Phi(z) = (2/(1-ia)) Log xi(z)."""
    return SpiralParams(a).exponent * strip_log(z)


def log_phi_prime(z, a):
    """log Phi'(z) = Log(-4/(1-ia)) + log Phi(z) - Log(1-z^2)."""
    z = _check_point(z)
    return cmath.log(-4.0 / (1.0 - 1j * a)) + log_phi(z, a) - np.log(1.0 - z * z)


def phi(z, a):
    """
    Mapa conforme do disco no complementar da espiral completa.

    Args:
        z (complex): Ponto do disco, z != +-1
        a (float): Taxa da espiral

    Returns:
        complex: Phi(z) = (i(1-z)/(1+z))^(2/(1-ia))

    Raises:
        DomainError: Em z = +-1
    """
    return np.exp(log_phi(z, a))


def phi_prime(z, a):
    """Phi'(z) = -(4/(1-ia)) Phi(z)/(1-z^2)."""
    z = _check_point(z)
    return -(4.0 / (1.0 - 1j * a)) * phi(z, a) / (1.0 - z * z)


def half_spiral_map(z, a):
    """
    Mapa limite exato do condutor determinístico L_t = a t.

    Returns:
        tuple: (f0(z), f0'(z)) com f0(z) = z (1+cz)^(-gamma), c = (1-ia)/(1+ia),
            gamma = 2/(1-ia) e f0'(z) = (1-z)(1+cz)^(-gamma-1)
    """
    z = np.asarray(z, dtype=complex)
    c = (1.0 - 1j * a) / (1.0 + 1j * a)
    gamma_ = 2.0 / (1.0 - 1j * a)
    # Re(1 + cz) > 0 no disco: o ramo principal é contínuo
    log_base = np.log(1.0 + c * z)
    return z * np.exp(-gamma_ * log_base), (1.0 - z) * np.exp(-(gamma_ + 1.0) * log_base)


def spiral_beta_terms(p, q, a):
    """
    Termos beta1 e beta2 da espiral completa.

    Returns:
        tuple: (2Re((p-q)/(1-ia)) + Re p - 1, -2Re((p-q)/(1-ia)) + Re p - 1)
    """
    drift_term = 2.0 * (complex(p - q) / (1.0 - 1j * a)).real
    base = complex(p).real - 1.0
    return drift_term + base, -drift_term + base


def spiral_spectrum_complete(p, q, a):
    """sup{0, beta1, beta2} para a espiral completa, com o ramo que atinge o supremo."""
    beta1, beta2 = spiral_beta_terms(p, q, a)
    candidates = [(0.0, Branch.ZERO), (beta1, Branch.ONE), (beta2, Branch.TWO)]
    beta, branch = max(candidates, key=lambda item: item[0])
    return SpectrumResult(beta=beta, branch=branch, tau=(complex(p - q) / (1.0 - 1j * a)).real)


def spiral_spectrum_half(p, q, a):
    """sup{-Re p - 1, 0, beta1} para a meia espiral (kappa = 0)."""
    beta1, _ = spiral_beta_terms(p, q, a)
    candidates = [(-complex(p).real - 1.0, Branch.TIP), (0.0, Branch.ZERO), (beta1, Branch.ONE)]
    beta, branch = max(candidates, key=lambda item: item[0])
    return SpectrumResult(beta=beta, branch=branch, tau=(complex(p - q) / (1.0 - 1j * a)).real)


def _log_integrand(theta, p, q, a, r):
    z = r * np.exp(1j * theta)
    return (p * log_phi_prime(z, a)).real - (q * log_phi(z, a)).real


def spiral_integral_means(p, q, a, r, config=None):
    """
    Integral de |Phi'(z)^p / Phi(z)^q| |dz| sobre o círculo |z| = r.

    A quadratura adaptativa é feita em [0, pi] e [pi, 2pi], com os picos do
    integrando (z -> 1 e z -> -1) nas extremidades dos subintervalos.

    Args:
        p, q (complex): Expoentes
        a (float): Taxa da espiral
        r (float): Raio em (0, 1)
        config (dict, optional): Limite de subdivisões da quadratura

    Returns:
        float: Valor da integral

    Raises:
        DomainError: Raio fora de (0, 1)
        QuadratureError: Se a quadratura falha com estimativa de erro inaceitável
    """
    if not 0 < r < 1:
        raise DomainError(f"r={r} fora de (0, 1)")
    if p == 0 and q == 0:
        return 2.0 * math.pi * r
    limit = get_setting(config, 'quad_limit')

    # Normaliza pelo máximo do log para evitar overflow em expoentes grandes
    grid = np.linspace(0.0, 2.0 * math.pi, 721)
    shift = float(np.max(_log_integrand(grid, p, q, a, r)))

    def integrand(theta):
        return math.exp(float(_log_integrand(theta, p, q, a, r)) - shift)

    total, error = 0.0, 0.0
    for lower, upper in ((0.0, math.pi), (math.pi, 2.0 * math.pi)):
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', integrate.IntegrationWarning)
            value, abserr = integrate.quad(integrand, lower, upper, limit=limit, epsabs=0.0, epsrel=1e-10)
        total += value
        error += abserr
    if not np.isfinite(total) or error > 1e-6 * abs(total):
        raise QuadratureError(f"Quadratura falhou em r={r}: estimativa de erro {error:.3e} para valor {total:.3e}")
    return r * total * math.exp(shift)


def spiral_means_slope(p, q, a, radii, config=None):
    """
    Inclinação de log I(r) contra log 1/(1-r).

    Returns:
        SlopeFit: Ajuste por mínimos quadrados
    """
    radii = np.asarray(radii, dtype=float)
    values = [spiral_integral_means(p, q, a, r, config) for r in radii]
    logger.debug("Médias integrais da espiral: %s", values)
    return fit_loglog_slope(1.0 / (1.0 - radii), values)
