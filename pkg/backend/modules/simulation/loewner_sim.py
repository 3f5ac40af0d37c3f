"""
Integração da EDO radial reversa de Loewner com a derivada espacial.

Estado por ponto de prova: w = f~_t(z), ell = log f~'_t(z) e m = log(f~_t(z)/z),
acumulados continuamente para que potências complexas fiquem bem definidas.
A deriva determinística `a` é tratada exatamente num referencial girante
(w = e^{iat} w~), de modo que só a parte browniana/saltos do condutor
é congelada no valor do início de cada passo.
"""
import math

import attr
import numpy as np

from ..core.config import get_setting
from ..core.errors import BlowUpError, DomainError
from ..core.utils import get_logger

logger = get_logger('sim')


@attr.s(auto_attribs=True, frozen=True)
class MapSample:
    """Amostra do mapa limite: f ~ e^T f~_T(z) e fprime ~ e^T f~'_T(z)."""

    z: complex
    f: complex
    fprime: complex
    T: float
    log_fprime: complex = 0j
    log_f_over_z: complex = 0j

    def log_integrand(self, p, q):
        """log |f'(z)^p (z/f(z))^q| com os ramos acompanhados continuamente."""
        return float(np.real(p * self.log_fprime) - np.real(q * self.log_f_over_z))


@attr.s(auto_attribs=True)
class IntegrationResult:
    """Resultado vetorizado de integrate_batch."""

    z: np.ndarray
    log_fprime: np.ndarray
    log_f_over_z: np.ndarray
    alive: np.ndarray
    T: float

    @property
    def f(self):
        return self.z * np.exp(self.log_f_over_z)

    @property
    def fprime(self):
        return np.exp(self.log_fprime)

    def log_integrand(self, p, q):
        """Log do integrando |f'^p (z/f)^q| para cada ponto."""
        return np.real(p * self.log_fprime) - np.real(q * self.log_f_over_z)

    def exterior_log_integrand(self, p, q_prime):
        """
        Integrando do mapa exterior g(zeta) = 1/f(1/zeta) em zeta = 1/z.

        Igual ao integrando interior com expoentes (p, 2p - q').
        """
        return self.log_integrand(p, 2 * p - q_prime)


def _rhs(w, mu, drift):
    inv = 1.0 / (w - mu)
    dw = w * (w + mu) * inv
    if drift:
        dw = dw - 1j * drift * w
    dell = (w * w - 2.0 * w * mu - mu * mu) * inv * inv
    dm = (w + mu) * inv
    return dw, dell, dm


def _rk4(w, ell, m, mu, drift, h):
    k1 = _rhs(w, mu, drift)
    k2 = _rhs(w + 0.5 * h * k1[0], mu, drift)
    k3 = _rhs(w + 0.5 * h * k2[0], mu, drift)
    k4 = _rhs(w + h * k3[0], mu, drift)
    sixth = h / 6.0
    w = w + sixth * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
    ell = ell + sixth * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
    m = m + sixth * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
    return w, ell, m


def default_horizon(max_radius, config=None):
    """T = horizon_base + horizon_log_factor * log(1/(1 - max_radius))."""
    base = get_setting(config, 'horizon_base')
    factor = get_setting(config, 'horizon_log_factor')
    return base + factor * math.log(1.0 / (1.0 - max_radius))


def integrate_batch(z, phases, drift, dt, T, config=None, rows=None):
    """
    Integra o fluxo reverso para um vetor de pontos.

    Args:
        z (numpy.ndarray): Pontos de prova no disco aberto (formato (n,))
        phases (numpy.ndarray): Fase congelada theta0 + L_k - a t_k do condutor,
            formato (K+1,) (comum a todos) ou (P, K+1) (um caminho por linha)
        drift (float): Deriva determinística a
        dt (float): Passo do condutor
        T (float): Horizonte (T <= K dt)
        config (dict, optional): Subpassos mínimos/máximos, fração de passo e piso de singularidade
        rows (numpy.ndarray, optional): Linha de `phases` usada por cada ponto
            (padrão: ponto i usa a linha i)

    Returns:
        IntegrationResult: Logaritmos acumulados e máscara de trajetórias válidas
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("Todos os pontos de prova devem estar no disco aberto")
    phases = np.asarray(phases, dtype=float)
    per_point = phases.ndim == 2
    if per_point and rows is None:
        rows = np.arange(z.size)
    n_available = phases.shape[-1] - 1
    n_steps = int(math.ceil(T / dt - 1e-9))
    if n_steps > n_available:
        raise DomainError(f"Horizonte T={T} excede o caminho do condutor ({n_available * dt})")

    min_substeps = get_setting(config, 'min_substeps')
    max_substeps = get_setting(config, 'max_substeps')
    fraction = get_setting(config, 'substep_fraction')
    floor = get_setting(config, 'singularity_floor')

    w = z.copy()
    ell = np.zeros_like(z)
    m = np.zeros_like(z)
    alive = np.ones(z.shape, dtype=bool)

    for k in range(n_steps):
        step = min(dt, T - k * dt)
        if per_point:
            mu_all = np.exp(1j * phases[rows, k])
        else:
            mu_all = np.full(z.shape, np.exp(1j * phases[k]))
        remaining = np.where(alive, step, 0.0)
        iterations = np.zeros(z.shape, dtype=np.int64)
        while True:
            idx = np.nonzero(remaining > 1e-12 * dt)[0]
            if idx.size == 0:
                break
            wi, mu = w[idx], mu_all[idx]
            distance = np.abs(wi - mu)
            h = np.minimum(np.minimum(dt / min_substeps, fraction * distance ** 2), remaining[idx])
            wi, elli, mi = _rk4(wi, ell[idx], m[idx], mu, drift, h)
            w[idx], ell[idx], m[idx] = wi, elli, mi
            remaining[idx] -= h
            iterations[idx] += 1
            # Trajetórias que encostam no condutor ou saem do disco são descartadas
            bad = (
                (distance < floor)
                | ~np.isfinite(wi)
                | (np.abs(wi) >= 1.0)
                | (iterations[idx] > max_substeps)
            )
            if np.any(bad):
                dead = idx[bad]
                alive[dead] = False
                remaining[dead] = 0.0
                w[dead] = 0.0

    return IntegrationResult(
        z=z,
        log_fprime=T + ell,
        log_f_over_z=T + m,
        alive=alive,
        T=T,
    )


def frozen_phases(values, drift, dt, theta0=0.0):
    """
    Fase congelada theta0 + L_k - a t_k de caminhos empilhados.

    Args:
        values (numpy.ndarray): Valores L_k, formato (K+1,) ou (P, K+1)
        drift (float): Deriva a já contida em `values`
        dt (float): Passo
        theta0 (float): Rotação inicial
    """
    values = np.asarray(values, dtype=float)
    if not drift:
        return theta0 + values
    times = np.arange(values.shape[-1]) * dt
    return theta0 + (values - drift * times)


def driver_phases(path):
    """Fase congelada de um DriverPath."""
    return frozen_phases(path.values, path.drift, path.dt, path.theta0)


def evolve(driver, z, T, config=None):
    """
    Integra um ponto e devolve a amostra do mapa limite.

    Args:
        driver (DriverPath): Caminho condutor
        z (complex): Ponto no disco aberto
        T (float): Horizonte (<= horizonte do caminho)
        config (dict, optional): Configurações do integrador

    Returns:
        MapSample: (e^T f~_T(z), e^T f~'_T(z))

    Raises:
        BlowUpError: Se a trajetória atinge o piso de singularidade
    """
    result = evolve_batch(driver, [z], T, config)
    if not result.alive[0]:
        raise BlowUpError(f"Trajetória de z={z} atingiu a singularidade do condutor")
    return MapSample(
        z=complex(z),
        f=complex(result.f[0]),
        fprime=complex(result.fprime[0]),
        T=T,
        log_fprime=complex(result.log_fprime[0]),
        log_f_over_z=complex(result.log_f_over_z[0]),
    )


def evolve_batch(driver, zs, T, config=None):
    """Versão vetorizada de evolve para vários pontos com o mesmo condutor."""
    return integrate_batch(zs, driver_phases(driver), driver.drift, driver.dt, T, config)


def constant_driver_map(z, theta0=0.0):
    """
    Mapa limite exato para o condutor constante lambda = e^{i theta0}.

    Returns:
        tuple: (f0(z), f0'(z)) com f0(z) = e^{i theta0} w/(1+w)^2, w = e^{-i theta0} z
    """
    rotation = np.exp(1j * theta0)
    w = np.asarray(z, dtype=complex) / rotation
    return rotation * w / (1.0 + w) ** 2, (1.0 - w) / (1.0 + w) ** 3


def exterior_from_sample(sample, p, q_prime):
    """
    Integrando |g'(zeta)|^p |zeta/g(zeta)|^q' calculado diretamente de g(zeta) = 1/f(1/zeta).

    Usado para conferir a dualidade interior/exterior com expoentes reais.
    """
    zeta = 1.0 / sample.z
    g = 1.0 / sample.f
    gprime = sample.fprime / (sample.f ** 2 * zeta ** 2)
    return abs(gprime) ** p * abs(zeta / g) ** q_prime
