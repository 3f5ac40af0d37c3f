"""
Símbolos de Lévy e amostragem de caminhos condutores t -> L_t.

Convenção: E[exp(i xi L_t)] = exp(-t eta(xi)). O condutor do simulador é
lambda(t) = exp(i (theta0 + L_t)).
"""
import math

import attr
import numpy as np

from ..core.errors import DomainError
from ..core.utils import get_logger, write_csv

logger = get_logger('levy')


class LevySymbol:
    """Classe base dos símbolos suportados."""

    kind = 'abstract'

    def eta(self, xi):
        raise NotImplementedError

    @property
    def eta1(self):
        """Parte real de eta(1)."""
        return float(np.real(self.eta(1.0)))

    @property
    def eta2(self):
        """Parte real de eta(2)."""
        return float(np.real(self.eta(2.0)))

    @property
    def is_deterministic(self):
        return False

    def sample_increments(self, rng, n_steps, dt):
        raise NotImplementedError

    def to_dict(self):
        data = attr.asdict(self)
        data['kind'] = self.kind
        return data


@attr.s(auto_attribs=True, frozen=True)
class DriftedBrownian(LevySymbol):
    """L_t = sqrt(kappa) B_t + a t."""

    kappa: float
    a: float = 0.0
    kind = 'drifted_brownian'

    def __attrs_post_init__(self):
        if self.kappa < 0:
            raise DomainError(f"kappa={self.kappa} deve ser >= 0")

    def eta(self, xi):
        return 0.5 * self.kappa * xi ** 2 - 1j * self.a * xi

    @property
    def is_deterministic(self):
        return self.kappa == 0

    def sample_increments(self, rng, n_steps, dt):
        increments = np.full(n_steps, self.a * dt)
        if self.kappa > 0:
            increments += math.sqrt(self.kappa * dt) * rng.standard_normal(n_steps)
        return increments


@attr.s(auto_attribs=True, frozen=True)
class SymmetricStable(LevySymbol):
    """Processo alfa-estável simétrico com eta(xi) = |xi|^alpha / 2."""

    alpha: float
    kind = 'symmetric_stable'

    def __attrs_post_init__(self):
        if not 0 < self.alpha <= 2:
            raise DomainError(f"alpha={self.alpha} fora de (0, 2]")

    def eta(self, xi):
        return 0.5 * np.abs(xi) ** self.alpha + 0j

    def sample_increments(self, rng, n_steps, dt):
        # Chambers-Mallows-Stuck com escala (dt/2)^(1/alpha)
        alpha = self.alpha
        scale = (0.5 * dt) ** (1.0 / alpha)
        phi = (rng.random(n_steps) - 0.5) * math.pi
        w = rng.standard_exponential(n_steps)
        if alpha == 2.0:
            return scale * 2.0 * np.sin(phi) * np.sqrt(w)
        if alpha == 1.0:
            return scale * np.tan(phi)
        return scale * (
            (np.cos((1.0 - alpha) * phi) / w) ** (1.0 / alpha - 1.0)
            * np.sin(alpha * phi)
            / np.cos(phi) ** (1.0 / alpha)
        )


@attr.s(auto_attribs=True, frozen=True)
class BrownianPlusOddPiJumps(LevySymbol):
    """sqrt(kappa) B_t mais saltos +-pi em chegadas de Poisson de intensidade `rate`."""

    kappa: float
    rate: float
    kind = 'brownian_plus_odd_pi_jumps'

    def __attrs_post_init__(self):
        if self.kappa < 0 or self.rate < 0:
            raise DomainError(f"kappa={self.kappa} e rate={self.rate} devem ser >= 0")

    def eta(self, xi):
        return 0.5 * self.kappa * xi ** 2 + self.rate * (1.0 - np.cos(math.pi * xi)) + 0j

    @property
    def is_deterministic(self):
        return self.kappa == 0 and self.rate == 0

    def sample_increments(self, rng, n_steps, dt):
        increments = np.zeros(n_steps)
        if self.kappa > 0:
            increments += math.sqrt(self.kappa * dt) * rng.standard_normal(n_steps)
        if self.rate > 0:
            counts = rng.poisson(self.rate * dt, n_steps)
            ups = rng.binomial(counts, 0.5)
            increments += math.pi * (2 * ups - counts)
        return increments


def eta(symbol, xi):
    """
    Avalia o símbolo de Lévy eta(xi).

    Args:
        symbol (LevySymbol): Símbolo
        xi (float | numpy.ndarray): Frequência(s)

    Returns:
        complex | numpy.ndarray: eta(xi)
    """
    return symbol.eta(xi)


def symbol_for_pair(eta1, eta2):
    """
    Constrói um processo simétrico com Re eta(1) = eta1 e Re eta(2) = eta2.

    Args:
        eta1 (float): Valor desejado de eta(1)
        eta2 (float): Valor desejado de eta(2)

    Returns:
        BrownianPlusOddPiJumps: kappa = eta2/2, rate = (eta1 - eta2/4)/2

    Raises:
        DomainError: Se eta1 >= eta2/4 >= 0 não vale
    """
    if not (eta2 >= 0 and eta1 >= eta2 / 4.0):
        raise DomainError(f"(eta1, eta2)=({eta1}, {eta2}) fora do cone eta1 >= eta2/4 >= 0")
    return BrownianPlusOddPiJumps(kappa=eta2 / 2.0, rate=(eta1 - eta2 / 4.0) / 2.0)


@attr.s(auto_attribs=True, frozen=True, eq=False)
class DriverPath:
    """
    Caminho discretizado L_{k dt}, k = 0..K, com rotação inicial theta0.

    `drift` guarda a parte determinística a*t já incluída em `values`, que o
    integrador trata de forma exata.
    """

    dt: float
    values: np.ndarray
    seed: int
    theta0: float = 0.0
    drift: float = 0.0

    @property
    def n_steps(self):
        return len(self.values) - 1

    @property
    def horizon(self):
        return self.n_steps * self.dt

    @property
    def times(self):
        return np.arange(len(self.values)) * self.dt

    def driver(self):
        """lambda(t_k) = exp(i (theta0 + L_{t_k}))."""
        return np.exp(1j * (self.theta0 + self.values))

    def to_csv(self, path, metadata=None):
        """
        Exporta o caminho para CSV (colunas t, L_t).

        Returns:
            tuple: (sucesso, caminho do arquivo ou mensagem de erro)
        """
        meta = {'dt': self.dt, 'seed': self.seed, 'theta0': self.theta0}
        meta.update(metadata or {})
        return write_csv(path, ['t', 'L_t'], zip(self.times.tolist(), self.values.tolist()), meta)


def n_steps_for(T, dt):
    """Número de passos K com K*dt >= T e K*dt < T + dt."""
    if dt <= 0 or T <= 0:
        raise DomainError(f"T={T} e dt={dt} devem ser positivos")
    if dt > T:
        raise DomainError(f"dt={dt} maior que o horizonte T={T}")
    return int(math.ceil(T / dt - 1e-9))


def _path_values(symbol, n_steps, dt, seed):
    if isinstance(symbol, DriftedBrownian) and symbol.kappa == 0:
        # Deriva determinística: evita acumular erro de arredondamento
        return symbol.a * (np.arange(n_steps + 1) * dt)
    if symbol.is_deterministic:
        return np.zeros(n_steps + 1)
    rng = np.random.default_rng(seed)
    values = np.empty(n_steps + 1)
    values[0] = 0.0
    np.cumsum(symbol.sample_increments(rng, n_steps, dt), out=values[1:])
    return values


def sample_path(symbol, T, dt, seed, theta0=0.0):
    """
    Amostra um caminho do processo de Lévy em uma grade uniforme.

    Args:
        symbol (LevySymbol): Símbolo do processo
        T (float): Horizonte
        dt (float): Passo de tempo
        seed (int): Semente de 64 bits (mesma semente -> caminho idêntico bit a bit)
        theta0 (float): Rotação inicial do condutor

    Returns:
        DriverPath: Caminho com values[0] = 0
    """
    n_steps = n_steps_for(T, dt)
    return DriverPath(
        dt=dt,
        values=_path_values(symbol, n_steps, dt, seed),
        seed=int(seed),
        theta0=theta0,
        drift=drift_of(symbol),
    )


def drift_of(symbol):
    """Deriva determinística a do símbolo (zero para processos simétricos)."""
    return float(getattr(symbol, 'a', 0.0))


def sample_paths(symbol, T, dt, seeds):
    """
    Amostra vários caminhos, um por semente, empilhados em uma matriz.

    Cada linha coincide bit a bit com sample_path(symbol, T, dt, seed).

    Returns:
        numpy.ndarray: Matriz (n_caminhos, K+1)
    """
    n_steps = n_steps_for(T, dt)
    return np.stack([_path_values(symbol, n_steps, dt, seed) for seed in seeds])
