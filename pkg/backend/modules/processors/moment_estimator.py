import math
import time
from concurrent.futures import ThreadPoolExecutor, as_completed

import attr
import numpy as np
from tqdm import tqdm

from ..core.config import DEFAULT_CONFIG
from ..core.errors import DomainError, QualityError
from ..core.statistics import RunningMoments, fit_loglog_slope
from ..core.utils import get_logger, mix64, resolve_threads, write_csv, write_json
from ..simulation.levy_driving import drift_of, n_steps_for, sample_paths
from ..simulation.loewner_sim import default_horizon, frozen_phases, integrate_batch

logger = get_logger('estimator')


@attr.s(auto_attribs=True, frozen=True)
class PointwiseEstimate:
    """Média empírica de |f'(z)^p (z/f(z))^q| e seu erro padrão."""

    mean: float
    stderr: float
    n_samples: int
    n_discarded: int = 0

    def __iter__(self):
        return iter((self.mean, self.stderr))


@attr.s(auto_attribs=True, eq=False)
class MomentEstimate:
    """Estimativas M_hat(r) das integrais sobre círculos, uma por raio."""

    p: complex
    q: complex
    r_grid: np.ndarray
    M_hat: np.ndarray
    stderr: np.ndarray
    n_samples: int
    n_discarded: np.ndarray = None
    metadata: dict = attr.Factory(dict)

    def to_dict(self):
        return {
            'p': complex(self.p),
            'q': complex(self.q),
            'r': np.asarray(self.r_grid).tolist(),
            'M_hat': np.asarray(self.M_hat).tolist(),
            'stderr': np.asarray(self.stderr).tolist(),
            'n_samples': int(self.n_samples),
            'n_discarded': [] if self.n_discarded is None else np.asarray(self.n_discarded).tolist(),
        }

    def to_csv(self, path):
        """
        Exporta as colunas (r, M_hat, stderr) com os parâmetros no cabeçalho.

        Returns:
            tuple: (sucesso, caminho do arquivo ou mensagem de erro)
        """
        rows = zip(
            np.asarray(self.r_grid).tolist(),
            np.asarray(self.M_hat).tolist(),
            np.asarray(self.stderr).tolist(),
        )
        return write_csv(path, ['r', 'M_hat', 'stderr'], rows, self.metadata)

    def to_json(self, path):
        return write_json(path, self.to_dict(), self.metadata)


@attr.s(auto_attribs=True, frozen=True)
class BetaEstimate:
    beta_hat: float
    ci: tuple
    estimate: MomentEstimate
    n_fit_points: int


class MomentEstimator:
    def __init__(self, config=None):
        """
        Inicializa o estimador Monte Carlo de momentos e espectros.

        Args:
            config (dict, optional): Configurações (passo, horizonte, quadratura
                angular, controle de qualidade, lotes e threads)
        """
        self.config = config if config is not None else DEFAULT_CONFIG.copy()

    def _setting(self, key):
        value = self.config.get(key, DEFAULT_CONFIG[key])
        return DEFAULT_CONFIG[key] if value is None else value

    def theta_count(self, r):
        """Número de ângulos da regra do trapézio no círculo de raio r."""
        n_theta = int(self._setting('n_theta'))
        if self._setting('adaptive_theta'):
            n_theta = max(n_theta, int(math.ceil(self._setting('theta_per_gap') / (1.0 - r))))
            n_theta = min(n_theta, int(self._setting('max_theta')))
        return n_theta

    def circle_points(self, r_grid):
        """
        Pontos e pesos da quadratura angular para todos os raios.

        Returns:
            tuple: (pontos, pesos r*2pi/n_theta, índices de início de cada raio)
        """
        points, weights, starts = [], [], []
        offset = 0
        for r in r_grid:
            n_theta = self.theta_count(r)
            angles = 2.0 * np.pi * np.arange(n_theta) / n_theta
            points.append(r * np.exp(1j * angles))
            weights.append(np.full(n_theta, r * 2.0 * np.pi / n_theta))
            starts.append(offset)
            offset += n_theta
        return np.concatenate(points), np.concatenate(weights), np.asarray(starts)

    def _paths_per_chunk(self, n_points):
        chunk = int(self._setting('chunk_size'))
        budget = int(self._setting('max_chunk_elements'))
        return max(1, min(chunk, budget // max(n_points, 1)))

    def _process_chunk(self, symbol, p, q, points, weights, starts, first, last, T, dt, seed):
        """
        Integra os caminhos [first, last) em todos os pontos de prova.

        Returns:
            tuple: (RunningMoments por segmento, descartes por segmento)
        """
        n_points = points.size
        if symbol.is_deterministic:
            seeds = [seed]
        else:
            seeds = [mix64(seed, i) for i in range(first, last)]
        values = sample_paths(symbol, T, dt, seeds)
        drift = drift_of(symbol)
        phases = frozen_phases(values, drift, dt)
        n_paths = len(seeds)

        z = np.tile(points, n_paths)
        rows = np.repeat(np.arange(n_paths), n_points)
        result = integrate_batch(z, phases, drift, dt, T, self.config, rows=rows)

        alive = result.alive.reshape(n_paths, n_points)
        log_values = np.where(result.alive, result.log_integrand(p, q), 0.0).reshape(n_paths, n_points)
        integrand = np.exp(log_values) * weights
        sums = np.add.reduceat(integrand, starts, axis=1)
        valid = np.logical_and.reduceat(alive, starts, axis=1)
        moments = RunningMoments.from_samples(sums, valid)
        return moments, (~valid).sum(axis=0)

    def _run(self, symbol, p, q, points, weights, starts, n, T, dt, seed, num_workers=None):
        n_eff = 1 if symbol.is_deterministic else int(n)
        if n_eff < 1:
            raise DomainError(f"Número de amostras n={n} deve ser positivo")
        n_steps_for(T, dt)
        per_chunk = self._paths_per_chunk(points.size)
        bounds = [(first, min(first + per_chunk, n_eff)) for first in range(0, n_eff, per_chunk)]
        num_workers = resolve_threads(self.config, num_workers)
        logger.info(
            "Estimando momentos: %d amostras em %d lotes, %d pontos, T=%.3f, dt=%g, %d workers",
            n_eff, len(bounds), points.size, T, dt, num_workers,
        )

        results = []
        start_time = time.time()
        with ThreadPoolExecutor(max_workers=num_workers) as executor:
            future_to_chunk = {
                executor.submit(
                    self._process_chunk, symbol, p, q, points, weights, starts, first, last, T, dt, seed
                ): index
                for index, (first, last) in enumerate(bounds)
            }
            completed = as_completed(future_to_chunk)
            if self._setting('progress'):
                completed = tqdm(completed, total=len(bounds), desc='lotes', unit='lote')
            for future in completed:
                results.append((future_to_chunk[future], future.result()))

        # Combina os lotes na ordem dos índices: o resultado não depende das threads
        results.sort(key=lambda item: item[0])
        total, discarded = None, None
        for _, (moments, lost) in results:
            total = moments if total is None else total.merge(moments)
            discarded = lost if discarded is None else discarded + lost
        logger.debug("Estimativa concluída em %.2f s", time.time() - start_time)

        rate = discarded / n_eff
        limit = self._setting('max_discard_rate')
        if np.any(rate > limit):
            raise QualityError(
                f"Taxa de descarte {float(np.max(rate)):.4f} acima do limite {limit} "
                f"({int(np.max(discarded))} de {n_eff} amostras)"
            )
        if np.any(discarded):
            logger.warning("%d amostras descartadas por singularidade", int(np.max(discarded)))
        return total, discarded, n_eff

    def _metadata(self, symbol, p, q, n, T, dt, seed, **extra):
        metadata = {
            'symbol': symbol.to_dict(),
            'p': complex(p),
            'q': complex(q),
            'n': int(n),
            'T': float(T),
            'dt': float(dt),
            'seed': int(seed),
        }
        metadata.update(extra)
        return metadata

    def estimate_moment_pointwise(self, symbol, p, q, z, n, T=None, dt=None, seed=0, num_workers=None):
        """
        Estima G(z) = E|f'(z)^p (z/f(z))^q| por Monte Carlo.

        Args:
            symbol (LevySymbol): Símbolo do condutor
            p, q (complex): Expoentes do momento
            z (complex): Ponto no disco aberto
            n (int): Número de amostras (1 para condutor determinístico)
            T (float, optional): Horizonte (padrão pela regra logarítmica)
            dt (float, optional): Passo do condutor
            seed (int): Semente mestre
            num_workers (int, optional): Número de threads

        Returns:
            PointwiseEstimate: Média, erro padrão e descartes

        Raises:
            DomainError: Se |z| >= 1
            QualityError: Se a taxa de descarte excede o limite configurado
        """
        if abs(z) >= 1.0:
            raise DomainError(f"z={z} fora do disco aberto")
        dt = dt if dt is not None else self._setting('dt')
        T = T if T is not None else default_horizon(abs(z), self.config)
        points = np.asarray([complex(z)])
        weights = np.ones(1)
        total, discarded, n_eff = self._run(
            symbol, p, q, points, weights, np.asarray([0]), n, T, dt, seed, num_workers
        )
        return PointwiseEstimate(
            mean=float(total.mean[0]),
            stderr=float(total.stderr[0]),
            n_samples=int(total.count[0]),
            n_discarded=int(discarded[0]),
        )

    def estimate_moments(self, symbol, p, q, r_grid, n, T=None, dt=None, seed=0, num_workers=None):
        """
        Estima as integrais M(r) = E int |f'^p (z/f)^q| |dz| nos círculos |z| = r.

        Returns:
            MomentEstimate: Estimativas por raio, com metadados da execução
        """
        r_grid = np.asarray(r_grid, dtype=float)
        if r_grid.ndim != 1 or r_grid.size == 0:
            raise DomainError("r_grid deve ser uma lista não vazia de raios")
        if np.any(r_grid <= 0) or np.any(r_grid >= 1) or np.any(np.diff(r_grid) <= 0):
            raise DomainError("Os raios devem ser estritamente crescentes em (0, 1)")
        dt = dt if dt is not None else self._setting('dt')
        T = T if T is not None else default_horizon(float(r_grid[-1]), self.config)
        points, weights, starts = self.circle_points(r_grid)
        total, discarded, n_eff = self._run(
            symbol, p, q, points, weights, starts, n, T, dt, seed, num_workers
        )
        n_theta = [self.theta_count(r) for r in r_grid]
        return MomentEstimate(
            p=complex(p),
            q=complex(q),
            r_grid=r_grid,
            M_hat=total.mean,
            stderr=total.stderr,
            n_samples=n_eff,
            n_discarded=discarded,
            metadata=self._metadata(symbol, p, q, n_eff, T, dt, seed, n_theta=n_theta),
        )

    def estimate_beta(self, symbol, p, q, r_grid, n, T=None, dt=None, seed=0, num_workers=None):
        """
        Estima beta(p, q) pela inclinação de log M_hat contra log 1/(1-r).

        Args:
            symbol (LevySymbol): Símbolo do condutor
            p, q (complex): Expoentes do momento
            r_grid (list): Pelo menos 4 raios crescentes em (0, 1)
            n (int): Número de amostras

        Returns:
            BetaEstimate: Inclinação, intervalo de confiança e as estimativas por raio

        Raises:
            DomainError: Menos de 4 raios ou raios inválidos
            QualityError: Erro padrão relativo acima do limite em algum raio
        """
        if len(r_grid) < 4:
            raise DomainError("estimate_beta requer pelo menos 4 raios")
        estimate = self.estimate_moments(symbol, p, q, r_grid, n, T, dt, seed, num_workers)

        relative = estimate.stderr / estimate.M_hat
        cap = self._setting('max_rel_stderr')
        if np.any(~np.isfinite(relative)) or np.any(relative > cap):
            raise QualityError(f"Erro padrão relativo {float(np.nanmax(relative)):.3f} acima do limite {cap}")

        gaps = 1.0 - estimate.r_grid
        window = gaps <= self._setting('regression_window')
        if window.sum() < 3:
            logger.warning(
                "Menos de 3 raios com 1-r <= %s: ajustando com todos os %d raios",
                self._setting('regression_window'), gaps.size,
            )
            window = np.ones(gaps.shape, dtype=bool)
        fit = fit_loglog_slope(1.0 / gaps[window], estimate.M_hat[window])
        estimate.metadata['beta_hat'] = fit.slope
        return BetaEstimate(beta_hat=fit.slope, ci=fit.ci, estimate=estimate, n_fit_points=fit.n_points)
