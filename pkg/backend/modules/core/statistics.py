import math

import attr
import numpy as np
from scipy import stats

from .utils import get_logger

logger = get_logger('stats')


@attr.s(auto_attribs=True)
class RunningMoments:
    """
    Média e variância acumuladas (Welford), combináveis entre lotes (Chan).

    Os campos são vetores numpy para acumular várias quantidades em paralelo,
    por exemplo uma por ângulo ou por raio.
    """

    count: np.ndarray
    mean: np.ndarray
    m2: np.ndarray

    @classmethod
    def zeros(cls, shape):
        return cls(np.zeros(shape, dtype=np.int64), np.zeros(shape), np.zeros(shape))

    @classmethod
    def from_samples(cls, values, mask=None):
        """
        Acumulador de um lote inteiro de observações (eixo 0 = amostras).

        Args:
            values (numpy.ndarray): Observações, formato (n, ...)
            mask (numpy.ndarray, optional): Observações válidas, mesmo formato
        """
        values = np.asarray(values, dtype=float)
        if mask is None:
            mask = np.ones(values.shape, dtype=bool)
        count = mask.sum(axis=0).astype(np.int64)
        safe = np.maximum(count, 1)
        mean = np.where(mask, values, 0.0).sum(axis=0) / safe
        m2 = (np.where(mask, values - mean, 0.0) ** 2).sum(axis=0)
        return cls(count, np.where(count > 0, mean, 0.0), m2)

    def push(self, values, mask=None):
        """
        Acrescenta uma observação por componente.

        Args:
            values (numpy.ndarray): Observações, com o mesmo formato de `mean`
            mask (numpy.ndarray, optional): Componentes válidas (as demais são ignoradas)
        """
        values = np.asarray(values, dtype=float)
        if mask is None:
            mask = np.ones(values.shape, dtype=bool)
        self.count = self.count + mask
        safe = np.maximum(self.count, 1)
        delta = np.where(mask, values - self.mean, 0.0)
        self.mean = self.mean + delta / safe
        self.m2 = self.m2 + np.where(mask, delta * (values - self.mean), 0.0)

    def merge(self, other):
        """
        Combina com outro acumulador (fórmula de Chan et al.).

        Args:
            other (RunningMoments): Acumulador do mesmo formato

        Returns:
            RunningMoments: Novo acumulador combinado
        """
        n = self.count + other.count
        safe = np.maximum(n, 1)
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / safe
        m2 = self.m2 + other.m2 + delta ** 2 * self.count * other.count / safe
        return RunningMoments(n, np.where(n > 0, mean, 0.0), np.where(n > 0, m2, 0.0))

    @property
    def variance(self):
        return np.where(self.count > 1, self.m2 / np.maximum(self.count - 1, 1), 0.0)

    @property
    def stderr(self):
        return np.sqrt(self.variance / np.maximum(self.count, 1))


@attr.s(auto_attribs=True, frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    stderr: float
    ci: tuple
    n_points: int


def fit_loglog_slope(x_values, y_values, confidence=0.95):
    """
    Ajusta log(y) = beta * log(x) + c por mínimos quadrados.

    Args:
        x_values (array): Abscissas positivas (ex.: 1/(1-r))
        y_values (array): Ordenadas positivas (ex.: integrais sobre o círculo)
        confidence (float): Nível do intervalo de confiança da inclinação

    Returns:
        SlopeFit: Inclinação, erro padrão e intervalo de confiança
    """
    x = np.log(np.asarray(x_values, dtype=float))
    y = np.log(np.asarray(y_values, dtype=float))
    if x.size < 2:
        raise ValueError("São necessários pelo menos dois pontos para o ajuste")
    result = stats.linregress(x, y)
    if x.size > 2:
        multiplier = stats.t.ppf(0.5 + confidence / 2.0, x.size - 2)
        half = multiplier * result.stderr
    else:
        half = math.inf
    return SlopeFit(
        slope=float(result.slope),
        intercept=float(result.intercept),
        stderr=float(result.stderr),
        ci=(float(result.slope - half), float(result.slope + half)),
        n_points=int(x.size),
    )
