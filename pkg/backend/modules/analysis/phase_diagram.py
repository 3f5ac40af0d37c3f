"""
Curvas de transição de fase no plano (p, q) e sua imagem pela
transformação não linear da deriva.

Os lugares de igualdade beta_forma(p) = beta1(p, q) são resolvidos por
bissecção em tau >= t0, onde beta1 cresce com tau.
"""
import math

import attr
import numpy as np
from scipy import optimize

from ..core.config import get_setting
from ..core.errors import DomainError, RootFindingError
from ..core.utils import get_logger, write_csv, write_json
from .exact_spectra import (
    Branch,
    beta1_real_drift,
    beta_driftless_phases,
    p_minus_q_from_tau,
    special_points,
    threshold_conditions,
)

logger = get_logger('phase')

# Curvas de transição: (identificador, forma em p, ramo à esquerda, ramo à direita)
TRANSITIONS = (
    ('tip_one', Branch.TIP, 'tip', 'one'),
    ('bulk0_one', Branch.BULK0, 'bulk0', 'one'),
    ('lin_one', Branch.LIN, 'lin', 'one'),
)


@attr.s(auto_attribs=True)
class PhaseCurve:
    curve_id: str
    points: list
    branch_left: str = ''
    branch_right: str = ''
    kind: str = 'transition'

    def to_dict(self):
        return attr.asdict(self)


@attr.s(auto_attribs=True)
class PhaseDiagram:
    """Conjunto de curvas, pontos especiais e limiares de um (kappa, a)."""

    kappa: float
    a: float
    p_range: tuple
    resolution: int
    curves: list = attr.Factory(list)
    special: dict = attr.Factory(dict)
    thresholds: dict = attr.Factory(dict)
    failures: list = attr.Factory(list)

    def curve(self, curve_id):
        for curve in self.curves:
            if curve.curve_id == curve_id:
                return curve
        raise KeyError(curve_id)

    def metadata(self):
        return {
            'kappa': self.kappa,
            'a': self.a,
            'p_range': list(self.p_range),
            'resolution': self.resolution,
        }

    def to_dict(self):
        return {
            'curves': [curve.to_dict() for curve in self.curves],
            'special_points': self.special,
            'thresholds': self.thresholds,
            'failures': self.failures,
        }

    def to_csv(self, path):
        """
        Exporta as curvas com colunas (p, q, curve_id, branch_left, branch_right).

        Returns:
            tuple: (sucesso, caminho do arquivo ou mensagem de erro)
        """
        rows = [
            (float(p), float(q), curve.curve_id, curve.branch_left, curve.branch_right)
            for curve in self.curves
            for p, q in curve.points
        ]
        return write_csv(path, ['p', 'q', 'curve_id', 'branch_left', 'branch_right'], rows, self.metadata())

    def to_json(self, path):
        return write_json(path, self.to_dict(), self.metadata())


def _p_form(p, kappa, branch):
    return beta_driftless_phases(p, p, kappa)[branch].beta


def _solve_increasing(func, lower, xtol, label):
    """Menor raiz de uma função crescente em [lower, inf), com dobra do intervalo."""
    value = func(lower)
    if math.isnan(value):
        raise RootFindingError(f"{label}: função indefinida em {lower}")
    if value >= 0:
        if value <= 1e-12 * (1.0 + abs(lower)):
            return lower
        raise RootFindingError(f"{label}: sem mudança de sinal a partir de {lower}")
    width = 1.0
    upper = lower + width
    for _ in range(200):
        if func(upper) > 0:
            try:
                return optimize.bisect(func, lower, upper, xtol=xtol)
            except (ValueError, RuntimeError) as e:
                raise RootFindingError(f"{label}: bissecção falhou em [{lower}, {upper}]: {e}") from e
        width *= 2.0
        upper = lower + width
    raise RootFindingError(f"{label}: intervalo de enquadramento não encontrado")


def equality_tau(p, kappa, branch, config=None):
    """
    tau >= t0 em que beta1 sem deriva iguala a forma em p indicada.

    Args:
        p (float): Abscissa
        kappa (float): Parâmetro de SLE
        branch (Branch): TIP, BULK0 ou LIN

    Returns:
        float: tau da igualdade (q = p - tau no caso sem deriva)
    """
    t0 = special_points(kappa).t0
    target = _p_form(p, kappa, branch) - p
    if math.isnan(target):
        raise RootFindingError(f"Forma {branch.value} indefinida em p={p}")

    def gap(tau):
        return 2.0 * tau - 0.5 - 0.5 * math.sqrt(max(1.0 + 2.0 * kappa * tau, 0.0)) - target

    return _solve_increasing(gap, t0, get_setting(config, 'bisection_xtol'), f"{branch.value}=beta1 em p={p}")


def transformed_equality_q(p, params, branch, config=None):
    """Imagem do lugar sem deriva pela transformação (p, tau) -> (p, tau(1 + a^2/(1 + 2 kappa tau)))."""
    tau = equality_tau(p, params.kappa, branch, config)
    return p - p_minus_q_from_tau(tau, params.kappa, params.a)


def direct_drifted_equality_q(p, params, branch, config=None):
    """
    Lugar beta_forma(p) = beta1 com deriva resolvido diretamente em d = p - q.

    Deve coincidir com transformed_equality_q.
    """
    t0 = special_points(params.kappa).t0
    target = _p_form(p, params.kappa, branch)
    d0 = p_minus_q_from_tau(t0, params.kappa, params.a)

    def gap(d):
        return beta1_real_drift(p, p - d, params).beta - target

    d = _solve_increasing(gap, d0, get_setting(config, 'bisection_xtol'), f"{branch.value}=beta1 direto em p={p}")
    return p - d


def _segment_grid(lower, upper, resolution):
    if upper <= lower:
        return np.empty(0)
    return np.linspace(lower, upper, resolution)


def reference_curves(kappa, p_range, resolution, a=0.0):
    """
    Curvas estáticas de referência: retas D2 (p - q = 1 + kappa/2) e
    D1 (q - p = (16 - kappa^2)/(32 kappa)), ponto P3 e a parábola vermelha real
    com sua imagem pela transformação da deriva.
    """
    p_grid = np.linspace(p_range[0], p_range[1], resolution)
    curves = [
        PhaseCurve('D2', [(p, p - 1.0 - 0.5 * kappa) for p in p_grid], kind='reference'),
        PhaseCurve('D1', [(p, p + (16.0 - kappa ** 2) / (32.0 * kappa)) for p in p_grid], kind='reference'),
        PhaseCurve('P3', [(1.0 + 2.0 / kappa, (4.0 - kappa ** 2) / (2.0 * kappa))], kind='reference'),
    ]
    alphas = np.linspace(-4.0, 4.0 + 8.0 / kappa, 4 * resolution)
    parabola, image = [], []
    for alpha in alphas:
        p = -0.5 * kappa * alpha ** 2 + (2.0 + 0.5 * kappa) * alpha
        if not p_range[0] <= p <= p_range[1]:
            continue
        tau = 0.5 * kappa * alpha ** 2 - alpha
        parabola.append((p, p - tau))
        if 1.0 + 2.0 * kappa * tau > 1e-12:
            image.append((p, p - p_minus_q_from_tau(tau, kappa, a)))
    curves.append(PhaseCurve('red_parabola', parabola, kind='reference'))
    curves.append(PhaseCurve('red_parabola_drift', image, kind='reference'))
    return curves


def phase_diagram(params, p_range=(-6.0, 6.0), resolution=200, config=None):
    """
    Traça as curvas de transição sem deriva, suas imagens com deriva, as
    separatrizes verticais, o ponto P0 transladado e os limiares de deriva.

    Args:
        params (SleParams): (kappa, a)
        p_range (tuple): Intervalo de p
        resolution (int): Pontos por segmento (>= 16)
        config (dict, optional): Tolerância da bissecção

    Returns:
        PhaseDiagram: Curvas e falhas de enquadramento por segmento

    Raises:
        DomainError: kappa <= 0 ou resolução < 16
    """
    if params.kappa <= 0:
        raise DomainError("phase_diagram requer kappa > 0")
    if resolution < 16:
        raise DomainError(f"resolution={resolution} deve ser >= 16")
    kappa, a = params.kappa, params.a
    points = special_points(kappa)
    p_min, p_max = float(p_range[0]), float(p_range[1])
    windows = {
        'tip_one': (p_min, min(p_max, points.p0_prime)),
        'bulk0_one': (max(p_min, points.p0_prime), min(p_max, points.p0)),
        'lin_one': (max(p_min, points.p0), p_max),
    }
    diagram = PhaseDiagram(kappa=kappa, a=a, p_range=(p_min, p_max), resolution=resolution)

    for curve_id, branch, left, right in TRANSITIONS:
        driftless, drifted = [], []
        for p in _segment_grid(*windows[curve_id], resolution):
            try:
                tau = equality_tau(p, kappa, branch, config)
            except RootFindingError as e:
                diagram.failures.append({'curve_id': curve_id, 'p': float(p), 'message': str(e)})
                continue
            driftless.append((float(p), float(p - tau)))
            drifted.append((float(p), float(p - p_minus_q_from_tau(tau, kappa, a))))
        diagram.curves.append(PhaseCurve(curve_id, driftless, left, right))
        diagram.curves.append(PhaseCurve(f'{curve_id}_drift', drifted, left, right))

    # Separatrizes verticais a partir de Q0 e de P0 (transladados pela deriva)
    height = p_max - p_min
    q_corner = points.p0_prime - p_minus_q_from_tau(points.p0_prime - points.q0_prime, kappa, a)
    q_triple = points.q0_tilde(a)
    for curve_id, p, q, left, right in (
        ('tip_bulk0', points.p0_prime, q_corner, 'tip', 'bulk0'),
        ('bulk0_lin', points.p0, q_triple, 'bulk0', 'lin'),
    ):
        if p_min <= p <= p_max:
            diagram.curves.append(PhaseCurve(curve_id, [(p, q), (p, q + height)], left, right))

    diagram.curves.extend(reference_curves(kappa, (p_min, p_max), resolution, a))
    diagram.special = points.to_dict(a)
    diagram.thresholds = threshold_conditions(params)
    if diagram.failures:
        logger.warning("%d pontos sem enquadramento no diagrama de fases", len(diagram.failures))
    return diagram
