"""
Espectros fechados de SLE com deriva: fases tip/bulk/lin/beta1, ramos +-,
parábola vermelha, quantidades LQG e pontos especiais do diagrama de fases.

Convenção de deriva: condutor exp(i(sqrt(kappa) B_t + a t)), fator (1 - ia)
em todas as fórmulas que dependem de a.
"""
import cmath
import math

import attr

from ..core.errors import DomainError
from ..core.utils import get_logger
from .spectrum_types import Branch, MomentExponents, SleParams, SpectrumResult
from .spiral_maps import spiral_beta_terms, spiral_spectrum_half

logger = get_logger('spectra')

_REGIONS = ('I', 'II', 'III', 'IV')

__all__ = [
    'Branch', 'MomentExponents', 'SleParams', 'SpectrumResult', 'RedParabolaPoint',
    'LqgQuantities', 'SpecialPoints', 'lqg_suite', 'beta_driftless_phases', 'beta1_complex',
    'beta1_real_drift', 'beta1_pm', 'beta0_complex', 'beta0_pm', 'red_parabola',
    'red_parabola_real_point', 'red_parabola_branch_pair', 'tau_from_p_minus_q',
    'p_minus_q_from_tau', 'special_points', 'drift_thresholds', 'threshold_conditions',
    'classify_phase', 'bisector_phase_sequence', 'exact_beta', 'one_plus_two_kappa_tau',
    'one_plus_two_kappa_tau_from_root', 'kpz_u', 'kpz_u_inverse', 'kpz_v',
]


def _require_positive_kappa(kappa):
    if kappa <= 0:
        raise DomainError(f"kappa={kappa} deve ser > 0 (kappa = 0 é tratado pela espiral)")


# Funções LQG

def kpz_u(x, kappa):
    """U_kappa(x) = x (kappa x + 4 - kappa) / 4."""
    return 0.25 * x * (kappa * x + 4.0 - kappa)


def kpz_u_inverse(s, kappa):
    """Ramo positivo de U_kappa^{-1}(s) = (kappa - 4 + sqrt((4-kappa)^2 + 16 kappa s)) / (2 kappa)."""
    radicand = (4.0 - kappa) ** 2 + 16.0 * kappa * s
    if radicand < 0:
        raise DomainError(f"U^-1({s}) não é real para kappa={kappa}")
    return (kappa - 4.0 + math.sqrt(radicand)) / (2.0 * kappa)


def kpz_v(x, kappa):
    """V_kappa(x) = (kappa^2 x^2 - (4-kappa)^2) / (16 kappa)."""
    return (kappa ** 2 * x ** 2 - (4.0 - kappa) ** 2) / (16.0 * kappa)


@attr.s(auto_attribs=True, frozen=True)
class LqgQuantities:
    """Constantes da derivação LQG para (kappa, a)."""

    kappa: float
    a: float = 0.0

    @property
    def b(self):
        return (4.0 - self.kappa) ** 2 / (8.0 * self.kappa)

    @property
    def b_prime(self):
        return (4.0 + self.kappa) ** 2 / (8.0 * self.kappa)

    @property
    def c(self):
        return 1.0 / (2.0 * self.kappa)

    @property
    def x1(self):
        """x1(0) = (6-kappa)(kappa-2)/(8 kappa), de modo que b + x1 = c."""
        return (6.0 - self.kappa) * (self.kappa - 2.0) / (8.0 * self.kappa)

    @property
    def x1_tilde(self):
        return (6.0 - self.kappa) / (2.0 * self.kappa)

    @property
    def t_tilde0(self):
        return self.a / self.kappa

    def U(self, x):
        return kpz_u(x, self.kappa)

    def U_inverse(self, s):
        return kpz_u_inverse(s, self.kappa)

    def V(self, x):
        return kpz_v(x, self.kappa)

    def x1_of(self, s):
        """x1(s) = 2 V(U^{-1}(s) + 2/kappa)."""
        return 2.0 * self.V(self.U_inverse(s) + 2.0 / self.kappa)

    def k_of(self, s):
        """k(s) = 1 + kappa U^{-1}(s) / 2, com k^2/(2 kappa) = x1(s) + b."""
        return 1.0 + 0.5 * self.kappa * self.U_inverse(s)

    def x1_hat(self, s, t_tilde):
        """x1(s) recentrado pela parte imaginária t~ do momento."""
        x1 = self.x1_of(s)
        return x1 - 0.25 * (t_tilde - self.t_tilde0) ** 2 / (x1 + self.b)

    def tau(self, t, t_tilde=0.0):
        """
        Variável reduzida tau(t, t~) pelo ramo (+).

        tau = (t - c - a^2/2kappa + sqrt((t + c - a^2/2kappa)^2 + (t~ - t~0)^2)) / 2
        """
        shift = self.a ** 2 / (2.0 * self.kappa)
        root = math.hypot(t + self.c - shift, t_tilde - self.t_tilde0)
        return 0.5 * (t - self.c - shift + root)

    def one_plus_two_kappa_tau(self, p):
        """1 + 2 kappa tau para q = 0, pela fórmula LQG."""
        p = complex(p)
        return 1.0 + 2.0 * self.kappa * self.tau(p.real, p.imag)

    def packing(self, tau):
        """Espectro de empacotamento s1(tau) = 2 tau + 1/2 - sqrt(1 + 2 kappa tau)/2."""
        return 2.0 * tau + 0.5 - 0.5 * math.sqrt(1.0 + 2.0 * self.kappa * tau)

    def p_from_packing(self, s):
        """Inversa sem deriva de s1: p = s/2 + (kappa/8) U^{-1}(s)."""
        return 0.5 * s + self.kappa * self.U_inverse(s) / 8.0


def lqg_suite(kappa, a=0.0):
    """
    Constantes e funções LQG para (kappa, a).

    Raises:
        DomainError: Se kappa <= 0
    """
    _require_positive_kappa(kappa)
    return LqgQuantities(kappa=kappa, a=a)


# Fases sem deriva

def beta_driftless_phases(p, q, kappa):
    """
    As quatro formas fechadas do espectro sem deriva em (p, q) reais.

    Args:
        p, q (float): Expoentes reais
        kappa (float): Parâmetro de SLE (> 0)

    Returns:
        dict: Branch -> SpectrumResult para TIP, BULK0, LIN e ONE; `valid` é
            falso quando a raiz quadrada correspondente tem argumento negativo
    """
    _require_positive_kappa(kappa)
    radicand = (4.0 + kappa) ** 2 - 8.0 * kappa * p
    if radicand >= 0:
        root = math.sqrt(radicand)
        tip = SpectrumResult(-p - 1.0 + 0.25 * (4.0 + kappa - root), Branch.TIP)
        bulk = SpectrumResult(-p + (4.0 + kappa) / (4.0 * kappa) * (4.0 + kappa - root), Branch.BULK0)
    else:
        tip = SpectrumResult(math.nan, Branch.TIP, valid=False)
        bulk = SpectrumResult(math.nan, Branch.BULK0, valid=False)
    lin = SpectrumResult(p - (4.0 + kappa) ** 2 / (16.0 * kappa), Branch.LIN)
    d = p - q
    if 1.0 + 2.0 * kappa * d >= 0:
        one = SpectrumResult(
            3.0 * p - 2.0 * q - 0.5 - 0.5 * math.sqrt(1.0 + 2.0 * kappa * d), Branch.ONE, tau=d
        )
    else:
        one = SpectrumResult(math.nan, Branch.ONE, tau=d, valid=False)
    return {Branch.TIP: tip, Branch.BULK0: bulk, Branch.LIN: lin, Branch.ONE: one}


# beta1 com deriva

def one_plus_two_kappa_tau(p, q, params):
    w = (1.0 - 1j * params.a) ** 2 + 2.0 * params.kappa * complex(p - q)
    return 0.5 * (w.real + abs(w))


def beta1_complex(p, q, params):
    """
    beta1 generalizado para (p, q) complexos.

    1 + 2 kappa tau = (Re w + |w|)/2 com w = (1-ia)^2 + 2 kappa (p - q) e
    beta1 = 2 tau + 1/2 - sqrt(1 + 2 kappa tau)/2 + Re p - 1. Para kappa = 0
    devolve o termo beta1 da meia espiral.
    """
    if params.kappa == 0:
        beta1, _ = spiral_beta_terms(p, q, params.a)
        return SpectrumResult(beta1, Branch.ONE, tau=(complex(p - q) / (1.0 - 1j * params.a)).real)
    one_plus = one_plus_two_kappa_tau(p, q, params)
    tau = (one_plus - 1.0) / (2.0 * params.kappa)
    beta = 2.0 * tau + 0.5 - 0.5 * math.sqrt(one_plus) + complex(p).real - 1.0
    return SpectrumResult(beta, Branch.ONE_PLUS, tau=tau)


def tau_from_p_minus_q(d, kappa, a):
    """
    Transformação não linear p - q -> tau para (p, q) reais.

    1 + 2 kappa tau = (1 - a^2 + 2 kappa d + sqrt((1 - a^2 + 2 kappa d)^2 + 4 a^2)) / 2
    """
    _require_positive_kappa(kappa)
    base = 1.0 - a * a + 2.0 * kappa * d
    if base >= 0:
        one_plus = 0.5 * (base + math.hypot(base, 2.0 * a))
    else:
        # Forma equivalente sem cancelamento quando base < 0
        one_plus = 2.0 * a * a / (math.hypot(base, 2.0 * a) - base)
    return (one_plus - 1.0) / (2.0 * kappa)


def p_minus_q_from_tau(tau, kappa, a):
    """Inversa: p - q = tau (1 + a^2 / (1 + 2 kappa tau))."""
    _require_positive_kappa(kappa)
    one_plus = 1.0 + 2.0 * kappa * tau
    if one_plus <= 0 and a != 0:
        raise DomainError(f"1 + 2 kappa tau = {one_plus} deve ser positivo com deriva")
    if a == 0:
        return tau
    return tau * (1.0 + a * a / one_plus)


def beta1_real_drift(p, q, params):
    """beta1 = p + 2 tau - 1/2 - sqrt(1 + 2 kappa tau)/2 para (p, q) reais."""
    if params.kappa == 0:
        return beta1_complex(p, q, params)
    tau = tau_from_p_minus_q(p - q, params.kappa, params.a)
    one_plus = max(1.0 + 2.0 * params.kappa * tau, 0.0)
    return SpectrumResult(p + 2.0 * tau - 0.5 - 0.5 * math.sqrt(one_plus), Branch.ONE_PLUS, tau=tau)


def beta1_pm(p, q, params):
    """
    Os dois ramos beta1^{+-} = s1^{+-} + Re p - 1, s1^{+-} = 2 tau + 1/2 -+ sqrt(1 + 2 kappa tau)/2.

    Returns:
        dict: {Branch.ONE_PLUS: SpectrumResult, Branch.ONE_MINUS: SpectrumResult}
    """
    _require_positive_kappa(params.kappa)
    one_plus = one_plus_two_kappa_tau(p, q, params)
    tau = (one_plus - 1.0) / (2.0 * params.kappa)
    base = 2.0 * tau + 0.5 + complex(p).real - 1.0
    half_root = 0.5 * math.sqrt(one_plus)
    return {
        Branch.ONE_PLUS: SpectrumResult(base - half_root, Branch.ONE_PLUS, tau=tau),
        Branch.ONE_MINUS: SpectrumResult(base + half_root, Branch.ONE_MINUS, tau=tau),
    }


# beta0 complexo

def _tau_bar(p, kappa):
    v = (4.0 + kappa) ** 2 / (8.0 * kappa) - complex(p)
    return 0.5 * (v.real + abs(v))


def beta0_pm(p, kappa):
    """
    Ramos beta0^{+-} = s^{+-} + Re p - 1, s^{+-} = 1 + 2 tau_bar +- 2 sqrt(b' tau_bar).

    Returns:
        dict: {Branch.BULK0_PLUS: ..., Branch.BULK0_MINUS: ...}
    """
    _require_positive_kappa(kappa)
    b_prime = (4.0 + kappa) ** 2 / (8.0 * kappa)
    tau_bar = _tau_bar(p, kappa)
    root = 2.0 * math.sqrt(b_prime * tau_bar)
    base = 1.0 + 2.0 * tau_bar + complex(p).real - 1.0
    return {
        Branch.BULK0_PLUS: SpectrumResult(base + root, Branch.BULK0_PLUS, tau=tau_bar),
        Branch.BULK0_MINUS: SpectrumResult(base - root, Branch.BULK0_MINUS, tau=tau_bar),
    }


def beta0_complex(p, kappa):
    """Espectro bulk complexo: o ramo físico (-) de beta0_pm."""
    return beta0_pm(p, kappa)[Branch.BULK0_MINUS]


# Parábola vermelha

@attr.s(auto_attribs=True, frozen=True)
class RedParabolaPoint:
    """
    Ponto (p, q) da parábola vermelha com parâmetro alpha.

    `beta` é o valor bulk kappa |alpha|^2 / 2; `beta_tip` é o valor corrigido
    kappa |alpha|^2/2 - 2 Re alpha - 1, definido apenas quando 2 Re alpha <= -1.
    """

    alpha: complex
    p: complex
    q: complex
    kappa: float
    a: float
    beta: float
    beta_tip: float = None

    @property
    def exponents(self):
        return MomentExponents(self.p, self.q)

    @property
    def tip_dominates(self):
        return self.beta_tip is not None and self.beta_tip > self.beta


def red_parabola(alpha, params):
    """
    p = -kappa alpha^2/2 + (2 + kappa/2) alpha e q - p = -kappa alpha^2/2 + (1 - ia) alpha.

    Args:
        alpha (complex): Parâmetro
        params (SleParams): (kappa, a)

    Returns:
        RedParabolaPoint: Ponto, valor bulk e valor tip quando aplicável
    """
    _require_positive_kappa(params.kappa)
    alpha = complex(alpha)
    kappa = params.kappa
    half_square = 0.5 * kappa * alpha * alpha
    p = -half_square + (2.0 + 0.5 * kappa) * alpha
    q = p - half_square + (1.0 - 1j * params.a) * alpha
    beta = 0.5 * kappa * abs(alpha) ** 2
    beta_tip = beta - 2.0 * alpha.real - 1.0 if 2.0 * alpha.real <= -1.0 else None
    return RedParabolaPoint(alpha=alpha, p=p, q=q, kappa=kappa, a=params.a, beta=beta, beta_tip=beta_tip)


def red_parabola_real_point(params):
    """
    Ponto da parábola vermelha com (p, q) reais.

    alpha = ((4+kappa)/(2 kappa)) (1 - 2ia/(2+kappa)); nele beta(p, q) = p.
    """
    _require_positive_kappa(params.kappa)
    kappa = params.kappa
    alpha = (4.0 + kappa) / (2.0 * kappa) * (1.0 - 2j * params.a / (2.0 + kappa))
    point = red_parabola(alpha, params)
    # p e q são reais exatamente; descarta o resíduo de arredondamento
    return attr.evolve(point, p=complex(point.p.real, 0.0), q=complex(point.q.real, 0.0))


def red_parabola_branch_pair(alpha, kappa):
    """
    Ramos (beta0, beta1) que valem kappa |alpha|^2 / 2 ao longo da parábola.

    beta1^+ para kappa Re alpha >= 1 e beta1^- abaixo; beta0^+ para
    kappa Re alpha >= 2 + kappa/2 e beta0^- abaixo.
    """
    x = kappa * complex(alpha).real
    bulk = Branch.BULK0_PLUS if x >= 2.0 + 0.5 * kappa else Branch.BULK0_MINUS
    one = Branch.ONE_PLUS if x >= 1.0 else Branch.ONE_MINUS
    return bulk, one


# Pontos especiais e limiares de deriva

@attr.s(auto_attribs=True, frozen=True)
class SpecialPoints:
    """P0 (ponto triplo), Q0 e as constantes t0, p0' associadas a kappa."""

    kappa: float

    @property
    def p0(self):
        return 3.0 * (4.0 + self.kappa) ** 2 / (32.0 * self.kappa)

    @property
    def q0(self):
        return (4.0 + self.kappa) * (8.0 + self.kappa) / (16.0 * self.kappa)

    @property
    def p0_prime(self):
        """Separatriz vertical beta_tip = beta0."""
        return -1.0 - 3.0 * self.kappa / 8.0

    @property
    def q0_prime(self):
        return -2.0 - 7.0 * self.kappa / 8.0

    @property
    def t0(self):
        """Valor de tau em P0; 1 + 2 kappa t0 = kappa^2 / 16."""
        return (self.kappa ** 2 - 16.0) / (32.0 * self.kappa)

    def q0_tilde(self, a):
        """Ordenada de P0 transladado pela deriva a."""
        return self.p0 + (16.0 - self.kappa ** 2) / (32.0 * self.kappa) * (1.0 + 16.0 * a * a / self.kappa ** 2)

    def to_dict(self, a=0.0):
        return {
            'P0': (self.p0, self.q0),
            'Q0': (self.p0_prime, self.q0_prime),
            't0': self.t0,
            'P0_translated': (self.p0, self.q0_tilde(a)),
        }


def special_points(kappa):
    _require_positive_kappa(kappa)
    return SpecialPoints(kappa)


def drift_thresholds(kappa):
    """
    Limiares a0(kappa) (kappa < 4) e a0~(kappa) (kappa > 4) para a^2/kappa^2.

    Returns:
        tuple: (a0 ou None, a0~ ou None)
    """
    _require_positive_kappa(kappa)
    a0 = (2.0 + kappa) / (4.0 * (4.0 - kappa)) if kappa < 4 else None
    a0_tilde = (8.0 + kappa) / (8.0 * (kappa - 4.0)) if kappa > 4 else None
    return a0, a0_tilde


def threshold_conditions(params):
    """Booleanos a^2/kappa^2 >= a0(kappa) e a^2/kappa^2 >= a0~(kappa) (None fora do domínio)."""
    a0, a0_tilde = drift_thresholds(params.kappa)
    ratio = params.a ** 2 / params.kappa ** 2
    return {
        'a0': a0,
        'a0_tilde': a0_tilde,
        'exceeds_a0': None if a0 is None else ratio >= a0,
        'exceeds_a0_tilde': None if a0_tilde is None else ratio >= a0_tilde,
    }


def _near(x, y, tol):
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))


def classify_phase(p, q, params, tol=1e-9):
    """
    Regiões de fase (I tip, II bulk, III lin, IV beta1) de um ponto real.

    A forma em p vale beta_tip para p <= p0', beta0 para p0' <= p <= p0 e
    beta_lin para p >= p0. O ponto está na região IV quando tau >= t0 e
    beta1 supera a forma em p. Sobre uma separatriz, e em particular no
    ponto triplo P0, todas as regiões cujas formas coincidem (até `tol`)
    são devolvidas.

    Returns:
        tuple: (rótulos em ordem crescente, SpectrumResult da região principal)
    """
    _require_positive_kappa(params.kappa)
    points = SpecialPoints(params.kappa)
    phases = beta_driftless_phases(p, q, params.kappa)
    if p <= points.p0_prime:
        region, p_form = 'I', phases[Branch.TIP]
    elif p <= points.p0:
        region, p_form = 'II', phases[Branch.BULK0]
    else:
        region, p_form = 'III', phases[Branch.LIN]
    labels = {region}
    if _near(p, points.p0_prime, tol):
        labels.update(('I', 'II'))
    if _near(p, points.p0, tol):
        labels.update(('II', 'III'))
    one = beta1_real_drift(p, q, params)
    in_iv = one.tau >= points.t0 and one.beta >= p_form.beta
    tied = one.tau >= points.t0 - tol and _near(one.beta, p_form.beta, tol)
    if in_iv and not tied:
        labels = {'IV'}
    elif in_iv or tied:
        labels.add('IV')
    labels = tuple(sorted(labels, key=_REGIONS.index))
    if in_iv:
        return labels, attr.evolve(one, branch=Branch.ONE)
    return labels, p_form


def bisector_phase_sequence(params, line='exterior', p_grid=None):
    """
    Sequência ordenada de regiões atravessadas por uma bissetriz.

    Um ponto da grade sobre uma separatriz acrescenta os rótulos coincidentes
    diferentes do último registrado.

    Args:
        params (SleParams): (kappa, a)
        line (str): 'exterior' (q = 2p) ou 'interior' (q = 0)
        p_grid (array, optional): Valores de p crescentes (padrão [-30, 30])

    Returns:
        list: Regiões distintas na ordem em que aparecem
    """
    if line not in ('exterior', 'interior'):
        raise DomainError(f"Bissetriz desconhecida: {line}")
    if p_grid is None:
        p_grid = [-30.0 + 0.01 * k for k in range(6001)]
    sequence = []
    for p in p_grid:
        q = 2.0 * p if line == 'exterior' else 0.0
        labels, _ = classify_phase(float(p), q, params)
        last = sequence[-1] if sequence else None
        sequence.extend(label for label in labels if label != last)
    return sequence


def exact_beta(p, q, params):
    """
    Espectro exato de SLE com deriva em (p, q) reais, pela região de fase.

    kappa = 0 é delegado à meia espiral.
    """
    if params.kappa == 0:
        return spiral_spectrum_half(p, q, params.a)
    if complex(p).imag or complex(q).imag:
        raise DomainError("exact_beta com kappa > 0 requer p e q reais")
    _, result = classify_phase(complex(p).real, complex(q).real, params)
    return result


def one_plus_two_kappa_tau_from_root(p, q, params):
    """(Re sqrt(w))^2, forma alternativa de 1 + 2 kappa tau."""
    w = (1.0 - 1j * params.a) ** 2 + 2.0 * params.kappa * complex(p - q)
    return cmath.sqrt(w).real ** 2
