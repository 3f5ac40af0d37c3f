"""
Caso eta_2 = -q: recursão matricial exata D_k A^k = C_{k-1} A^{k-1},
fechamento polinomial nas elipses E_n, condição alternativa e
classificação do sistema fuchsiano.

Toda a aritmética é exata em Q(sqrt(Z^)).
"""
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from fractions import Fraction

import attr

from ..analysis.lle_spectra import FourierMode, FourierTable
from ..core.errors import DomainError, SingularityError
from ..core.utils import fraction_to_string, get_logger
from .quadext import QuadExtScalar, as_scalar, det3, mat_sub_scalar, mat_vec, null_vector, solve

logger = get_logger('lle')


def check_domain_mq(q, eta1):
    """D_(-q) = {q <= 0, eta_1 >= -q/4}."""
    if q > 0 or eta1 < -Fraction(q) / 4:
        raise DomainError(f"(q, eta_1)=({q}, {eta1}) fora de D_(-q): q <= 0, eta_1 >= -q/4")


def z_hat(q, eta1):
    """Z^ = (eta_1 - 2)^2 + 2q(eta_1 + q - 3) = (q-1)^2 + (eta_1 + q - 2)^2 - 1."""
    return (eta1 - 2) ** 2 + 2 * q * (eta1 + q - 3)


def alpha_roots(q, eta1):
    """alpha0+- = 3 - q + (2 - eta_1 +- sqrt(Z^))/2, exatos em Q(sqrt(Z^))."""
    root = QuadExtScalar.sqrt(z_hat(q, eta1))
    base = QuadExtScalar(3 - q + Fraction(2 - eta1, 2))
    half = root * Fraction(1, 2)
    return base + half, base - half


def d_matrix(alpha, q, eta1, k=0):
    """D_k(alpha) = D_0(alpha - k)."""
    return [
        [k - (alpha + q - 3), as_scalar(q - 2), as_scalar(0)],
        [as_scalar(eta1 + q - 3), 2 * k - 2 * (alpha + eta1 + q - 3), as_scalar(eta1 + q - 1)],
        [as_scalar(0), as_scalar(-4), 2 * k - 2 * (alpha - 3)],
    ]


def c_matrix(alpha, q, eta1, k=0):
    """C_k(alpha) = C_0(alpha - k)."""
    zero = as_scalar(0)
    return [
        [zero, zero, zero],
        [zero, 2 * k - (eta1 + 2 * alpha + 2 * q - 7), as_scalar(eta1 + q - 1)],
        [zero, zero, 2 * k - (2 * alpha + q - 8)],
    ]


def e0(alpha, q, eta1):
    return 2 * (alpha + q - 3) * (eta1 + alpha + q - 5) - q * (eta1 + q - 3)


def det_d0(alpha, q, eta1):
    """det D_0(alpha) = 2 (1 - alpha) E_0(alpha)."""
    return 2 * (1 - alpha) * e0(alpha, q, eta1)


def null_eigenvector(alpha, q, eta1):
    """A^0 com A_0^0 = 1, A_1^0 = (alpha + q - 3)/(q - 2), A_2^0 = -2 A_1^0/(alpha - 3)."""
    alpha = as_scalar(alpha)
    if alpha - 3:
        a1 = (alpha + q - 3) / as_scalar(q - 2)
        return [as_scalar(1), a1, -2 * a1 / (alpha - 3)]
    return null_vector(d_matrix(alpha, q, eta1))


@attr.s(auto_attribs=True)
class RecursionState:
    """Tabela exata A^k, k = 0..n, a partir do autovetor nulo de D_0(alpha0+)."""

    n: int
    q: Fraction
    eta1: Fraction
    alpha: QuadExtScalar
    alpha_minus: QuadExtScalar
    vectors: list
    collisions: list = attr.Factory(list)
    normalized: bool = True

    def D(self, k):
        return d_matrix(self.alpha, self.q, self.eta1, k)

    def C(self, k):
        return c_matrix(self.alpha, self.q, self.eta1, k)

    def closure_terms(self):
        """(eq7, eq8): as duas componentes não triviais de C_n A^n."""
        _, eq7, eq8 = mat_vec(self.C(self.n), self.vectors[self.n])
        return eq7, eq8

    @property
    def bracket(self):
        """2n - (eta_1 + 2 alpha + 2q - 7)."""
        return 2 * self.n - (self.eta1 + 2 * self.alpha + 2 * self.q - 7)

    @property
    def closed(self):
        return not self.vectors[self.n][2] and not self.bracket

    def recursion_defects(self):
        """D_k A^k - C_{k-1} A^{k-1} para k = 0..n (D_0 A^0 em k = 0)."""
        defects = [mat_vec(self.D(0), self.vectors[0])]
        for k in range(1, self.n + 1):
            lhs = mat_vec(self.D(k), self.vectors[k])
            rhs = mat_vec(self.C(k - 1), self.vectors[k - 1])
            defects.append([x - y for x, y in zip(lhs, rhs)])
        return defects

    def coefficient_strings(self):
        return [[str(value) for value in vector] for vector in self.vectors]

    def to_dict(self):
        return {
            'n': self.n,
            'point': [fraction_to_string(self.q), fraction_to_string(self.eta1)],
            'alpha': str(self.alpha),
            'coefficients': self.coefficient_strings(),
            'collisions': self.collisions,
            'closed': self.closed,
            'beta': float(self.alpha),
        }


def _collision(alpha, alpha_minus, k):
    if alpha - k == alpha_minus:
        return 'alpha0+ - k = alpha0-'
    if alpha - k == 1:
        return 'alpha0+ - k = 1'
    return 'desconhecida'


def build_recursion_mq(q, eta1, n):
    """
    Constrói A^0..A^n exatamente para alpha = alpha0+.

    Args:
        q (Fraction): Expoente (<= 0)
        eta1 (Fraction): eta(1) >= -q/4
        n (int): Grau de fechamento (>= 1)

    Returns:
        RecursionState: Tabela normalizada por theta_0(0) = sum_k A_0^k = 1

    Raises:
        DomainError: Fora de D_(-q)
        SingularityError: D_k singular sem regra degenerada aplicável
    """
    q, eta1 = Fraction(q), Fraction(eta1)
    check_domain_mq(q, eta1)
    if n < 1:
        raise DomainError(f"n={n} deve ser >= 1")
    alpha, alpha_minus = alpha_roots(q, eta1)
    vectors = [null_eigenvector(alpha, q, eta1)]
    collisions = []
    for k in range(1, n + 1):
        d_k = d_matrix(alpha, q, eta1, k)
        rhs = mat_vec(c_matrix(alpha, q, eta1, k - 1), vectors[k - 1])
        if det3(d_k):
            vectors.append(solve(d_k, rhs))
            continue
        collision = _collision(alpha, alpha_minus, k)
        if k == 1 and n == 1 and collision.endswith('alpha0-'):
            # Solução particular explícita no nível k = n = 1
            a1 = -Fraction(1, 4) * (eta1 + q - 1) * vectors[0][2]
            a0 = as_scalar(q - 2) / (alpha + q - 4) * a1
            vectors.append([a0, a1, as_scalar(0)])
            collisions.append({'k': k, 'collision': collision, 'rule': 'k=n=1'})
            continue
        raise SingularityError(
            f"D_{k} singular em (q, eta_1)=({q}, {eta1}): {collision}", k=k, collision=collision
        )

    total = sum((vector[0] for vector in vectors), QuadExtScalar(0))
    normalized = bool(total)
    if normalized:
        vectors = [[value / total for value in vector] for vector in vectors]
    else:
        logger.warning("sum_k A_0^k = 0 em (q, eta_1)=(%s, %s): tabela não normalizada", q, eta1)
    return RecursionState(
        n=n, q=q, eta1=eta1, alpha=alpha, alpha_minus=alpha_minus,
        vectors=vectors, collisions=collisions, normalized=normalized,
    )


def on_ellipse(n, q, eta1):
    """(q - 1)^2 + (eta_1 + q - 2)^2 = (2n - 1)^2 + 1."""
    return (q - 1) ** 2 + (eta1 + q - 2) ** 2 == (2 * n - 1) ** 2 + 1


def ellipse_index(q, eta1):
    """n >= 1 tal que (q, eta_1) está em E_n, isto é Z^ = (2n - 1)^2; None fora das elipses."""
    z = Fraction(z_hat(Fraction(q), Fraction(eta1)))
    if z.denominator != 1 or z.numerator < 1:
        return None
    root = math.isqrt(z.numerator)
    if root * root != z.numerator or root % 2 == 0:
        return None
    return (root + 1) // 2


def exceptional_level(n, q, eta1):
    """
    Nível k em [2, n] com alpha0+ - k = 1 num ponto de E_n, ou None.

    Nesses pontos q = q_(n,k)^- e eta_1 = 5 + 2(n - k) - 2q; D_k é singular e o
    espectro vale alpha0+ por continuidade.
    """
    for k in range(2, n + 1):
        if eta1 == 5 + 2 * (n - k) - 2 * q:
            return k
    return None


@attr.s(auto_attribs=True)
class ClosureVerdict:
    n: int
    closed: bool
    state: RecursionState

    @property
    def beta(self):
        return float(self.state.alpha)

    def to_dict(self):
        data = self.state.to_dict()
        data.update({'case': 'closure', 'closed': self.closed})
        return data


def verify_closure_on_ellipse(n, q, eta1):
    """
    Verifica exatamente que A_2^n = 0 e que o colchete de eq7 se anula em E_n.

    Args:
        n (int): Grau (>= 1)
        q, eta1 (Fraction): Ponto racional de E_n dentro de D_(-q)

    Returns:
        ClosureVerdict: Veredito e tabela exata

    Raises:
        DomainError: Ponto fora de E_n ou de D_(-q)
    """
    q, eta1 = Fraction(q), Fraction(eta1)
    if not on_ellipse(n, q, eta1):
        raise DomainError(f"(q, eta_1)=({q}, {eta1}) não está na elipse E_{n}")
    state = build_recursion_mq(q, eta1, n)
    logger.debug("Fechamento em E_%d, ponto (%s, %s): %s", n, q, eta1, state.closed)
    return ClosureVerdict(n=n, closed=state.closed, state=state)


def verify_closure_points(n, points, num_workers=1):
    """Verifica vários pontos de E_n em paralelo; resultados na ordem de entrada."""
    results = [None] * len(points)
    with ThreadPoolExecutor(max_workers=max(1, num_workers)) as executor:
        future_to_index = {
            executor.submit(verify_closure_on_ellipse, n, q, eta1): i for i, (q, eta1) in enumerate(points)
        }
        for future in as_completed(future_to_index):
            results[future_to_index[future]] = future.result()
    return results


def alternative_eta1(n, q):
    """eta_1 na curva eta_1 + q - 1 = q(q-2)/(4(n+1)) - n."""
    q = Fraction(q)
    return q * (q - 2) / (4 * (n + 1)) - n - q + 1


@attr.s(auto_attribs=True)
class FalsificationResult:
    n: int
    witness: QuadExtScalar
    state: RecursionState
    ellipse_n: int = None

    @property
    def no_further_solution(self):
        """Testemunha não nula, ou ponto sobre uma elipse cuja solução já é conhecida."""
        return bool(self.witness) or self.ellipse_n is not None

    def to_dict(self):
        data = self.state.to_dict()
        data.update({'case': 'alternative', 'witness': str(self.witness),
                     'no_further_solution': self.no_further_solution, 'ellipse_n': self.ellipse_n})
        return data


def falsify_alternative_condition(n, q):
    """
    Testemunha (eta_1 + q + 1) A_1^n - (eta_1 + q - 1) A_2^n na curva alternativa.

    Em q = -2n e q = -2(n + 1) a curva corta as elipses E_(n+1) e E_(n+2); ali a
    testemunha se anula e `ellipse_n` registra o índice da elipse.

    Returns:
        FalsificationResult: Valor exato; não nulo significa "nenhuma solução adicional"
    """
    q = Fraction(q)
    eta1 = alternative_eta1(n, q)
    state = build_recursion_mq(q, eta1, n)
    vector = state.vectors[n]
    witness = (eta1 + q + 1) * vector[1] - (eta1 + q - 1) * vector[2]
    result = FalsificationResult(n=n, witness=witness, state=state, ellipse_n=ellipse_index(q, eta1))
    if not witness:
        logger.info("Testemunha nula em n=%d, q=%s (elipse E_%s)", n, q, result.ellipse_n)
    return result


def exceptional_points(n, k):
    """q_{n,k}^+- = n - k + 2 +- sqrt((n-1)^2 + (k-1)(2n+1-k))."""
    delta = (n - 1) ** 2 + (k - 1) * (2 * n + 1 - k)
    if delta < 0:
        raise DomainError(f"Discriminante negativo para (n, k)=({n}, {k})")
    root = math.sqrt(delta)
    return n - k + 2 - root, n - k + 2 + root


def ellipse_rational_points(n, count, max_denominator=64):
    """
    Pontos racionais de E_n dentro de D_(-q) pela construção de cordas por (2n-1, 1).

    Com X = q - 1 e Y = eta_1 + q - 2, a reta X = 2n - 1 + t, Y = 1 + m t corta a
    elipse em t = -2((2n - 1) + m)/(1 + m^2).

    Returns:
        list: Pares (q, eta_1) de Fractions, em ordem determinística
    """
    points, seen = [], set()
    for denominator in range(1, max_denominator + 1):
        for numerator in range(-denominator, denominator + 1):
            m = Fraction(numerator, denominator)
            if m in seen:
                continue
            seen.add(m)
            t = -2 * ((2 * n - 1) + m) / (1 + m * m)
            if t == 0:
                continue
            q = 2 * n + t
            eta1 = 1 + m * t + 2 - q
            if q > 0 or eta1 < -q / 4:
                continue
            if exceptional_level(n, q, eta1) is not None:
                logger.debug("Ponto excepcional (%s, %s) de E_%d ignorado", q, eta1, n)
                continue
            points.append((q, eta1))
            if len(points) >= count:
                return points
    return points


def fuchsian_matrices(q, eta1):
    """Matrizes A e B do sistema theta' = A theta/xi + B theta/(1 - xi)."""
    q, eta1 = Fraction(q), Fraction(eta1)
    half = Fraction(1, 2)
    a = [
        [Fraction(0), Fraction(0), Fraction(0)],
        [half * (eta1 + q - 3), -half * (eta1 + 1), Fraction(0)],
        [Fraction(0), Fraction(-2), half * (q - 2)],
    ]
    b = [
        [3 - q, q - 2, Fraction(0)],
        [half * (eta1 + q - 3), -(eta1 + q - 3), half * (eta1 + q - 1)],
        [Fraction(0), Fraction(-2), Fraction(3)],
    ]
    return a, b


def characteristic_b(alpha, q, eta1):
    """det(B - alpha Id)."""
    _, b = fuchsian_matrices(q, eta1)
    return det3(mat_sub_scalar([[as_scalar(v) for v in row] for row in b], as_scalar(alpha)))


@attr.s(auto_attribs=True)
class FuchsianClassification:
    alpha_plus: QuadExtScalar
    alpha_minus: QuadExtScalar
    resonances: dict

    @property
    def eigenvalues(self):
        return self.alpha_plus, self.alpha_minus, QuadExtScalar(1)

    @property
    def beta(self):
        return float(self.alpha_plus)

    def to_dict(self):
        return {
            'eigenvalues': [str(v) for v in self.eigenvalues],
            'resonances': self.resonances,
            'beta': self.beta,
        }


def fuchsian_classification(q, eta1):
    """
    Autovalores {alpha0+, alpha0-, 1} de B, ressonâncias e beta(2, q) = alpha0+.
    """
    q, eta1 = Fraction(q), Fraction(eta1)
    check_domain_mq(q, eta1)
    plus, minus = alpha_roots(q, eta1)
    resonances = {
        'plus_minus': (plus - minus).is_integer(),
        'plus_one': (plus - 1).is_integer(),
        'minus_one': (minus - 1).is_integer(),
    }
    return FuchsianClassification(alpha_plus=plus, alpha_minus=minus, resonances=resonances)


def mq_table(state):
    """
    Tabela de Fourier das soluções polinomiais:
    theta_j = (1-xi)^(-alpha) sum_k A_j^k (1-xi)^k, j = 0, 1, 2.
    """
    alpha = float(state.alpha)
    modes = []
    for j in range(3):
        coefficients = [float(vector[j]) for vector in state.vectors]

        def value(xi, coefficients=coefficients):
            return sum(c * (1.0 - xi) ** (k - alpha) for k, c in enumerate(coefficients))

        def derivative(xi, coefficients=coefficients):
            return sum(c * (alpha - k) * (1.0 - xi) ** (k - alpha - 1.0) for k, c in enumerate(coefficients))

        modes.append(FourierMode(value, derivative))
    return FourierTable(
        q=float(state.q), eta={1: float(state.eta1), 2: -float(state.q)}, modes=modes, label='eta2_mq'
    )
