"""
Tipos compartilhados pelos módulos de espectros exatos.
"""
import enum

import attr

from ..core.errors import DomainError


class Branch(enum.Enum):
    """Forma analítica que atinge o espectro."""

    TIP = 'tip'
    ZERO = 'zero'
    BULK0 = 'bulk0'
    BULK0_PLUS = 'bulk0+'
    BULK0_MINUS = 'bulk0-'
    LIN = 'lin'
    ONE = 'one'
    ONE_PLUS = 'one+'
    ONE_MINUS = 'one-'
    TWO = 'two'
    LLE = 'lle'


@attr.s(auto_attribs=True, frozen=True)
class MomentExponents:
    """Par complexo (p, q) que indexa o momento misto."""

    p: complex
    q: complex

    @property
    def t(self):
        return float(complex(self.p).real)

    @property
    def t_tilde(self):
        return float(complex(self.p).imag)


@attr.s(auto_attribs=True, frozen=True)
class SleParams:
    """Parâmetros (kappa, a) do condutor exp(i(sqrt(kappa) B_t + a t))."""

    kappa: float
    a: float = 0.0

    def __attrs_post_init__(self):
        if self.kappa < 0:
            raise DomainError(f"kappa={self.kappa} deve ser >= 0")


@attr.s(auto_attribs=True, frozen=True)
class SpectrumResult:
    """
    Valor do espectro com o ramo que o atinge.

    `valid` é falso quando a fórmula exige uma raiz quadrada de argumento
    negativo; nesse caso `beta` é nan.
    """

    beta: float
    branch: Branch
    tau: float = None
    valid: bool = True

    def to_dict(self):
        return {'beta': self.beta, 'branch': self.branch.value, 'tau': self.tau, 'valid': self.valid}
