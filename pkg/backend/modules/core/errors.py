"""
Hierarquia de exceções do laboratório.

Cada classe carrega o código de saída usado pela linha de comando.
"""


class LoewnerError(Exception):
    """Erro base de todos os módulos."""

    exit_code = 1


class DomainError(LoewnerError, ValueError):
    """Parâmetros fora do domínio de validade de uma fórmula ou operação."""

    exit_code = 2


class QualityError(LoewnerError):
    """Estimativa Monte Carlo abaixo da qualidade configurada."""

    exit_code = 3


class VerificationError(LoewnerError):
    """Uma verificação exata retornou veredito negativo."""

    exit_code = 3


class BlowUpError(LoewnerError):
    """Trajetória da EDO de Loewner encostou na singularidade do driver."""

    exit_code = 3


class ConvergenceError(LoewnerError):
    """Série hipergeométrica não convergiu dentro do limite de termos."""

    exit_code = 3


class QuadratureError(LoewnerError):
    """Quadratura adaptativa falhou com estimativa de erro inaceitável."""

    exit_code = 3


class SingularityError(LoewnerError):
    """Matriz D_k singular sem regra degenerada aplicável."""

    exit_code = 3

    def __init__(self, message, k=None, collision=None):
        super().__init__(message)
        self.k = k
        self.collision = collision


class RootFindingError(LoewnerError):
    """Falha de enquadramento ao traçar uma curva de transição de fase."""

    exit_code = 3
