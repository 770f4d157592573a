"""
Exceções e avisos do pacote
"""


class CohomError(Exception):
    """Erro base do pacote"""


class InputSchemaError(CohomError):
    """Arquivo de entrada fora do esquema documentado"""

    def __init__(self, pointer: str, message: str):
        self.pointer = pointer
        super().__init__(f"Erro no campo '{pointer}': {message}")


class AffineOverflow(CohomError):
    """Produto de dois coeficientes com incógnitas (sairia do fecho afim)"""


class NotInvertible(CohomError):
    """Série ou matriz sem termo líder invertível"""


class ParityViolation(CohomError):
    """Função do ansatz que deveria ser par não é par"""


class ZeroMetricEntry(CohomError):
    """Entrada diagonal nula na fórmula diagonal de Ricci"""


class ExpansionMismatch(CohomError):
    """A métrica não tem a forma de expansão esperada perto da órbita singular"""


class ConditionStarViolated(CohomError):
    """Há submódulos equivalentes em p e m e a restrição C = 0 não foi declarada"""


class NonTrivialIsotropy(CohomError):
    """Oráculo de Koszul exige isotropia trivial"""


class InvalidLapse(CohomError):
    """Valor inicial h0 do lapso não positivo"""

    def __init__(self, h0):
        self.h0 = h0
        super().__init__(f"h0 deve ser positivo (recebido {h0})")


class ObstructionAtOrder(CohomError):
    """Sistema linear inconsistente em uma ordem da série"""

    def __init__(self, order: int, equation_id: str, detail: str = ""):
        self.order = order
        self.equation_id = equation_id
        message = f"Obstrução na ordem {order}, equação {equation_id}"
        if detail:
            message += f": {detail}"
        super().__init__(message)


class CertificationFailed(CohomError):
    """Decaimento do resíduo abaixo do exigido"""

    def __init__(self, equation_id: str, slope: float, required: float):
        self.equation_id = equation_id
        self.slope = slope
        self.required = required
        super().__init__(
            f"Certificado falhou em {equation_id}: inclinação {slope:.3f} < {required:.3f}"
        )


class StepFailure(CohomError):
    """Integrador não atingiu a tolerância pedida"""

    def __init__(self, t: float, message: str):
        self.t = t
        super().__init__(f"Falha de passo em t={t:.6g}: {message}")


class PositivityLost(CohomError):
    """A métrica deixou de ser positiva definida"""

    def __init__(self, t: float, min_eigenvalue: float):
        self.t = t
        self.min_eigenvalue = min_eigenvalue
        super().__init__(
            f"Métrica degenerou em t={t:.6g} (menor autovalor {min_eigenvalue:.3e})"
        )


class ConditionStarWarning(UserWarning):
    """Condição (*) falha, mas a restrição C = 0 está ativa"""


class NullspaceWarning(UserWarning):
    """Direção livre inesperada em ordem positiva"""
