"""
Alvos, gauges e o modelo de resíduos usado em cada ordem da série

Um StageModel monta P a partir dos coeficientes já conhecidos das funções
(mais a incógnita da ordem atual, se houver) e avalia os resíduos
Ric - alvo nas combinações das restrições de suavidade.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from src.cohom1 import second_bianchi_residual, shape_L
from src.exceptions import InputSchemaError, InvalidLapse
from src.homogeneous import ricci_gh
from src.liealg import FibrationData
from src.series import AffineScalar, SeriesMatrix, TruncatedSeries, coefficient_name
from src.smoothness import Constraint, SmoothnessData, build_P, phi_series
from utils.rational_io import RationalIO, load_json, require

SOLITON_FUNCTION = 'psi_v'  # v = 2t·ψ_v(t²)
LAPSE_FUNCTION = 'psi_h'  # h = h0 + r²·ψ_h(r²)


@dataclass(frozen=True)
class EinsteinTarget:
    lam: Fraction

    def describe(self) -> str:
        return f"einstein λ = {self.lam}"


@dataclass
class TensorTarget:
    """T tangencial em séries exatas (posições de n) e, opcionalmente, β = T(ċ,ċ)"""
    entries: SeriesMatrix
    beta: Optional[TruncatedSeries] = None
    source: str = ''

    def describe(self) -> str:
        return f"tensor {self.source}".strip()

    @classmethod
    def from_dict(cls, raw: dict, data: FibrationData, source: str = '') -> 'TensorTarget':
        """
        Lê {"entries": [{"entry": [i, j], "series": {"k": "p/q"}}], "beta": {...}}

        Args:
            raw: conteúdo do arquivo
            data: dados de Lie (resolve rótulos)
            source: nome do arquivo, para relatórios

        Returns:
            TensorTarget
        """
        matrix = SeriesMatrix(data.dim_n)
        for k, item in enumerate(require(raw, 'entries')):
            pointer = f"entries/{k}"
            i, j = (data.position.get(data.index_of(x)) for x in require(item, 'entry', pointer))
            if i is None or j is None:
                raise InputSchemaError(pointer, "entrada fora de n = p ⊕ m")
            series = TruncatedSeries.from_dict(
                RationalIO.parse_series(require(item, 'series', pointer), f"{pointer}/series"))
            matrix[(i, j)] = series
            matrix[(j, i)] = series
        beta = None
        if raw.get('beta') is not None:
            beta = TruncatedSeries.from_dict(RationalIO.parse_series(raw['beta'], 'beta'))
        return cls(matrix, beta, source)


@dataclass(frozen=True)
class SolitonTarget:
    """Ric + Hess u - (1/m) du⊗du = λg"""
    lam: Fraction
    inv_m: Fraction = Fraction(0)

    def describe(self) -> str:
        return f"sóliton λ = {self.lam}, 1/m = {self.inv_m}"


@dataclass(frozen=True)
class ArcLength:
    def describe(self) -> str:
        return "comprimento de arco"


@dataclass(frozen=True)
class Reparametrized:
    """Métrica h(r)²dr² + P(r), h = h0 + r²ψ_h"""
    h0: Fraction

    def __post_init__(self):
        if self.h0 <= 0:
            raise InvalidLapse(self.h0)

    def describe(self) -> str:
        return f"reparametrizado h0 = {self.h0}"


Target = Union[EinsteinTarget, TensorTarget, SolitonTarget]
Gauge = Union[ArcLength, Reparametrized]


def parse_target(text: str, data: FibrationData, sd: Optional[SmoothnessData] = None) -> Target:
    """
    Interpreta einstein:<λ> | ricci:<arquivo> | soliton:<λ>,<1/m>

    Args:
        text: especificação da linha de comando
        data: dados de Lie
        sd: dados de suavidade (valida tensores alvo)

    Returns:
        Alvo correspondente
    """
    kind, _, value = text.partition(':')
    if kind == 'einstein':
        return EinsteinTarget(RationalIO.parse(value, 'target'))
    if kind == 'soliton':
        parts = value.split(',')
        lam = RationalIO.parse(parts[0], 'target')
        inv_m = RationalIO.parse(parts[1], 'target') if len(parts) > 1 else Fraction(0)
        return SolitonTarget(lam, inv_m)
    if kind == 'ricci':
        target = TensorTarget.from_dict(load_json(value), data, value)
        if sd is not None:
            problems = sd.check_tensor(target.entries)
            if problems:
                raise InputSchemaError(value, '; '.join(problems))
        return target
    raise InputSchemaError('target', f"alvo desconhecido: {text!r}")


def parse_gauge(text: str) -> Gauge:
    kind, _, value = text.partition(':')
    if kind == 'arclength':
        return ArcLength()
    if kind == 'reparam':
        return Reparametrized(RationalIO.parse(value or '1', 'gauge'))
    raise InputSchemaError('gauge', f"gauge desconhecido: {text!r}")


def extra_functions(target: Target, gauge: Gauge) -> List[str]:
    extra = []
    if isinstance(target, SolitonTarget):
        extra.append(SOLITON_FUNCTION)
    if isinstance(gauge, Reparametrized):
        extra.append(LAPSE_FUNCTION)
    return extra


def check_problem(target: Target, gauge: Gauge):
    if isinstance(gauge, Reparametrized):
        if isinstance(target, SolitonTarget):
            raise InputSchemaError('gauge', "o gauge reparametrizado não se aplica a sólitons")
        if isinstance(target, TensorTarget) and target.beta is None:
            raise InputSchemaError('beta', "o gauge reparametrizado exige β = T(ċ,ċ)")


def pivot_preference(sd: SmoothnessData, target: Target, gauge: Gauge, power: int) -> List[str]:
    """Ordem dos pivôs: ψ_v primeiro, funções do ansatz, ψ_h por último (gauge)"""
    names = []
    if isinstance(target, SolitonTarget):
        names.append(SOLITON_FUNCTION)
    names += list(sd.pivot_order) + [f for f in sd.functions if f not in sd.pivot_order]
    if isinstance(gauge, Reparametrized):
        names.append(LAPSE_FUNCTION)
    return [coefficient_name(name, power) for name in names]


class StageModel:
    """
    Resíduos das equações com as funções truncadas

    Com `stage = m`, cada função usa os coeficientes conhecidos abaixo de t^(2m)
    e a incógnita "<função>[2m]", com ordem 2m + 1. Com `stage = None`, as
    funções são os polinômios dados, declarados conhecidos até `order`.
    """

    def __init__(self, data: FibrationData, sd: SmoothnessData, target: Target, gauge: Gauge,
                 known: Dict[str, Sequence[Fraction]], stage: Optional[int] = None,
                 order: Optional[int] = None, include_z: bool = True):
        self.data = data
        self.sd = sd
        self.target = target
        self.gauge = gauge
        self.stage = stage
        self.include_z = include_z
        self.functions = list(sd.functions) + extra_functions(target, gauge)

        if stage is not None:
            truncated = {f: list(known.get(f, []))[:stage] for f in self.functions}
            series = phi_series(truncated, 2 * stage + 1, unknown_power=2 * stage)
        else:
            series = phi_series({f: list(known.get(f, [])) for f in self.functions}, order)
        self.series = series

        self.reparametrized = isinstance(gauge, Reparametrized)
        p_scale = gauge.h0 ** 2 if self.reparametrized else Fraction(1)
        self.metric = build_P(sd, {f: series[f] for f in sd.functions}, p_scale)

        self.v = None
        if isinstance(target, SolitonTarget):
            self.v = series[SOLITON_FUNCTION].shifted(1) * 2
        self.h = None
        if self.reparametrized:
            self.h = series[LAPSE_FUNCTION].shifted(2) + TruncatedSeries.constant(gauge.h0)

        self._cache: Dict[str, object] = {}

    # -- peças compartilhadas ----------------------------------------------
    def _get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def P1(self) -> SeriesMatrix:
        return self._get('P1', self.metric.derivative)

    @property
    def P2(self) -> SeriesMatrix:
        return self._get('P2', lambda: self.P1.differentiate())

    @property
    def S(self) -> SeriesMatrix:
        return self._get('S', lambda: self.metric.inverse @ self.P1)

    @property
    def trace_S(self) -> TruncatedSeries:
        return self._get('trS', lambda: self.S.trace())

    @property
    def target_matrix(self) -> SeriesMatrix:
        def build():
            if isinstance(self.target, TensorTarget):
                return self.target.entries
            return self.metric.matrix.scale(self.target.lam)
        return self._get('T', build)

    @property
    def beta(self) -> Optional[TruncatedSeries]:
        if isinstance(self.target, TensorTarget):
            return self.target.beta
        return TruncatedSeries.constant(self.target.lam)

    @property
    def ricci_gh(self) -> SeriesMatrix:
        return self._get('gh', lambda: ricci_gh(self.data, self.metric, self.include_z))

    @property
    def lapse_factors(self) -> Tuple[TruncatedSeries, TruncatedSeries]:
        """(h⁻², ḣ/h)"""
        def build():
            h_inv = self.h.invert()
            return h_inv * h_inv, self.h.differentiate() * h_inv
        return self._get('lapse', build)

    # -- resíduos ------------------------------------------------------------
    @property
    def tangential(self) -> SeriesMatrix:
        """Ric_M + termos do sóliton/lapso - T, como matriz em n"""
        def build():
            L = shape_L(self.metric)
            if self.reparametrized:
                h_inv2, h_log = self.lapse_factors
                L = (L + self.P1.scale(h_log * Fraction(1, 2))).scale(h_inv2)
            residual = self.ricci_gh + L - self.target_matrix
            if self.v is not None:
                residual = residual + self.P1.scale(self.v * Fraction(1, 2))
            return residual
        return self._get('tangential', build)

    @property
    def normal(self) -> Optional[TruncatedSeries]:
        """Equação normal: imposta para sólitons, reportada nos demais casos"""
        def build():
            cc = (self.S @ self.S).trace().scale(Fraction(1, 4)) \
                - (self.metric.inverse @ self.P2).trace().scale(Fraction(1, 2))
            if isinstance(self.target, SolitonTarget):
                return cc + self.v.differentiate() - (self.v * self.v).scale(self.target.inv_m) \
                    - TruncatedSeries.constant(self.target.lam)
            beta = self.beta
            if beta is None:
                return None
            if self.reparametrized:
                h_inv2, h_log = self.lapse_factors
                return cc * h_inv2 + h_log * h_inv2 * self.trace_S * Fraction(1, 2) - beta
            return cc - beta
        return self._get('normal', build)

    @property
    def replace(self) -> Optional[TruncatedSeries]:
        """β̇ + tr(P⁻¹Ṗ)β - tr(P⁻¹Ṫ) (equação de primeira ordem do gauge reparametrizado)"""
        def build():
            if self.beta is None:
                return None
            return second_bianchi_residual(self.data, self.metric, self.target_matrix, self.beta)
        return self._get('replace', build)

    @property
    def potential_identity(self) -> Optional[TruncatedSeries]:
        """v″ + ½trS·v′ - ¼tr(S²)v - v·v′ + λv, para sólitons com 1/m = 0"""
        if not isinstance(self.target, SolitonTarget) or self.target.inv_m:
            return None
        v1 = self.v.differentiate()
        return v1.differentiate() + self.trace_S * v1 * Fraction(1, 2) \
            - (self.S @ self.S).trace() * self.v * Fraction(1, 4) - self.v * v1 \
            + self.v * self.target.lam

    def constraint_residual(self, constraint: Constraint) -> TruncatedSeries:
        """Σ a_ij (Ric - T)_ij"""
        total = TruncatedSeries.zero()
        for i, j, a in constraint.a:
            total = total + self.tangential.get(i, j) * a
        return total

    # -- linhas do sistema ------------------------------------------------------
    def unknowns(self) -> List[str]:
        if self.stage is None:
            return []
        return [coefficient_name(f, 2 * self.stage) for f in self.functions]

    def rows(self) -> List[Tuple[str, AffineScalar]]:
        """Coeficientes que determinam as incógnitas da ordem atual"""
        m = self.stage
        rows = []
        for constraint in self.sd.function_constraints:
            rows.append((constraint.id,
                         self.constraint_residual(constraint).coefficient(constraint.d + 2 * m - 2)))
        if isinstance(self.target, SolitonTarget):
            rows.append(('normal', self.normal.coefficient(2 * m)))
        if self.reparametrized:
            rows.append(('replace', self.replace.coefficient(2 * m + 1)))
        return rows

    def inconsistencies(self, through: Optional[int] = None) -> List[Tuple[str, int, AffineScalar]]:
        """
        Coeficientes que deveriam se anular depois de resolvida a ordem 2·through

        Chamado no modelo do estágio seguinte (through = stage - 1), em que os
        coeficientes já resolvidos são racionais e a incógnita nova só aparece
        acima dos expoentes conferidos.

        Args:
            through: último estágio resolvido (padrão: o próprio estágio)

        Returns:
            Lista (equação, expoente, valor) dos que não se anulam
        """
        m = self.stage if through is None else through
        found = []
        max_d = max((c.d for c in self.sd.function_constraints), default=2)
        checks: List[Tuple[str, TruncatedSeries, int]] = []
        for constraint in self.sd.function_constraints:
            checks.append((constraint.id, self.constraint_residual(constraint),
                           constraint.d + 2 * m - 1))
        for constraint in self.sd.identity_constraints:
            checks.append((constraint.id, self.constraint_residual(constraint), max_d + 2 * m - 1))
        if isinstance(self.target, SolitonTarget):
            checks.append(('normal', self.normal, 2 * m + 1))
        if self.reparametrized:
            checks.append(('replace', self.replace, 2 * m + 1))
        for equation_id, series, last in checks:
            for power in range(min(series.shift, 0), int(min(last, series.order)) + 1):
                value = series.coefficient(power)
                if not value.is_zero():
                    found.append((equation_id, power, value))
        return found
