"""
Solução em série de potências, ordem a ordem, do problema de valor inicial
perto da órbita singular, e certificado de decaimento do resíduo
"""
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np
from tqdm import tqdm

from config.settings import CERTIFICATE_CONFIG, SERIES_CONFIG
from src.cohom1 import second_bianchi_residual
from src.compat import CompatibilitySystem, build_system, normalize_free_values
from src.equations import (LAPSE_FUNCTION, ArcLength, EinsteinTarget, Gauge, Reparametrized,
                           SolitonTarget, StageModel, Target, TensorTarget, check_problem,
                           extra_functions, parse_gauge, parse_target, pivot_preference)
from src.exceptions import (CertificationFailed, InputSchemaError, NullspaceWarning,
                            ObstructionAtOrder)
from src.liealg import FibrationData
from src.series import AffineScalar, TruncatedSeries, coefficient_name, solve_linear_batch
from src.smoothness import SmoothnessData
from utils.rational_io import RationalIO, require
from utils.residual_collector import ResidualCollector


@dataclass
class IVPProblem:
    data: FibrationData
    sd: SmoothnessData
    target: Target
    gauge: Gauge = field(default_factory=ArcLength)
    free_values: Dict[str, Any] = field(default_factory=dict)
    order: int = SERIES_CONFIG['default_order']

    def __post_init__(self):
        if self.order < 0 or self.order > SERIES_CONFIG['max_order']:
            raise InputSchemaError('order', f"ordem fora de [0, {SERIES_CONFIG['max_order']}]")
        self.free_values = normalize_free_values(self.free_values)

    @property
    def functions(self) -> List[str]:
        return list(self.sd.functions) + extra_functions(self.target, self.gauge)


@dataclass
class IVPSolution:
    """
    Coeficientes [f(0), f[2], f[4], ...] de cada função até t^N

    provenance[nome] diz de onde veio cada coeficiente: 'compat', 'livre',
    'gauge' ou 'ordem k'.
    """
    problem: IVPProblem
    coefficients: Dict[str, List[Fraction]]
    provenance: Dict[str, str]
    compat: Optional[CompatibilitySystem] = None
    nullspace: List[str] = field(default_factory=list)
    certificate: Optional[ResidualCollector] = None

    @property
    def order(self) -> int:
        return self.problem.order

    def series(self, function: str) -> TruncatedSeries:
        values = self.coefficients[function]
        return TruncatedSeries.from_dict({2 * k: v for k, v in enumerate(values)})

    def model(self, extra_orders: int = 0) -> StageModel:
        """Modelo com os polinômios resolvidos, expandido até N + 1 + extra_orders"""
        p = self.problem
        return StageModel(p.data, p.sd, p.target, p.gauge, self.coefficients, stage=None,
                          order=p.order + 1 + extra_orders)

    def to_dict(self) -> Dict[str, Any]:
        p = self.problem
        raw = {
            'example': p.data.name,
            'target': target_text(p.target),
            'gauge': gauge_text(p.gauge),
            'order': p.order,
            'free': {k: RationalIO.dump(v) for k, v in p.free_values.items()},
            'coefficients': {f: [RationalIO.dump(c) for c in values]
                             for f, values in self.coefficients.items()},
            'provenance': dict(self.provenance),
        }
        if isinstance(p.target, TensorTarget) and p.target.beta is not None:
            raw['beta'] = {str(k): RationalIO.dump(v.constant) for k, v in p.target.beta.items()}
        return raw

    @classmethod
    def from_dict(cls, raw: Dict[str, Any], data: FibrationData, sd: SmoothnessData) -> 'IVPSolution':
        """
        Reconstrói uma solução emitida por `solve --emit json`

        Args:
            raw: conteúdo do arquivo
            data: dados de Lie do exemplo indicado em raw['example']
            sd: dados de suavidade do mesmo exemplo

        Returns:
            IVPSolution sem certificado
        """
        target = parse_target(require(raw, 'target'), data, sd)
        if isinstance(target, TensorTarget) and raw.get('beta'):
            target.beta = TruncatedSeries.from_dict(RationalIO.parse_series(raw['beta'], 'beta'))
        problem = IVPProblem(data, sd, target, parse_gauge(raw.get('gauge', 'arclength')),
                             raw.get('free', {}), int(require(raw, 'order')))
        coefficients = {f: [RationalIO.parse(c, f"coefficients/{f}") for c in values]
                        for f, values in require(raw, 'coefficients').items()}
        return cls(problem, coefficients, dict(raw.get('provenance', {})))


def target_text(target: Target) -> str:
    if isinstance(target, EinsteinTarget):
        return f"einstein:{target.lam}"
    if isinstance(target, SolitonTarget):
        return f"soliton:{target.lam},{target.inv_m}"
    return f"ricci:{target.source}"


def gauge_text(gauge: Gauge) -> str:
    if isinstance(gauge, Reparametrized):
        return f"reparam:{gauge.h0}"
    return 'arclength'


def _raise_inconsistent(next_model: StageModel, power: int):
    found = next_model.inconsistencies(through=next_model.stage - 1)
    if found:
        equation_id, at, residual = found[0]
        raise ObstructionAtOrder(power, equation_id, f"coeficiente de t^{at} = {residual}")


def solve_series(problem: IVPProblem, progress: bool = False) -> IVPSolution:
    """
    Resolve as equações ordem a ordem até t^N

    Em cada ordem 2m as incógnitas f[2m] entram linearmente nos coeficientes
    das combinações de restrição; o lote é resolvido exatamente, substituído
    e conferido contra todos os coeficientes que já deveriam se anular.

    Args:
        problem: problema de valor inicial
        progress: mostra barra de progresso sobre as ordens

    Returns:
        IVPSolution

    Raises:
        ObstructionAtOrder: sistema inconsistente na ordem indicada
    """
    data, sd, target, gauge = problem.data, problem.sd, problem.target, problem.gauge
    check_problem(target, gauge)
    functions = problem.functions

    system = build_system(data, sd, target, gauge, problem.free_values)
    if system.obstructions:
        row = system.obstructions[0]
        raise ObstructionAtOrder(0, row.id, f"{row.equation} ≠ 0")
    values = system.values()

    coefficients = {f: [values.get(coefficient_name(f, 0), Fraction(0))] for f in functions}
    provenance = {}
    for f in functions:
        name = coefficient_name(f, 0)
        if f == LAPSE_FUNCTION and name in system.free:
            provenance[name] = 'gauge'
        else:
            provenance[name] = 'livre' if name in system.free else 'compat'
    model = StageModel(data, sd, target, gauge, coefficients, stage=1)
    _raise_inconsistent(model, 0)

    nullspace = []
    stages = range(1, problem.order // 2 + 1)
    for m in tqdm(stages, desc="Ordens", disable=not progress):
        power = 2 * m
        rows = model.rows()
        result = solve_linear_batch([row for _, row in rows],
                                    pivot_preference(sd, target, gauge, power))
        if result.obstructions:
            index, residual = result.obstructions[0]
            raise ObstructionAtOrder(power, rows[index][0], f"{residual} ≠ 0")

        free = [name for name in model.unknowns() if name not in result.solved]
        for name in free:
            if name.startswith(LAPSE_FUNCTION):
                provenance[name] = 'gauge'
                continue
            nullspace.append(name)
            provenance[name] = 'livre'
            warnings.warn(f"direção livre inesperada {name} na ordem {power}", NullspaceWarning)
        chosen = {name: AffineScalar(problem.free_values.get(name, Fraction(0))) for name in free}
        stage_values = {name: value.constant for name, value in chosen.items()}
        for name, expression in result.solved.items():
            stage_values[name] = expression.substitute(chosen).constant
            provenance[name] = f"ordem {power}"
        for f in functions:
            coefficients[f].append(stage_values.get(coefficient_name(f, power), Fraction(0)))
        model = StageModel(data, sd, target, gauge, coefficients, stage=m + 1)
        _raise_inconsistent(model, power)

    return IVPSolution(problem, coefficients, provenance, system, nullspace)


def solve_soliton(problem: IVPProblem, progress: bool = False) -> IVPSolution:
    """
    Sóliton (quase Einstein) com potencial u par, v = u′ = 2tψ_v

    Args:
        problem: problema com alvo SolitonTarget

    Returns:
        IVPSolution com a função psi_v
    """
    if not isinstance(problem.target, SolitonTarget):
        raise InputSchemaError('target', "solve_soliton exige alvo soliton:<λ>,<1/m>")
    return solve_series(problem, progress)


def solve_reparametrized(problem: IVPProblem, beta: Optional[TruncatedSeries] = None,
                         progress: bool = False) -> IVPSolution:
    """
    Gauge h(r)²dr² + P(r) com h = h0 + r²ψ_h

    Args:
        problem: problema com gauge Reparametrized
        beta: alvo normal T(ċ,ċ) (par); para Einstein deve ser λ

    Returns:
        IVPSolution com a função psi_h
    """
    if not isinstance(problem.gauge, Reparametrized):
        raise InputSchemaError('gauge', "solve_reparametrized exige gauge reparam:<h0>")
    target = problem.target
    if beta is not None:
        if beta.parity not in ('even', 'zero'):
            raise InputSchemaError('beta', "β deve ser par")
        if isinstance(target, EinsteinTarget):
            if beta != TruncatedSeries.constant(target.lam):
                raise InputSchemaError('beta', f"para alvo de Einstein β deve ser λ = {target.lam}")
        elif isinstance(target, TensorTarget):
            target.beta = beta
    return solve_series(problem, progress)


def solve(problem: IVPProblem, progress: bool = False) -> IVPSolution:
    if isinstance(problem.target, SolitonTarget):
        return solve_soliton(problem, progress)
    if isinstance(problem.gauge, Reparametrized):
        return solve_reparametrized(problem, progress=progress)
    return solve_series(problem, progress)


def sample_points() -> np.ndarray:
    config = CERTIFICATE_CONFIG
    return np.logspace(config['log10_t_start'], config['log10_t_stop'], config['samples'])


def residual_certificate(sol: IVPSolution, raise_on_failure: bool = True) -> ResidualCollector:
    """
    Certifica numericamente o decaimento dos resíduos

    O resíduo é expandido exatamente além da ordem resolvida e avaliado em
    t = 10^-1 ... 10^-3; a inclinação log-log de cada combinação de restrição
    deve ser pelo menos (ordem certificada + 1) - tolerância.

    Args:
        sol: solução em série
        raise_on_failure: levanta CertificationFailed na primeira falha

    Returns:
        ResidualCollector com amostras, inclinações e verificações exatas
    """
    N = sol.order
    tolerance = CERTIFICATE_CONFIG['slope_tolerance']
    model = sol.model(CERTIFICATE_CONFIG['extra_orders'])
    collector = ResidualCollector()
    series_by_id: Dict[str, TruncatedSeries] = {}

    for constraint in sol.problem.sd.function_constraints:
        collector.register(constraint.id, constraint.d + N - 2 + 1 - tolerance)
        series_by_id[constraint.id] = model.constraint_residual(constraint)
    for constraint in sol.problem.sd.identity_constraints:
        collector.register(constraint.id, None)
        series_by_id[constraint.id] = model.constraint_residual(constraint)

    target = sol.problem.target
    if isinstance(target, SolitonTarget):
        collector.register('normal', N + 1 - tolerance)
        series_by_id['normal'] = model.normal
        identity = model.potential_identity
        if identity is not None:
            collector.register('potential', None)
            series_by_id['potential'] = identity
    else:
        normal = model.normal
        if normal is not None:
            collector.register('normal', None)
            series_by_id['normal'] = normal
        if model.reparametrized:
            collector.register('replace', N + 2 - tolerance)
            series_by_id['replace'] = model.replace
        elif model.beta is not None:
            collector.register('bianchi', None)
            series_by_id['bianchi'] = second_bianchi_residual(
                model.data, model.metric, model.target_matrix, model.beta)

    if isinstance(target, EinsteinTarget) and not model.reparametrized:
        last = N - 4
        bad = [k for k in range(min(model.normal.shift, 0), last + 1)
               if not model.normal.coefficient(k).is_zero()]
        collector.add_check('ricci_cc_menos_lambda', not bad,
                            f"coeficientes não nulos em t^{bad}" if bad else f"nulo até t^{last}")

    ts = sample_points()
    for equation_id, series in series_by_id.items():
        if series.is_zero():
            collector.add_exact(equation_id)
            continue
        for t in ts:
            collector.add_sample(equation_id, float(t), series.evaluate(float(t)))

    if raise_on_failure:
        failures = collector.failures()
        if failures:
            raise CertificationFailed(*failures[0])
    sol.certificate = collector
    return collector
