"""
Condições de compatibilidade em t = 0

As linhas são extraídas da avaliação simbólica de Ric_M - T com os valores
φ_k(0) como incógnitas; nenhum coeficiente fechado é transcrito.
"""
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from config.settings import COMPAT_CONFIG
from src.equations import (ArcLength, EinsteinTarget, Gauge, Reparametrized, SolitonTarget,
                           StageModel, Target, check_problem, pivot_preference)
from src.exceptions import ConditionStarViolated, ConditionStarWarning
from src.liealg import EQUIVALENCE_TYPES, FibrationData, check_condition_star
from src.series import (AffineScalar, coefficient_name, from_sympy_matrix, solve_linear_batch,
                        to_sympy_matrix)
from src.smoothness import MetricExpansion, SmoothnessData, extract_expansion
from utils.rational_io import RationalIO

AffineMatrix = List[List[AffineScalar]]


@dataclass
class CompatRow:
    """Uma condição de compatibilidade (equação afim = 0)"""
    id: str
    module: str
    kind: str  # trace, channel, trivial, p, normal, replace
    equation: AffineScalar
    status: str = 'solved'


@dataclass
class CompatibilitySystem:
    rows: List[CompatRow]
    solved: Dict[str, AffineScalar]
    free: List[str]
    obstructions: List[CompatRow]
    expansion: MetricExpansion
    model: StageModel
    free_values: Dict[str, Fraction] = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return not self.obstructions

    def values(self) -> Dict[str, Fraction]:
        """Valor de cada incógnita φ_k(0) com os parâmetros livres fixados"""
        default = RationalIO.parse(COMPAT_CONFIG['default_free_value'])
        free = {name: AffineScalar(self.free_values.get(name, default)) for name in self.free}
        result = {name: value.constant for name, value in free.items()}
        for name, expression in self.solved.items():
            result[name] = expression.substitute(free).constant
        return result


def normalize_free_values(raw: Optional[Dict[str, object]], power: int = 0) -> Dict[str, Fraction]:
    """Aceita 'phi4' ou 'phi4[0]' como chave"""
    values = {}
    for key, value in (raw or {}).items():
        name = key if '[' in key else coefficient_name(key, power)
        values[name] = RationalIO.parse(value, f"free/{key}")
    return values


def _matmul(a, b):
    rows, inner = len(a), len(b)
    cols = len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(inner)), AffineScalar()) for j in range(cols)]
            for i in range(rows)]


def _trace(matrix) -> AffineScalar:
    return sum((matrix[i][i] for i in range(len(matrix))), AffineScalar())


def _constant_inverse(rows: List[List[Fraction]]) -> List[List[Fraction]]:
    if not rows:
        return []
    return from_sympy_matrix(to_sympy_matrix(rows).inv())


def extrinsic_L_constants(exp: MetricExpansion) -> Tuple[AffineMatrix, AffineMatrix]:
    """
    Contribuição do operador de forma às condições de compatibilidade

    (a) L(m,m)(0) = -(dim p + 1)A(0) - ¼tr(A0⁻¹A1)A1 + ½A1A0⁻¹A1 + 2C0C0ᵀ
    (b) coeficiente de t² de L(p,p) = -2 dim p·B(0) - tr B(0)·Id
        + ½tr(A0⁻¹A1A0⁻¹A1)·Id - tr(A0⁻¹A(0))·Id + tr(C0ᵀA0⁻¹C0)·Id

    Args:
        exp: expansão da métrica perto da órbita singular

    Returns:
        (L_mm_0, L_pp_t2) como matrizes de escalares afins
    """
    dim_m, dim_p = len(exp.A0), exp.B.size
    A_zero = exp.at_zero('A')
    B_zero = exp.at_zero('B')
    A0_inv = _constant_inverse(exp.A0)
    A1 = [[AffineScalar(v) for v in row] for row in exp.A1]
    C0 = [[AffineScalar(v) for v in row] for row in exp.C0]
    C0_t = [[C0[i][j] for i in range(dim_m)] for j in range(dim_p)]
    inv = [[AffineScalar(v) for v in row] for row in A0_inv]

    trace_a = _trace(_matmul(inv, A1)) if dim_m else AffineScalar()
    a1_inv_a1 = _matmul(_matmul(A1, inv), A1) if dim_m else []
    c0_c0t = _matmul(C0, C0_t) if dim_m and dim_p else [[AffineScalar()] * dim_m for _ in range(dim_m)]
    L_mm = [[A_zero[i][j] * -(dim_p + 1) - A1[i][j] * trace_a.constant * Fraction(1, 4)
             + a1_inv_a1[i][j] * Fraction(1, 2) + c0_c0t[i][j] * 2
             for j in range(dim_m)] for i in range(dim_m)]

    scalar = -_trace(B_zero)
    if dim_m:
        scalar = scalar + _trace(_matmul(_matmul(inv, A1), _matmul(inv, A1))) * Fraction(1, 2)
        scalar = scalar - _trace(_matmul(inv, A_zero))
        if dim_p:
            scalar = scalar + _trace(_matmul(_matmul(C0_t, inv), C0))
    L_pp = [[B_zero[i][j] * (-2 * dim_p) + (scalar if i == j else AffineScalar())
             for j in range(dim_p)] for i in range(dim_p)]
    return L_mm, L_pp


def _module_positions(data: FibrationData, name: str) -> List[int]:
    return [data.position[g] for g in data.module(name).indices]


def compatibility_rows(data: FibrationData, model: StageModel) -> List[CompatRow]:
    """
    Linhas de compatibilidade a partir do resíduo tangencial simbólico em t = 0

    Args:
        data: dados de Lie
        model: modelo da ordem 0 (incógnitas φ_k[0])

    Returns:
        Linhas na ordem: traços por módulo, canais de equivalência, módulos
        triviais, p e, por fim, as equações escalares
    """
    R = model.tangential
    q = data.q_norms
    rows: List[CompatRow] = []

    for module in data.m_modules:
        if module.trivial:
            continue
        total = AffineScalar()
        for g in module.indices:
            u = data.position[g]
            total = total + R.get(u, u).coefficient(0) / q[g]
        rows.append(CompatRow(f"tr_{module.name}", module.name, 'trace', total))

    for eq in data.equivalences:
        if eq.level != 'K' or not eq.intertwiner:
            continue
        if data.module_side(eq.module_a) != 'm' or data.module_side(eq.module_b) != 'm':
            continue
        maps = [eq.intertwiner]
        for J in eq.complex_structures[:EQUIVALENCE_TYPES[eq.kind] - 1]:
            maps.append({src: _compose(J, targets) for src, targets in eq.intertwiner.items()})
        for k, f in enumerate(maps):
            total = AffineScalar()
            for g, targets in f.items():
                u = data.position[g]
                for h, coef in targets.items():
                    total = total + R.get(u, data.position[h]).coefficient(0) * coef / q[g]
            rows.append(CompatRow(f"ch_{eq.module_a}_{eq.module_b}_{k}",
                                  f"{eq.module_a}~{eq.module_b}", 'channel', total))

    for module in data.m_modules:
        if not module.trivial:
            continue
        positions = _module_positions(data, module.name)
        for a, u in enumerate(positions):
            for v in positions[a:]:
                rows.append(CompatRow(f"{module.name}_{data.labels[data.n_indices[u]]}"
                                      f"{data.labels[data.n_indices[v]]}",
                                      module.name, 'trivial', R.get(u, v).coefficient(0)))

    # P|p = t²·Id na forma de Gram: traço sem pesos de Q
    if data.dim_p:
        total = AffineScalar()
        for u in range(data.dim_p):
            total = total + R.get(u, u).coefficient(2)
        rows.append(CompatRow('tr_p', 'p', 'p', total / data.dim_p))

    if isinstance(model.target, SolitonTarget):
        rows.append(CompatRow('normal', 'ċ', 'normal', model.normal.coefficient(0)))
    if model.reparametrized:
        rows.append(CompatRow('replace', 'ċ', 'replace', model.replace.coefficient(1)))
    return rows


def _compose(J: Dict[int, Dict[int, Fraction]], targets: Dict[int, Fraction]) -> Dict[int, Fraction]:
    """J aplicado ao vetor f(e_u)"""
    result: Dict[int, Fraction] = {}
    for h, coef in targets.items():
        for k, value in J.get(h, {}).items():
            result[k] = result.get(k, Fraction(0)) + coef * value
    return {k: v for k, v in result.items() if v}


def build_system(data: FibrationData, sd: SmoothnessData, target: Target,
                 gauge: Optional[Gauge] = None,
                 free_values: Optional[Dict[str, object]] = None) -> CompatibilitySystem:
    """
    Monta e resolve o sistema linear de compatibilidade em {φ_k(0)}

    Args:
        data: dados de Lie
        sd: dados de suavidade
        target: alvo (tensor, Einstein ou sóliton)
        gauge: comprimento de arco (padrão) ou reparametrizado
        free_values: valores dos parâmetros livres ('phi4' ou 'phi4[0]')

    Returns:
        CompatibilitySystem; obstruções são registradas, não levantadas

    Raises:
        ConditionStarViolated: se (*) falha sem a restrição C = 0
    """
    gauge = gauge or ArcLength()
    check_problem(target, gauge)
    if not check_condition_star(data):
        if not sd.restricted_c:
            raise ConditionStarViolated(
                "há módulos equivalentes em p e m; declare a restrição C=0")
        warnings.warn("condição (*) falha; usando a restrição C ≡ 0", ConditionStarWarning)

    model = StageModel(data, sd, target, gauge, {}, stage=0)
    p_scale = gauge.h0 ** 2 if isinstance(gauge, Reparametrized) else Fraction(1)
    expansion = extract_expansion(model.metric, p_scale)
    rows = compatibility_rows(data, model)

    result = solve_linear_batch([row.equation for row in rows],
                                pivot_preference(sd, target, gauge, 0))
    obstructed = {index for index, _ in result.obstructions}
    for index, row in enumerate(rows):
        if index in obstructed:
            row.status = 'obstructed'
        elif row.equation.is_zero():
            row.status = 'free'
    free = [name for name in model.unknowns() if name not in result.solved]
    return CompatibilitySystem(rows, result.solved, free,
                               [rows[index] for index in sorted(obstructed)], expansion, model,
                               normalize_free_values(free_values))


@dataclass
class CancellationCheck:
    name: str
    passed: bool
    detail: str = ''


def _unknowns_of(matrix: AffineMatrix) -> set:
    names = set()
    for row in matrix:
        for value in row:
            names |= value.unknowns()
    return names


def verify_cancellations(data: FibrationData, sd: SmoothnessData,
                         target: Optional[Target] = None) -> List[CancellationCheck]:
    """
    Confere, na avaliação simbólica, os coeficientes fechados das condições de compatibilidade

    (1) Ric_M(0) em m×m não depende de B(0) e C(0);
    (2) tr Ric_M(0)|m_i tem coeficiente -(dim p + 1) em tr A(0)|m_i;
    (2c) Ric_M(0)|m_0 = -(dim p + 1)A(0)|m_0 + constantes, entrada a entrada;
    (3) a linha de p tem coeficiente -3 em tr B(0);
    (4) o termo de Z não altera a parte linear das linhas.

    Args:
        data: dados de Lie
        sd: dados de suavidade
        target: alvo (Einstein λ = 0 por padrão; só as partes lineares importam)

    Returns:
        Lista de verificações; falhas são entradas, não exceções
    """
    target = target or EinsteinTarget(Fraction(0))
    gauge = ArcLength()
    model = StageModel(data, sd, target, gauge, {}, stage=0)
    exp = extract_expansion(model.metric)
    A_zero, B_zero, C_zero = exp.at_zero('A'), exp.at_zero('B'), exp.at_zero('C')
    in_A = _unknowns_of(A_zero)
    in_B = _unknowns_of(B_zero) - in_A
    in_C = _unknowns_of(C_zero) - in_A
    R = model.tangential
    dim_p, dim_m = data.dim_p, data.dim_m
    factor = -(dim_p + 1)
    checks: List[CancellationCheck] = []

    bad = []
    for a in range(dim_m):
        for b in range(a, dim_m):
            value = R.get(dim_p + a, dim_p + b).coefficient(0)
            for name in (in_B | in_C) & value.unknowns():
                bad.append(f"({a},{b}):{name}")
    checks.append(CancellationCheck('mm_independe_de_B_C', not bad, ', '.join(bad)))

    rows = {row.id: row for row in compatibility_rows(data, model)}
    for module in data.m_modules:
        local = [data.position[g] - dim_p for g in module.indices]
        if module.trivial:
            bad = []
            for a in local:
                for b in local:
                    value = R.get(dim_p + a, dim_p + b).coefficient(0)
                    for name in in_A:
                        if value.coefficient(name) != factor * A_zero[a][b].coefficient(name):
                            bad.append(f"({a},{b}):{name}")
            checks.append(CancellationCheck(f"m0_{module.name}", not bad, ', '.join(bad)))
            continue
        trace_A = sum((A_zero[a][a] / data.q_norms[data.n_indices[dim_p + a]] for a in local),
                      AffineScalar())
        row = rows[f"tr_{module.name}"].equation
        bad = [name for name in in_A if row.coefficient(name) != factor * trace_A.coefficient(name)]
        checks.append(CancellationCheck(f"traco_{module.name}", not bad, ', '.join(sorted(bad))))

    if dim_p:
        trace_B = _trace(B_zero)
        row = rows['tr_p'].equation
        bad = [name for name in in_B if row.coefficient(name) != -3 * trace_B.coefficient(name)]
        checks.append(CancellationCheck('p_menos_3_trB', not bad, ', '.join(sorted(bad))))

    if not data.unimodular:
        plain = StageModel(data, sd, target, gauge, {}, stage=0, include_z=False)
        without = {row.id: row.equation for row in compatibility_rows(data, plain)}
        bad = [row_id for row_id, row in rows.items()
               if row.equation.terms != without[row_id].terms]
        checks.append(CancellationCheck('termo_Z_linear', not bad, ', '.join(bad)))
    return checks

