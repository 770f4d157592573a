"""
Ricci da variedade de cohomogeneidade um: componentes tangencial, normal e mista
no parâmetro de comprimento de arco
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import numpy as np

from src.homogeneous import MetricEndomorphism, ricci_gh
from src.liealg import FibrationData
from src.series import SeriesMatrix, TruncatedSeries


@dataclass
class CohomRicci:
    """Ric_M decomposto: tangencial (matriz em n), normal Ric(ċ,ċ) e misto Ric(e_u,ċ)"""
    tangential: SeriesMatrix
    normal: TruncatedSeries
    mixed: List[TruncatedSeries]


def shape_L(metric: MetricEndomorphism) -> SeriesMatrix:
    """
    Contribuição do operador de forma na equação de Gauss

    L = -¼ tr(P⁻¹P′)·P′ + ½ P′P⁻¹P′ - ½ P″

    Args:
        metric: métrica em séries

    Returns:
        Matriz simétrica de séries
    """
    P1 = metric.derivative()
    P2 = P1.differentiate()
    S = metric.inverse @ P1
    trace = S.trace()
    return P1.scale(trace * Fraction(-1, 4)) + (P1 @ S).scale(Fraction(1, 2)) \
        - P2.scale(Fraction(1, 2))


def ricci_m_tangential(data: FibrationData, metric: MetricEndomorphism) -> SeriesMatrix:
    """Ric_M(X, Y) = Ric_{G/H}(X, Y) + Q(LX, Y)"""
    return ricci_gh(data, metric) + shape_L(metric)


def ricci_cc(metric: MetricEndomorphism) -> TruncatedSeries:
    """Ric(ċ,ċ) = ¼ tr(P⁻¹P′P⁻¹P′) - ½ tr(P⁻¹P″)"""
    P1 = metric.derivative()
    S = metric.inverse @ P1
    return (S @ S).trace().scale(Fraction(1, 4)) \
        - (metric.inverse @ P1.differentiate()).trace().scale(Fraction(1, 2))


def ricci_uc(data: FibrationData, metric: MetricEndomorphism) -> List[TruncatedSeries]:
    """
    Componentes mistas Ric(e_u, ċ)

    Ric(e_u,ċ) = ½ Σ c_uk^s (P⁻¹P′)_ks - ½ Σ z_k (P⁻¹P′)_ku

    Args:
        data: dados de Lie
        metric: métrica em séries

    Returns:
        Lista indexada pelas posições de n
    """
    S = metric.inverse @ metric.derivative()
    z = data.trace_form()
    mixed = [TruncatedSeries.zero() for _ in range(metric.size)]
    for u, k, s, value in data.gamma_n():
        entry = S[(k, s)]
        if entry is not None:
            mixed[u] = mixed[u] + entry * (value / 2)
    for (k, u), entry in S.entries.items():
        if z[k]:
            mixed[u] = mixed[u] - entry * (z[k] / 2)
    return mixed


def cohom_ricci(data: FibrationData, metric: MetricEndomorphism) -> CohomRicci:
    return CohomRicci(ricci_m_tangential(data, metric), ricci_cc(metric), ricci_uc(data, metric))


def second_bianchi_residual(data: FibrationData, metric: MetricEndomorphism,
                            target: SeriesMatrix, beta: TruncatedSeries) -> TruncatedSeries:
    """
    Resíduo da identidade de Bianchi contraída na direção normal

    β′ + tr(P⁻¹P′)·β - tr(P⁻¹T′), com T a parte tangencial do alvo e
    β = T(ċ,ċ); anula-se para soluções exatas (e identicamente quando T = λP,
    β = λ).

    Args:
        data: dados de Lie (componentes mistas do alvo supostas nulas)
        metric: métrica em séries
        target: alvo tangencial T
        beta: alvo normal β

    Returns:
        Série do resíduo
    """
    trace = (metric.inverse @ metric.derivative()).trace()
    return beta.differentiate() + trace * beta - (metric.inverse @ target.differentiate()).trace()


def shape_numeric(P: np.ndarray, P1: np.ndarray, P2: Optional[np.ndarray] = None):
    """Termos de primeira ordem de L em ponto flutuante: (-¼ trS·P′ + ½ P′SP′ ..., S)"""
    P_inv = np.linalg.inv(P)
    S = P_inv @ P1
    first_order = -0.25 * np.trace(S) * P1 + 0.5 * P1 @ S
    if P2 is None:
        return first_order, S
    return first_order - 0.5 * P2, S


def ricci_cc_numeric(P: np.ndarray, P1: np.ndarray, P2: np.ndarray) -> float:
    P_inv = np.linalg.inv(P)
    S = P_inv @ P1
    return 0.25 * np.trace(S @ S) - 0.5 * np.trace(P_inv @ P2)
