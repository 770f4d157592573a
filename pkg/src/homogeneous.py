"""
Curvatura de Ricci da órbita principal G/H a partir das constantes de estrutura

Todas as fórmulas usam a forma de Gram: P é a matriz de g_t na base escolhida
de n = p ⊕ m (posições 0..dim_p-1 para p, depois m) e c_ij^u são os
coeficientes dos colchetes projetados em n.
"""
from functools import lru_cache
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.exceptions import ZeroMetricEntry
from src.liealg import FibrationData
from src.series import SeriesMatrix, TruncatedSeries

SparseVector = Dict[int, TruncatedSeries]


class MetricEndomorphism:
    """
    Métrica g_t em n como matriz de séries, com inversa em cache

    pivot_shifts[i] = s indica que a entrada diagonal i começa em t^(2s)
    (1 nas posições de p quando P|p = t²·Id + ...).
    """

    def __init__(self, data: FibrationData, matrix: SeriesMatrix,
                 pivot_shifts: Optional[Sequence[int]] = None):
        self.data = data
        self.matrix = matrix
        self.size = matrix.size
        self.pivot_shifts = list(pivot_shifts) if pivot_shifts is not None else [0] * self.size
        self._inverse = None

    @classmethod
    def constant(cls, data: FibrationData, rows: Sequence[Sequence]) -> 'MetricEndomorphism':
        return cls(data, SeriesMatrix.from_constants([[Fraction(v) for v in row] for row in rows]))

    @classmethod
    def diagonal(cls, data: FibrationData, values: Sequence) -> 'MetricEndomorphism':
        size = len(values)
        rows = [[values[i] if i == j else 0 for j in range(size)] for i in range(size)]
        return cls.constant(data, rows)

    @property
    def inverse(self) -> SeriesMatrix:
        if self._inverse is None:
            self._inverse = self.matrix.invert(self.pivot_shifts)
        return self._inverse

    def entry(self, i: int, j: int) -> TruncatedSeries:
        return self.matrix.get(i, j)

    def derivative(self) -> SeriesMatrix:
        return self.matrix.differentiate()

    def __repr__(self) -> str:
        return f"MetricEndomorphism(size={self.size}, entries={len(self.matrix.entries)})"


def _brackets_n(data: FibrationData) -> Dict[Tuple[int, int], Dict[int, Fraction]]:
    table: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for i, j, u, value in data.gamma_n():
        table.setdefault((i, j), {})[u] = value
    return table


def _add(acc: Dict, key, value: TruncatedSeries):
    acc[key] = value if key not in acc else acc[key] + value


def _apply_metric(P: SeriesMatrix, vector: Dict[int, Fraction]) -> SparseVector:
    """(P·c)_a = Σ_b P_ab c_b"""
    rows = P.rows()
    result: SparseVector = {}
    for b, coef in vector.items():
        # P simétrica: a coluna b é a linha b
        for a, value in rows.get(b, ()):
            _add(result, a, value * coef)
    return result


def z_vector(data: FibrationData, metric: MetricEndomorphism) -> List[TruncatedSeries]:
    """
    Vetor Z = Σ_{k,l} z_k P⁻¹_kl e_l, com z_k = Σ_s c_ks^s

    Args:
        data: dados de Lie
        metric: métrica

    Returns:
        Coordenadas de Z em n (zero quando G é unimodular)
    """
    size = metric.size
    z = data.trace_form()
    zeta = [TruncatedSeries.zero() for _ in range(size)]
    if not any(z):
        return zeta
    for (k, l), value in metric.inverse.entries.items():
        if z[k]:
            zeta[l] = zeta[l] + value * z[k]
    return zeta


def ricci_gh(data: FibrationData, metric: MetricEndomorphism, include_z: bool = True) -> SeriesMatrix:
    """
    Ricci de G/H na forma de Gram

    Ric(u,v) = -½ Σ P⁻¹_rs (c_ru)ᵀ P (c_sv) + ¼ Σ P⁻¹_rs P⁻¹_kl W^rk_u W^sl_v
               - ½ B_uv - ½ (g([Z,e_u],e_v) + g(e_u,[Z,e_v])),  W^rk = P·c_rk

    Args:
        data: dados de Lie
        metric: métrica (constante ou em séries)
        include_z: inclui o termo de Z (grupos não unimodulares)

    Returns:
        Matriz simétrica de séries em n
    """
    size = metric.size
    P = metric.matrix
    P_inv = metric.inverse
    brackets = _brackets_n(data)
    acc: Dict[Tuple[int, int], TruncatedSeries] = {}

    # primeiro termo
    by_first: Dict[int, List[Tuple[int, Dict[int, Fraction]]]] = {}
    for (r, u), vector in brackets.items():
        by_first.setdefault(r, []).append((u, vector))
    applied = {key: _apply_metric(P, vector) for key, vector in brackets.items()}
    applied_by_first: Dict[int, List[Tuple[int, SparseVector]]] = {}
    for (s, v), vector in applied.items():
        applied_by_first.setdefault(s, []).append((v, vector))
    for (r, s), p_rs in P_inv.entries.items():
        for u, r_vector in by_first.get(r, ()):
            for v, s_applied in applied_by_first.get(s, ()):
                if v < u:
                    continue
                inner = None
                for a, coef in r_vector.items():
                    if a in s_applied:
                        term = s_applied[a] * coef
                        inner = term if inner is None else inner + term
                if inner is not None:
                    _add(acc, (u, v), (p_rs * inner).scale(Fraction(-1, 2)))

    # segundo termo
    W = applied
    for (r, k), w_rk in W.items():
        for (s, l), w_sl in W.items():
            p_rs = P_inv[(r, s)]
            p_kl = P_inv[(k, l)]
            if p_rs is None or p_kl is None:
                continue
            weight = (p_rs * p_kl).scale(Fraction(1, 4))
            for u, wu in w_rk.items():
                for v, wv in w_sl.items():
                    if v < u:
                        continue
                    _add(acc, (u, v), weight * (wu * wv))

    # forma de Killing restrita a n
    killing = data.killing
    for u in range(size):
        for v in range(u, size):
            value = killing[(data.n_indices[u], data.n_indices[v])]
            if value:
                _add(acc, (u, v), TruncatedSeries.constant(-value / 2))

    # termo de Z, simetrizado
    if include_z and not data.unimodular:
        zeta = z_vector(data, metric)
        G: Dict[Tuple[int, int], TruncatedSeries] = {}
        for (l, u), p_applied in applied.items():
            if zeta[l].is_zero():
                continue
            for v, value in p_applied.items():
                _add(G, (u, v), zeta[l] * value)
        for (u, v), value in G.items():
            key = (min(u, v), max(u, v))
            _add(acc, key, value.scale(Fraction(-1, 2)))
            if u == v:
                _add(acc, key, value.scale(Fraction(-1, 2)))

    result = SeriesMatrix(size)
    for (u, v), value in acc.items():
        result[(u, v)] = value
        if u != v:
            result[(v, u)] = value
    return result


def ricci_diagonal(data: FibrationData, x: Sequence) -> List[List[Fraction]]:
    """
    Ricci de G/H para métrica diagonal P = diag(x)

    Ric(u,v) = Σ_{r,k} [x_u x_v c_rk^u c_rk^v / (4 x_r x_k) - x_k c_ru^k c_rv^k / (2 x_r)]
               - ½ B_uv + termo de Z

    Args:
        data: dados de Lie
        x: entradas diagonais (racionais não nulos)

    Returns:
        Matriz de racionais (não necessariamente diagonal)
    """
    x = [Fraction(value) for value in x]
    size = len(x)
    for position, value in enumerate(x):
        if not value:
            raise ZeroMetricEntry(f"x[{position}] = 0")
    c = _brackets_n(data)

    def coef(i, j, u):
        return c.get((i, j), {}).get(u, Fraction(0))

    z = data.trace_form()
    result = [[Fraction(0)] * size for _ in range(size)]
    for u in range(size):
        for v in range(u, size):
            total = Fraction(0)
            for r in range(size):
                for k in range(size):
                    first = coef(r, k, u) * coef(r, k, v)
                    if first:
                        total += x[u] * x[v] * first / (4 * x[r] * x[k])
                    second = coef(r, u, k) * coef(r, v, k)
                    if second:
                        total -= x[k] * second / (2 * x[r])
            total -= data.killing[(data.n_indices[u], data.n_indices[v])] / 2
            # Z-term: ζ_l = z_l / x_l
            for l in range(size):
                if z[l]:
                    zeta = z[l] / x[l]
                    total -= zeta * (coef(l, u, v) * x[v] + coef(l, v, u) * x[u]) / 2
            result[u][v] = result[v][u] = total
    return result


@lru_cache(maxsize=None)
def dense_structure(data: FibrationData) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Constantes c_ij^u em n, forma de Killing em n e z_k como arrays float"""
    size = data.dim_n
    C = np.zeros((size, size, size))
    for i, j, u, value in data.gamma_n():
        C[i, j, u] = float(value)
    killing = np.array([[float(data.killing[(a, b)]) for b in data.n_indices]
                        for a in data.n_indices])
    z = np.array([float(value) for value in data.trace_form()])
    return C, killing, z


def ricci_gh_numeric(data: FibrationData, P: np.ndarray) -> np.ndarray:
    """
    Versão em ponto flutuante de ricci_gh (usada na integração numérica)

    Args:
        data: dados de Lie
        P: matriz de Gram simétrica positiva definida

    Returns:
        Ricci de G/H como array
    """
    C, killing, z = dense_structure(data)
    P_inv = np.linalg.inv(P)
    first = -0.5 * np.einsum('rs,rua,ab,svb->uv', P_inv, C, P, C)
    W = np.einsum('rkp,pu->rku', C, P)
    second = 0.25 * np.einsum('rs,kl,rku,slv->uv', P_inv, P_inv, W, W)
    ricci = first + second - 0.5 * killing
    if np.any(z):
        zeta = z @ P_inv
        G = np.einsum('l,lut,tv->uv', zeta, C, P)
        ricci -= 0.5 * (G + G.T)
    return 0.5 * (ricci + ricci.T)
