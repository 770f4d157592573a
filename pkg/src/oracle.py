"""
Oráculos independentes para conferir as fórmulas de curvatura

As fórmulas de Ricci daqui não usam homogeneous.py: as contas partem apenas
das constantes de estrutura e da matriz de Gram. audit() confronta as duas.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from src.exceptions import NonTrivialIsotropy, NotInvertible
from src.liealg import FibrationData
from src.series import TruncatedSeries, from_sympy_matrix, sin_squared, to_sympy_matrix

Matrix = List[List[Fraction]]


def _as_matrix(P: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in P]


def _inverse(P: Matrix) -> Matrix:
    matrix = to_sympy_matrix(P)
    if matrix.det() == 0:
        raise NotInvertible("matriz de Gram singular")
    return from_sympy_matrix(matrix.inv())


def _structure(data: FibrationData) -> List[List[List[Fraction]]]:
    """c[i][j][u] em posições de n"""
    size = data.dim_n
    c = [[[Fraction(0)] * size for _ in range(size)] for _ in range(size)]
    for i, j, u, value in data.gamma_n():
        c[i][j][u] = value
    return c


def koszul_ricci(data: FibrationData, P: Sequence[Sequence]) -> Matrix:
    """
    Ricci de uma métrica invariante à esquerda pela fórmula de Koszul

    g(∇_i e_j, e_l) = ½(g([e_i,e_j],e_l) - g([e_j,e_l],e_i) + g([e_l,e_i],e_j));
    R(e_i,e_j) = ∇_i∇_j - ∇_j∇_i - ∇_[e_i,e_j]; Ric(e_j,e_k) = Σ_i R(e_i,e_j)_ik

    Args:
        data: álgebra com isotropia trivial
        P: matriz de Gram constante (racionais)

    Returns:
        Matriz de Ricci exata
    """
    if data.dim_h:
        raise NonTrivialIsotropy(f"{data.name}: dim h = {data.dim_h}")
    P = _as_matrix(P)
    size = len(P)
    P_inv = _inverse(P)
    c = _structure(data)
    rng = range(size)

    def metric_bracket(i, j, l):
        return sum((c[i][j][a] * P[a][l] for a in rng), Fraction(0))

    lowered = [[[(metric_bracket(i, j, l) - metric_bracket(j, l, i) + metric_bracket(l, i, j)) / 2
                 for l in rng] for j in rng] for i in rng]
    # nabla[i][k][j] = Γ^k_ij: matriz de ∇_{e_i} (linha k, coluna j)
    nabla = [[[sum((P_inv[k][l] * lowered[i][j][l] for l in rng), Fraction(0)) for j in rng]
              for k in rng] for i in rng]

    def product(A, B):
        return [[sum((A[r][s] * B[s][col] for s in rng), Fraction(0)) for col in rng] for r in rng]

    def curvature(i, j):
        first, second = product(nabla[i], nabla[j]), product(nabla[j], nabla[i])
        return [[first[r][s] - second[r][s]
                 - sum((c[i][j][m] * nabla[m][r][s] for m in rng), Fraction(0))
                 for s in rng] for r in rng]

    ricci = [[Fraction(0)] * size for _ in rng]
    for i in rng:
        for j in rng:
            R = curvature(i, j)
            for k in rng:
                ricci[j][k] += R[i][k]
    return ricci


def orthonormal_basis_ricci(data: FibrationData, P: Sequence[Sequence]) -> Matrix:
    """
    Fórmula de Ricci de espaços homogêneos numa base g-ortogonal

    Ric(X,Y) = -½Σ g([X_i,X],[X_i,Y]) + ¼Σ g([X_i,X_j],X)g([X_i,X_j],Y) - ½B(X,Y)
               - ½(g([Z,X],Y) + g(X,[Z,Y]))

    com X_i = w_i/|w_i|; a base w_i vem de Gram-Schmidt sem normalização,
    de modo que só aparecem as normas ao quadrado e a conta fica exata.

    Args:
        data: dados de Lie (isotropia arbitrária; colchetes projetados em n)
        P: matriz de Gram constante

    Returns:
        Matriz de Ricci exata
    """
    P = _as_matrix(P)
    size = len(P)
    rng = range(size)
    c = _structure(data)

    def g(x, y):
        return sum((x[a] * P[a][b] * y[b] for a in rng for b in rng if x[a] and y[b]), Fraction(0))

    def bracket(x, y):
        result = [Fraction(0)] * size
        for i in rng:
            if not x[i]:
                continue
            for j in rng:
                if not y[j]:
                    continue
                for u in rng:
                    if c[i][j][u]:
                        result[u] += x[i] * y[j] * c[i][j][u]
        return result

    basis, norms = [], []
    for k in rng:
        w = [Fraction(int(a == k)) for a in rng]
        for previous, norm in zip(basis, norms):
            factor = g(w, previous) / norm
            w = [a - factor * b for a, b in zip(w, previous)]
        basis.append(w)
        norms.append(g(w, w))

    trace_form = data.trace_form()
    Z = [Fraction(0)] * size
    for w, norm in zip(basis, norms):
        weight = sum((w[k] * trace_form[k] for k in rng), Fraction(0)) / norm
        Z = [a + weight * b for a, b in zip(Z, w)]

    units = [[Fraction(int(a == u)) for a in rng] for u in rng]
    killing = data.killing
    ricci = [[Fraction(0)] * size for _ in rng]
    for u in rng:
        for v in range(u, size):
            X, Y = units[u], units[v]
            total = Fraction(0)
            for w, norm in zip(basis, norms):
                total -= g(bracket(w, X), bracket(w, Y)) / (2 * norm)
            for w_i, n_i in zip(basis, norms):
                for w_j, n_j in zip(basis, norms):
                    b = bracket(w_i, w_j)
                    total += g(b, X) * g(b, Y) / (4 * n_i * n_j)
            total -= killing[(data.n_indices[u], data.n_indices[v])] / 2
            total -= (g(bracket(Z, X), Y) + g(X, bracket(Z, Y))) / 2
            ricci[u][v] = ricci[v][u] = total
    return ricci


def berger_ricci(a) -> Matrix:
    """su(2) com [e1,e2] = e3 (cíclico) e P = diag(a, 1, 1)"""
    a = Fraction(a)
    return [[a * a / 2, Fraction(0), Fraction(0)],
            [Fraction(0), 1 - a / 2, Fraction(0)],
            [Fraction(0), Fraction(0), 1 - a / 2]]


def lapse_series(c, order: int) -> TruncatedSeries:
    """h = (1 - c r²)^(-1/2) = Σ binom(2k,k) (c r²)^k / 4^k"""
    c = Fraction(c)
    return TruncatedSeries.from_dict(
        {2 * k: Fraction(math.comb(2 * k, k), 4 ** k) * c ** k for k in range(order // 2 + 1)},
        order)


def sphere_phi_series(order: int) -> TruncatedSeries:
    """φ com sin²t = t² + t⁴φ(t²)"""
    return (sin_squared(order + 4) - TruncatedSeries.monomial(1, 2)).shifted(-4)


@dataclass
class ClosedForm:
    name: str
    description: str
    evaluate: Callable
    series: Optional[Callable[[int], TruncatedSeries]] = None


def closed_form_catalog() -> Dict[str, ClosedForm]:
    """
    Formas fechadas usadas na verificação

    Returns:
        nome -> ClosedForm
    """
    forms = [
        ClosedForm('sin2', "esfera redonda: g(t) = sin²t", lambda t: np.sin(t) ** 2, sin_squared),
        ClosedForm('sphere_phi', "φ da esfera redonda: sin²t = t² + t⁴φ",
                   lambda t: (np.sin(t) ** 2 - t ** 2) / t ** 4, sphere_phi_series),
        ClosedForm('flat_cone', "cone plano: g(t) = t²", lambda t: t ** 2,
                   lambda order: TruncatedSeries.monomial(1, 2, order)),
        ClosedForm('gaussian_soliton', "sóliton gaussiano: v(t) = λt", lambda t, lam: lam * t),
        ClosedForm('berger', "Ricci de su(2) com P = diag(a, 1, 1)", berger_ricci),
        ClosedForm('lapse', "lapso da esfera de curvatura c: h = (1 - c r²)^(-1/2)",
                   lambda r, c: (1 - c * r ** 2) ** -0.5),
    ]
    return {form.name: form for form in forms}


def random_metric(data: FibrationData, rng, diagonal: bool = False) -> Matrix:
    """
    Métrica de Gram racional positiva definida e Ad_H-invariante

    Com isotropia não trivial cada módulo recebe um múltiplo de Q; com H
    trivial a matriz é L·Lᵀ com L triangular inteira (ou diagonal).

    Args:
        data: dados de Lie
        rng: random.Random com semente fixa
        diagonal: restringe a métricas diagonais

    Returns:
        Matriz de Gram em n
    """
    size = data.dim_n
    q = [data.q_norms[g] for g in data.n_indices]
    if data.dim_h:
        scale = [Fraction(0)] * size
        modules = list(data.p_modules) + (list(data.m_modules) or
                                          ([] if not data.dim_m else [None]))
        for module in modules:
            indices = module.indices if module is not None else data.index_J
            x = Fraction(rng.randint(1, 9), rng.randint(1, 5))
            for g in indices:
                scale[data.position[g]] = x
        return [[scale[i] * q[i] if i == j else Fraction(0) for j in range(size)]
                for i in range(size)]
    if diagonal:
        return [[Fraction(rng.randint(1, 9), rng.randint(1, 5)) if i == j else Fraction(0)
                 for j in range(size)] for i in range(size)]
    L = [[Fraction(rng.randint(1, 4)) if i == j else
          (Fraction(rng.randint(-3, 3), rng.randint(1, 3)) if j < i else Fraction(0))
          for j in range(size)] for i in range(size)]
    return [[sum((L[i][k] * L[j][k] for k in range(size)), Fraction(0)) for j in range(size)]
            for i in range(size)]


def audit(data: FibrationData, rng, count: int = 5) -> List[Dict]:
    """
    Confronta ricci_gh com ricci_diagonal e com os oráculos

    Args:
        data: dados de Lie
        rng: random.Random com semente fixa
        count: métricas aleatórias por comparação

    Returns:
        Lista de {'name', 'passed', 'detail'}
    """
    from src.homogeneous import MetricEndomorphism, ricci_diagonal, ricci_gh

    def library(P):
        return ricci_gh(data, MetricEndomorphism.constant(data, P)).constant_rows()

    results = []
    comparisons = [('ricci_diagonal', True, lambda P: ricci_diagonal(data, [P[i][i] for i in range(len(P))])),
                   ('orthonormal_basis_ricci', False, lambda P: orthonormal_basis_ricci(data, P))]
    if not data.dim_h:
        comparisons.append(('koszul_ricci', False, lambda P: koszul_ricci(data, P)))
    for name, diagonal, oracle in comparisons:
        mismatches = 0
        for _ in range(count):
            P = random_metric(data, rng, diagonal)
            if library(P) != oracle(P):
                mismatches += 1
        results.append({'name': name, 'passed': not mismatches,
                        'detail': f"{count - mismatches}/{count} métricas iguais"})
    return results


def closed_form_audit(order: int = 12) -> List[Dict]:
    """Confere as séries das formas fechadas contra a avaliação em ponto flutuante"""
    forms = closed_form_catalog()
    results = []
    t = 0.05
    for name in ('sin2', 'sphere_phi', 'flat_cone'):
        form = forms[name]
        error = abs(form.series(order).evaluate(t) - float(form.evaluate(t)))
        results.append({'name': name, 'passed': error < 1e-9, 'detail': f"|erro| = {error:.2e}"})
    a = Fraction(1, 3)
    results.append({'name': 'berger', 'passed': berger_ricci(a) == orthonormal_basis_ricci(
        _berger_data(), [[a, 0, 0], [0, 1, 0], [0, 0, 1]]), 'detail': f"a = {a}"})
    c, r = Fraction(1, 2), 0.1
    error = abs(lapse_series(c, order).evaluate(r) - forms['lapse'].evaluate(r, float(c)))
    results.append({'name': 'lapse', 'passed': error < 1e-9, 'detail': f"|erro| = {error:.2e}"})
    return results


def _berger_data() -> FibrationData:
    brackets = {(0, 1): {2: Fraction(1)}, (1, 2): {0: Fraction(1)}, (2, 0): {1: Fraction(1)},
                (1, 0): {2: Fraction(-1)}, (2, 1): {0: Fraction(-1)}, (0, 2): {1: Fraction(-1)}}
    return FibrationData(['e1', 'e2', 'e3'], brackets, [], [0, 1, 2], name='berger')
