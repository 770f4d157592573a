import numpy as np
import pytest

from src import catalog
from src.cohom1 import (cohom_ricci, ricci_cc, ricci_cc_numeric, second_bianchi_residual,
                        shape_numeric)
from src.homogeneous import MetricEndomorphism
from src.series import SeriesMatrix, TruncatedSeries, sin_squared

ORDER = 20


def round_sphere_metric():
    """dt² + sin²t·g_S² em S³ (Gram em p)"""
    data, _ = catalog.load('sphere3')
    matrix = SeriesMatrix(2)
    matrix[(0, 0)] = sin_squared(ORDER)
    matrix[(1, 1)] = sin_squared(ORDER)
    return data, MetricEndomorphism(data, matrix, [1, 1])


def test_round_sphere_tangential_einstein():
    data, metric = round_sphere_metric()
    ricci = cohom_ricci(data, metric)
    residual = ricci.tangential - metric.matrix.scale(2)
    for i in range(2):
        for j in range(2):
            assert all(residual.get(i, j).coefficient(k) == 0 for k in range(0, 11))


def test_round_sphere_normal_and_mixed():
    data, metric = round_sphere_metric()
    normal = ricci_cc(metric)
    assert normal.coefficient(0) == 2
    assert all(normal.coefficient(k) == 0 for k in range(1, 9))
    assert all(entry.is_zero() for entry in cohom_ricci(data, metric).mixed)


def test_bianchi_residual_vanishes_for_einstein_target():
    data, metric = round_sphere_metric()
    target = metric.matrix.scale(2)
    residual = second_bianchi_residual(data, metric, target, TruncatedSeries.constant(2))
    assert all(residual.coefficient(k) == 0 for k in range(-1, 9))


def test_numeric_normal_ricci_on_cone():
    t = 0.3
    P, P1, P2 = np.array([[t * t]]), np.array([[2 * t]]), np.array([[2.0]])
    assert ricci_cc_numeric(P, P1, P2) == pytest.approx(0.0, abs=1e-14)
    first_order, S = shape_numeric(P, P1)
    assert first_order[0, 0] == pytest.approx(1.0)
    assert S[0, 0] == pytest.approx(2 / t)


def test_numeric_matches_exact_on_sphere():
    t = 0.2
    value, first, second = sin_squared(ORDER).evaluate_derivatives(t)
    P, P1, P2 = (np.eye(2) * x for x in (value, first, second))
    assert ricci_cc_numeric(P, P1, P2) == pytest.approx(2.0, rel=1e-10)
