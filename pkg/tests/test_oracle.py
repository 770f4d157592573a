import random
from fractions import Fraction

import pytest

from src import catalog
from src.exceptions import NonTrivialIsotropy, NotInvertible
from src.homogeneous import MetricEndomorphism, ricci_gh
from src.oracle import (audit, berger_ricci, closed_form_audit, koszul_ricci, lapse_series,
                        orthonormal_basis_ricci, random_metric, sphere_phi_series)

CASES = 50


def test_lapse_series_coefficients():
    series = lapse_series(1, 6)
    assert [series.coefficient(k) for k in (0, 2, 4, 6)] == [1, Fraction(1, 2), Fraction(3, 8),
                                                              Fraction(5, 16)]


def test_sphere_phi_series():
    series = sphere_phi_series(6)
    assert series.coefficient(0) == Fraction(-1, 3)
    assert series.coefficient(2) == Fraction(2, 45)


def test_koszul_requires_trivial_isotropy():
    data, _ = catalog.load('sphere3')
    with pytest.raises(NonTrivialIsotropy):
        koszul_ricci(data, [[1, 0], [0, 1]])

@pytest.mark.parametrize('name', [entry['name'] for entry in catalog.catalog()])
def test_random_metrics_agree(name):
    data, _ = catalog.load(name)
    results = audit(data, random.Random(7), count=CASES)
    assert all(result['detail'] == f"{CASES}/{CASES} métricas iguais" for result in results)
    assert all(result['passed'] for result in results), results


def test_random_metric_is_invariant_for_isotropy():
    data, _ = catalog.load('example1')
    P = random_metric(data, random.Random(1))
    size = data.dim_n
    assert all(P[i][j] == 0 for i in range(size) for j in range(size) if i != j)


def test_berger_closed_form_against_library():
    data, _ = catalog.load('berger')
    a = Fraction(2, 5)
    P = [[a, 0, 0], [0, 1, 0], [0, 0, 1]]
    expected = berger_ricci(a)
    assert orthonormal_basis_ricci(data, P) == expected
    assert ricci_gh(data, MetricEndomorphism.constant(data, P)).constant_rows() == expected


def test_closed_forms():
    results = closed_form_audit()
    assert {r['name'] for r in results} == {'sin2', 'sphere_phi', 'flat_cone', 'berger', 'lapse'}
    assert all(r['passed'] for r in results), results


def test_koszul_rejects_singular_metric():
    data, _ = catalog.load('berger')
    with pytest.raises(NotInvertible):
        koszul_ricci(data, [[1, 1, 0], [1, 1, 0], [0, 0, 1]])
