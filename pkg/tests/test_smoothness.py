import copy
from fractions import Fraction

import pytest

from src import catalog
from src.exceptions import ExpansionMismatch, InputSchemaError, ParityViolation
from src.oracle import sphere_phi_series
from src.series import AffineScalar, SeriesMatrix, TruncatedSeries, sin_squared
from src.smoothness import (SmoothnessData, _positive_definite, build_P, extract_expansion,
                            phi_series)
from utils.rational_io import load_json


def raw_entry(name):
    return load_json(f"{catalog.catalog_directory()}/{name}.json")


def test_integer_function_names():
    _, sd = catalog.load('sphere3')
    assert sd.functions == ['phi1']
    assert [c.id for c in sd.function_constraints] == ['V1V1']
    assert len(sd.identity_constraints) == 2


def test_build_P_reproduces_round_sphere():
    _, sd = catalog.load('sphere3')
    metric = build_P(sd, {'phi1': sphere_phi_series(10)})
    assert metric.entry(0, 0) == sin_squared(14)
    assert metric.entry(0, 1).is_zero()
    assert metric.pivot_shifts == [1, 1]


def test_expansion_blocks():
    _, sd = catalog.load('sphere3')
    exp = extract_expansion(build_P(sd, {'phi1': sphere_phi_series(10)}))
    third = Fraction(-1, 3)
    assert exp.at_zero('B') == [[third, 0], [0, third]]


def test_expansion_of_mixed_example():
    data, sd = catalog.load('example1')
    phi = {f: TruncatedSeries.constant(k + 1, order=6) for k, f in enumerate(sd.functions)}
    exp = extract_expansion(build_P(sd, phi))
    # A0 = diag(1, 1, 2, 2) em m
    assert exp.A0 == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]]
    A = exp.at_zero('A')
    assert A[0][0] == 2 and A[2][2] == 3
    assert A[0][2] == 4 and A[0][3] == 5 and A[1][2] == -5


def test_unknown_phi_series_keeps_names():
    series = phi_series({'phi1': [1, 2]}, order=6, unknown_power=4)['phi1']
    assert series.coefficient(0) == 1
    assert series.coefficient(2) == 2
    assert series.coefficient(4) == AffineScalar.unknown('phi1[4]')


def test_odd_phi_rejected():
    _, sd = catalog.load('flatcone')
    with pytest.raises(ParityViolation):
        build_P(sd, {'phi1': TruncatedSeries.monomial(1, 1)})


def test_missing_t_squared_in_p_rejected():
    raw = copy.deepcopy(raw_entry('flatcone'))
    raw['smoothness']['ansatz'][0]['terms'] = [{'phi': 1, 'd': 4}]
    data, sd = catalog.from_raw(raw, 'flatcone')
    with pytest.raises(ExpansionMismatch):
        extract_expansion(build_P(sd, {'phi1': TruncatedSeries.constant(1, order=4)}))


def test_negative_exponent_rejected():
    raw = copy.deepcopy(raw_entry('flatcone'))
    raw['smoothness']['ansatz'][0]['terms'][0]['d'] = -2
    data = catalog.from_raw({k: v for k, v in raw.items() if k != 'smoothness'})[0]
    with pytest.raises(InputSchemaError):
        SmoothnessData.from_dict(raw['smoothness'], data)


def test_check_tensor():
    data, sd = catalog.load('flatcone')
    good = SeriesMatrix(1)
    good[(0, 0)] = TruncatedSeries.monomial(1, 2)
    assert sd.check_tensor(good) == []
    odd = SeriesMatrix(1)
    odd[(0, 0)] = TruncatedSeries.monomial(1, 3)
    assert sd.check_tensor(odd)


def test_positive_definite_is_exact():
    assert _positive_definite([[2, 1], [1, 1]])
    assert not _positive_definite([[1, 2], [2, 1]])
    assert not _positive_definite([[Fraction(1, 3), 0], [0, 0]])
