import os
from fractions import Fraction

import pytest

from src import catalog
from src.exceptions import InputSchemaError
from src.liealg import FibrationData, check_condition_star, validate
from utils.rational_io import load_json


@pytest.mark.parametrize('name', [entry['name'] for entry in catalog.catalog()])
def test_catalog_entries_validate(name):
    data, sd = catalog.load(name)
    report = validate(data)
    assert report.passed, [str(v) for v in report.violations]
    if sd is not None:
        assert sd.validate() == []


def test_condition_star_fails_on_example2_with_restriction():
    data, sd = catalog.load('example2')
    assert not check_condition_star(data)
    report = validate(data)
    assert report.passed
    assert any('C ≡ 0' in w for w in report.warnings)
    assert sd.restricted_c


def test_unimodular_flag():
    assert catalog.load('sphere3')[0].unimodular
    assert catalog.load('berger')[0].unimodular
    assert not catalog.load('solvable2')[0].unimodular


def test_jacobi_violation_reported():
    raw = {'basis': ['e1', 'e2', 'e3'], 'index_I': [], 'index_J': ['e1', 'e2', 'e3'],
           'gamma': [['e1', 'e2', 'e3', '1'], ['e3', 'e1', 'e1', '1']]}
    report = validate(FibrationData.from_dict(raw))
    assert not report.passed
    assert 'jacobi' in {v.kind for v in report.violations}


def test_antisymmetry_violation_reported():
    raw = {'basis': ['e1', 'e2', 'e3'], 'index_I': [], 'index_J': ['e1', 'e2', 'e3'],
           'gamma': [['e1', 'e2', 'e3', '1'], ['e2', 'e1', 'e3', '1']]}
    report = validate(FibrationData.from_dict(raw))
    assert 'antisymmetry' in {v.kind for v in report.violations}


def test_unknown_label_has_pointer():
    raw = {'basis': ['e1', 'e2'], 'index_I': [], 'index_J': ['e1', 'e2'],
           'gamma': [['e1', 'e9', 'e2', '1']]}
    with pytest.raises(InputSchemaError) as info:
        FibrationData.from_dict(raw)
    assert info.value.pointer == 'gamma/0'


def test_float_structure_constant_rejected():
    raw = {'basis': ['e1', 'e2'], 'index_I': [], 'index_J': ['e1', 'e2'],
           'gamma': [['e1', 'e2', 'e2', 0.5]]}
    with pytest.raises(InputSchemaError):
        FibrationData.from_dict(raw)


def test_killing_form_of_sphere3():
    data, _ = catalog.load('sphere3')
    v1, v2, w = data.index_of('V1'), data.index_of('V2'), data.index_of('W')
    assert data.killing[(v1, v1)] == -2
    assert data.killing[(w, w)] == -2
    assert data.killing[(v1, v2)] == 0


def test_dimensions_of_example3():
    data, _ = catalog.load('example3', n=2)
    assert (data.dim_p, data.dim_m, data.dim_h) == (7, 0, 3)
    assert data.q_norms[data.index_of('B1')] == Fraction(2)


@pytest.mark.parametrize('name', ['sphere3', 'berger', 'solvable2', 'example1', 'example3_n2'])
def test_killing_form_is_ad_invariant(name):
    data, _ = catalog.load(name)
    assert data.killing.invariance_defects(data) == []
    assert 'killing_invariance' not in {v.kind for v in validate(data).violations}


def test_killing_invariance_skipped_when_jacobi_fails():
    raw = {'basis': ['e1', 'e2', 'e3'], 'index_I': [], 'index_J': ['e1', 'e2', 'e3'],
           'gamma': [['e1', 'e2', 'e3', '1'], ['e3', 'e1', 'e1', '1']]}
    kinds = {v.kind for v in validate(FibrationData.from_dict(raw)).violations}
    assert 'jacobi' in kinds
    assert 'killing_invariance' not in kinds


@pytest.mark.parametrize('name', ['example1', 'example3_n2'])
def test_killing_form_ignores_basis_order(name):
    raw = load_json(os.path.join(catalog.catalog_directory(), f"{name}.json"))
    raw.pop('smoothness')
    shuffled = dict(raw, basis=list(reversed(raw['basis'])))
    if 'q_norms' in raw:
        position = {label: k for k, label in enumerate(raw['basis'])}
        shuffled['q_norms'] = [raw['q_norms'][position[label]] for label in shuffled['basis']]
    data, other = FibrationData.from_dict(raw), FibrationData.from_dict(shuffled)
    assert validate(other).passed
    for a in raw['basis']:
        for b in raw['basis']:
            assert data.killing[(data.index_of(a), data.index_of(b))] == \
                other.killing[(other.index_of(a), other.index_of(b))]
