import copy
import warnings
from fractions import Fraction

import pytest

from conftest import WITH_SMOOTHNESS
from src import catalog
from src.compat import (build_system, compatibility_rows, extrinsic_L_constants,
                        verify_cancellations)
from src.equations import ArcLength, EinsteinTarget, SolitonTarget, StageModel
from src.exceptions import ConditionStarViolated, ConditionStarWarning
from src.series import AffineScalar
from utils.rational_io import load_json


def system_for(name, lam, free_values=None, n=None):
    data, sd = catalog.load(name, n)
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', ConditionStarWarning)
        return build_system(data, sd, EinsteinTarget(Fraction(lam)), free_values=free_values)


@pytest.mark.parametrize('name', WITH_SMOOTHNESS)
def test_closed_coefficients_of_compatibility_rows(name):
    data, sd = catalog.load(name)
    checks = verify_cancellations(data, sd)
    assert checks
    failed = [(c.name, c.detail) for c in checks if not c.passed]
    assert not failed


def test_sphere_trace_of_B():
    system = system_for('sphere3', 2)
    assert system.consistent
    assert system.values()['phi1[0]'] == Fraction(-1, 3)


def test_flat_cone_row():
    system = system_for('flatcone', 0)
    row = next(r for r in system.rows if r.id == 'tr_p')
    assert row.equation.coefficient('phi1[0]') < 0
    assert system.values() == {'phi1[0]': 0}


def test_example3_single_row_and_six_free():
    system = system_for('example3', 6, n=2)
    assert [row.id for row in system.rows] == ['tr_p']
    row = system.rows[0].equation
    for name in ('phi_ii[0]', 'phi_jj[0]', 'phi_kk[0]'):
        assert row.coefficient(name) * 4 == row.coefficient('psi[0]')
    assert len(system.free) == 6
    assert 'psi[0]' in system.solved


def test_example3_psi_weight_is_dimension_of_p1():
    data, _ = catalog.load('example3', 2)
    p1 = next(module for module in data.p_modules if module.name == 'p1')
    assert len(p1.indices) == 4 * (2 - 1)
    row = system_for('example3', 6, n=2).rows[0].equation
    assert row.coefficient('psi[0]') == len(p1.indices) * row.coefficient('phi_ii[0]')


def test_example3_free_value_override():
    system = system_for('example3', 6, free_values={'phi_ij': '1/2'}, n=2)
    assert system.values()['phi_ij[0]'] == Fraction(1, 2)


def test_example1_free_parameters():
    system = system_for('example1', 1)
    assert system.consistent
    assert set(system.free) == {'phi4[0]', 'phi5[0]'}


def test_example2_free_parameter_with_restriction():
    data, sd = catalog.load('example2')
    with pytest.warns(ConditionStarWarning):
        system = build_system(data, sd, EinsteinTarget(Fraction(1)))
    assert set(system.free) == {'phi2[0]'}


def test_condition_star_without_restriction():
    raw = copy.deepcopy(load_json(f"{catalog.catalog_directory()}/example2.json"))
    raw['smoothness'].pop('restrictions')
    data, sd = catalog.from_raw(raw, 'example2')
    with pytest.raises(ConditionStarViolated):
        build_system(data, sd, EinsteinTarget(Fraction(1)))


def test_z_term_does_not_reach_compatibility_rows():
    data, sd = catalog.load('solvable2')
    target = EinsteinTarget(Fraction(-1))
    rows = {}
    for include_z in (True, False):
        model = StageModel(data, sd, target, ArcLength(), {}, stage=0, include_z=include_z)
        rows[include_z] = {row.id: row.equation.terms for row in compatibility_rows(data, model)}
    assert rows[True] == rows[False]
    assert any(c.name == 'termo_Z_linear' and c.passed for c in verify_cancellations(data, sd))


def test_soliton_adds_normal_row():
    data, sd = catalog.load('flatcone')
    system = build_system(data, sd, SolitonTarget(Fraction(1)))
    assert 'normal' in [row.id for row in system.rows]
    assert system.values()['psi_v[0]'] == Fraction(1, 2)
    assert system.values()['phi1[0]'] == 0


def test_shape_operator_constants_example1():
    system = system_for('example1', 1)
    exp = system.expansion
    L_mm, _ = extrinsic_L_constants(exp)
    A_zero = exp.at_zero('A')
    size = len(A_zero)
    assert all((L_mm[i][j] - A_zero[i][j] * -2).is_zero() for i in range(size) for j in range(size))


def test_shape_operator_constants_point_orbit():
    system = system_for('example3', 6, n=2)
    exp = system.expansion
    L_mm, L_pp = extrinsic_L_constants(exp)
    assert L_mm == []
    B_zero = exp.at_zero('B')
    size = len(B_zero)
    trace = sum((B_zero[i][i] for i in range(size)), AffineScalar())
    for i in range(size):
        for j in range(size):
            expected = B_zero[i][j] * (-2 * size) - (trace if i == j else AffineScalar())
            assert (L_pp[i][j] - expected).is_zero()
