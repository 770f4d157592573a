import json
import math
import warnings
from fractions import Fraction

import pytest

from src import catalog
from src.equations import (ArcLength, EinsteinTarget, Reparametrized, SolitonTarget, StageModel,
                           parse_gauge, parse_target)
from src.exceptions import InputSchemaError, InvalidLapse, NullspaceWarning
from src.ivp import (IVPProblem, IVPSolution, residual_certificate, solve, solve_reparametrized,
                     solve_soliton)
from src.series import TruncatedSeries


def sphere_problem(order=12, gauge=None):
    data, sd = catalog.load('sphere3')
    return IVPProblem(data, sd, EinsteinTarget(Fraction(2)), gauge or ArcLength(), order=order)


def test_round_sphere_series():
    sol = solve(sphere_problem())
    assert sol.coefficients['phi1'][:4] == [Fraction(-1, 3), Fraction(2, 45), Fraction(-1, 315),
                                             Fraction(2, 14175)]
    assert sol.provenance['phi1[0]'] == 'compat'
    assert sol.provenance['phi1[2]'] == 'ordem 2'


def test_round_sphere_certificate():
    sol = solve(sphere_problem())
    collector = residual_certificate(sol)
    summary = collector.get_summary()
    assert summary['passed']
    states = {row['equation']: row['status'] for row in summary['rows']}
    assert states['V1V1'] in ('passed', 'exact')
    assert [c['name'] for c in summary['checks']] == ['ricci_cc_menos_lambda']


def test_reparametrized_gauge_matches_arc_length():
    arc = solve(sphere_problem())
    problem = sphere_problem(gauge=Reparametrized(Fraction(1)))
    reparam = solve_reparametrized(problem, beta=TruncatedSeries.constant(2))
    assert reparam.coefficients['phi1'] == arc.coefficients['phi1']
    assert all(c == 0 for c in reparam.coefficients['psi_h'])
    assert reparam.provenance['psi_h[0]'] == 'gauge'


def test_flat_cone_is_exactly_flat():
    data, sd = catalog.load('flatcone')
    sol = solve(IVPProblem(data, sd, EinsteinTarget(Fraction(0)), order=10))
    assert all(c == 0 for c in sol.coefficients['phi1'])
    assert residual_certificate(sol).get_summary()['passed']


def test_gaussian_soliton():
    data, sd = catalog.load('flatcone')
    lam = Fraction(3, 2)
    with warnings.catch_warnings():
        warnings.simplefilter('error', NullspaceWarning)
        sol = solve_soliton(IVPProblem(data, sd, SolitonTarget(lam), order=10))
    assert sol.coefficients['psi_v'] == [lam / 2] + [Fraction(0)] * 5
    assert all(c == 0 for c in sol.coefficients['phi1'])
    assert residual_certificate(sol).get_summary()['passed']


def test_lapse_of_sphere_as_graph(tmp_path):
    data, sd = catalog.load('flatcone')
    c = Fraction(1, 2)
    path = tmp_path / 'curvature.json'
    path.write_text(json.dumps({'entries': [{'entry': ['X', 'X'], 'series': {'2': str(c)}}],
                                'beta': {'0': str(c)}}))
    target = parse_target(f"ricci:{path}", data, sd)
    sol = solve(IVPProblem(data, sd, target, Reparametrized(Fraction(1)), order=8))
    expected = [Fraction(math.comb(2 * k + 2, k + 1), 4 ** (k + 1)) * c ** (k + 1) for k in range(5)]
    assert sol.coefficients['psi_h'] == expected
    assert all(value == 0 for value in sol.coefficients['phi1'])


def test_free_values_propagate_example1():
    data, sd = catalog.load('example1')
    problem = IVPProblem(data, sd, EinsteinTarget(Fraction(1)), free_values={'phi4': '1/2'}, order=6)
    sol = solve(problem)
    assert sol.coefficients['phi4'][0] == Fraction(1, 2)
    assert sol.provenance['phi4[0]'] == 'livre'
    assert sol.provenance['phi5[0]'] == 'livre'
    assert all(len(values) == 4 for values in sol.coefficients.values())
    assert residual_certificate(sol).get_summary()['passed']


@pytest.mark.parametrize('free', [{}, {'phi4': '1/3', 'phi5': '-1/4'}])
def test_example1_solves_past_order_zero(free):
    # produtos de φ4[0] e φ5[0] precisam ser racionais antes da conferência
    data, sd = catalog.load('example1')
    sol = solve(IVPProblem(data, sd, EinsteinTarget(Fraction(1)), free_values=free, order=8))
    assert sol.order == 8
    assert residual_certificate(sol).get_summary()['passed']
    for m in range(1, 5):
        model = StageModel(data, sd, sol.problem.target, sol.problem.gauge, sol.coefficients,
                           stage=m)
        assert model.inconsistencies(through=m - 1) == []


def test_solution_is_deterministic_and_reloadable():
    first = solve(sphere_problem(order=8)).to_dict()
    second = solve(sphere_problem(order=8)).to_dict()
    assert first == second
    data, sd = catalog.load('sphere3')
    reloaded = IVPSolution.from_dict(json.loads(json.dumps(first)), data, sd)
    assert reloaded.coefficients['phi1'][0] == Fraction(-1, 3)
    assert reloaded.problem.target == EinsteinTarget(Fraction(2))


def test_problem_validation():
    data, sd = catalog.load('sphere3')
    with pytest.raises(InputSchemaError):
        IVPProblem(data, sd, EinsteinTarget(Fraction(2)), order=-2)
    with pytest.raises(InvalidLapse):
        parse_gauge('reparam:0')
    with pytest.raises(InputSchemaError):
        parse_target('kahler:1', data, sd)
    with pytest.raises(InputSchemaError):
        solve(IVPProblem(data, sd, SolitonTarget(Fraction(1)), Reparametrized(Fraction(1)), order=4))
