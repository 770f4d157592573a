import warnings
from fractions import Fraction

import numpy as np
import pytest

from src import catalog
from src.equations import EinsteinTarget, SolitonTarget
from src.exceptions import NullspaceWarning, StepFailure
from src.integrate import ODEState, continue_solution
from src.ivp import IVPProblem, solve


@pytest.fixture(scope='module')
def sphere_solution():
    data, sd = catalog.load('sphere3')
    return solve(IVPProblem(data, sd, EinsteinTarget(Fraction(2)), order=12))


def test_round_sphere_continuation(sphere_solution):
    trajectory = continue_solution(sphere_solution, t0=0.1, t_max=1.5, reltol=1e-10, samples=30)
    expected = np.sin(trajectory.t) ** 2
    assert trajectory.header()[:3] == ['t', 'g_V1V1', 'g_V2V2']
    assert np.max(np.abs(trajectory.column('g_V1V1') - expected)) < 1e-6
    assert np.max(np.abs(trajectory.column('g_V2V2') - expected)) < 1e-6
    assert trajectory.v is None and trajectory.h is None


def test_initial_state_matches_series(sphere_solution):
    state = ODEState.from_solution(sphere_solution, 0.1)
    assert state.t == 0.1
    assert abs(state.values[0] - np.sin(0.1) ** 2) < 1e-12


def test_restart_from_trajectory(sphere_solution):
    first = continue_solution(sphere_solution, t0=0.1, t_max=0.8, samples=8)
    second = continue_solution(sphere_solution, t_max=1.2, samples=5, start=first.state_at(-1))
    assert second.t[0] == pytest.approx(0.8)
    assert abs(second.column('g_V1V1')[-1] - np.sin(1.2) ** 2) < 1e-6


def test_gaussian_soliton_continuation():
    data, sd = catalog.load('flatcone')
    with warnings.catch_warnings():
        warnings.simplefilter('error', NullspaceWarning)
        sol = solve(IVPProblem(data, sd, SolitonTarget(Fraction(1)), order=8))
    trajectory = continue_solution(sol, t0=0.1, t_max=1.0, samples=10)
    assert np.max(np.abs(trajectory.v - trajectory.t)) < 1e-8
    assert np.max(np.abs(trajectory.column('g_XX') - trajectory.t ** 2)) < 1e-8
    assert trajectory.header() == ['t', 'g_XX', 'v']


def test_empty_interval_is_rejected(sphere_solution):
    with pytest.raises(StepFailure):
        continue_solution(sphere_solution, t0=0.5, t_max=0.5)

