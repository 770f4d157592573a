import random
from fractions import Fraction

import numpy as np
import pytest

from src import catalog
from src.homogeneous import MetricEndomorphism, ricci_diagonal, ricci_gh, ricci_gh_numeric, z_vector
from src.oracle import berger_ricci, koszul_ricci, orthonormal_basis_ricci, random_metric

CASES = 50


def exact_ricci(data, P):
    return ricci_gh(data, MetricEndomorphism.constant(data, P)).constant_rows()


@pytest.mark.parametrize('name', ['sphere3', 'flatcone', 'berger', 'solvable2', 'example1',
                                  'example2', 'example3_n1', 'example3_n2'])
def test_ricci_gh_matches_diagonal_formula(name):
    data, _ = catalog.load(name)
    rng = random.Random(1)
    for _ in range(CASES):
        P = random_metric(data, rng, diagonal=True)
        x = [P[i][i] for i in range(len(P))]
        assert exact_ricci(data, P) == ricci_diagonal(data, x)


@pytest.mark.parametrize('name', ['berger', 'solvable2'])
def test_ricci_gh_matches_oracles_on_trivial_isotropy(name):
    data, _ = catalog.load(name)
    rng = random.Random(2)
    for _ in range(CASES):
        P = random_metric(data, rng)
        ricci = exact_ricci(data, P)
        assert ricci == koszul_ricci(data, P)
        assert ricci == orthonormal_basis_ricci(data, P)


def test_berger_closed_form():
    data, _ = catalog.load('berger')
    for a in (Fraction(1), Fraction(1, 2), Fraction(7, 3)):
        P = [[a, 0, 0], [0, 1, 0], [0, 0, 1]]
        assert exact_ricci(data, P) == berger_ricci(a)


def test_round_sphere_is_einstein():
    data, _ = catalog.load('sphere3')
    assert exact_ricci(data, [[1, 0], [0, 1]]) == [[1, 0], [0, 1]]
    # Ric é invariante por escala
    assert exact_ricci(data, [[5, 0], [0, 5]]) == [[1, 0], [0, 1]]


def test_z_term_only_for_non_unimodular():
    data, _ = catalog.load('solvable2')
    metric = MetricEndomorphism.diagonal(data, [1, 1, 1])
    with_z = ricci_gh(data, metric).constant_rows()
    without_z = ricci_gh(data, metric, include_z=False).constant_rows()
    assert with_z != without_z
    assert any(not z.is_zero() for z in z_vector(data, metric))

    data, _ = catalog.load('berger')
    metric = MetricEndomorphism.diagonal(data, [2, 1, 1])
    assert all(z.is_zero() for z in z_vector(data, metric))


@pytest.mark.parametrize('name', ['solvable2', 'example1', 'example3_n2'])
def test_numeric_ricci_agrees(name):
    data, _ = catalog.load(name)
    P = random_metric(data, random.Random(3))
    exact = np.array([[float(v) for v in row] for row in exact_ricci(data, P)])
    numeric = ricci_gh_numeric(data, np.array([[float(v) for v in row] for row in P]))
    assert np.allclose(numeric, exact, rtol=0, atol=1e-12)


@pytest.mark.parametrize('name, first, second', [
    ('example3_n2', ['Ai', 'Aj', 'Ak'], ['B1', 'Bi', 'Bj', 'Bk']),
    ('example1', ['Z'], ['V1', 'V2', 'V3', 'V4']),
])
def test_ricci_vanishes_between_inequivalent_modules(name, first, second):
    data, _ = catalog.load(name)
    rng = random.Random(4)
    for _ in range(CASES):
        ricci = exact_ricci(data, random_metric(data, rng))
        for a in first:
            for b in second:
                i, j = data.position[data.index_of(a)], data.position[data.index_of(b)]
                assert ricci[i][j] == 0
                assert ricci[j][i] == 0


@pytest.mark.parametrize('name', ['berger', 'sphere3'])
@pytest.mark.parametrize('c', [Fraction(1, 7), Fraction(3), Fraction(22, 5)])
def test_ricci_is_scale_invariant(name, c):
    data, _ = catalog.load(name)
    size = data.dim_n
    identity = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
    scaled = [[c * v for v in row] for row in identity]
    assert exact_ricci(data, scaled) == exact_ricci(data, identity)
