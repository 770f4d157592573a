from fractions import Fraction

import pytest

from src.exceptions import AffineOverflow, ExpansionMismatch
from src.series import (AffineScalar, SeriesMatrix, TruncatedSeries, coefficient_name,
                        from_sympy_matrix, sin_squared, solve_linear_batch, split_coefficient_name,
                        to_sympy_matrix)


def test_geometric_inverse():
    series = TruncatedSeries.from_dict({0: 1, 2: -1}, order=8)
    inverse = series.invert()
    assert [inverse.coefficient(k) for k in range(0, 9, 2)] == [1, 1, 1, 1, 1]
    assert all(inverse.coefficient(k) == 0 for k in range(1, 9, 2))


def test_exact_product_and_derivative():
    a = TruncatedSeries.from_dict({0: 1, 1: 1})
    b = TruncatedSeries.from_dict({0: 1, 1: -1})
    assert a * b == TruncatedSeries.from_dict({0: 1, 2: -1})
    assert TruncatedSeries.monomial(1, 3).differentiate() == TruncatedSeries.monomial(3, 2)


def test_sin_squared_coefficients():
    s = sin_squared(10)
    assert s.coefficient(2) == 1
    assert s.coefficient(4) == Fraction(-1, 3)
    assert s.coefficient(6) == Fraction(2, 45)
    assert s.coefficient(8) == Fraction(-1, 315)
    assert s.parity == 'even'


def test_coefficient_beyond_order():
    with pytest.raises(ExpansionMismatch):
        TruncatedSeries.from_dict({0: 1}, order=4).coefficient(6)


def test_quadratic_unknowns_flagged_lazily():
    x = TruncatedSeries([AffineScalar.unknown('x')])
    square = x * x
    with pytest.raises(AffineOverflow):
        square.coefficient(0)
    # termos lineares continuam utilizáveis
    assert (x * 3).coefficient(0) == AffineScalar(0, {'x': 3})


def test_affine_substitute():
    value = AffineScalar(1, {'x': 2, 'y': -1})
    result = value.substitute({'x': AffineScalar(3)})
    assert result == AffineScalar(7, {'y': -1})
    assert result.substitute({'y': AffineScalar(7)}) == 0


def test_evaluate():
    series = TruncatedSeries.from_dict({0: 1, 2: 1})
    assert series.evaluate(0.5) == pytest.approx(1.25)
    assert series.evaluate_derivatives(0.5) == pytest.approx([1.25, 1.0, 2.0])


def test_solve_linear_batch_unique():
    equations = [AffineScalar(-2, {'x': 1, 'y': 1}), AffineScalar(0, {'x': 1, 'y': -1})]
    result = solve_linear_batch(equations)
    assert result.consistent
    assert result.free == []
    assert result.assignment() == {'x': 1, 'y': 1}


def test_solve_linear_batch_free_and_preference():
    result = solve_linear_batch([AffineScalar(0, {'x': 1, 'y': 1})], ['y'])
    assert result.free == ['x']
    assert result.solved['y'] == AffineScalar(0, {'x': -1})
    assert result.assignment({'x': 2}) == {'x': 2, 'y': -2}


def test_solve_linear_batch_obstruction():
    equations = [AffineScalar(-1, {'x': 1, 'y': 1}), AffineScalar(-3, {'x': 2, 'y': 2})]
    result = solve_linear_batch(equations)
    assert not result.consistent
    index, residual = result.obstructions[0]
    assert index == 1
    assert residual == -1


def test_matrix_inverse():
    P = SeriesMatrix.from_constants([[2, 1], [1, 1]])
    assert P.invert().constant_rows() == [[1, -1], [-1, 2]]


def test_coefficient_names():
    name = coefficient_name('phi4', 2)
    assert name == 'phi4[2]'
    assert split_coefficient_name(name) == ('phi4', 2)


def test_solve_linear_batch_redundant_row_is_kept():
    equations = [AffineScalar(-1, {'x': 1, 'y': 1}), AffineScalar(-2, {'x': 2, 'y': 2}),
                 AffineScalar(0, {'x': 1, 'y': -1})]
    result = solve_linear_batch(equations)
    assert result.consistent
    assert result.assignment() == {'x': Fraction(1, 2), 'y': Fraction(1, 2)}


def test_solve_linear_batch_constant_rows():
    result = solve_linear_batch([AffineScalar(0), AffineScalar(Fraction(1, 3))])
    assert result.solved == {}
    assert result.obstructions == [(1, Fraction(1, 3))]


def test_sympy_bridge_is_exact():
    rows = [[Fraction(1, 3), 2], [0, Fraction(-5, 7)]]
    assert from_sympy_matrix(to_sympy_matrix(rows)) == rows
    assert isinstance(from_sympy_matrix(to_sympy_matrix(rows))[0][0], Fraction)


@pytest.mark.parametrize('b', [Fraction(5), Fraction(-2, 3)])
def test_invert_shifted_series(b):
    # t²(1 + b t²) -> t⁻²(1 - b t² + b² t⁴ - ...)
    inverse = TruncatedSeries.from_dict({2: 1, 4: b}, order=10).invert()
    assert inverse.valuation() == -2
    assert inverse.order == 6
    assert inverse.coefficient(-2) == 1
    assert inverse.coefficient(0) == -b
    assert inverse.coefficient(2) == b ** 2
    assert inverse.coefficient(-1) == 0
