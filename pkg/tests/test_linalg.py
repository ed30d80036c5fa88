from fractions import Fraction

import pytest

from src.linalg import (
    LinalgError, denominator_lcm, dot, format_rational, format_vector, inverse, is_positive_definite,
    is_positive_semidefinite, left_inverse, matrix_rank, nullspace, parse_rational,
    primitive_vector, solve_pivot,
)


def test_matrix_rank_exact():
    assert matrix_rank([[2, -2], [-2, 2]]) == 1
    assert matrix_rank([[2, -1], [-1, 2]]) == 2
    assert matrix_rank([]) == 0


def test_nullspace_is_primitive():
    assert nullspace([[2, -2], [-2, 2]], 2) == [(Fraction(1), Fraction(1))]
    assert nullspace([], 2) == [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]


def test_primitive_vector_sign_and_scale():
    assert primitive_vector([Fraction(-1, 2), Fraction(-1)]) == (Fraction(1), Fraction(2))
    assert primitive_vector([0, 0]) == (Fraction(0), Fraction(0))


def test_solve_pivot_sets_free_variables_to_zero():
    assert solve_pivot([[2, -2, 1], [-2, 2, 0]], [0, 1]) == (Fraction(-1, 2), Fraction(0), Fraction(1))


def test_solve_pivot_inconsistent():
    assert solve_pivot([[1, 1], [1, 1]], [0, 1]) is None


def test_inverse_and_singular():
    assert inverse([[2, -1], [-1, 1]]) == [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(2)]]
    with pytest.raises(LinalgError):
        inverse([[1, 1], [1, 1]])


def test_left_inverse():
    M = [[1, 0], [0, 1], [1, 1]]
    L = left_inverse(M)
    product = [[sum(L[i][k] * M[k][j] for k in range(3)) for j in range(2)] for i in range(2)]
    assert product == [[1, 0], [0, 1]]


def test_definiteness():
    assert is_positive_definite([[2, -1], [-1, 2]])
    assert not is_positive_definite([[2, -2], [-2, 2]])
    assert is_positive_semidefinite([[2, -2], [-2, 2]])


def test_dot_dimension_mismatch():
    with pytest.raises(LinalgError):
        dot([1, 2], [1])


def test_rational_formatting():
    assert format_rational(Fraction(4, 2)) == 2
    assert format_rational(Fraction(-1, 2)) == "-1/2"
    assert format_vector([Fraction(1, 3), 2]) == ["1/3", 2]
    assert denominator_lcm([Fraction(1, 2), Fraction(1, 3), 4]) == 6


def test_parse_rational():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational(" -2 ") == Fraction(-2)
    with pytest.raises(LinalgError):
        parse_rational("x")
    with pytest.raises(LinalgError):
        parse_rational(True)
