from fractions import Fraction

import pytest

from src.exact_lp import (
    InfeasibleError, LinearProgram, LPError, LPStatus, UnboundedError, minimize, solve_lp,
    verify_optimality,
)


@pytest.fixture
def production_lp():
    # min −x1 − x2, x1 + 2x2 ≤ 4, 3x1 + x2 ≤ 6
    return LinearProgram(
        A=[[1, 2, 1, 0], [3, 1, 0, 1]],
        b=[4, 6],
        c=[-1, -1, 0, 0],
    )


def test_optimal_vertex(production_lp):
    solution = solve_lp(production_lp)
    assert solution.status is LPStatus.OPTIMAL
    assert solution.x[:2] == [Fraction(8, 5), Fraction(6, 5)]
    assert solution.objective == Fraction(-14, 5)
    assert solution.dual == [Fraction(-2, 5), Fraction(-1, 5)]
    assert verify_optimality(production_lp, solution)


def test_solution_to_dict(production_lp):
    data = solve_lp(production_lp).to_dict()
    assert data["status"] == "optimal"
    assert data["objective"] == "-14/5"


def test_negative_rhs_rows_are_flipped():
    program = LinearProgram(A=[[-1, 1]], b=[-2], c=[1, 0])
    solution = minimize(program)
    assert solution.x == [Fraction(2), Fraction(0)]
    assert verify_optimality(program, solution)


def test_infeasible():
    program = LinearProgram(A=[[1]], b=[-1], c=[0])
    assert solve_lp(program).status is LPStatus.INFEASIBLE
    with pytest.raises(InfeasibleError):
        minimize(program)


def test_unbounded():
    program = LinearProgram(A=[[1, -1]], b=[0], c=[-1, 0])
    assert solve_lp(program).status is LPStatus.UNBOUNDED
    with pytest.raises(UnboundedError):
        minimize(program)


def test_shape_mismatch():
    with pytest.raises(LPError):
        LinearProgram(A=[[1, 2]], b=[1, 2], c=[0, 0])
    with pytest.raises(LPError):
        LinearProgram(A=[[1, 2]], b=[1], c=[0])


def test_tampered_solution_fails_verification(production_lp):
    solution = solve_lp(production_lp)
    solution.dual = [Fraction(0), Fraction(0)]
    assert not verify_optimality(production_lp, solution)
