from fractions import Fraction

import pytest

from toric_interp.errors import Infeasible
from toric_interp.lp import check_farkas, check_inequality_witness, phase_one, solve_inequalities


def test_feasible_equalities():
    res = phase_one([[1, 1, 0], [0, 1, 1]], [3, 2])
    assert res.feasible
    x = res.x
    assert all(v >= 0 for v in x)
    assert x[0] + x[1] == 3 and x[1] + x[2] == 2


def test_infeasible_has_farkas_vector():
    M = [[1, 1], [1, 1]]
    c = [1, 2]
    res = phase_one(M, c)
    assert not res.feasible
    assert check_farkas(M, c, res.farkas)


def test_negative_rhs_only():
    res = phase_one([[1]], [-1])
    assert not res.feasible and check_farkas([[1]], [-1], res.farkas)


def test_fractional_data():
    res = phase_one([[Fraction(1, 2), Fraction(1, 3)]], [Fraction(5, 6)])
    assert res.feasible
    assert res.x[0] / 2 + res.x[1] / 3 == Fraction(5, 6)


def test_solve_inequalities():
    A = [[1, 0], [0, 1], [-1, -1]]
    b = [1, 1, -5]
    x = solve_inequalities(A, b)
    assert all(sum(a * v for a, v in zip(row, x)) >= bb for row, bb in zip(A, b))


def test_inequality_infeasible_witness():
    A = [[1], [-1]]
    b = [2, -1]
    with pytest.raises(Infeasible) as info:
        solve_inequalities(A, b)
    lam = info.value.witness["multipliers"]
    assert check_inequality_witness(A, b, [Fraction(v) for v in lam])


def test_farkas_rejects_bogus_vector():
    assert not check_farkas([[1, 1]], [1], [Fraction(-1)])
