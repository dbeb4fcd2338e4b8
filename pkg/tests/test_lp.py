from __future__ import annotations

from fractions import Fraction

import pytest

from polysum.core.errors import LPError
from polysum.exact.lp import Feasible, Infeasible, LPProblem, Optimal, Unbounded, eq, ge, gt, is_feasible, lp_solve


def test_minimum_at_a_corner() -> None:
    res = lp_solve(LPProblem(dim=2, constraints=(ge([1, 0], 1), ge([0, 1], 2)), objective=(Fraction(1), Fraction(1))))
    assert isinstance(res, Optimal)
    assert res.value == 3
    assert res.point == (Fraction(1), Fraction(2))


def test_equality_and_maximization() -> None:
    cons = (eq([1, 1], 2), ge([1, 0], 0), ge([0, 1], 0))
    res = lp_solve(LPProblem(dim=2, constraints=cons, objective=(Fraction(1), Fraction(-1)), sense="min"))
    assert isinstance(res, Optimal)
    assert res.value == -2
    res = lp_solve(LPProblem(dim=2, constraints=cons, objective=(Fraction(1), Fraction(0)), sense="max"))
    assert isinstance(res, Optimal)
    assert res.value == 2


def test_unbounded_and_infeasible() -> None:
    assert isinstance(lp_solve(LPProblem(dim=1, constraints=(ge([1], 0),), objective=(Fraction(1),), sense="max")), Unbounded)
    assert isinstance(lp_solve(LPProblem(dim=1, constraints=(ge([1], 1), ge([-1], 0)))), Infeasible)


def test_strict_inequalities() -> None:
    assert not is_feasible(1, [gt([1], 0), gt([-1], 0)])
    open_interval = [gt([1], 0), gt([-1], -1)]
    res = lp_solve(LPProblem(dim=1, constraints=tuple(open_interval)))
    assert isinstance(res, Feasible)
    assert all(c.satisfied_by(res.point) for c in open_interval)
    # a closed point is not an open set
    assert not is_feasible(1, [gt([1], 0), ge([-1], 0)])


def test_problem_validation() -> None:
    with pytest.raises(LPError):
        LPProblem(dim=2, constraints=(ge([1], 0),))
    with pytest.raises(LPError):
        LPProblem(dim=1, objective=(Fraction(1),), sense="up")
    with pytest.raises(LPError):
        lp_solve(LPProblem(dim=1, constraints=(gt([1], 0),), objective=(Fraction(1),)))
