"""Exact linear programming.

Dense two-phase simplex over ``Fraction`` with Bland's rule. Free variables
are split as x = x+ - x-. Strict inequalities are handled by one shared
slack ``t`` (0 <= t <= 1) that is subtracted from every strict row and then
maximized: the strict system is feasible iff the optimum is positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from ..core.errors import LPError
from .linalg import Number, QVector, as_rational, as_vector, dot

GE = ">="
GT = ">"
EQ = "="
_RELATIONS = (GE, GT, EQ)


@dataclass(frozen=True)
class Constraint:
    normal: QVector
    offset: Fraction
    relation: str = GE

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        lhs = dot(self.normal, x)
        if self.relation == GE:
            return lhs >= self.offset
        if self.relation == GT:
            return lhs > self.offset
        return lhs == self.offset


def ge(normal: Sequence[Number], offset: Number = 0) -> Constraint:
    return Constraint(as_vector(normal), as_rational(offset), GE)


def gt(normal: Sequence[Number], offset: Number = 0) -> Constraint:
    return Constraint(as_vector(normal), as_rational(offset), GT)


def eq(normal: Sequence[Number], offset: Number = 0) -> Constraint:
    return Constraint(as_vector(normal), as_rational(offset), EQ)


@dataclass(frozen=True)
class LPProblem:
    dim: int
    constraints: Tuple[Constraint, ...] = ()
    objective: Optional[QVector] = None
    sense: str = "min"

    def __post_init__(self) -> None:
        for c in self.constraints:
            if c.relation not in _RELATIONS:
                raise LPError(f"unknown relation {c.relation!r}")
            if len(c.normal) != self.dim:
                raise LPError(f"constraint of length {len(c.normal)} in a {self.dim}-dimensional problem")
        if self.objective is not None and len(self.objective) != self.dim:
            raise LPError("objective length does not match the problem dimension")
        if self.sense not in ("min", "max"):
            raise LPError(f"sense must be 'min' or 'max', got {self.sense!r}")


@dataclass(frozen=True)
class Infeasible:
    pass


@dataclass(frozen=True)
class Unbounded:
    pass


@dataclass(frozen=True)
class Optimal:
    point: QVector
    value: Fraction


@dataclass(frozen=True)
class Feasible:
    point: QVector


LPResult = Union[Infeasible, Unbounded, Optimal, Feasible]


@dataclass
class _Tableau:
    rows: List[List[Fraction]]
    basis: List[int]
    ncols: int
    banned: set = field(default_factory=set)

    def pivot(self, r: int, col: int) -> None:
        prow = self.rows[r]
        p = prow[col]
        if p != 1:
            prow = [x / p for x in prow]
            self.rows[r] = prow
        for i, row in enumerate(self.rows):
            if i != r and row[col] != 0:
                f = row[col]
                self.rows[i] = [x - f * y for x, y in zip(row, prow)]
        self.basis[r] = col

    def value(self, col: int) -> Fraction:
        for i, b in enumerate(self.basis):
            if b == col:
                return self.rows[i][-1]
        return Fraction(0)

    def minimize(self, cost: Sequence[Fraction]) -> bool:
        """Run simplex iterations; False when the objective is unbounded below."""
        while True:
            in_basis = set(self.basis)
            entering = None
            for j in range(self.ncols):
                if j in in_basis or j in self.banned:
                    continue
                reduced = cost[j] - sum(
                    (cost[b] * row[j] for b, row in zip(self.basis, self.rows) if cost[b] != 0),
                    Fraction(0),
                )
                if reduced < 0:
                    entering = j
                    break
            if entering is None:
                return True
            leave = None
            best: Optional[Tuple[Fraction, int]] = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    key = (row[-1] / a, self.basis[i])
                    if best is None or key < best:
                        best = key
                        leave = i
            if leave is None:
                return False
            self.pivot(leave, entering)


def lp_solve(problem: LPProblem) -> LPResult:
    d = problem.dim
    strict = any(c.relation == GT for c in problem.constraints)
    if strict and problem.objective is not None:
        raise LPError("strict constraints are only supported for feasibility problems")

    # columns: x+ (d), x- (d), [t], one surplus per inequality, [slack of t <= 1], artificials
    n_struct = 2 * d
    t_col = n_struct if strict else None
    col = n_struct + (1 if strict else 0)
    raw_rows: List[Tuple[List[Fraction], Fraction]] = []
    inequality_rows = [c for c in problem.constraints if c.relation != EQ]
    n_surplus = len(inequality_rows) + (1 if strict else 0)
    width = col + n_surplus
    surplus = col
    for c in problem.constraints:
        row = [Fraction(0)] * width
        for i, a in enumerate(c.normal):
            row[i] = a
            row[d + i] = -a
        if c.relation != EQ:
            row[surplus] = Fraction(-1)
            surplus += 1
        if c.relation == GT and t_col is not None:
            row[t_col] = Fraction(-1)
        raw_rows.append((row, c.offset))
    if strict and t_col is not None:
        row = [Fraction(0)] * width
        row[t_col] = Fraction(1)
        row[surplus] = Fraction(1)
        raw_rows.append((row, Fraction(1)))

    m = len(raw_rows)
    ncols = width + m
    rows: List[List[Fraction]] = []
    for i, (row, rhs) in enumerate(raw_rows):
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        rows.append(row + art + [rhs])
    tab = _Tableau(rows=rows, basis=[width + i for i in range(m)], ncols=ncols)

    phase1 = [Fraction(0)] * width + [Fraction(1)] * m
    tab.minimize(phase1)
    if sum((tab.value(width + i) for i in range(m)), Fraction(0)) > 0:
        return Infeasible()

    # drive zero-level artificials out of the basis, dropping redundant rows
    r = 0
    while r < len(tab.rows):
        if tab.basis[r] >= width:
            nz = next((j for j in range(width) if tab.rows[r][j] != 0), None)
            if nz is None:
                del tab.rows[r]
                del tab.basis[r]
                continue
            tab.pivot(r, nz)
        r += 1
    tab.banned = set(range(width, ncols))

    def point() -> QVector:
        return tuple(tab.value(i) - tab.value(d + i) for i in range(d))

    if strict and t_col is not None:
        cost = [Fraction(0)] * ncols
        cost[t_col] = Fraction(-1)
        tab.minimize(cost)
        if tab.value(t_col) > 0:
            return Feasible(point())
        return Infeasible()

    if problem.objective is None:
        return Feasible(point())

    sign = Fraction(1) if problem.sense == "min" else Fraction(-1)
    cost = [Fraction(0)] * ncols
    for i, c in enumerate(problem.objective):
        cost[i] = sign * c
        cost[d + i] = -sign * c
    if not tab.minimize(cost):
        return Unbounded()
    x = point()
    return Optimal(point=x, value=dot(problem.objective, x))


def is_feasible(dim: int, constraints: Sequence[Constraint]) -> bool:
    return not isinstance(lp_solve(LPProblem(dim=dim, constraints=tuple(constraints))), Infeasible)
