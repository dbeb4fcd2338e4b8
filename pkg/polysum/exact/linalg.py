"""Exact rational vectors and matrices.

Scalars are ``fractions.Fraction`` (always in lowest terms, positive
denominator). Vectors are plain tuples of fractions so they hash, sort and
compare lexicographically; matrices are sequences of such tuples. Elimination
runs on sympy ``DomainMatrix`` over ``QQ`` and converts back at the boundary.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Any, Iterable, List, Sequence, Tuple, Union

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from ..core.errors import DegenerateSpan, ZeroVector

Rational = Fraction
QVector = Tuple[Fraction, ...]
QMatrix = Sequence[QVector]
Number = Union[int, str, Fraction]


def as_rational(x: Number) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def as_vector(values: Iterable[Number]) -> QVector:
    return tuple(as_rational(v) for v in values)


def zero_vector(d: int) -> QVector:
    return tuple(Fraction(0) for _ in range(d))


def unit_vector(d: int, i: int) -> QVector:
    return tuple(Fraction(1 if j == i else 0) for j in range(d))


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def add(a: QVector, b: QVector) -> QVector:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: QVector, b: QVector) -> QVector:
    return tuple(x - y for x, y in zip(a, b))


def scale(alpha: Number, a: QVector) -> QVector:
    s = as_rational(alpha)
    return tuple(s * x for x in a)


def neg(a: QVector) -> QVector:
    return tuple(-x for x in a)


def is_zero(a: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in a)


def norm_sq(a: QVector) -> Fraction:
    return dot(a, a)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def integer_row(v: Sequence[Fraction]) -> Tuple[int, ...]:
    """Smallest positive multiple of ``v`` with integer entries (zero rows pass through)."""
    den = reduce(_lcm, (Fraction(x).denominator for x in v), 1)
    ints = [int(Fraction(x) * den) for x in v]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def normalize_primitive(v: Sequence[Number]) -> QVector:
    vec = as_vector(v)
    if is_zero(vec):
        raise ZeroVector("cannot normalize the zero vector")
    return tuple(Fraction(x) for x in integer_row(vec))


def canonical_sign(v: QVector) -> QVector:
    """Flip ``v`` so that its first nonzero entry is positive."""
    for x in v:
        if x != 0:
            return v if x > 0 else neg(v)
    return v


def _qq(x: Number) -> Any:
    q = as_rational(x)
    return QQ(q.numerator, q.denominator)


def _fraction(x: Any) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _domain_matrix(m: Sequence[Sequence[Number]], ncols: int) -> DomainMatrix:
    return DomainMatrix([[_qq(x) for x in row] for row in m], (len(m), ncols), QQ)


def rank(m: QMatrix) -> int:
    """Exact rank over the rationals."""
    if not m:
        return 0
    return _domain_matrix(m, len(m[0])).rank()


def int_rank(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 0
    return DomainMatrix([[ZZ(int(x)) for x in r] for r in rows], (len(rows), len(rows[0])), ZZ).rank()


def rref(m: QMatrix, ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form (nonzero rows only) and its pivot columns."""
    if not m:
        return [], []
    reduced, pivots = _domain_matrix(m, ncols).rref()
    rows = reduced.to_list()[: len(pivots)]
    return [[_fraction(x) for x in row] for row in rows], list(pivots)


def nullspace(m: QMatrix, ncols: int) -> List[QVector]:
    """Basis of {x : m x = 0}, one vector per free column, in canonical form."""
    reduced, pivots = rref(m, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis: List[QVector] = []
    for fc in free:
        x = [Fraction(0)] * ncols
        x[fc] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            x[pc] = -row[fc]
        basis.append(tuple(x))
    return basis


def solve_linear(a: QMatrix, b: Sequence[Fraction]) -> QVector:
    n = len(a)
    aug = [list(row) + [b[i]] for i, row in enumerate(a)]
    reduced, pivots = rref(aug, n + 1)
    if pivots != list(range(n)):
        raise DegenerateSpan("linear system is singular")
    return tuple(row[n] for row in reduced)


def solve_affine(points: Sequence[Sequence[Number]]) -> Tuple[QVector, Fraction]:
    """Primitive integer normal ``a`` and offset ``b`` with a·p = b for every point."""
    pts = [as_vector(p) for p in points]
    if not pts:
        raise DegenerateSpan("no points given")
    d = len(pts[0])
    diffs = [sub(p, pts[0]) for p in pts[1:]]
    spans = rank(diffs) == d - 1 if diffs else d == 1
    if not spans:
        raise DegenerateSpan(f"points do not span a hyperplane of R^{d}")
    basis = nullspace(diffs, d)
    normal = canonical_sign(normalize_primitive(basis[0]))
    return normal, dot(normal, pts[0])


def affine_rank(points: Sequence[QVector]) -> int:
    """Dimension of the affine hull (-1 for the empty set)."""
    if not points:
        return -1
    return rank([sub(p, points[0]) for p in points[1:]]) if len(points) > 1 else 0


def cross2(a: QVector, b: QVector) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]
