from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from typing import List, Sequence

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polysum.core.errors import DegenerateSpan, ZeroVector
from polysum.exact.linalg import (
    affine_rank,
    as_vector,
    canonical_sign,
    dot,
    int_rank,
    integer_row,
    normalize_primitive,
    nullspace,
    rank,
    solve_affine,
    solve_linear,
)

small = st.integers(min_value=-6, max_value=6)


def rows(n: int, d: int) -> st.SearchStrategy:
    return st.lists(st.lists(small, min_size=d, max_size=d), min_size=n, max_size=n)


def test_integer_row_and_primitive_normal() -> None:
    assert integer_row(as_vector(["1/2", "1/3"])) == (3, 2)
    assert integer_row(as_vector([0, 0])) == (0, 0)
    assert normalize_primitive([2, 4]) == (1, 2)
    assert canonical_sign(normalize_primitive([-2, 4])) == (1, -2)
    with pytest.raises(ZeroVector):
        normalize_primitive([0, 0, 0])


def test_rank_and_nullspace() -> None:
    assert rank([as_vector([1, 2]), as_vector([2, 4])]) == 1
    assert rank([as_vector([1, 0, 0]), as_vector([0, "1/3", 0])]) == 2
    basis = nullspace([as_vector([1, 1, 0])], 3)
    assert basis == [as_vector([-1, 1, 0]), as_vector([0, 0, 1])]


def test_solve_linear() -> None:
    x = solve_linear([as_vector([2, 0]), as_vector([0, 4])], as_vector([2, 2]))
    assert x == (Fraction(1), Fraction(1, 2))
    with pytest.raises(DegenerateSpan):
        solve_linear([as_vector([1, 1]), as_vector([2, 2])], as_vector([1, 2]))


def test_solve_affine_plane_through_unit_vectors() -> None:
    normal, offset = solve_affine([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert normal == as_vector([1, 1, 1])
    assert offset == 1
    with pytest.raises(DegenerateSpan):
        solve_affine([(0, 0, 0), (1, 1, 1), (2, 2, 2)])


def test_affine_rank() -> None:
    assert affine_rank([]) == -1
    assert affine_rank([as_vector([3, 3])]) == 0
    assert affine_rank([as_vector(p) for p in [(0, 0), (1, 1), (2, 2)]]) == 1
    assert affine_rank([as_vector(p) for p in [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]]) == 3


@settings(max_examples=50, deadline=None)
@given(rows(3, 4))
def test_nullspace_is_annihilated_and_complements_rank(m: list) -> None:
    mat = [as_vector(r) for r in m]
    basis = nullspace(mat, 4)
    assert len(basis) == 4 - rank(mat)
    for x in basis:
        assert all(dot(r, x) == 0 for r in mat)


@settings(max_examples=50, deadline=None)
@given(rows(3, 3), st.integers(min_value=1, max_value=9))
def test_rank_is_invariant_under_row_scaling(m: list, factor: int) -> None:
    mat = [as_vector(r) for r in m]
    scaled = [tuple(Fraction(1, factor) * x for x in r) for r in mat]
    assert rank(scaled) == rank(mat) <= 3


def _det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(m)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term *= m[i][j]
        total += term
    return total


def _rank_by_minors(m: List[Sequence[Fraction]]) -> int:
    n_rows, n_cols = len(m), len(m[0])
    for r in range(min(n_rows, n_cols), 0, -1):
        for ri in combinations(range(n_rows), r):
            for ci in combinations(range(n_cols), r):
                if _det([[m[i][j] for j in ci] for i in ri]) != 0:
                    return r
    return 0


tiny = st.integers(min_value=-2, max_value=2)


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=1, max_value=4), st.integers(min_value=1, max_value=4), st.data())
def test_rank_matches_the_largest_nonzero_minor(n: int, d: int, data: st.DataObject) -> None:
    m = data.draw(st.lists(st.lists(tiny, min_size=d, max_size=d), min_size=n, max_size=n))
    mat = [as_vector(r) for r in m]
    expected = _rank_by_minors(mat)
    assert rank(mat) == expected
    assert int_rank(m) == expected


@settings(max_examples=50, deadline=None)
@given(rows(3, 3), st.lists(small, min_size=3, max_size=3))
def test_solve_linear_on_nonsingular_systems(m: list, b: list) -> None:
    mat = [as_vector(r) for r in m]
    rhs = as_vector(b)
    if _det(mat) == 0:
        with pytest.raises(DegenerateSpan):
            solve_linear(mat, rhs)
        return
    x = solve_linear(mat, rhs)
    assert [dot(r, x) for r in mat] == list(rhs)


def test_rank_with_fractional_entries() -> None:
    mat = [as_vector(["1/3", "2/7", 1]), as_vector(["2/3", "4/7", 2]), as_vector([0, "1/5", 0])]
    assert rank(mat) == 2
    assert _rank_by_minors(mat) == 2
