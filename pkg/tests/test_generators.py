from __future__ import annotations

from fractions import Fraction

import pytest

from polysum.core.errors import ApexInAffineHull
from polysum.generators.standard import (
    cube,
    point,
    polygon_points,
    prism,
    product,
    fixed_diameter,
    pyramid_pair,
    pyramid,
    random_polytope,
    rational_polygon,
    segment,
    simplex,
    standard,
)
from polysum.geometry.polytope import embed
from polysum.graph import build_graph, diameter
from polysum.minkowski import sum_polytope


def test_basic_shapes() -> None:
    assert cube(0).f0 == 1
    assert cube(4).f0 == 16 and len(cube(4).facets) == 8
    t = simplex(3)
    assert t.f0 == 4 and len(t.facets) == 4
    t.validate()
    assert point(2, (1, 2)).vertices == ((1, 2),)
    assert segment((0, 2)).f0 == 2
    with pytest.raises(ValueError):
        segment((0, 0))
    assert standard("cube", 2).vertices == cube(2).vertices
    assert standard("segment", v=(1, 1)).f0 == 2
    with pytest.raises(ValueError):
        standard("torus", 2)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 10])
def test_polygon_points_lie_on_the_circle(n: int) -> None:
    pts = polygon_points(n)
    assert len(pts) == n
    assert all(x * x + y * y == 1 for x, y in pts)
    assert {(-x, y) for x, y in pts} == set(pts)
    assert rational_polygon(n).f0 == n


def test_polygon_needs_three_vertices() -> None:
    with pytest.raises(ValueError):
        polygon_points(2)


def test_products_and_pyramids() -> None:
    tri_prism = prism(simplex(2))
    assert tri_prism.f0 == 6 and len(tri_prism.facets) == 5
    tri_prism.validate()
    assert product(cube(2), cube(0)) is not None
    assert product(cube(1), cube(2)).vertices == cube(3).vertices

    half = Fraction(1, 2)
    apex = pyramid(cube(2), (half, half, 1))
    assert apex.f0 == 5 and len(apex.facets) == 5
    apex.validate()
    with pytest.raises(ApexInAffineHull):
        pyramid(embed(cube(2), 1), (half, half, 0))


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_fixed_diameter(d: int, k: int) -> None:
    p = fixed_diameter(d, k)
    assert p.intrinsic_dim == d
    assert diameter(build_graph(p))[0] == k


def test_fixed_diameter_arguments() -> None:
    assert fixed_diameter(1, 1).f0 == 2
    with pytest.raises(ValueError):
        fixed_diameter(1, 2)
    with pytest.raises(ValueError):
        pyramid_pair(2, 4)


@pytest.mark.parametrize("k", [4, 5])
def test_pyramid_pair(k: int) -> None:
    p, q = pyramid_pair(3, k)
    assert diameter(build_graph(p))[0] == 2
    assert diameter(build_graph(q))[0] == 2
    assert diameter(build_graph(sum_polytope(p, q)))[0] == k


def test_random_polytope_is_seeded() -> None:
    a = random_polytope(3, 8, seed=5)
    b = random_polytope(3, 8, seed=5)
    assert a.vertices == b.vertices
    assert a.intrinsic_dim == 3
    assert all(abs(x) <= 10 for v in a.vertices for x in v)
    with pytest.raises(ValueError):
        random_polytope(3, 3)


@pytest.mark.slow
@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_fixed_diameter_in_dimension_five(k: int) -> None:
    p = fixed_diameter(5, k)
    assert p.intrinsic_dim == 5
    assert diameter(build_graph(p))[0] == k


@pytest.mark.slow
@pytest.mark.parametrize("k", [4, 5, 6, 7, 8])
def test_pyramid_pair_in_dimension_four(k: int) -> None:
    p, q = pyramid_pair(4, k)
    assert p.intrinsic_dim == q.intrinsic_dim == 4
    assert diameter(build_graph(p))[0] == diameter(build_graph(q))[0] == 2
    assert diameter(build_graph(sum_polytope(p, q)))[0] == k
