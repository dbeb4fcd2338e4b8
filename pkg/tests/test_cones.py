from __future__ import annotations

import pytest

from polysum.core.errors import NotFullDimensional
from polysum.exact.linalg import as_vector
from polysum.generators.standard import cube, simplex
from polysum.geometry.cones import (
    Cone,
    cone_contains,
    cone_interior_point,
    cones_equal,
    fan_covers,
    fan_refines,
    fans_equal,
    normal_cone,
    normal_fan,
    sample_directions,
)
from polysum.geometry.polytope import embed, scale
from polysum.minkowski import sum_polytope


def test_normal_cone_at_the_origin_of_the_cube() -> None:
    c = normal_cone(cube(3), 0)
    assert sorted(c.generators) == sorted(as_vector(e) for e in [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert cone_interior_point(c) == (1, 1, 1)
    assert cone_contains(c, (1, 2, 3))
    assert cone_contains(c, (0, 0, 1))
    assert not cone_contains(c, (-1, 0, 0))


def test_cone_contains_without_inequalities() -> None:
    c = Cone(generators=(as_vector([1, 0]), as_vector([1, 1])), ambient_dim=2)
    assert cone_contains(c, (3, 1))
    assert not cone_contains(c, (0, 1))
    assert cones_equal(c, Cone(generators=(as_vector([2, 0]), as_vector([1, 1]), as_vector([2, 1])), ambient_dim=2))


def test_interior_point_of_a_generator_only_cone() -> None:
    c = Cone(generators=(as_vector([1, 0]), as_vector([2, 2]), as_vector([0, 3])), ambient_dim=2)
    assert c.hrep is None
    x = cone_interior_point(c)
    assert x == (2, 2)
    half_plane = Cone(generators=(as_vector([1, 0]), as_vector([-1, 0]), as_vector([0, 1])), ambient_dim=2)
    assert cone_interior_point(half_plane) == (0, 1)


def test_flat_polytope_cone_contains_a_line() -> None:
    flat = embed(cube(2), 1)
    c = normal_cone(flat, 0)
    assert cone_contains(c, (0, 0, -5))
    with pytest.raises(NotFullDimensional):
        cone_interior_point(Cone(generators=(as_vector([1, 0, 0]),), ambient_dim=3))


def test_fan_covers_sampled_directions() -> None:
    fan = normal_fan(cube(3))
    dirs = sample_directions(3, 25, seed=4)
    assert dirs == sample_directions(3, 25, seed=4)
    assert all(any(x != 0 for x in v) for v in dirs)
    assert fan_covers(fan, dirs) == {"sampled": 25, "missed": 0}
    assert len(fan.cones_containing((1, 1, 1))) == 1


def test_fan_equality_and_refinement() -> None:
    sq, tri = cube(2), simplex(2)
    assert fans_equal(sq, scale(sq, 2))
    assert not fans_equal(sq, tri)
    total = sum_polytope(sq, tri)
    assert fan_refines(total, sq)
    assert fan_refines(total, tri)
    assert not fan_refines(tri, sq)
    assert fan_refines(sq, sq)
