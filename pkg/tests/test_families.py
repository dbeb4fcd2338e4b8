from __future__ import annotations

from fractions import Fraction

import pytest

from polysum.core.errors import CensusMismatch, NonConvexBulge
from polysum.generators.families import (
    Census,
    PiParams,
    XiParams,
    bump_vertices,
    horizontal_projection,
    pi_polygon,
    precheck,
    prism_lift,
    theta,
    xi,
    xi_prism,
    xi_skeleton,
    xi_tilde,
    xi_tilde_prism,
)
from polysum.generators.standard import cube, polygon_points
from polysum.graph import build_graph, diameter
from polysum.minkowski import is_zonotope, segment, sum_polytope
from polysum.verify.checks import ratio_tables


def test_xi_params_validation() -> None:
    with pytest.raises(ValueError):
        XiParams(k=2, l=4)
    with pytest.raises(ValueError):
        XiParams(k=3, l=5)
    with pytest.raises(ValueError):
        XiParams(k=3, l=2)
    with pytest.raises(ValueError):
        XiParams(k=3, l=4, eps=Fraction(1, 4))
    with pytest.raises(ValueError):
        XiParams(k=3, l=4, s=Fraction(1))
    assert XiParams(k=3, l=4).as_dict()["eps"] == "1/10"


def test_census_reports_its_differences() -> None:
    c = Census(family="demo", expected={"vertices": 4, "facets": 4}, observed={"vertices": 4, "facets": 5})
    assert not c.passed
    assert c.diff() == {"facets": (4, 5)}
    with pytest.raises(CensusMismatch):
        c.require()
    ok = Census(family="demo", expected={"vertices": 4}, observed={"vertices": 4})
    assert ok.require() is ok
    assert ok.to_dict()["family"] == "demo"


@pytest.mark.parametrize("k", [3, 4, 5])
def test_tuned_skeleton_passes_the_precheck(k: int) -> None:
    params = XiParams.tuned(k, 4)
    sk = xi_skeleton(params)
    assert precheck(sk)
    assert len(sk.blue) == 2 * k
    assert len(sk.top) == len(sk.bottom) == k * 4
    assert len(sk.halfspaces()) == len(sk.expected_facet_sizes()) == 2 + 2 * k + 2 * k * 4 + 2 * k
    assert all(abs(v[2]) == params.H for v in sk.top + sk.bottom)


def test_xi_census_small() -> None:
    p, census = xi(XiParams.tuned(3, 4))
    assert census.passed
    assert p.f0 == 4 * 3 * 4
    assert len(p.facets) == 2 + 6 + 24 + 6
    assert horizontal_projection(p) == 6


def test_pi_polygon() -> None:
    pi = pi_polygon(PiParams.default(3))
    assert pi.f0 == 4
    assert all(v[1] == 0 and v[0] >= 0 for v in pi.vertices)
    with pytest.raises(NonConvexBulge):
        pi_polygon(PiParams(m=1))
    with pytest.raises(NonConvexBulge):
        pi_polygon(PiParams(m=3, direction=(Fraction(-1), Fraction(0), Fraction(0))))
    with pytest.raises(NonConvexBulge):
        # the bulge is so wide that the new edges outgrow e
        pi_polygon(PiParams(m=2, eps_bulge=Fraction(4)))


def test_bump_vertex_count() -> None:
    sk = xi_skeleton(XiParams.tuned(3, 4))
    assert len(bump_vertices(sk, PiParams.default(2))) == (3 - 1) * (4 - 1) * (2 - 1)
    assert len(bump_vertices(sk, PiParams.default(3))) == (3 - 1) * (4 - 1) * (3 - 1)


@pytest.mark.slow
@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_xi_family_diameter_stays_linear(k: int) -> None:
    p, census = xi(XiParams.tuned(k, 4))
    assert census.passed
    assert diameter(build_graph(p))[0] <= k + 4 + 2


@pytest.mark.slow
@pytest.mark.parametrize("k", [3, 4])
def test_theta_census(k: int) -> None:
    p, census = theta(k, 4)
    assert census.passed
    assert p.f0 == 2 * k * 4 + 6
    assert census.observed["projection_vertices"] == k + 3


@pytest.mark.slow
def test_xi_tilde_census() -> None:
    p, census = xi_tilde(3, 8, 2)
    assert census.passed
    assert census.observed["new_vertices"] == (3 - 1) * (8 - 1) * (2 - 1)


@pytest.mark.parametrize("k", [3, 5])
def test_reach_is_relative_to_the_edge_distance(k: int) -> None:
    params = XiParams.tuned(k, 4)
    sk = xi_skeleton(params)
    base = polygon_points(2 * k)
    for i, row in enumerate(sk.quads):
        (x0, y0), (x1, y1) = base[i], base[(i + 1) % (2 * k)]
        mx, my = (x0 + x1) / 2, (y0 + y1) / 2
        # the midpoint vector is the edge normal because the base lies on the unit circle
        assert (x1 - x0) * mx + (y1 - y0) * my == 0
        dist_sq = mx * mx + my * my
        for j, plane in enumerate(row):
            p, q = sk.chains[i][j], sk.chains[i][j + 1]
            reach = ((p[0] + q[0]) / 2 - params.s * mx, (p[1] + q[1]) / 2 - params.s * my, sk.colour[i] * params.H)
            assert plane.is_tight(reach)
            inward = reach[0] * mx + reach[1] * my
            assert inward == (1 - params.s) * dist_sq
            assert 0 < inward < dist_sq


def test_tuned_reach_uses_rational_series() -> None:
    assert XiParams.tuned(3, 4).s == Fraction(21, 40)
    assert all(XiParams.tuned(k, 4).s.denominator <= 1000 for k in (4, 5, 6))


def test_prism_lift_of_the_small_xi() -> None:
    p, census = xi_prism(3, 4, 5)
    assert census.passed
    assert p.intrinsic_dim == 5
    assert p.f0 == 48 * 4
    assert len(p.facets) == 38 + 4
    assert diameter(build_graph(p))[0] == diameter(build_graph(xi(XiParams.tuned(3, 4))[0]))[0] + 2
    same, _ = xi_prism(3, 4, 3)
    assert same.f0 == 48
    with pytest.raises(ValueError):
        prism_lift("cube", cube(3), 2)


@pytest.mark.slow
def test_xi_tilde_prism_census() -> None:
    p, census = xi_tilde_prism(3, 8, 2, 4)
    assert census.passed
    assert census.extra["m"] == 2
    assert p.intrinsic_dim == 4


@pytest.mark.slow
def test_xi_5_4_census_and_bounds() -> None:
    p, census = xi(XiParams.tuned(5, 4))
    assert census.passed
    assert p.f0 == 80
    assert len(p.facets) == 2 + 10 + 40 + 10
    assert diameter(build_graph(p))[0] <= 5 + 4 + 2
    assert diameter(build_graph(sum_polytope(p, segment((0, 0, 1)))))[0] >= 2 * 5
    assert not is_zonotope(p).is_zonotope


@pytest.mark.slow
def test_xi_ratio_table_for_k_up_to_ten() -> None:
    report = ratio_tables("xi", list(range(3, 11)))
    assert report.passed, report.failures
    ratios = [Fraction(row["ratio"]) for row in report.tables["xi"]]
    assert len(ratios) == 8
    assert all(r >= Fraction(2 * k, k + 6) for r, k in zip(ratios, range(3, 11)))


@pytest.mark.slow
@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("k", [5, 9, 13, 17])
def test_xi_tilde_ratio_grid(k: int, m: int) -> None:
    report = ratio_tables("xi_tilde", [k], m=m)
    assert report.passed, report.failures
    (row,) = report.tables["xi_tilde"]
    assert row["l"] == 2 * m + 4
    assert row["diameter_sum"] >= Fraction(k * (m + 1), 2) + 1
