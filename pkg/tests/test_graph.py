from __future__ import annotations

import pytest

from polysum.core.errors import GraphError
from polysum.generators.standard import cube, rational_polygon
from polysum.graph import (
    PolytopeGraph,
    build_graph,
    diameter,
    distance,
    eccentricities,
    gamma_diameter,
    gamma_subgraph,
    geodesic,
    is_connected,
)
from polysum.geometry.polytope import hull_from_vertices
from polysum.minkowski import minkowski_sum, segment


def test_cube_graph() -> None:
    g = build_graph(cube(3))
    assert g.vertex_count == 8
    assert g.edge_count == 12
    assert all(g.degree(v) == 3 for v in range(8))
    assert diameter(g) == (3, (0, 7))
    assert diameter(g, workers=3) == (3, (0, 7))
    assert eccentricities(g) == (3,) * 8
    assert distance(g, 0, 7) == 3
    assert geodesic(g, 0, 7) == [0, 1, 3, 7]
    assert geodesic(g, 5, 5) == [5]


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8, 9])
def test_polygon_diameter_is_half_the_cycle(n: int) -> None:
    assert diameter(build_graph(rational_polygon(n)))[0] == n // 2


def test_graph_construction_errors() -> None:
    with pytest.raises(GraphError):
        PolytopeGraph.from_edges(3, [(0, 0)])
    with pytest.raises(GraphError):
        PolytopeGraph.from_edges(3, [(0, 3)])
    with pytest.raises(GraphError):
        PolytopeGraph.from_edges(4, [(0, 1), (2, 3)])
    split = PolytopeGraph.from_edges(4, [(0, 1), (2, 3)], check_connected=False)
    assert not is_connected(split)
    with pytest.raises(GraphError):
        distance(split, 0, 3)
    with pytest.raises(GraphError):
        diameter(split)
    with pytest.raises(GraphError):
        diameter(PolytopeGraph.from_edges(0, []))


def test_from_adjacency_accepts_lists_and_dicts() -> None:
    a = PolytopeGraph.from_adjacency(3, [[1, 2], [0, 2], [0, 1]])
    b = PolytopeGraph.from_adjacency(3, {0: [1, 2], 1: [2]})
    assert a.adjacency == b.adjacency == ((1, 2), (0, 2), (0, 1))


def test_gamma_subgraphs_of_triangle_plus_segment() -> None:
    triangle = hull_from_vertices([(0, 0), (2, 0), (1, 2)])
    s = minkowski_sum(triangle, segment((1, 0)))
    apex = triangle.vertex_index[(1, 2)]
    gg = gamma_subgraph(s, apex)
    assert len(gg.members) == 2
    assert gg.edge_count == 1
    assert gamma_diameter(gg) == 1
    for u in range(triangle.f0):
        if u != apex:
            single = gamma_subgraph(s, u)
            assert len(single.members) == 1
            assert gamma_diameter(single) == 0
