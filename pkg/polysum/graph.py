"""Polytope graphs, BFS distances, geodesics, diameters and Γ-subgraphs."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from .core.errors import GraphError
from .geometry.polytope import ExactPolytope

if TYPE_CHECKING:
    from .minkowski import SumResult


@dataclass(frozen=True)
class PolytopeGraph:
    vertex_count: int
    adjacency: Tuple[Tuple[int, ...], ...]
    nx_graph: nx.Graph = field(compare=False, repr=False)

    @classmethod
    def from_edges(
        cls, n: int, edge_list: Iterable[Tuple[int, int]], check_connected: bool = True
    ) -> "PolytopeGraph":
        g = nx.Graph()
        g.add_nodes_from(range(n))
        for a, b in edge_list:
            if a == b:
                raise GraphError(f"self-loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"edge ({a}, {b}) out of range for {n} vertices")
            g.add_edge(a, b)
        if check_connected and n > 0 and not nx.is_connected(g):
            raise GraphError("polytope graph is not connected")
        adjacency = tuple(tuple(sorted(g.neighbors(v))) for v in range(n))
        return cls(vertex_count=n, adjacency=adjacency, nx_graph=g)

    @classmethod
    def from_adjacency(
        cls, n: int, adjacency: Union[Dict[int, Sequence[int]], Sequence[Sequence[int]]], check_connected: bool = True
    ) -> "PolytopeGraph":
        items = adjacency.items() if isinstance(adjacency, dict) else enumerate(adjacency)
        pairs = {(min(u, v), max(u, v)) for u, nbrs in items for v in nbrs}
        return cls.from_edges(n, sorted(pairs), check_connected=check_connected)

    @property
    def edge_count(self) -> int:
        return self.nx_graph.number_of_edges()

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


@dataclass(frozen=True)
class GammaGraph:
    base: int
    members: Tuple[int, ...]
    adjacency: Dict[int, Tuple[int, ...]] = field(compare=False)
    nx_graph: nx.Graph = field(compare=False, repr=False)

    @property
    def edge_count(self) -> int:
        return self.nx_graph.number_of_edges()


def build_graph(p: ExactPolytope) -> PolytopeGraph:
    return PolytopeGraph.from_edges(p.f0, sorted(p.edge_set))


def _bfs(g: nx.Graph, source: int) -> Dict[int, int]:
    return nx.single_source_shortest_path_length(g, source)


def distance(g: PolytopeGraph, u: int, v: int) -> int:
    try:
        return nx.shortest_path_length(g.nx_graph, u, v)
    except nx.NetworkXNoPath as e:
        raise GraphError(f"no path between {u} and {v}") from e


def geodesic(g: PolytopeGraph, u: int, v: int) -> List[int]:
    """Lexicographically least shortest path from ``u`` to ``v``."""
    dist = _bfs(g.nx_graph, v)
    if u not in dist:
        raise GraphError(f"no path between {u} and {v}")
    path = [u]
    cur = u
    while cur != v:
        cur = min(w for w in g.adjacency[cur] if dist.get(w) == dist[cur] - 1)
        path.append(cur)
    return path


def eccentricities(g: PolytopeGraph, workers: int = 1) -> Tuple[int, ...]:
    return tuple(e for e, _ in _farthest_all(g, workers))


def _farthest(g: PolytopeGraph, source: int) -> Tuple[int, int]:
    dist = _bfs(g.nx_graph, source)
    if len(dist) != g.vertex_count:
        raise GraphError("diameter requested on a disconnected graph")
    ecc = max(dist.values())
    return ecc, min(v for v, dv in dist.items() if dv == ecc)


def _farthest_all(g: PolytopeGraph, workers: int) -> List[Tuple[int, int]]:
    sources = range(g.vertex_count)
    if workers > 1 and g.vertex_count > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda s: _farthest(g, s), sources))
    return [_farthest(g, s) for s in sources]


def diameter(g: PolytopeGraph, workers: int = 1) -> Tuple[int, Tuple[int, int]]:
    """Exact diameter by BFS from every vertex, with the lexicographically least realizing pair."""
    if g.vertex_count == 0:
        raise GraphError("empty graph has no diameter")
    best = -1
    witness = (0, 0)
    for u, (ecc, far) in enumerate(_farthest_all(g, workers)):
        if ecc > best:
            best = ecc
            witness = (u, far)
    return best, witness


def gamma_subgraph(s: "SumResult", u: int, g: Optional[PolytopeGraph] = None) -> GammaGraph:
    """Subgraph of the sum's graph induced on the sum vertices whose first part is ``u``."""
    sum_graph = g if g is not None else build_graph(s.sum)
    members = tuple(w for w, (a, _) in enumerate(s.decomposition) if a == u)
    sub = sum_graph.nx_graph.subgraph(members).copy()
    adjacency = {w: tuple(sorted(sub.neighbors(w))) for w in members}
    return GammaGraph(base=u, members=members, adjacency=adjacency, nx_graph=sub)


def is_connected(g: Union[PolytopeGraph, GammaGraph]) -> bool:
    if g.nx_graph.number_of_nodes() == 0:
        return False
    return nx.is_connected(g.nx_graph)


def gamma_diameter(gg: GammaGraph) -> int:
    if not is_connected(gg):
        raise GraphError(f"Γ-subgraph of vertex {gg.base} is not connected")
    return max(max(_bfs(gg.nx_graph, w).values()) for w in gg.members)
