"""Minkowski sums with decomposition maps, erosion, summand tests and zonotopes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .core.errors import AmbiguousMinimizer, DecompositionFailure, EmptyErosion, EmptyPolytope
from .core.logger import JsonlLogger, log_event
from .exact.linalg import QVector, add, canonical_sign, dot, norm_sq, normalize_primitive, scale as vscale, sub
from .geometry.cones import cone_interior_point, normal_cone
from .geometry.polytope import (
    ExactPolytope,
    Halfspace,
    Hyperplane,
    hull_from_vertices,
    scale,
    unique_minimizer,
    vertices_from_halfspaces,
)

SCALE_CAP = Fraction(2**16)


@dataclass(frozen=True)
class SumResult:
    p: ExactPolytope
    q: ExactPolytope
    sum: ExactPolytope
    # sum vertex index -> (vertex index in p, vertex index in q)
    decomposition: Tuple[Tuple[int, int], ...]

    def part_p(self, w: int) -> int:
        return self.decomposition[w][0]

    def part_q(self, w: int) -> int:
        return self.decomposition[w][1]


@dataclass(frozen=True)
class PhiMap:
    # vertex index of p -> sum vertex index
    image: Tuple[int, ...]
    # vertex index of p -> vertex index of q it is paired with
    partner: Tuple[int, ...]

    def is_injective(self) -> bool:
        return len(set(self.image)) == len(self.image)


@dataclass(frozen=True)
class ScaleResult:
    alpha_lo: Fraction
    alpha_hi: Fraction
    certified: bool


@dataclass(frozen=True)
class EdgeClass:
    direction: QVector
    edges: Tuple[Tuple[int, int], ...]
    min_length_sq: Fraction
    # shortest edge vector, pointing along ``direction``
    min_vector: QVector


@dataclass(frozen=True)
class ZonotopeResult:
    is_zonotope: bool
    generators: Tuple[Tuple[QVector, Fraction], ...]
    edge_profile: Tuple[Tuple[QVector, bool], ...]


def sum_polytope(p: ExactPolytope, q: ExactPolytope) -> ExactPolytope:
    """p + q without the decomposition map."""
    _check_dims(p, q)
    return hull_from_vertices(add(u, v) for u in p.vertices for v in q.vertices)


def _check_dims(p: ExactPolytope, q: ExactPolytope) -> None:
    if p.ambient_dim != q.ambient_dim:
        raise ValueError(f"ambient dimensions differ: {p.ambient_dim} vs {q.ambient_dim}")


def minkowski_sum(p: ExactPolytope, q: ExactPolytope, logger: Optional[JsonlLogger] = None) -> SumResult:
    _check_dims(p, q)
    total = sum_polytope(p, q)
    decomposition: List[Tuple[int, int]] = []
    for w in range(total.f0):
        c = cone_interior_point(normal_cone(total, w))
        try:
            u = unique_minimizer(p.vertices, c)
            v = unique_minimizer(q.vertices, c)
        except AmbiguousMinimizer as e:
            raise DecompositionFailure(f"sum vertex {w} has no unique decomposition: {e}") from e
        if add(p.vertices[u], q.vertices[v]) != total.vertices[w]:
            raise DecompositionFailure(f"sum vertex {w} is not the sum of its minimizers")
        decomposition.append((u, v))
    log_event(logger, "minkowski.sum", f0_p=p.f0, f0_q=q.f0, f0_sum=total.f0)
    return SumResult(p=p, q=q, sum=total, decomposition=tuple(decomposition))


def edge_decomposition(s: SumResult, edge: Tuple[int, int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Faces of p and q (each a vertex or an edge, as sorted index tuples) summing to a sum edge."""
    (u1, v1), (u2, v2) = s.decomposition[edge[0]], s.decomposition[edge[1]]
    return tuple(sorted({u1, u2})), tuple(sorted({v1, v2}))


def phi_injection(p: ExactPolytope, q: ExactPolytope, s: Optional[SumResult] = None) -> PhiMap:
    _check_dims(p, q)
    s = s if s is not None else minkowski_sum(p, q)
    image: List[int] = []
    partner: List[int] = []
    for u in range(p.f0):
        cone = normal_cone(p, u)
        c0 = cone_interior_point(cone)
        c = c0
        step = 2
        while True:
            try:
                v = unique_minimizer(q.vertices, c)
                break
            except AmbiguousMinimizer:
                t = Fraction(1, step)
                c = c0
                power = t
                for g in cone.generators:
                    c = add(c, vscale(power, g))
                    power *= t
                step += 1
        w = s.sum.vertex_index.get(add(p.vertices[u], q.vertices[v]))
        if w is None or s.decomposition[w] != (u, v):
            raise DecompositionFailure(f"image of vertex {u} is not a sum vertex decomposing as ({u}, {v})")
        image.append(w)
        partner.append(v)
    phi = PhiMap(image=tuple(image), partner=tuple(partner))
    if not phi.is_injective():
        raise DecompositionFailure("vertex map into the sum is not injective")
    return phi


def homothety_bijection(p: ExactPolytope, q: ExactPolytope) -> Dict[int, int]:
    """Vertex bijection p -> p + q, defined when both have the same number of vertices."""
    s = minkowski_sum(p, q)
    if s.sum.f0 != p.f0:
        raise DecompositionFailure(f"sum has {s.sum.f0} vertices, p has {p.f0}")
    return {u: w for w, (u, _) in enumerate(s.decomposition)}


def erosion(p: ExactPolytope, q: ExactPolytope) -> ExactPolytope:
    """The Minkowski difference {x : x + q ⊆ p}."""
    _check_dims(p, q)
    hs: List[Halfspace] = []
    for h in p.facets:
        support = min(dot(h.normal, s) for s in q.vertices)
        hs.append(Halfspace(h.normal, h.offset - support))
    for e in p.equations:
        values = {dot(e.normal, s) for s in q.vertices}
        if len(values) != 1:
            raise EmptyErosion("q does not fit in the affine hull of p")
        hs.extend(Hyperplane(e.normal, e.offset - values.pop()).halfspaces())
    try:
        return vertices_from_halfspaces(hs)
    except EmptyPolytope as e:
        raise EmptyErosion(str(e)) from e


def is_summand(p: ExactPolytope, q: ExactPolytope) -> bool:
    try:
        rest = erosion(p, q)
    except EmptyErosion:
        return False
    return sum_polytope(rest, q).vertices == p.vertices


def has_homothetic_summand(p: ExactPolytope, q: ExactPolytope) -> bool:
    _check_dims(p, q)
    return sum_polytope(p, q).f0 == p.f0


def max_summand_scale(p: ExactPolytope, q: ExactPolytope, tolerance: Fraction) -> ScaleResult:
    """Bracket [lo, hi] of width <= tolerance around the largest α with αq a summand of p."""
    tol = Fraction(tolerance)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    lo, hi = Fraction(0), Fraction(1)
    while is_summand(p, scale(q, hi)):
        lo = hi
        if hi >= SCALE_CAP:
            return ScaleResult(alpha_lo=lo, alpha_hi=hi, certified=False)
        hi *= 2
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if is_summand(p, scale(q, mid)):
            lo = mid
        else:
            hi = mid
    return ScaleResult(alpha_lo=lo, alpha_hi=hi, certified=True)


def edge_direction_classes(p: ExactPolytope) -> List[EdgeClass]:
    groups: Dict[QVector, List[Tuple[Tuple[int, int], QVector]]] = {}
    for u, v in sorted(p.edge_set):
        vec = sub(p.vertices[v], p.vertices[u])
        direction = canonical_sign(normalize_primitive(vec))
        if canonical_sign(vec) != vec:
            vec = tuple(-x for x in vec)
        groups.setdefault(direction, []).append(((u, v), vec))
    out = []
    for direction in sorted(groups):
        members = groups[direction]
        shortest = min((vec for _, vec in members), key=norm_sq)
        out.append(
            EdgeClass(
                direction=direction,
                edges=tuple(e for e, _ in members),
                min_length_sq=norm_sq(shortest),
                min_vector=shortest,
            )
        )
    return out


def segment(vector: Sequence[Fraction]) -> ExactPolytope:
    d = len(vector)
    return hull_from_vertices([tuple(Fraction(0) for _ in range(d)), tuple(Fraction(x) for x in vector)])


def _scale_along(direction: QVector, vec: QVector) -> Fraction:
    i = next(j for j, x in enumerate(direction) if x != 0)
    return vec[i] / direction[i]


def is_zonotope(p: ExactPolytope) -> ZonotopeResult:
    """Peel edge segments (lexicographically smallest direction first) until a point remains."""
    profile = tuple(
        (cls.direction, has_homothetic_summand(p, segment(cls.min_vector))) for cls in edge_direction_classes(p)
    )
    generators: List[Tuple[QVector, Fraction]] = []
    cur = p
    while cur.f0 > 1:
        cls = edge_direction_classes(cur)[0]
        seg = segment(cls.min_vector)
        if not is_summand(cur, seg):
            return ZonotopeResult(is_zonotope=False, generators=tuple(generators), edge_profile=profile)
        cur = erosion(cur, seg)
        generators.append((cls.direction, _scale_along(cls.direction, cls.min_vector)))
    return ZonotopeResult(is_zonotope=True, generators=tuple(generators), edge_profile=profile)
