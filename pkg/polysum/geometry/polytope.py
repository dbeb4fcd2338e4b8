"""Dual-description polytopes with exact rational coordinates.

An :class:`ExactPolytope` stores its vertices (lexicographically sorted),
its irredundant facet halfspaces ``normal·x >= offset`` (primitive integer
normals, sorted), the equations of its affine hull when it is not
full-dimensional, and the vertex/facet incidence. Both constructors run
the double description kernel in :mod:`polysum.geometry.dd`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from ..core.errors import (
    AmbiguousMinimizer,
    EmptyPolytope,
    EmptySection,
    InvalidDescription,
    UnboundedPolyhedron,
)
from ..exact.linalg import (
    Number,
    QVector,
    add,
    affine_rank,
    as_rational,
    as_vector,
    canonical_sign,
    dot,
    int_rank,
    integer_row,
    normalize_primitive,
    nullspace,
    rank,
    rref,
    scale as vscale,
    solve_linear,
    sub,
)
from ..exact.lp import LPProblem, Infeasible, ge, lp_solve
from .dd import extreme_rays


def _scale_to_primitive(normal: QVector, offset: Fraction) -> Tuple[QVector, Fraction]:
    prim = normalize_primitive(normal)
    i = next(j for j, x in enumerate(normal) if x != 0)
    factor = prim[i] / normal[i]
    return prim, offset * factor


@dataclass(frozen=True, order=True)
class Halfspace:
    """The closed halfspace ``normal·x >= offset``."""

    normal: QVector
    offset: Fraction

    @classmethod
    def make(cls, normal: Sequence[Number], offset: Number) -> "Halfspace":
        n, b = _scale_to_primitive(as_vector(normal), as_rational(offset))
        return cls(n, b)

    def slack(self, x: Sequence[Fraction]) -> Fraction:
        return dot(self.normal, x) - self.offset

    def contains(self, x: Sequence[Fraction]) -> bool:
        return self.slack(x) >= 0

    def is_tight(self, x: Sequence[Fraction]) -> bool:
        return self.slack(x) == 0

    def flipped(self) -> "Halfspace":
        return Halfspace(tuple(-a for a in self.normal), -self.offset)


@dataclass(frozen=True, order=True)
class Hyperplane:
    """The hyperplane ``normal·x == offset``; normal primitive, first nonzero entry positive."""

    normal: QVector
    offset: Fraction

    @classmethod
    def make(cls, normal: Sequence[Number], offset: Number) -> "Hyperplane":
        n, b = _scale_to_primitive(as_vector(normal), as_rational(offset))
        if canonical_sign(n) != n:
            n, b = tuple(-a for a in n), -b
        return cls(n, b)

    def contains(self, x: Sequence[Fraction]) -> bool:
        return dot(self.normal, x) == self.offset

    def halfspaces(self) -> Tuple[Halfspace, Halfspace]:
        h = Halfspace(self.normal, self.offset)
        return h, h.flipped()


HalfspaceLike = Union[Halfspace, Tuple[Sequence[Number], Number]]


def _bits(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class ExactPolytope:
    vertices: Tuple[QVector, ...]
    facets: Tuple[Halfspace, ...]
    equations: Tuple[Hyperplane, ...]
    incidence: Tuple[FrozenSet[int], ...]
    ambient_dim: int
    intrinsic_dim: int

    @classmethod
    def assemble(
        cls,
        vertices: Iterable[Sequence[Number]],
        facets: Iterable[HalfspaceLike],
        equations: Iterable[Union[Hyperplane, Tuple[Sequence[Number], Number]]] = (),
        check: bool = True,
    ) -> "ExactPolytope":
        """Build from a known double description; ``check`` validates it fully."""
        verts = tuple(sorted(set(as_vector(v) for v in vertices)))
        if not verts:
            raise EmptyPolytope("a polytope needs at least one vertex")
        hs = tuple(sorted(set(_as_halfspace(h) for h in facets)))
        eqs = tuple(
            sorted(set(e if isinstance(e, Hyperplane) else Hyperplane.make(e[0], e[1]) for e in equations))
        )
        incidence = tuple(frozenset(i for i, h in enumerate(hs) if h.is_tight(v)) for v in verts)
        p = cls(
            vertices=verts,
            facets=hs,
            equations=eqs,
            incidence=incidence,
            ambient_dim=len(verts[0]),
            intrinsic_dim=affine_rank(list(verts)),
        )
        if check:
            p.validate()
        return p

    def validate(self) -> None:
        """Raise :class:`InvalidDescription` unless the double description is consistent."""
        for v in self.vertices:
            if len(v) != self.ambient_dim:
                raise InvalidDescription("vertices of mixed dimension")
            for h in self.facets:
                if not h.contains(v):
                    raise InvalidDescription(f"vertex {v} violates facet {h}")
            for e in self.equations:
                if not e.contains(v):
                    raise InvalidDescription(f"vertex {v} is off the affine hull equation {e}")
        if len(self.equations) != self.ambient_dim - self.intrinsic_dim:
            raise InvalidDescription("affine hull equations do not match the intrinsic dimension")
        for vi, tight in enumerate(self.incidence):
            if self.intrinsic_dim > 0 and rank([self.facets[i].normal for i in sorted(tight)]) != self.intrinsic_dim:
                raise InvalidDescription(f"point {self.vertices[vi]} is not a vertex")
        for fi, h in enumerate(self.facets):
            pts = [self.vertices[v] for v in _bits(self.facet_vertex_masks[fi])]
            if affine_rank(pts) != self.intrinsic_dim - 1:
                raise InvalidDescription(f"halfspace {h} is not a facet")

    @property
    def f0(self) -> int:
        return len(self.vertices)

    @cached_property
    def vertex_index(self) -> Dict[QVector, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def vertex_facet_masks(self) -> Tuple[int, ...]:
        return tuple(sum(1 << i for i in tight) for tight in self.incidence)

    @cached_property
    def facet_vertex_masks(self) -> Tuple[int, ...]:
        masks = [0] * len(self.facets)
        for v, tight in enumerate(self.incidence):
            for f in tight:
                masks[f] |= 1 << v
        return tuple(masks)

    def facet_vertices(self, facet: int) -> List[int]:
        return _bits(self.facet_vertex_masks[facet])

    @cached_property
    def edge_set(self) -> FrozenSet[Tuple[int, int]]:
        return frozenset(edges(self))

    @cached_property
    def neighbours(self) -> Tuple[Tuple[int, ...], ...]:
        adj: List[List[int]] = [[] for _ in self.vertices]
        for a, b in self.edge_set:
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(x)) for x in adj)

    @cached_property
    def centroid(self) -> QVector:
        n = len(self.vertices)
        total = self.vertices[0]
        for v in self.vertices[1:]:
            total = add(total, v)
        return vscale(Fraction(1, n), total)

    def contains(self, x: Sequence[Number]) -> bool:
        pt = as_vector(x)
        return all(h.contains(pt) for h in self.facets) and all(e.contains(pt) for e in self.equations)

    def same_vertices(self, other: "ExactPolytope") -> bool:
        return self.vertices == other.vertices


def _as_halfspace(h: HalfspaceLike) -> Halfspace:
    if isinstance(h, Halfspace):
        return Halfspace.make(h.normal, h.offset)
    normal, offset = h
    return Halfspace.make(normal, offset)


def _project_onto_span(basis: Sequence[QVector], a: QVector) -> QVector:
    gram = [tuple(dot(r, s) for s in basis) for r in basis]
    rhs = [dot(r, a) for r in basis]
    lam = solve_linear(gram, rhs)
    out = tuple(Fraction(0) for _ in a)
    for coef, r in zip(lam, basis):
        out = add(out, vscale(coef, r))
    return out


def hull_from_vertices(points: Iterable[Sequence[Number]]) -> ExactPolytope:
    """Convex hull of a finite point set, with canonical vertex and facet order."""
    pts = sorted(set(as_vector(p) for p in points))
    if not pts:
        raise EmptyPolytope("convex hull of an empty point set")
    d = len(pts[0])
    p0 = pts[0]
    diffs = [sub(p, p0) for p in pts[1:]]
    reduced, pivots = rref(diffs, d)
    dim = len(pivots)
    equations = [Hyperplane.make(a, dot(a, p0)) for a in nullspace(diffs, d)]
    if dim == 0:
        return ExactPolytope(
            vertices=(p0,),
            facets=(),
            equations=tuple(sorted(equations)),
            incidence=(frozenset(),),
            ambient_dim=d,
            intrinsic_dim=0,
        )

    rows = [integer_row([p[j] for j in pivots] + [Fraction(-1)]) for p in pts]
    dd = extreme_rays(rows)
    span = [tuple(r) for r in reduced]

    facet_rays = [r for r in dd.rays if any(x != 0 for x in r.coords[:dim])]
    vertex_ids = []
    for i in range(len(pts)):
        tight = [r.coords[:dim] for r in facet_rays if r.zero_mask >> i & 1]
        if int_rank(tight) == dim:
            vertex_ids.append(i)

    facets = []
    for r in facet_rays:
        a_ext = [Fraction(0)] * d
        for k, j in enumerate(pivots):
            a_ext[j] = Fraction(r.coords[k])
        a = tuple(a_ext)
        b = Fraction(r.coords[dim])
        if dim < d:
            a_l = _project_onto_span(span, a)
            b = b + dot(sub(a_l, a), p0)
            a = a_l
        facets.append(Halfspace.make(a, b))

    return ExactPolytope.assemble([pts[i] for i in vertex_ids], facets, equations, check=False)


def vertices_from_halfspaces(hs: Iterable[HalfspaceLike]) -> ExactPolytope:
    """Vertex enumeration of a bounded intersection of halfspaces."""
    seen: Set[Halfspace] = set()
    ordered: List[Halfspace] = []
    for h in hs:
        hh = _as_halfspace(h)
        if hh not in seen:
            seen.add(hh)
            ordered.append(hh)
    if not ordered:
        raise UnboundedPolyhedron("no halfspaces given")
    d = len(ordered[0].normal)
    if rank([h.normal for h in ordered]) < d:
        problem = LPProblem(dim=d, constraints=tuple(ge(h.normal, h.offset) for h in ordered))
        if isinstance(lp_solve(problem), Infeasible):
            raise EmptyPolytope("halfspaces have empty intersection")
        raise UnboundedPolyhedron("intersection contains a line")

    rows = [integer_row(list(h.normal) + [-h.offset]) for h in ordered]
    rows.append(tuple([0] * d + [1]))
    dd = extreme_rays(rows)
    points = []
    recession = False
    for r in dd.rays:
        t = r.coords[d]
        if t > 0:
            points.append(tuple(Fraction(x, t) for x in r.coords[:d]))
        else:
            recession = True
    if not points:
        raise EmptyPolytope("halfspaces have empty intersection")
    if recession:
        raise UnboundedPolyhedron("intersection has a nonzero recession cone")
    if affine_rank(points) < d:
        return hull_from_vertices(points)

    facets = []
    for h in ordered:
        tight = [p for p in points if h.is_tight(p)]
        if affine_rank(tight) == d - 1:
            facets.append(h)
    return ExactPolytope.assemble(points, facets, (), check=False)


def edges(p: ExactPolytope) -> Set[Tuple[int, int]]:
    """Vertex pairs {u, v} such that the facets common to u and v are tight only at u and v."""
    if p.intrinsic_dim == 0:
        return set()
    if p.intrinsic_dim == 1:
        return {(0, 1)}
    need = p.intrinsic_dim - 1
    vmasks = p.vertex_facet_masks
    fmasks = p.facet_vertex_masks
    found: Set[Tuple[int, int]] = set()
    for u in range(p.f0):
        shared: Dict[int, int] = {}
        for f in p.incidence[u]:
            for v in _bits(fmasks[f] >> (u + 1)):
                w = u + 1 + v
                shared[w] = shared.get(w, 0) + 1
        for v in sorted(shared):
            if shared[v] < need:
                continue
            common = vmasks[u] & vmasks[v]
            face = -1
            for f in _bits(common):
                face &= fmasks[f]
            if face == (1 << u) | (1 << v):
                found.add((u, v))
    return found


def halfspaces(p: ExactPolytope) -> List[Halfspace]:
    out = list(p.facets)
    for e in p.equations:
        out.extend(e.halfspaces())
    return out


def intersect_halfspace(p: ExactPolytope, h: HalfspaceLike) -> ExactPolytope:
    return vertices_from_halfspaces(halfspaces(p) + [_as_halfspace(h)])


def hyperplane_section(p: ExactPolytope, normal: Sequence[Number], offset: Number) -> ExactPolytope:
    plane = Hyperplane.make(normal, offset)
    try:
        return vertices_from_halfspaces(halfspaces(p) + list(plane.halfspaces()))
    except EmptyPolytope as e:
        raise EmptySection(f"hyperplane {plane} misses the polytope") from e


def unique_minimizer(points: Sequence[QVector], c: Sequence[Fraction]) -> int:
    values = [dot(c, x) for x in points]
    best = min(values)
    hits = [i for i, v in enumerate(values) if v == best]
    if len(hits) > 1:
        raise AmbiguousMinimizer(hits)
    return hits[0]


def minimizers(points: Sequence[QVector], c: Sequence[Fraction]) -> List[int]:
    values = [dot(c, x) for x in points]
    best = min(values)
    return [i for i, v in enumerate(values) if v == best]


def translate(p: ExactPolytope, t: Sequence[Number]) -> ExactPolytope:
    tv = as_vector(t)
    return ExactPolytope.assemble(
        [add(v, tv) for v in p.vertices],
        [Halfspace(h.normal, h.offset + dot(h.normal, tv)) for h in p.facets],
        [Hyperplane(e.normal, e.offset + dot(e.normal, tv)) for e in p.equations],
        check=False,
    )


def scale(p: ExactPolytope, alpha: Number) -> ExactPolytope:
    a = as_rational(alpha)
    if a <= 0:
        raise ValueError("scale factor must be positive")
    return ExactPolytope.assemble(
        [vscale(a, v) for v in p.vertices],
        [Halfspace(h.normal, h.offset * a) for h in p.facets],
        [Hyperplane(e.normal, e.offset * a) for e in p.equations],
        check=False,
    )


def embed(p: ExactPolytope, extra: int, values: Optional[Sequence[Number]] = None) -> ExactPolytope:
    """Append ``extra`` coordinates (zero unless ``values`` given) to every point."""
    tail = as_vector(values) if values is not None else tuple(Fraction(0) for _ in range(extra))
    zeros = tuple(Fraction(0) for _ in range(extra))
    eqs = [Hyperplane(e.normal + zeros, e.offset) for e in p.equations]
    d = p.ambient_dim
    for i in range(extra):
        normal = tuple(Fraction(0) for _ in range(d)) + tuple(Fraction(1 if j == i else 0) for j in range(extra))
        eqs.append(Hyperplane(normal, tail[i]))
    return ExactPolytope.assemble(
        [v + tail for v in p.vertices],
        [Halfspace(h.normal + zeros, h.offset) for h in p.facets],
        eqs,
        check=False,
    )


def project_out(p: ExactPolytope, coordinate: int) -> ExactPolytope:
    return hull_from_vertices([v[:coordinate] + v[coordinate + 1 :] for v in p.vertices])
