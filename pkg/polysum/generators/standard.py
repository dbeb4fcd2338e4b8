"""Basic polytopes and combinators: cubes, simplices, rational polygons,
products, prisms, pyramids, the fixed-diameter constructions and seeded
random polytopes."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from tenacity import retry, retry_if_exception_type, stop_after_attempt

from ..core.errors import ApexInAffineHull, CensusMismatch, NotFullDimensional
from ..core.logger import JsonlLogger, log_event
from ..exact.linalg import Number, QVector, as_vector, dot
from ..exact.trig import tan_pi
from ..geometry.polytope import ExactPolytope, Halfspace, Hyperplane, embed, hull_from_vertices
from ..graph import build_graph, diameter
from ..minkowski import minkowski_sum

RANDOM_ATTEMPTS = 50

_ZERO = Fraction(0)
_ONE = Fraction(1)


def point(d: int, at: Optional[Sequence[Number]] = None) -> ExactPolytope:
    x = as_vector(at) if at is not None else tuple(_ZERO for _ in range(d))
    return hull_from_vertices([x])


def cube(d: int) -> ExactPolytope:
    """Unit cube [0,1]^d."""
    if d == 0:
        return ExactPolytope(
            vertices=((),), facets=(), equations=(), incidence=(frozenset(),), ambient_dim=0, intrinsic_dim=0
        )
    verts = [tuple(Fraction(x) for x in bits) for bits in itertools.product((0, 1), repeat=d)]
    facets = []
    for i in range(d):
        e = tuple(_ONE if j == i else _ZERO for j in range(d))
        facets.append(Halfspace(e, _ZERO))
        facets.append(Halfspace(tuple(-x for x in e), -_ONE))
    return ExactPolytope.assemble(verts, facets, check=False)


def simplex(d: int) -> ExactPolytope:
    """Standard simplex conv{0, e_1, ..., e_d}."""
    if d < 1:
        return point(d)
    origin = tuple(_ZERO for _ in range(d))
    verts = [origin] + [tuple(_ONE if j == i else _ZERO for j in range(d)) for i in range(d)]
    facets = [Halfspace(v, _ZERO) for v in verts[1:]]
    facets.append(Halfspace(tuple(-_ONE for _ in range(d)), -_ONE))
    return ExactPolytope.assemble(verts, facets, check=False)


def segment(v: Sequence[Number]) -> ExactPolytope:
    vec = as_vector(v)
    if all(x == 0 for x in vec):
        raise ValueError("segment direction must be nonzero")
    return hull_from_vertices([tuple(_ZERO for _ in vec), vec])


def standard(kind: str, d: int = 0, v: Optional[Sequence[Number]] = None) -> ExactPolytope:
    if kind == "cube":
        return cube(d)
    if kind == "simplex":
        return simplex(d)
    if kind == "point":
        return point(d)
    if kind == "segment":
        if v is None:
            raise ValueError("segment needs a direction vector")
        return segment(v)
    raise ValueError(f"unknown standard polytope {kind!r}")


def _circle_point(t: Fraction) -> QVector:
    den = 1 + t * t
    return ((1 - t * t) / den, 2 * t / den)


def _angle(j: int, n: int) -> Fraction:
    # angle of vertex j in units of pi, normalized to (-1, 1]
    a = Fraction(-1, 2) - Fraction(1, n) + Fraction(2 * j, n)
    while a > 1:
        a -= 2
    while a <= -1:
        a += 2
    return a


def polygon_points(n: int) -> List[QVector]:
    """n rational points on the unit circle in counterclockwise order.

    Vertex j sits near angle -pi/2 - pi/n + 2 pi j/n, so edge 0 is centred on
    the negative y axis. The point set is exactly symmetric under x -> -x
    (vertex j <-> 1 - j) and, for even n, under y -> -y.
    """
    if n < 3:
        raise ValueError("a polygon needs at least 3 vertices")

    def right_half(j: int) -> QVector:
        a = _angle(j, n)
        if n % 2 == 0 and a > 0:
            x, y = right_half((n // 2 + 1 - j) % n)
            return (x, -y)
        if a == Fraction(1, 2):
            return (_ZERO, _ONE)
        if a == Fraction(-1, 2):
            return (_ZERO, -_ONE)
        t = tan_pi(a / 2, 100 * n) if a != 0 else _ZERO
        return _circle_point(t)

    pts: List[QVector] = []
    for j in range(n):
        a = _angle(j, n)
        if Fraction(-1, 2) <= a <= Fraction(1, 2):
            pts.append(right_half(j))
        else:
            x, y = right_half((1 - j) % n)
            pts.append((-x, y))
    return pts


def rational_polygon(n: int) -> ExactPolytope:
    return hull_from_vertices(polygon_points(n))


def product(p: ExactPolytope, q: ExactPolytope) -> ExactPolytope:
    """Cartesian product, built directly from both double descriptions."""
    if q.ambient_dim == 0:
        return p
    if p.ambient_dim == 0:
        return q
    zp = tuple(_ZERO for _ in range(p.ambient_dim))
    zq = tuple(_ZERO for _ in range(q.ambient_dim))
    verts = [u + v for u in p.vertices for v in q.vertices]
    facets = [Halfspace(h.normal + zq, h.offset) for h in p.facets]
    facets += [Halfspace(zp + h.normal, h.offset) for h in q.facets]
    eqs = [Hyperplane(e.normal + zq, e.offset) for e in p.equations]
    eqs += [Hyperplane(zp + e.normal, e.offset) for e in q.equations]
    return ExactPolytope.assemble(verts, facets, eqs, check=False)


def prism(p: ExactPolytope) -> ExactPolytope:
    return product(p, cube(1))


def pyramid(p: ExactPolytope, apex: Sequence[Number]) -> ExactPolytope:
    """conv(p ∪ {apex}); p is padded with zero coordinates when the apex is longer."""
    a = as_vector(apex)
    if len(a) > p.ambient_dim:
        p = embed(p, len(a) - p.ambient_dim)
    elif len(a) < p.ambient_dim:
        raise ValueError("apex has fewer coordinates than the base")
    off = [e for e in p.equations if not e.contains(a)]
    if not off:
        raise ApexInAffineHull(f"apex {a} lies in the affine hull of the base")
    if p.intrinsic_dim + 1 < p.ambient_dim:
        return hull_from_vertices(list(p.vertices) + [a])
    e = off[0]
    height = dot(e.normal, a) - e.offset
    facets = [Halfspace(e.normal, e.offset) if height > 0 else Halfspace(tuple(-x for x in e.normal), -e.offset)]
    for h in p.facets:
        lam = (h.offset - dot(h.normal, a)) / height
        normal = tuple(x + lam * y for x, y in zip(h.normal, e.normal))
        facets.append(Halfspace.make(normal, h.offset + lam * e.offset))
    if p.intrinsic_dim == 0:
        return hull_from_vertices([p.vertices[0], a])
    return ExactPolytope.assemble(list(p.vertices) + [a], facets, check=False)


def _diameter_of(p: ExactPolytope) -> int:
    return diameter(build_graph(p))[0]


def fixed_diameter(d: int, k: int, logger: Optional[JsonlLogger] = None) -> ExactPolytope:
    """A d-dimensional polytope of diameter exactly k."""
    if d < 1 or k < 1:
        raise ValueError("need d >= 1 and k >= 1")
    if d == 1:
        if k != 1:
            raise ValueError("a 1-dimensional polytope has diameter 1")
        return cube(1)
    if k >= d - 1:
        p = product(rational_polygon(2 * (k - d) + 5), cube(d - 2))
    else:
        p = product(simplex(d - k + 1), cube(k - 1))
    observed = _diameter_of(p)
    log_event(logger, "generator.census", family="fixed_diameter", d=d, k=k, f0=p.f0, diameter=observed)
    if p.intrinsic_dim != d or observed != k:
        raise CensusMismatch("fixed_diameter", {"dimension": (d, p.intrinsic_dim), "diameter": (k, observed)})
    return p


def pyramid_pair(d: int, k: int, logger: Optional[JsonlLogger] = None) -> Tuple[ExactPolytope, ExactPolytope]:
    """Two d-polytopes of diameter 2 whose Minkowski sum has diameter k."""
    if d < 3 or k < 4:
        raise ValueError("need d >= 3 and k >= 4")
    base = embed(fixed_diameter(d - 1, k - 2), 1)
    c = base.centroid[:-1]
    p = pyramid(base, c + (_ONE,))
    q = pyramid(base, c + (-_ONE,))
    dp, dq = _diameter_of(p), _diameter_of(q)
    ds = _diameter_of(minkowski_sum(p, q).sum)
    log_event(logger, "generator.census", family="pyramid_pair", d=d, k=k, diameter_p=dp, diameter_q=dq, diameter_sum=ds)
    diff = {name: (want, got) for name, want, got in (("diameter_p", 2, dp), ("diameter_q", 2, dq), ("diameter_sum", k, ds)) if want != got}
    if diff:
        raise CensusMismatch("pyramid_pair", diff)
    return p, q


def _random_hull(d: int, n: int, coord_bound: int, seed: int) -> ExactPolytope:
    rng = np.random.default_rng(seed)
    raw = rng.integers(-coord_bound, coord_bound + 1, size=(n, d))
    p = hull_from_vertices(tuple(Fraction(int(x)) for x in row) for row in raw)
    if p.intrinsic_dim < d:
        raise NotFullDimensional(f"seed {seed} drew a degenerate point set")
    return p


def random_polytope(d: int, n: int, coord_bound: int = 10, seed: int = 0) -> ExactPolytope:
    """Hull of n seeded integer points in [-coord_bound, coord_bound]^d; degenerate draws retry with seed + 1."""
    if n < d + 1:
        raise ValueError("need at least d + 1 points")
    seeds = itertools.count(seed)

    @retry(stop=stop_after_attempt(RANDOM_ATTEMPTS), retry=retry_if_exception_type(NotFullDimensional), reraise=True)
    def draw() -> ExactPolytope:
        return _random_hull(d, n, coord_bound, next(seeds))

    return draw()
