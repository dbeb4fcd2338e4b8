"""The three-dimensional families Ξ(k, l), Θ(k, l), Π and Ξ̃(k, l, m).

Ξ(k, l) is built facet-first. The base polygon A has 2k rational vertices
b_0..b_{2k-1} at height 0 (blue). Edge i is red when i is even and green when
it is odd; a red edge carries l-1 chain points lifted to eps·j(l-j) along it,
a green edge carries the mirrored chain below. Every chain edge spans a
quadrilateral plane tilted towards the axis so that it reaches height ±H at a
reach of s times the edge midpoint vector. Consecutive quadrilateral planes
meet the horizontal planes in the grey vertices; the planes of the last
quadrilateral of one red (green) edge and the first of the next meet at
height +H (-H) in the apex of the triangle standing on the green (red) edge
between them. The halfspace list is then enumerated exactly and the result is
only accepted when its combinatorial census matches.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..core.errors import CensusMismatch, NonConvexBulge
from ..core.logger import JsonlLogger, log_event
from ..exact.linalg import QVector, as_vector, cross2, dot, neg, norm_sq, solve_affine, solve_linear, sub
from ..exact.trig import cos_pi
from ..geometry.polytope import (
    ExactPolytope,
    Halfspace,
    Hyperplane,
    hull_from_vertices,
    hyperplane_section,
    project_out,
    vertices_from_halfspaces,
)
from .standard import cube, polygon_points, product

_ZERO = Fraction(0)
_ONE = Fraction(1)
MAX_HALVINGS = 20

# the cut plane M: x = 0, with normal pointing away from the pyramid apex
M_PLANE = Hyperplane((_ONE, _ZERO, _ZERO), _ZERO)


@dataclass(frozen=True)
class XiParams:
    """Parameters of Ξ(k, l).

    ``s`` is relative: the reach point of a quadrilateral plane at height ±H
    sits ``s`` times the edge's distance to the axis inwards along the edge
    normal. The reach point stays between the edge and the axis exactly when
    s < 1; this is the relative form of the inradius bound.
    """

    k: int
    l: int
    eps: Fraction = Fraction(1, 10)
    H: Fraction = _ONE
    s: Fraction = Fraction(1, 5)

    def __post_init__(self) -> None:
        if self.k < 3:
            raise ValueError("k must be at least 3")
        if self.l < 4 or self.l % 2:
            raise ValueError("l must be an even number >= 4")
        if self.eps <= 0 or self.H <= 0 or self.s <= 0:
            raise ValueError("eps, H and s must be positive")
        if self.eps * self.l * self.l / 4 >= self.H:
            raise ValueError("chain height eps·l²/4 must stay below H")
        if self.s >= 1:
            raise ValueError("s must be below 1")

    @classmethod
    def tuned(cls, k: int, l: int, H: Fraction = _ONE) -> "XiParams":
        """Default parameters that pass the exact pre-check, halving eps as needed."""
        s = (1 - Fraction(19, 20) * cos_pi(Fraction(1, k))).limit_denominator(1000)
        eps = Fraction(1, 10)
        while eps * l * l / 2 >= H:
            eps /= 2
        for _ in range(MAX_HALVINGS):
            params = cls(k=k, l=l, eps=eps, H=H, s=s)
            if precheck(xi_skeleton(params)):
                return params
            eps /= 2
        raise CensusMismatch("xi", {"precheck": (1, 0)})

    def as_dict(self) -> Dict[str, str]:
        return {"k": str(self.k), "l": str(self.l), "eps": str(self.eps), "H": str(self.H), "s": str(self.s)}


@dataclass(frozen=True)
class PiParams:
    m: int
    eps_bulge: Fraction = Fraction(1, 100)
    direction: QVector = (_ONE, _ZERO, _ZERO)

    @classmethod
    def default(cls, m: int) -> "PiParams":
        return cls(m=m, eps_bulge=Fraction(1, 25 * m * m))


@dataclass
class Census:
    family: str
    expected: Dict[str, int]
    observed: Dict[str, int]
    extra: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.diff()

    def diff(self) -> Dict[str, Tuple[int, int]]:
        return {
            key: (want, self.observed.get(key, -1))
            for key, want in self.expected.items()
            if self.observed.get(key, -1) != want
        }

    def require(self) -> "Census":
        d = self.diff()
        if d:
            raise CensusMismatch(self.family, d)
        return self

    def to_dict(self) -> Dict[str, object]:
        return {"family": self.family, "expected": self.expected, "observed": self.observed, **self.extra}


@dataclass(frozen=True)
class XiSkeleton:
    params: XiParams
    blue: Tuple[QVector, ...]
    # chains[i][j], j = 0..l, endpoints are the blue vertices of edge i
    chains: Tuple[Tuple[QVector, ...], ...]
    verticals: Tuple[Halfspace, ...]
    quads: Tuple[Tuple[Halfspace, ...], ...]
    triangles: Tuple[Halfspace, ...]
    top: Tuple[QVector, ...]
    bottom: Tuple[QVector, ...]

    @property
    def colour(self) -> Tuple[int, ...]:
        return tuple(1 if i % 2 == 0 else -1 for i in range(len(self.blue)))

    @property
    def horizontals(self) -> Tuple[Halfspace, Halfspace]:
        H = self.params.H
        return Halfspace((_ZERO, _ZERO, -_ONE), -H), Halfspace((_ZERO, _ZERO, _ONE), -H)

    def halfspaces(self) -> List[Halfspace]:
        out: List[Halfspace] = list(self.horizontals) + list(self.verticals)
        for row in self.quads:
            out.extend(row)
        out.extend(self.triangles)
        return out

    def chain_points(self) -> List[QVector]:
        return [p for chain in self.chains for p in chain[1:-1]]

    def points(self) -> List[QVector]:
        return list(self.blue) + self.chain_points() + list(self.top) + list(self.bottom)

    def expected_facet_sizes(self) -> List[int]:
        kl = self.params.k * self.params.l
        n = len(self.blue)
        return [kl, kl] + [self.params.l + 1] * n + [4] * (n * self.params.l) + [3] * n


def _oriented_plane(points: Sequence[QVector]) -> Halfspace:
    a, b = solve_affine(points)
    if b == 0:
        raise ValueError("facet plane passes through the centre of A")
    if b > 0:
        a, b = neg(a), -b
    return Halfspace(a, b)


def _meet(h1: Halfspace, h2: Halfspace, z: Fraction) -> QVector:
    return solve_linear([h1.normal, h2.normal, (_ZERO, _ZERO, _ONE)], [h1.offset, h2.offset, z])


def xi_skeleton(params: XiParams) -> XiSkeleton:
    k, l, eps, H, s = params.k, params.l, params.eps, params.H, params.s
    n = 2 * k
    base = polygon_points(n)
    blue = tuple((x, y, _ZERO) for x, y in base)
    sigma = [1 if i % 2 == 0 else -1 for i in range(n)]

    chains = []
    for i in range(n):
        (x0, y0), (x1, y1) = base[i], base[(i + 1) % n]
        pts = []
        for j in range(l + 1):
            t = Fraction(j, l)
            pts.append((x0 + t * (x1 - x0), y0 + t * (y1 - y0), sigma[i] * eps * j * (l - j)))
        chains.append(tuple(pts))

    verticals = tuple(
        _oriented_plane([blue[i], blue[(i + 1) % n], (blue[i][0], blue[i][1], _ONE)]) for i in range(n)
    )

    quads = []
    for i in range(n):
        (x0, y0), (x1, y1) = base[i], base[(i + 1) % n]
        mx, my = (x0 + x1) / 2, (y0 + y1) / 2
        row = []
        for j in range(l):
            p, q = chains[i][j], chains[i][j + 1]
            r = ((p[0] + q[0]) / 2 - s * mx, (p[1] + q[1]) / 2 - s * my, sigma[i] * H)
            row.append(_oriented_plane([p, q, r]))
        quads.append(tuple(row))

    apex = [_meet(quads[(i - 1) % n][l - 1], quads[(i + 1) % n][0], -sigma[i] * H) for i in range(n)]
    triangles = tuple(_oriented_plane([blue[i], blue[(i + 1) % n], apex[i]]) for i in range(n))
    inner = [[_meet(quads[i][j - 1], quads[i][j], sigma[i] * H) for j in range(1, l)] for i in range(n)]

    top: List[QVector] = []
    bottom: List[QVector] = []
    for i in range(n):
        ring = top if sigma[i] > 0 else bottom
        ring.append(apex[(i - 1) % n])
        ring.extend(inner[i])

    return XiSkeleton(
        params=params,
        blue=blue,
        chains=tuple(chains),
        verticals=verticals,
        quads=tuple(quads),
        triangles=triangles,
        top=tuple(top),
        bottom=tuple(bottom),
    )


def _strictly_convex(ring: Sequence[QVector]) -> bool:
    n = len(ring)
    for i in range(n):
        a, b, c = ring[i], ring[(i + 1) % n], ring[(i + 2) % n]
        if cross2(sub(b, a)[:2], sub(c, b)[:2]) <= 0:
            return False
    return True


def precheck(sk: XiSkeleton) -> bool:
    """Exact check of the intended vertices against the intended halfspaces."""
    if not (_strictly_convex(sk.top) and _strictly_convex(sk.bottom)):
        return False
    points = sk.points()
    for h, size in zip(sk.halfspaces(), sk.expected_facet_sizes()):
        tight = 0
        for p in points:
            slack = h.slack(p)
            if slack < 0:
                return False
            if slack == 0:
                tight += 1
        if tight != size:
            return False
    return True


def _facet_kind(h: Halfspace, size: int) -> str:
    a = h.normal
    if a[0] == 0 and a[1] == 0:
        return "horizontal"
    if a[2] == 0:
        return "vertical"
    if size == 3:
        return "triangle"
    if size == 4:
        return "quadrilateral"
    return "other"


def _uniform(values: List[int]) -> int:
    return values[0] if values and all(v == values[0] for v in values) else -1


def xi_census(p: ExactPolytope, params: XiParams) -> Census:
    k, l, H = params.k, params.l, params.H
    zs = [v[2] for v in p.vertices]
    blue = {i for i, z in enumerate(zs) if z == 0}
    observed = {
        "vertices": p.f0,
        "vertices_blue": len(blue),
        "vertices_red": sum(1 for z in zs if 0 < z < H),
        "vertices_green": sum(1 for z in zs if -H < z < 0),
        "vertices_grey": sum(1 for z in zs if abs(z) == H),
    }
    kinds: Dict[str, List[int]] = {}
    vertical_blue: List[int] = []
    for fi, h in enumerate(p.facets):
        members = p.facet_vertices(fi)
        kind = _facet_kind(h, len(members))
        kinds.setdefault(kind, []).append(len(members))
        if kind == "vertical":
            vertical_blue.append(sum(1 for v in members if v in blue))
    for kind in ("horizontal", "vertical", "quadrilateral", "triangle", "other"):
        observed[f"facets_{kind}"] = len(kinds.get(kind, []))
    observed["horizontal_facet_size"] = _uniform(kinds.get("horizontal", []))
    observed["vertical_facet_size"] = _uniform(kinds.get("vertical", []))
    observed["vertical_facet_blue"] = _uniform(vertical_blue)
    expected = {
        "vertices": 4 * k * l,
        "vertices_blue": 2 * k,
        "vertices_red": k * (l - 1),
        "vertices_green": k * (l - 1),
        "vertices_grey": 2 * k * l,
        "facets_horizontal": 2,
        "facets_vertical": 2 * k,
        "facets_quadrilateral": 2 * k * l,
        "facets_triangle": 2 * k,
        "facets_other": 0,
        "horizontal_facet_size": k * l,
        "vertical_facet_size": l + 1,
        "vertical_facet_blue": 2,
    }
    return Census(family="xi", expected=expected, observed=observed, extra={"params": params.as_dict()})


def xi(params: XiParams, logger: Optional[JsonlLogger] = None) -> Tuple[ExactPolytope, Census]:
    sk = xi_skeleton(params)
    p = vertices_from_halfspaces(sk.halfspaces())
    census = xi_census(p, params)
    log_event(logger, "generator.census", family="xi", passed=census.passed, **census.observed)
    census.require()
    return p, census


def horizontal_projection(p: ExactPolytope) -> int:
    """Number of vertices of the orthogonal projection onto the plane z = 0."""
    return project_out(p, 2).f0


def _section_colours(section: ExactPolytope, H: Fraction) -> Tuple[int, int]:
    red = sum(1 for v in section.vertices if 0 < v[2] < H)
    green = sum(1 for v in section.vertices if -H < v[2] < 0)
    return red, green


def theta(
    k: int, l: int, params: Optional[XiParams] = None, logger: Optional[JsonlLogger] = None
) -> Tuple[ExactPolytope, Census]:
    """Ξ(k, l) with its half on the apex side of M replaced by a pyramid over the section."""
    params = params or XiParams.tuned(k, l)
    xi_poly, _ = xi(params, logger=logger)
    section = hyperplane_section(xi_poly, M_PLANE.normal, M_PLANE.offset)
    kept = [v for v in xi_poly.vertices if dot(M_PLANE.normal, v) > M_PLANE.offset]
    # circumradius of A is 1; the apex projects onto the centre of A along M's normal
    apex = (Fraction(-2), _ZERO, _ZERO)
    p = hull_from_vertices(kept + list(section.vertices) + [apex])
    red, green = _section_colours(section, params.H)
    observed = {
        "vertices": p.f0,
        "section_vertices": section.f0,
        "projection_vertices": horizontal_projection(p),
        "section_red": red,
        "section_green": green,
    }
    expected = {
        "vertices": 2 * k * l + 6,
        "section_vertices": 8,
        "projection_vertices": k + 3,
        "section_red": 1 if k % 2 else 2,
        "section_green": 1 if k % 2 else 0,
    }
    census = Census(family="theta", expected=expected, observed=observed, extra={"params": params.as_dict()})
    log_event(logger, "generator.census", family="theta", passed=census.passed, **observed)
    census.require()
    return p, census


def _pi_points(params: PiParams) -> List[QVector]:
    m, eb, d = params.m, params.eps_bulge, as_vector(params.direction)
    pts: List[QVector] = [(_ZERO, _ZERO, _ZERO), (_ZERO, _ZERO, _ONE)]
    for j in range(1, m):
        off = eb * j * (m - j)
        pts.append((off * d[0], off * d[1], off * d[2] + Fraction(j, m)))
    return pts


def pi_polygon(params: PiParams, cut_plane: Hyperplane = M_PLANE) -> ExactPolytope:
    """Vertical polygon with m+1 vertices whose longest edge e runs from the origin to (0, 0, 1) inside M."""
    if params.m < 2 or params.eps_bulge <= 0:
        raise NonConvexBulge("need m >= 2 and a positive bulge")
    e0, e1 = (_ZERO, _ZERO, _ZERO), (_ZERO, _ZERO, _ONE)
    if not (cut_plane.contains(e0) and cut_plane.contains(e1)):
        raise ValueError("edge e must lie in the cut plane")
    if dot(cut_plane.normal, params.direction) <= 0:
        raise NonConvexBulge("bulge direction must point away from the apex side of the cut plane")
    pts = _pi_points(params)
    p = hull_from_vertices(pts)
    if p.f0 != params.m + 1:
        raise NonConvexBulge(f"polygon has {p.f0} vertices, expected {params.m + 1}")
    nn = norm_sq(cut_plane.normal)
    for x in pts[2:]:
        proj = sub(x, tuple(c * (dot(cut_plane.normal, x) - cut_plane.offset) / nn for c in cut_plane.normal))
        if proj[0] != 0 or proj[1] != 0 or not 0 < proj[2] < 1:
            raise NonConvexBulge(f"bulge vertex {x} does not project into the relative interior of e")
    longest = max(norm_sq(sub(p.vertices[b], p.vertices[a])) for a, b in p.edge_set)
    if longest != 1 or sum(
        1 for a, b in p.edge_set if norm_sq(sub(p.vertices[b], p.vertices[a])) == longest
    ) != 1:
        raise NonConvexBulge("e is not the unique longest edge")
    return p


def bump_vertices(sk: XiSkeleton, pi: PiParams) -> List[QVector]:
    """Homothetic copies of Π glued along the vertical segments under the chain points of edges 1..k-1."""
    k = sk.params.k
    shape = _pi_points(pi)
    out: List[QVector] = []
    for i in range(1, k):
        for v in sk.chains[i][1:-1]:
            alpha = abs(v[2])
            low = min(_ZERO, v[2])
            for x in shape[2:]:
                out.append((v[0] + alpha * x[0], v[1] + alpha * x[1], low + alpha * x[2]))
    return out


def xi_tilde(
    k: int,
    l: int,
    m: int,
    params: Optional[XiParams] = None,
    pi: Optional[PiParams] = None,
    logger: Optional[JsonlLogger] = None,
) -> Tuple[ExactPolytope, Census]:
    params = params or XiParams.tuned(k, l)
    pi = pi or PiParams.default(m)
    theta_poly, theta_census = theta(k, l, params, logger=logger)
    bumps = bump_vertices(xi_skeleton(params), pi)
    p = hull_from_vertices(list(theta_poly.vertices) + bumps)
    kept = set(p.vertices)
    observed = {
        "vertices": p.f0,
        "theta_vertices_kept": sum(1 for v in theta_poly.vertices if v in kept),
        "new_vertices": p.f0 - theta_poly.f0,
    }
    expected = {
        "vertices": theta_poly.f0 + (k - 1) * (l - 1) * (m - 1),
        "theta_vertices_kept": theta_poly.f0,
        "new_vertices": (k - 1) * (l - 1) * (m - 1),
    }
    census = Census(
        family="xi_tilde",
        expected=expected,
        observed=observed,
        extra={"params": params.as_dict(), "m": m, "eps_bulge": str(pi.eps_bulge)},
    )
    log_event(logger, "generator.census", family="xi_tilde", passed=census.passed, **observed)
    census.require()
    return p, census


def prism_lift(
    family: str, base: ExactPolytope, d: int, /, logger: Optional[JsonlLogger] = None, **extra: object
) -> Tuple[ExactPolytope, Census]:
    """``base`` times the cube [0,1]^(d - dim base): one prism per extra coordinate."""
    extra_dims = d - base.ambient_dim
    if extra_dims < 0:
        raise ValueError(f"cannot lift a {base.ambient_dim}-dimensional polytope to d={d}")
    lifted = product(base, cube(extra_dims))
    observed = {"vertices": lifted.f0, "facets": len(lifted.facets), "dimension": lifted.intrinsic_dim}
    expected = {
        "vertices": base.f0 * 2**extra_dims,
        "facets": len(base.facets) + 2 * extra_dims,
        "dimension": base.intrinsic_dim + extra_dims,
    }
    census = Census(family=family, expected=expected, observed=observed, extra={"d": d, **extra})
    log_event(logger, "generator.census", family=family, passed=census.passed, **observed)
    census.require()
    return lifted, census


def xi_prism(
    k: int, l: int, d: int, params: Optional[XiParams] = None, logger: Optional[JsonlLogger] = None
) -> Tuple[ExactPolytope, Census]:
    params = params or XiParams.tuned(k, l)
    base, _ = xi(params, logger=logger)
    return prism_lift("xi_prism", base, d, logger=logger, k=k, l=l)


def xi_tilde_prism(
    k: int,
    l: int,
    m: int,
    d: int,
    params: Optional[XiParams] = None,
    pi: Optional[PiParams] = None,
    logger: Optional[JsonlLogger] = None,
) -> Tuple[ExactPolytope, Census]:
    base, _ = xi_tilde(k, l, m, params=params, pi=pi, logger=logger)
    return prism_lift("xi_tilde_prism", base, d, logger=logger, k=k, l=l, m=m)
