"""Polyhedral cones and normal fans (minimization convention).

The normal cone of ``p`` at vertex ``v`` is the set of ``c`` for which
``x -> c·x`` is minimized over ``p`` at a face containing ``v``. It is
generated by the facet normals tight at ``v`` (plus both signs of every
affine hull equation) and cut out by ``c·(x - v) >= 0`` over the
neighbours ``x`` of ``v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import AmbiguousMinimizer, NotFullDimensional
from ..exact.linalg import QVector, add, as_vector, dot, neg, normalize_primitive, rank, sub
from ..exact.lp import Infeasible, LPProblem, eq, ge, gt, lp_solve
from .polytope import ExactPolytope, minimizers, unique_minimizer


@dataclass(frozen=True)
class Cone:
    generators: Tuple[QVector, ...]
    ambient_dim: int
    # inequalities h·c >= 0 describing the same cone, when known
    hrep: Optional[Tuple[QVector, ...]] = None


@dataclass(frozen=True)
class NormalFan:
    polytope: ExactPolytope
    cones: Tuple[Cone, ...]

    def covers(self, direction: Sequence[Fraction]) -> bool:
        return any(cone_contains(c, direction) for c in self.cones)

    def cones_containing(self, direction: Sequence[Fraction]) -> List[int]:
        return [i for i, c in enumerate(self.cones) if cone_contains(c, direction)]


def normal_cone(p: ExactPolytope, v: int) -> Cone:
    gens: List[QVector] = [p.facets[i].normal for i in sorted(p.incidence[v])]
    for e in p.equations:
        gens.extend([e.normal, neg(e.normal)])
    vert = p.vertices[v]
    hrep = tuple(normalize_primitive(sub(p.vertices[x], vert)) for x in p.neighbours[v])
    return Cone(generators=tuple(gens), ambient_dim=p.ambient_dim, hrep=hrep)


def normal_fan(p: ExactPolytope) -> NormalFan:
    return NormalFan(polytope=p, cones=tuple(normal_cone(p, v) for v in range(p.f0)))


def cone_contains(c: Cone, v: Sequence[Fraction]) -> bool:
    x = as_vector(v)
    if c.hrep is not None:
        return all(dot(h, x) >= 0 for h in c.hrep)
    k = len(c.generators)
    if k == 0:
        return all(a == 0 for a in x)
    constraints = [eq([g[j] for g in c.generators], x[j]) for j in range(c.ambient_dim)]
    constraints += [ge([1 if i == j else 0 for j in range(k)], 0) for i in range(k)]
    return not isinstance(lp_solve(LPProblem(dim=k, constraints=tuple(constraints))), Infeasible)


def _strictly_positive_combination(c: Cone, x: QVector) -> bool:
    k = len(c.generators)
    constraints = [eq([g[j] for g in c.generators], x[j]) for j in range(c.ambient_dim)]
    constraints += [gt([1 if i == j else 0 for j in range(k)], 0) for i in range(k)]
    return not isinstance(lp_solve(LPProblem(dim=k, constraints=tuple(constraints))), Infeasible)


def cone_interior_point(c: Cone) -> QVector:
    if not c.generators or rank(c.generators) < c.ambient_dim:
        raise NotFullDimensional("cone does not span the ambient space")
    point = tuple(Fraction(0) for _ in range(c.ambient_dim))
    for g in c.generators:
        point = add(point, normalize_primitive(g))
    if c.hrep is not None:
        inside = all(dot(h, point) > 0 for h in c.hrep)
    else:
        inside = _strictly_positive_combination(c, point)
    if not inside:
        raise NotFullDimensional("generator sum lies on the cone boundary")
    return point


def cones_equal(a: Cone, b: Cone) -> bool:
    return all(cone_contains(b, g) for g in a.generators) and all(cone_contains(a, g) for g in b.generators)


def _one_way_equal(p: ExactPolytope, q: ExactPolytope) -> bool:
    for u in range(p.f0):
        cone_p = normal_cone(p, u)
        c = cone_interior_point(cone_p)
        try:
            v = unique_minimizer(q.vertices, c)
        except AmbiguousMinimizer:
            return False
        if not cones_equal(cone_p, normal_cone(q, v)):
            return False
    return True


def fans_equal(p: ExactPolytope, q: ExactPolytope) -> bool:
    if p.ambient_dim != q.ambient_dim or p.f0 != q.f0:
        return False
    return _one_way_equal(p, q) and _one_way_equal(q, p)


def fan_refines(p: ExactPolytope, q: ExactPolytope) -> bool:
    """True iff every maximal cone of ``p``'s fan sits inside a maximal cone of ``q``'s fan."""
    for u in range(p.f0):
        cone_p = normal_cone(p, u)
        c = cone_interior_point(cone_p)
        if not any(
            all(cone_contains(normal_cone(q, v), g) for g in cone_p.generators)
            for v in minimizers(q.vertices, c)
        ):
            return False
    return True


def sample_directions(d: int, count: int, seed: int, bound: int = 50) -> List[QVector]:
    """Seeded nonzero integer directions, for coverage and additivity checks."""
    rng = np.random.default_rng(seed)
    out: List[QVector] = []
    while len(out) < count:
        raw = rng.integers(-bound, bound + 1, size=d)
        if any(int(x) != 0 for x in raw):
            out.append(tuple(Fraction(int(x)) for x in raw))
    return out


def fan_covers(fan: NormalFan, directions: Sequence[QVector]) -> Dict[str, int]:
    missed = sum(1 for c in directions if not fan.covers(c))
    return {"sampled": len(directions), "missed": missed}
