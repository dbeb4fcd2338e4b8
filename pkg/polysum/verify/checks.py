"""Executable checks of the diameter bounds, structure lemmas and family inequalities.

Every check appends entries to a :class:`VerificationReport`; a failed
inequality is a report entry with its witness, never an exception.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core.cache import SimpleDiskCache
from ..core.errors import CensusMismatch, DecompositionFailure, NotFullDimensional
from ..core.logger import JsonlLogger, log_event
from ..exact.linalg import QVector, canonical_sign, normalize_primitive
from ..generators.families import PiParams, XiParams, pi_polygon, prism_lift, xi, xi_tilde
from ..generators.standard import cube, fixed_diameter, pyramid_pair, random_polytope, segment, simplex
from ..geometry.cones import fan_refines, fans_equal, sample_directions
from ..geometry.polytope import ExactPolytope, embed, hull_from_vertices, scale
from ..graph import (
    PolytopeGraph,
    build_graph,
    diameter,
    gamma_diameter,
    gamma_subgraph,
    geodesic,
    is_connected,
)
from ..io.polyfile import FORMATS, cached_build, emit_polytope_file, parse_polytope_file
from ..minkowski import (
    SumResult,
    has_homothetic_summand,
    is_summand,
    is_zonotope,
    max_summand_scale,
    minkowski_sum,
    phi_injection,
    sum_polytope,
)
from .report import VerificationReport

ALPHAS = (Fraction(1, 2), Fraction(1), Fraction(2))
SCALE_TOLERANCE = Fraction(1, 64)
REFINE_HALVINGS = 32


def _pair(e: Tuple[int, int]) -> Tuple[int, int]:
    return (e[0], e[1]) if e[0] < e[1] else (e[1], e[0])


def triangle_segment_pair() -> Tuple[ExactPolytope, ExactPolytope]:
    """A triangle and a segment parallel to its base."""
    triangle = hull_from_vertices([(0, 0), (2, 0), (1, 2)])
    return triangle, segment((1, 0))


def check_triangle_segment() -> VerificationReport:
    report = VerificationReport(suite="triangle_segment")
    p, q = triangle_segment_pair()
    s = minkowski_sum(p, q)
    report.add("sum_vertices", "triangle_segment", s.sum.f0 == 4, f0=s.sum.f0)
    apex = p.vertex_index[(Fraction(1), Fraction(2))]
    g = build_graph(s.sum)
    for u in range(p.f0):
        gg = gamma_subgraph(s, u, g)
        want = (2, 1) if u == apex else (1, 0)
        got = (len(gg.members), gg.edge_count)
        report.add("gamma_shape", "triangle_segment", got == want, vertex=u, expected=list(want), observed=list(got))
    return report


def check_diameter_bounds(
    p: ExactPolytope, q: ExactPolytope, instance: str = "pair", s: Optional[SumResult] = None
) -> VerificationReport:
    report = VerificationReport(suite="bounds")
    s = s if s is not None else minkowski_sum(p, q)
    gp, gq, gs = build_graph(p), build_graph(q), build_graph(s.sum)
    dp, dq = diameter(gp)[0], diameter(gq)[0]
    ds, (a, b) = diameter(gs)
    f0p, f0q = p.f0, q.f0

    report.add("sum_at_least_max", instance, ds >= max(dp, dq), diameter_p=dp, diameter_q=dq, diameter_sum=ds)
    upper = min((dp + 1) * f0q, f0p * (dq + 1))
    report.add("sum_below_vertex_bound", instance, ds < upper, diameter_sum=ds, bound=upper, f0_p=f0p, f0_q=f0q)
    report.add("sum_below_product", instance, ds < f0p * f0q, diameter_sum=ds, bound=f0p * f0q)

    u, v = s.part_p(a), s.part_p(b)
    path = geodesic(gp, u, v)
    gamma_terms = [gamma_diameter(gamma_subgraph(s, w, gs)) for w in path]
    rhs = (len(path) - 1) + sum(gamma_terms)
    report.add(
        "sum_below_geodesic_gamma",
        instance,
        ds <= rhs,
        diameter_sum=ds,
        witness_pair=[a, b],
        geodesic=path,
        gamma_diameters=gamma_terms,
        bound=rhs,
    )
    return report


def check_structure_lemmas(
    p: ExactPolytope, q: ExactPolytope, instance: str = "pair", s: Optional[SumResult] = None
) -> VerificationReport:
    report = VerificationReport(suite="lemmas")
    s = s if s is not None else minkowski_sum(p, q)
    gs = build_graph(s.sum)
    ep, eq = set(p.edge_set), set(q.edge_set)

    bad_edges: List[List[int]] = []
    for w1, w2 in sorted(s.sum.edge_set):
        (u1, v1), (u2, v2) = s.decomposition[w1], s.decomposition[w2]
        if (u1 != u2 and _pair((u1, u2)) not in ep) or (v1 != v2 and _pair((v1, v2)) not in eq):
            bad_edges.append([w1, w2])
    report.add("edge_projection", instance, not bad_edges, offending_edges=bad_edges[:5])

    try:
        phi = phi_injection(p, q, s)
        report.add("vertex_injection", instance, phi.is_injective(), image=list(phi.image))
    except (DecompositionFailure, NotFullDimensional) as e:
        report.add("vertex_injection", instance, False, message=str(e))

    disconnected = [u for u in range(p.f0) if not is_connected(gamma_subgraph(s, u, gs))]
    report.add("gamma_connected", instance, not disconnected, disconnected=disconnected)

    joined = set()
    for w1, w2 in s.sum.edge_set:
        u1, u2 = s.part_p(w1), s.part_p(w2)
        if u1 != u2:
            joined.add(_pair((u1, u2)))
    missing = sorted(ep - joined)
    extra = sorted(joined - ep)
    report.add(
        "gamma_adjacency",
        instance,
        not missing and not extra,
        adjacent_without_sum_edge=[list(x) for x in missing],
        sum_edge_without_adjacency=[list(x) for x in extra],
    )

    try:
        refines = fan_refines(s.sum, p) and fan_refines(s.sum, q)
        report.add("fan_refinement", instance, refines)
    except NotFullDimensional as e:
        report.add("fan_refinement", instance, False, message=str(e))
    return report


def random_pair(seed: int, coord_bound: int = 10, max_vertices: int = 10) -> Tuple[ExactPolytope, ExactPolytope]:
    """Seeded pair in dimension 2..4 with at most ``max_vertices`` sample points each."""
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 5))
    n_p = int(rng.integers(d + 1, max_vertices + 1))
    n_q = int(rng.integers(d + 1, max_vertices + 1))
    p = random_polytope(d, n_p, coord_bound, seed=2 * seed)
    q = random_polytope(d, n_q, coord_bound, seed=2 * seed + 1)
    return p, q


def check_random_pairs(
    trials: int, seed: int, logger: Optional[JsonlLogger] = None
) -> VerificationReport:
    report = VerificationReport(suite="random_pairs", seed=seed)
    for t in range(trials):
        p, q = random_pair(seed + t)
        instance = f"random[{seed + t}]"
        s = minkowski_sum(p, q)
        report.extend(check_diameter_bounds(p, q, instance, s))
        report.extend(check_structure_lemmas(p, q, instance, s))
        log_event(logger, "verify.check", suite="random_pairs", instance=instance, passed=report.passed)
    return report


def summand_tests_agree(
    p: ExactPolytope, q: ExactPolytope, tolerance: Fraction = SCALE_TOLERANCE
) -> Tuple[bool, Dict[str, Any]]:
    """Vertex-count summand test against a scale certified by ``is_summand``."""
    vertex_test = has_homothetic_summand(p, q)
    bracket = max_summand_scale(p, q, tolerance)
    witness: Optional[Fraction] = bracket.alpha_lo if bracket.alpha_lo > 0 else None
    if vertex_test and witness is None:
        # the largest scale may sit below the bracket tolerance
        alpha = bracket.alpha_hi
        for _ in range(REFINE_HALVINGS):
            alpha /= 2
            if is_summand(p, scale(q, alpha)):
                witness = alpha
                break
    detail = {
        "vertex_test": vertex_test,
        "alpha_lo": str(bracket.alpha_lo),
        "alpha_hi": str(bracket.alpha_hi),
        "witness": None if witness is None else str(witness),
    }
    return vertex_test == (witness is not None), detail


def check_decomposability(trials: int, seed: int, logger: Optional[JsonlLogger] = None) -> VerificationReport:
    report = VerificationReport(suite="decomposability", seed=seed)
    for t in range(trials):
        d = 2 + t % 2
        alpha = ALPHAS[t % len(ALPHAS)]
        r = random_polytope(d, d + 3, 5, seed=seed * 1000 + 2 * t)
        q = random_polytope(d, d + 2, 5, seed=seed * 1000 + 2 * t + 1)
        p = sum_polytope(r, scale(q, alpha))
        instance = f"positive[{t}]"
        report.add("homothetic_summand", instance, has_homothetic_summand(p, q), alpha=str(alpha))
        report.add("fans_equal_sum", instance, fans_equal(p, sum_polytope(p, q)))
        bracket = max_summand_scale(p, q, SCALE_TOLERANCE)
        report.add(
            "scale_bracket",
            instance,
            is_summand(p, scale(q, alpha)) and bracket.alpha_hi >= alpha,
            alpha=str(alpha),
            alpha_lo=str(bracket.alpha_lo),
            alpha_hi=str(bracket.alpha_hi),
        )

        g1 = random_polytope(d, d + 3, 5, seed=seed * 1000 + 500 + 2 * t)
        g2 = random_polytope(d, d + 2, 5, seed=seed * 1000 + 501 + 2 * t)
        instance = f"generic[{t}]"
        agree, detail = summand_tests_agree(g1, g2)
        report.add("summand_tests_agree", instance, agree, **detail)
        log_event(logger, "verify.check", suite="decomposability", trial=t, passed=report.passed)
    return report


def _segment_sum(vectors: Sequence[QVector]) -> ExactPolytope:
    total = segment(vectors[0])
    for v in vectors[1:]:
        total = sum_polytope(total, segment(v))
    return total


def _distinct_directions(d: int, count: int, seed: int) -> List[QVector]:
    seen = set()
    out: List[QVector] = []
    for v in sample_directions(d, 4 * count, seed, bound=5):
        key = canonical_sign(normalize_primitive(v))
        if key not in seen:
            seen.add(key)
            out.append(v)
        if len(out) == count:
            break
    return out


def check_zonotopes(seed: int, include_xi: bool = False) -> VerificationReport:
    report = VerificationReport(suite="zonotopes", seed=seed)
    for d in range(1, 5):
        res = is_zonotope(cube(d))
        report.add("cube_is_zonotope", f"cube({d})", res.is_zonotope and len(res.generators) == d, generators=len(res.generators))
    for i, count in enumerate((3, 4, 5)):
        z = _segment_sum(_distinct_directions(3, count, seed + i))
        res = is_zonotope(z)
        report.add(
            "segment_sum_is_zonotope",
            f"segments[{count}]",
            res.is_zonotope and len(res.generators) == count,
            generators=len(res.generators),
        )
    for d in range(2, 5):
        res = is_zonotope(simplex(d))
        report.add("simplex_not_zonotope", f"simplex({d})", not res.is_zonotope)
    if include_xi:
        p, _ = xi(XiParams.tuned(5, 4))
        report.add("xi_not_zonotope", "xi(5,4)", not is_zonotope(p).is_zonotope)
    return report


def check_generators(
    d_values: Iterable[int] = range(2, 6),
    k_values: Iterable[int] = range(1, 7),
    pair_d_values: Iterable[int] = (3, 4),
    pair_k_values: Iterable[int] = range(4, 9),
    logger: Optional[JsonlLogger] = None,
) -> VerificationReport:
    report = VerificationReport(suite="generators")
    k_values = list(k_values)
    for d in d_values:
        for k in k_values:
            instance = f"fixed_diameter({d},{k})"
            try:
                p = fixed_diameter(d, k, logger=logger)
                dk = diameter(build_graph(p))[0]
                report.add("fixed_diameter", instance, p.intrinsic_dim == d and dk == k, dimension=p.intrinsic_dim, diameter=dk)
            except CensusMismatch as e:
                report.add("fixed_diameter", instance, False, message=str(e), diff={k2: list(v) for k2, v in e.diff.items()})
    pair_k_values = list(pair_k_values)
    for d in pair_d_values:
        for k in pair_k_values:
            instance = f"pyramid_pair({d},{k})"
            try:
                p, q = pyramid_pair(d, k, logger=logger)
                dp, dq = diameter(build_graph(p))[0], diameter(build_graph(q))[0]
                ds = diameter(build_graph(sum_polytope(p, q)))[0]
                report.add("pyramid_pair", instance, dp == 2 and dq == 2 and ds == k, diameter_p=dp, diameter_q=dq, diameter_sum=ds)
            except CensusMismatch as e:
                report.add("pyramid_pair", instance, False, message=str(e), diff={k2: list(v) for k2, v in e.diff.items()})
    return report


def check_roundtrip(count: int, seed: int) -> VerificationReport:
    report = VerificationReport(suite="roundtrip", seed=seed)
    for i in range(count):
        d = 2 + i % 3
        p = random_polytope(d, d + 2 + i % 6, 10, seed=seed + i)
        for fmt in FORMATS:
            text = emit_polytope_file(p, fmt)
            back = parse_polytope_file(text, fmt)
            same = back.vertices == p.vertices and back.facets == p.facets
            again = emit_polytope_file(back, fmt) == text
            report.add("emit_parse_identity", f"random[{seed + i}].{fmt}", same and again, identical=same, reemitted=again)
    return report


def check_graph_consistency(p: ExactPolytope, g: PolytopeGraph, instance: str) -> VerificationReport:
    """Compare a supplied graph against the incidence edges of ``p``."""
    report = VerificationReport(suite="graph")
    want = set(p.edge_set)
    got = {_pair((u, v)) for u in range(g.vertex_count) for v in g.adjacency[u]}
    report.add(
        "graph_matches_incidence",
        instance,
        want == got,
        missing=[list(e) for e in sorted(want - got)],
        unexpected=[list(e) for e in sorted(got - want)],
    )
    return report


def _build_xi(k: int, l: int, cache: Optional[SimpleDiskCache], logger: Optional[JsonlLogger]) -> ExactPolytope:
    def build() -> Tuple[ExactPolytope, Dict[str, Any]]:
        p, census = xi(XiParams.tuned(k, l), logger=logger)
        return p, census.to_dict()

    p, _ = cached_build(cache, "xi", {"k": k, "l": l}, build)
    return p


def _build_xi_tilde(
    k: int, l: int, m: int, cache: Optional[SimpleDiskCache], logger: Optional[JsonlLogger]
) -> Tuple[ExactPolytope, Dict[str, Any]]:
    def build() -> Tuple[ExactPolytope, Dict[str, Any]]:
        p, census = xi_tilde(k, l, m, logger=logger)
        return p, census.to_dict()

    return cached_build(cache, "xi_tilde", {"k": k, "l": l, "m": m}, build)


def ratio_tables(
    kind: str,
    k_values: Sequence[int],
    m: int = 2,
    l: Optional[int] = None,
    cache: Optional[SimpleDiskCache] = None,
    logger: Optional[JsonlLogger] = None,
) -> VerificationReport:
    """Diameter ratios of the Ξ (with a vertical segment) and Ξ̃ (with Π) families."""
    report = VerificationReport(suite=kind)
    rows: List[Dict[str, Any]] = []
    if kind == "xi":
        l = l or 4
        sigma = segment((0, 0, 1))
        for k in k_values:
            instance = f"xi({k},{l})"
            p = _build_xi(k, l, cache, logger)
            dp = diameter(build_graph(p))[0]
            ds = diameter(build_graph(sum_polytope(p, sigma)))[0]
            upper, lower = k + l + 2, 2 * k
            floor = Fraction(lower, upper)
            ratio = Fraction(ds, dp)
            report.add("family_upper", instance, dp <= upper, diameter=dp, bound=upper)
            report.add("sum_lower", instance, ds >= lower, diameter_sum=ds, bound=lower)
            report.add("ratio_floor", instance, ratio >= floor, ratio=str(ratio), floor=str(floor))
            rows.append({"k": k, "l": l, "diameter": dp, "diameter_sum": ds, "ratio": str(ratio), "ratio_approx": round(float(ratio), 4), "floor": str(floor)})
    elif kind == "xi_tilde":
        required = 2 * m + 4
        l = l or required
        if l < required or l % 2:
            raise ValueError(f"the xi_tilde table needs an even l >= 2m+4 = {required}")
        pi = pi_polygon(PiParams.default(m))
        for k in k_values:
            instance = f"xi_tilde({k},{l},{m})"
            p, census = _build_xi_tilde(k, l, m, cache, logger)
            observed = census.get("observed", {})
            increment = observed.get("new_vertices")
            report.add(
                "bump_vertices",
                instance,
                increment == (k - 1) * (l - 1) * (m - 1),
                observed=increment,
                expected=(k - 1) * (l - 1) * (m - 1),
            )
            dp = diameter(build_graph(p))[0]
            ds = diameter(build_graph(sum_polytope(p, pi)))[0]
            upper = Fraction(k + 3, 2) + l + 2
            lower = Fraction(k * (m + 1), 2) + 1
            floor = lower / upper
            ratio = Fraction(ds, dp)
            report.add("family_upper", instance, dp <= upper, diameter=dp, bound=str(upper))
            report.add("sum_lower", instance, ds >= lower, diameter_sum=ds, bound=str(lower))
            report.add("ratio_floor", instance, ratio >= floor, ratio=str(ratio), floor=str(floor))
            rows.append({"k": k, "l": l, "m": m, "diameter": dp, "diameter_sum": ds, "ratio": str(ratio), "ratio_approx": round(float(ratio), 4), "floor": str(floor)})
    else:
        raise ValueError(f"unknown ratio table {kind!r}")
    report.tables[kind] = rows
    log_event(logger, "verify.check", suite=kind, k_values=list(k_values), passed=report.passed)
    return report


def check_planar_bound(p: ExactPolytope, q: ExactPolytope, instance: str) -> VerificationReport:
    """Diameter of a planar sum against the diameters of its summands.

    A planar sum with f vertices has diameter floor(f/2) and f <= f0(P) + f0(Q).
    That gives δ(P+Q) <= δ(P) + δ(Q), except when both summands are polygons
    with an odd number of vertices: a triangle plus its reflection is a
    hexagon of diameter 3. The odd-odd case is allowed one extra step.
    """
    s = sum_polytope(p, q)
    if s.intrinsic_dim > 2:
        raise ValueError("the planar bound applies to summands spanning at most a plane")
    report = VerificationReport(suite="planar")
    dp = diameter(build_graph(p))[0]
    dq = diameter(build_graph(q))[0]
    ds = diameter(build_graph(s))[0]
    odd_pair = p.intrinsic_dim == 2 and q.intrinsic_dim == 2 and p.f0 % 2 == 1 and q.f0 % 2 == 1
    bound = dp + dq + (1 if odd_pair else 0)
    report.add(
        "planar_bound",
        instance,
        ds <= bound,
        diameter_sum=ds,
        diameter_p=dp,
        diameter_q=dq,
        bound=bound,
        odd_pair=odd_pair,
    )
    if s.intrinsic_dim == 2:
        report.add("planar_polygon_diameter", instance, ds == s.f0 // 2, diameter_sum=ds, vertices=s.f0)
    return report


def check_planar_pairs(trials: int, seed: int, logger: Optional[JsonlLogger] = None) -> VerificationReport:
    """Seeded random polygon pairs, plus fixed pairs whose sums attain the bound."""
    report = VerificationReport(suite="planar", seed=seed)
    rng = np.random.default_rng(seed)
    for t in range(trials):
        n_p, n_q = (int(x) for x in rng.integers(3, 12, size=2))
        p = random_polytope(2, n_p, seed=2 * (seed + t))
        q = random_polytope(2, n_q, seed=2 * (seed + t) + 1)
        report.extend(check_planar_bound(p, q, f"planar[{seed + t}]"))
    sharp = {
        "square+diamond": (cube(2), hull_from_vertices([(1, 0), (0, 1), (-1, 0), (0, -1)])),
        "triangle+reflection": (simplex(2), hull_from_vertices([(0, 0), (-1, 0), (0, -1)])),
        "segment+segment": (segment((1, 0)), segment((0, 1))),
    }
    for instance, (p, q) in sharp.items():
        attained = check_planar_bound(p, q, instance)
        report.extend(attained)
        witness = attained.checks[0].witness
        report.add("planar_bound_attained", instance, witness["diameter_sum"] == witness["bound"], **witness)
    log_event(logger, "verify.check", suite="planar", trials=trials, passed=report.passed)
    return report


def prism_tables(
    kind: str,
    k_values: Sequence[int],
    d: int,
    m: int = 2,
    l: Optional[int] = None,
    cache: Optional[SimpleDiskCache] = None,
    logger: Optional[JsonlLogger] = None,
) -> VerificationReport:
    """Lift the Ξ and Ξ̃ pairs to dimension d by prisms and compare with the three-dimensional diameters.

    Both summands gain d-3 coordinates; the family member becomes a prism over
    the unit cube and the second summand stays flat in the new coordinates, so
    both diameters grow by exactly d-3 and the ratio tends to the same limit.
    """
    if d < 3:
        raise ValueError("prism tables need d >= 3")
    table = f"{kind}_prism"
    report = VerificationReport(suite=table)
    rows: List[Dict[str, Any]] = []
    extra = d - 3
    for k in k_values:
        if kind == "xi":
            l_k = l or 4
            instance = f"xi_prism({k},{l_k},{d})"
            base = _build_xi(k, l_k, cache, logger)
            summand = segment((0, 0, 1))
        elif kind == "xi_tilde":
            l_k = l or 2 * m + 4
            instance = f"xi_tilde_prism({k},{l_k},{m},{d})"
            base, _ = _build_xi_tilde(k, l_k, m, cache, logger)
            summand = pi_polygon(PiParams.default(m))
        else:
            raise ValueError(f"unknown prism table {kind!r}")
        lifted, census = prism_lift(table, base, d, logger=logger, k=k, l=l_k)
        report.add("prism_census", instance, census.passed, **census.to_dict())
        flat = embed(summand, extra)
        dp3 = diameter(build_graph(base))[0]
        ds3 = diameter(build_graph(sum_polytope(base, summand)))[0]
        dp = diameter(build_graph(lifted))[0]
        ds = diameter(build_graph(sum_polytope(lifted, flat)))[0]
        report.add("prism_diameter", instance, dp == dp3 + extra, diameter=dp, base=dp3)
        report.add("prism_diameter_sum", instance, ds == ds3 + extra, diameter_sum=ds, base=ds3)
        ratio = Fraction(ds, dp)
        rows.append({"k": k, "l": l_k, "d": d, "diameter": dp, "diameter_sum": ds, "ratio": str(ratio), "ratio_approx": round(float(ratio), 4)})
    report.tables[table] = rows
    log_event(logger, "verify.check", suite=table, k_values=list(k_values), d=d, passed=report.passed)
    return report
