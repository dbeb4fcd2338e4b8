from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import pytest

from polysum.core.config import PolysumConfig
from polysum.core.logger import JsonlLogger
from polysum.generators.standard import cube, point, simplex
from polysum.geometry.polytope import hull_from_vertices, scale
from polysum.graph import build_graph
from polysum.minkowski import sum_polytope
from polysum.verify.checks import (
    check_decomposability,
    check_diameter_bounds,
    check_triangle_segment,
    check_generators,
    check_graph_consistency,
    check_planar_bound,
    check_planar_pairs,
    check_random_pairs,
    check_roundtrip,
    check_structure_lemmas,
    check_zonotopes,
    prism_tables,
    random_pair,
    ratio_tables,
    summand_tests_agree,
)
from polysum.verify.report import VerificationReport, merge, render_csv, render_json
from polysum.verify.suite import SuitePlan, VerificationSuite, injected_fault, run_suite


def test_report_bookkeeping() -> None:
    a = VerificationReport(suite="a", seed=1)
    a.add("ok", "x", True, value=1)
    b = VerificationReport(suite="b")
    b.add("bad", "y", False, message="nope", pair=[0, 1])
    b.tables["t"] = [{"k": 3}]
    merged = merge("all", 1, [a, b])
    assert not merged.passed
    assert merged.instances == ["x", "y"]
    assert merged.summary() == {"checks": 2, "passed": 1, "failed": 1}
    assert [c.name for c in merged.failures] == ["bad"]

    doc = json.loads(render_json(merged))
    assert doc["passed"] is False
    assert doc["tables"]["t"] == [{"k": 3}]
    rows = list(csv.reader(io.StringIO(render_csv(merged))))
    assert rows[0] == ["suite", "seed", "check", "instance", "passed", "message", "witness"]
    assert rows[2][4] == "fail"
    assert json.loads(rows[2][6]) == {"pair": [0, 1]}


def test_triangle_segment_and_small_pairs() -> None:
    assert check_triangle_segment().passed
    for p, q in [(cube(2), simplex(2)), (cube(3), simplex(3)), (simplex(3), cube(3))]:
        assert check_diameter_bounds(p, q).passed
        assert check_structure_lemmas(p, q).passed


def test_geodesic_witness_is_recorded() -> None:
    report = check_diameter_bounds(cube(3), simplex(3), "cube+simplex")
    entry = next(c for c in report.checks if c.name == "sum_below_geodesic_gamma")
    path = entry.witness["geodesic"]
    assert len(entry.witness["gamma_diameters"]) == len(path)
    assert entry.witness["bound"] == len(path) - 1 + sum(entry.witness["gamma_diameters"])


def test_graph_consistency_and_injected_fault() -> None:
    p = cube(3)
    assert check_graph_consistency(p, build_graph(p), "cube(3)").passed
    broken = injected_fault()
    assert not broken.passed
    (failure,) = broken.failures
    assert len(failure.witness["missing"]) == 1
    assert failure.witness["unexpected"] == []


def test_random_pair_is_reproducible() -> None:
    p1, q1 = random_pair(12)
    p2, q2 = random_pair(12)
    assert p1.vertices == p2.vertices and q1.vertices == q2.vertices
    assert 2 <= p1.ambient_dim <= 4
    assert p1.ambient_dim == q1.ambient_dim


def test_generators_roundtrip_and_zonotopes() -> None:
    assert check_generators([2, 3], [1, 2, 3], [3], [4]).passed
    assert check_roundtrip(4, seed=2).passed
    assert check_zonotopes(seed=3).passed


def test_suite_task_selection(cfg: PolysumConfig) -> None:
    suite = VerificationSuite(cfg)
    assert len(suite._tasks(1, 0, False)) == 7
    assert len(suite._tasks(1, 3, False)) == 10
    assert len(suite._tasks(1, 3, True)) == 11


def test_ratio_table_rejects_bad_arguments() -> None:
    with pytest.raises(ValueError):
        ratio_tables("bogus", [3])
    with pytest.raises(ValueError):
        ratio_tables("xi_tilde", [5], m=2, l=6)


@pytest.mark.slow
def test_random_pairs_and_decomposability() -> None:
    assert check_random_pairs(5, seed=7).passed
    assert check_decomposability(6, seed=7).passed


@pytest.mark.slow
def test_xi_ratio_table_rows() -> None:
    report = ratio_tables("xi", [3, 4])
    assert report.passed, report.failures
    assert [row["k"] for row in report.tables["xi"]] == [3, 4]


@pytest.mark.slow
def test_full_suite_with_fault(cfg: PolysumConfig) -> None:
    plan = SuitePlan(fixed_d=(2, 3), fixed_k=(1, 2, 3), pair_k=(4,), xi_k=(3,), xi_tilde_k=(3,), roundtrip_count=3)
    cfg.workers = 2
    logger = JsonlLogger(cfg.log_dir, "suite")
    report = run_suite(7, 2, cfg, logger=logger, plan=plan, inject_fault=True)
    assert [c.name for c in report.failures] == ["graph_matches_incidence"]
    assert "xi" in report.tables and "xi_tilde" in report.tables
    records = [json.loads(x) for x in logger.path.read_text(encoding="utf-8").splitlines()]
    tasks = [r for r in records if r["event"] == "verify.task"]
    assert len(tasks) == 11 and all(r["seed"] == 7 for r in tasks)


def test_point_summand_reduces_to_the_graph_of_p() -> None:
    p, q = cube(3), point(3)
    assert check_structure_lemmas(p, q, "cube+point").passed
    bounds = check_diameter_bounds(p, q, "cube+point")
    assert bounds.passed
    entry = next(c for c in bounds.checks if c.name == "sum_at_least_max")
    assert entry.witness["diameter_sum"] == 3


def test_summand_tests_agree_below_the_bracket_tolerance() -> None:
    # the largest homothetic summand scale is 1/100, below the 1/64 bracket width
    p = sum_polytope(cube(2), scale(simplex(2), Fraction(1, 100)))
    agree, detail = summand_tests_agree(p, simplex(2))
    assert detail["vertex_test"] is True
    assert detail["alpha_lo"] == "0"
    assert agree
    assert Fraction(detail["witness"]) <= Fraction(1, 100)


def test_summand_tests_agree_without_a_summand() -> None:
    agree, detail = summand_tests_agree(cube(2), simplex(2))
    assert agree
    assert detail["vertex_test"] is False and detail["witness"] is None


def test_planar_bound_allows_one_extra_step_for_two_odd_polygons() -> None:
    triangle = simplex(2)
    reflected = hull_from_vertices([(0, 0), (-1, 0), (0, -1)])
    report = check_planar_bound(triangle, reflected, "hexagon")
    assert report.passed, report.failures
    witness = report.checks[0].witness
    assert witness["odd_pair"] and witness["diameter_sum"] == 3 == witness["bound"]
    square = check_planar_bound(cube(2), triangle, "pentagon")
    assert square.checks[0].witness["bound"] == 3
    with pytest.raises(ValueError):
        check_planar_bound(cube(3), simplex(3), "solid")


def test_planar_pairs_report() -> None:
    report = check_planar_pairs(6, seed=3)
    assert report.passed, report.failures
    attained = [c for c in report.checks if c.name == "planar_bound_attained"]
    assert [c.instance for c in attained] == ["square+diamond", "triangle+reflection", "segment+segment"]


def test_prism_table_rejects_bad_arguments() -> None:
    with pytest.raises(ValueError):
        prism_tables("xi", [3], d=2)
    with pytest.raises(ValueError):
        prism_tables("bogus", [3], d=4)


@pytest.mark.slow
def test_xi_prism_table_shifts_both_diameters() -> None:
    report = prism_tables("xi", [3], d=4)
    assert report.passed, report.failures
    (row,) = report.tables["xi_prism"]
    assert row["d"] == 4


@pytest.mark.slow
def test_random_pairs_at_acceptance_scale() -> None:
    report = check_random_pairs(200, seed=11)
    assert report.passed, report.failures
    assert len(report.instances) == 200


@pytest.mark.slow
def test_decomposability_at_acceptance_scale() -> None:
    report = check_decomposability(100, seed=13)
    assert report.passed, report.failures


@pytest.mark.slow
def test_roundtrip_of_fifty_polytopes() -> None:
    assert check_roundtrip(50, seed=17).passed
