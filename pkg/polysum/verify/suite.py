from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from ..core.cache import SimpleDiskCache
from ..core.config import PolysumConfig
from ..core.logger import JsonlLogger, log_event, timed
from ..generators.standard import cube
from ..graph import PolytopeGraph, build_graph
from .checks import (
    check_decomposability,
    check_triangle_segment,
    check_generators,
    check_graph_consistency,
    check_planar_pairs,
    check_random_pairs,
    check_roundtrip,
    check_zonotopes,
    prism_tables,
    ratio_tables,
)
from .report import VerificationReport, merge


@dataclass
class SuitePlan:
    """Sizes of the default run; the acceptance-scale grids are larger."""

    fixed_d: Sequence[int] = (2, 3, 4)
    fixed_k: Sequence[int] = (1, 2, 3, 4, 5)
    pair_d: Sequence[int] = (3,)
    pair_k: Sequence[int] = (4, 5, 6)
    xi_k: Sequence[int] = (3, 4, 5)
    xi_tilde_k: Sequence[int] = (5,)
    xi_tilde_m: int = 2
    prism_k: Sequence[int] = (3,)
    prism_d: int = 4
    roundtrip_count: int = 10
    include_xi_zonotope: bool = False


def injected_fault() -> VerificationReport:
    """Negative control: the 3-cube against its graph with one edge removed."""
    p = cube(3)
    g = build_graph(p)
    broken = [list(nbrs) for nbrs in g.adjacency]
    u = 0
    v = broken[u].pop(0)
    broken[v].remove(u)
    fixture = PolytopeGraph.from_adjacency(p.f0, broken, check_connected=False)
    return check_graph_consistency(p, fixture, "cube(3)-missing-edge")


class VerificationSuite:
    def __init__(
        self,
        cfg: PolysumConfig,
        logger: Optional[JsonlLogger] = None,
        cache: Optional[SimpleDiskCache] = None,
        plan: Optional[SuitePlan] = None,
    ) -> None:
        self.cfg = cfg
        self.logger = logger
        self.cache = cache if cfg.cache_enabled else None
        self.plan = plan or SuitePlan()

    def _tasks(self, seed: int, trials: int, inject_fault: bool) -> List[Tuple[str, Callable[[], VerificationReport]]]:
        plan = self.plan
        tasks: List[Tuple[str, Callable[[], VerificationReport]]] = [
            ("triangle_segment", check_triangle_segment),
            ("generators", lambda: check_generators(plan.fixed_d, plan.fixed_k, plan.pair_d, plan.pair_k, logger=self.logger)),
            ("zonotopes", lambda: check_zonotopes(seed, include_xi=plan.include_xi_zonotope)),
            ("roundtrip", lambda: check_roundtrip(plan.roundtrip_count, seed)),
            ("xi", lambda: ratio_tables("xi", plan.xi_k, cache=self.cache, logger=self.logger)),
            ("xi_tilde", lambda: ratio_tables("xi_tilde", plan.xi_tilde_k, m=plan.xi_tilde_m, cache=self.cache, logger=self.logger)),
            ("xi_prism", lambda: prism_tables("xi", plan.prism_k, plan.prism_d, cache=self.cache, logger=self.logger)),
        ]
        if trials > 0:
            tasks.append(("random_pairs", lambda: check_random_pairs(trials, seed, logger=self.logger)))
            tasks.append(("decomposability", lambda: check_decomposability(trials, seed, logger=self.logger)))
            tasks.append(("planar", lambda: check_planar_pairs(trials, seed, logger=self.logger)))
        if inject_fault:
            tasks.append(("injected_fault", injected_fault))
        return tasks

    def _run_task(self, named: Tuple[str, Callable[[], VerificationReport]]) -> VerificationReport:
        name, task = named
        with timed(self.logger, "verify.task", task=name):
            return task()

    def run(self, seed: Optional[int] = None, trials: Optional[int] = None, inject_fault: bool = False) -> VerificationReport:
        seed = self.cfg.default_seed if seed is None else seed
        trials = self.cfg.default_trials if trials is None else trials
        if self.logger is not None:
            self.logger = self.logger.bind(seed=seed)
        tasks = self._tasks(seed, trials, inject_fault)
        log_event(self.logger, "verify.start", trials=trials, tasks=len(tasks))
        if self.cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=self.cfg.workers) as pool:
                parts = list(pool.map(self._run_task, tasks))
        else:
            parts = [self._run_task(t) for t in tasks]
        report = merge("all", seed, parts)
        log_event(self.logger, "verify.done", passed=report.passed, **report.summary())
        return report


def run_suite(
    seed: int,
    trials: int,
    cfg: PolysumConfig,
    logger: Optional[JsonlLogger] = None,
    cache: Optional[SimpleDiskCache] = None,
    plan: Optional[SuitePlan] = None,
    inject_fault: bool = False,
) -> VerificationReport:
    return VerificationSuite(cfg, logger, cache, plan).run(seed=seed, trials=trials, inject_fault=inject_fault)
