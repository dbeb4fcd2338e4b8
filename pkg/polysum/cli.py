from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .core.cache import SimpleDiskCache
from .core.config import load_config
from .core.errors import CensusMismatch, EmptyErosion, ParseError, PolysumError
from .core.logger import JsonlLogger, log_event
from .generators.families import PiParams, XiParams, pi_polygon, prism_lift, theta, xi, xi_tilde
from .generators.standard import cube, fixed_diameter, pyramid_pair, random_polytope, rational_polygon, simplex
from .geometry.cones import fan_refines, fans_equal
from .geometry.polytope import ExactPolytope
from .graph import build_graph, diameter
from .io.polyfile import FORMATS, cached_build, emit_polytope_file, parse_polytope_file
from .minkowski import erosion, has_homothetic_summand, is_summand, is_zonotope, max_summand_scale, minkowski_sum
from .verify.checks import (
    check_decomposability,
    check_diameter_bounds,
    check_planar_pairs,
    check_structure_lemmas,
    prism_tables,
    random_pair,
    ratio_tables,
)
from .verify.report import VerificationReport, render_csv, render_json
from .verify.suite import run_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

FAMILIES = (
    "cube",
    "simplex",
    "polygon",
    "fixed-diameter",
    "pyramid-pair",
    "xi",
    "pi",
    "theta",
    "xitilde",
    "xi-prism",
    "xitilde-prism",
    "random",
)
FAMILY_ALIASES = {"prop21": "fixed-diameter", "prop22": "pyramid-pair"}
CHECKS = ("bounds", "lemmas", "decomp", "planar", "xi-ratio", "xitilde-ratio", "xi-prism", "xitilde-prism", "all")
CHECK_ALIASES = {"thm41": "xi-ratio", "thm42": "xitilde-ratio"}


def _read(path: str) -> ExactPolytope:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return parse_polytope_file(text)


def _write(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _bool(value: bool) -> str:
    return "true" if value else "false"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polysum", description="Exact Minkowski sums, polytope graphs and diameters")
    parser.add_argument("--format", choices=FORMATS, default="ext", help="format of emitted polytopes")
    parser.add_argument("--log-dir", type=Path, default=None, help="directory for the JSONL event log")
    parser.add_argument("--no-cache", action="store_true", help="do not read or write the family cache")
    sub = parser.add_subparsers(dest="cmd", required=True)

    gen = sub.add_parser("gen", help="generate a polytope")
    gen.add_argument("family", choices=FAMILIES + tuple(FAMILY_ALIASES))
    gen.add_argument("--d", type=int, default=3, help="dimension (cube, simplex, random, prism lifts)")
    gen.add_argument("--k", type=int, default=5)
    gen.add_argument("--l", type=int, default=4)
    gen.add_argument("--m", type=int, default=2)
    gen.add_argument("--n", type=int, default=8, help="vertex count (polygon, random)")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--coord-bound", type=int, default=10)
    gen.add_argument("--eps", type=Fraction, default=None)
    gen.add_argument("--height", type=Fraction, default=None)
    gen.add_argument("--reach", type=Fraction, default=None)
    gen.add_argument("--eps-bulge", type=Fraction, default=None)
    gen.add_argument("--part", choices=("p", "q"), default="p", help="which polytope of the pyramid pair")
    gen.add_argument("--out", default="-")

    s = sub.add_parser("sum", help="Minkowski sum of two polytopes")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--decomposition", action="store_true", help="print the vertex decomposition as JSON")
    s.add_argument("--out", default="-")

    d = sub.add_parser("diameter", help="exact graph diameter")
    d.add_argument("p")
    d.add_argument("--max", type=int, default=None, help="exit 1 when the diameter exceeds this")

    g = sub.add_parser("graph", help="print the vertex-edge graph")
    g.add_argument("p")

    sm = sub.add_parser("summand", help="summand tests of Q in P")
    sm.add_argument("p")
    sm.add_argument("q")
    sm.add_argument("--tolerance", type=Fraction, default=Fraction(1, 64))

    z = sub.add_parser("is-zonotope", help="zonotope test by edge peeling")
    z.add_argument("p")

    e = sub.add_parser("erode", help="Minkowski difference P ⊖ Q")
    e.add_argument("p")
    e.add_argument("q")
    e.add_argument("--out", default="-")

    f = sub.add_parser("fans", help="compare normal fans")
    f.add_argument("relation", choices=("equal", "refines"))
    f.add_argument("p")
    f.add_argument("q")

    v = sub.add_parser("verify", help="run verification checks")
    v.add_argument("what", choices=CHECKS + tuple(CHECK_ALIASES))
    v.add_argument("files", nargs="*", help="optional P and Q for bounds/lemmas")
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--report", choices=("json", "csv"), default="json")
    v.add_argument("--k-values", type=str, default=None, help="comma separated k values for the ratio tables")
    v.add_argument("--m", type=int, default=2)
    v.add_argument("--d", type=int, default=4, help="dimension of the prism tables")
    v.add_argument("--out", default="-")
    return parser


def _xi_params(args: argparse.Namespace) -> XiParams:
    base = XiParams.tuned(args.k, args.l)
    overrides: Dict[str, Any] = {}
    if args.eps is not None:
        overrides["eps"] = args.eps
    if args.height is not None:
        overrides["H"] = args.height
    if args.reach is not None:
        overrides["s"] = args.reach
    return dataclasses.replace(base, **overrides) if overrides else base


def _pi_params(args: argparse.Namespace) -> PiParams:
    if args.eps_bulge is None:
        return PiParams.default(args.m)
    return PiParams(m=args.m, eps_bulge=args.eps_bulge)


def _lift(
    p: ExactPolytope, info: Dict[str, Any], family: str, args: argparse.Namespace, logger: JsonlLogger
) -> Tuple[ExactPolytope, Dict[str, Any]]:
    lifted, census = prism_lift(family, p, args.d, logger=logger, base=info.get("family"))
    return lifted, census.to_dict()


def _generate(
    args: argparse.Namespace, cfg_seed: int, cache: Optional[SimpleDiskCache], logger: JsonlLogger
) -> Tuple[ExactPolytope, Optional[Dict[str, Any]]]:
    fam = FAMILY_ALIASES.get(args.family, args.family)
    if fam == "cube":
        return cube(args.d), None
    if fam == "simplex":
        return simplex(args.d), None
    if fam == "polygon":
        return rational_polygon(args.n), None
    if fam == "random":
        seed = cfg_seed if args.seed is None else args.seed
        return random_polytope(args.d, args.n, args.coord_bound, seed), None
    if fam == "fixed-diameter":
        return fixed_diameter(args.d, args.k, logger=logger), None
    if fam == "pyramid-pair":
        p, q = pyramid_pair(args.d, args.k, logger=logger)
        return (p if args.part == "p" else q), None
    if fam == "pi":
        return pi_polygon(_pi_params(args)), None
    if fam in ("xi", "xi-prism"):
        params = _xi_params(args)

        def build_xi() -> Tuple[ExactPolytope, Dict[str, Any]]:
            p, census = xi(params, logger=logger)
            return p, census.to_dict()

        p, info = cached_build(cache, "xi", params.as_dict(), build_xi)
        return _lift(p, info, "xi_prism", args, logger) if fam == "xi-prism" else (p, info)
    if fam == "theta":
        params = _xi_params(args)

        def build_theta() -> Tuple[ExactPolytope, Dict[str, Any]]:
            p, census = theta(args.k, args.l, params, logger=logger)
            return p, census.to_dict()

        return cached_build(cache, "theta", params.as_dict(), build_theta)
    params = _xi_params(args)
    pi = _pi_params(args)

    def build_tilde() -> Tuple[ExactPolytope, Dict[str, Any]]:
        p, census = xi_tilde(args.k, args.l, args.m, params, pi, logger=logger)
        return p, census.to_dict()

    payload = {**params.as_dict(), "m": args.m, "eps_bulge": str(pi.eps_bulge)}
    p, info = cached_build(cache, "xi_tilde", payload, build_tilde)
    return _lift(p, info, "xi_tilde_prism", args, logger) if fam == "xitilde-prism" else (p, info)


def _emit_report(report: VerificationReport, kind: str, out: Optional[str]) -> int:
    _write(render_json(report) if kind == "json" else render_csv(report), out)
    if not report.passed:
        for c in report.failures:
            print(f"FAIL {c.name} [{c.instance}] {c.message}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def _k_values(raw: Optional[str], default: List[int]) -> List[int]:
    if raw is None:
        return default
    try:
        return [int(x) for x in raw.split(",") if x.strip()]
    except ValueError as e:
        raise ParseError(f"invalid k list {raw!r}") from e


def _verify(args: argparse.Namespace, cfg: Any, cache: Optional[SimpleDiskCache], logger: JsonlLogger) -> int:
    seed = cfg.default_seed if args.seed is None else args.seed
    trials = cfg.default_trials if args.trials is None else args.trials
    what = CHECK_ALIASES.get(args.what, args.what)
    if what in ("bounds", "lemmas"):
        check = check_diameter_bounds if what == "bounds" else check_structure_lemmas
        if args.files:
            if len(args.files) != 2:
                raise ParseError("verify bounds/lemmas takes exactly two polytope files")
            report = check(_read(args.files[0]), _read(args.files[1]), "files")
        else:
            report = VerificationReport(suite=what, seed=seed)
            for t in range(trials):
                p, q = random_pair(seed + t)
                report.extend(check(p, q, f"random[{seed + t}]"))
        report.suite, report.seed = what, seed
    elif what == "decomp":
        report = check_decomposability(trials, seed, logger=logger)
    elif what == "planar":
        report = check_planar_pairs(trials, seed, logger=logger)
    elif what == "xi-ratio":
        report = ratio_tables("xi", _k_values(args.k_values, list(range(3, 11))), cache=cache, logger=logger)
    elif what == "xitilde-ratio":
        report = ratio_tables("xi_tilde", _k_values(args.k_values, [5, 9]), m=args.m, cache=cache, logger=logger)
    elif what == "xi-prism":
        report = prism_tables("xi", _k_values(args.k_values, [3, 5]), args.d, cache=cache, logger=logger)
    elif what == "xitilde-prism":
        report = prism_tables("xi_tilde", _k_values(args.k_values, [5]), args.d, m=args.m, cache=cache, logger=logger)
    else:
        report = run_suite(seed, trials, cfg, logger=logger, cache=cache)
    return _emit_report(report, args.report, args.out)


def dispatch(args: argparse.Namespace) -> int:
    cfg = load_config(Path.cwd())
    if args.log_dir is not None:
        cfg.log_dir = args.log_dir
    logger = JsonlLogger(cfg.log_dir, "polysum").bind(cmd=args.cmd)
    cache = None if args.no_cache or not cfg.cache_enabled else SimpleDiskCache(cfg.cache_dir)
    log_event(logger, "cli.command")
    fmt = args.format

    if args.cmd == "gen":
        p, census = _generate(args, cfg.default_seed, cache, logger)
        if census is not None:
            print(json.dumps(census, sort_keys=True, default=str), file=sys.stderr)
        _write(emit_polytope_file(p, fmt), args.out)
        return EXIT_OK
    if args.cmd == "sum":
        s = minkowski_sum(_read(args.a), _read(args.b), logger=logger)
        if args.decomposition:
            rows = [{"sum": w, "p": u, "q": v} for w, (u, v) in enumerate(s.decomposition)]
            _write(json.dumps(rows, indent=2) + "\n", args.out)
        else:
            _write(emit_polytope_file(s.sum, fmt), args.out)
        return EXIT_OK
    if args.cmd == "diameter":
        value, (a, b) = diameter(build_graph(_read(args.p)), workers=cfg.workers)
        print(f"diameter: {value}")
        print(f"witness: {a} {b}")
        if args.max is not None and value > args.max:
            print(f"diameter {value} exceeds {args.max}", file=sys.stderr)
            return EXIT_FAIL
        return EXIT_OK
    if args.cmd == "graph":
        g = build_graph(_read(args.p))
        print(f"vertices: {g.vertex_count}")
        print(f"edges: {g.edge_count}")
        for u in range(g.vertex_count):
            for w in g.adjacency[u]:
                if u < w:
                    print(f"{u} {w}")
        return EXIT_OK
    if args.cmd == "summand":
        p, q = _read(args.p), _read(args.q)
        bracket = max_summand_scale(p, q, args.tolerance)
        print(f"summand: {_bool(is_summand(p, q))}")
        print(f"homothetic-summand: {_bool(has_homothetic_summand(p, q))}")
        print(f"scale-bracket: {bracket.alpha_lo} {bracket.alpha_hi} certified={_bool(bracket.certified)}")
        return EXIT_OK
    if args.cmd == "is-zonotope":
        res = is_zonotope(_read(args.p))
        print(f"zonotope: {_bool(res.is_zonotope)}")
        for direction, length in res.generators:
            print("generator: " + ",".join(str(x) for x in direction) + f" x {length}")
        return EXIT_OK
    if args.cmd == "erode":
        try:
            rest = erosion(_read(args.p), _read(args.q))
        except EmptyErosion as e:
            print(f"erosion is empty: {e}", file=sys.stderr)
            return EXIT_FAIL
        _write(emit_polytope_file(rest, fmt), args.out)
        return EXIT_OK
    if args.cmd == "fans":
        p, q = _read(args.p), _read(args.q)
        result = fans_equal(p, q) if args.relation == "equal" else fan_refines(p, q)
        print(f"{args.relation}: {_bool(result)}")
        return EXIT_OK
    return _verify(args, cfg, cache, logger)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return dispatch(args)
    except (ParseError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CensusMismatch as e:
        print(f"census failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    except PolysumError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
