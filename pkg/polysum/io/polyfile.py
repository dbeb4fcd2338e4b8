"""cdd-style V/H files and the structured JSON polytope format.

cdd rows use the convention ``b + a·x >= 0``; internally halfspaces read
``a·x >= offset``, so ``b = -offset`` at the boundary.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ValidationError

from ..core.cache import SimpleDiskCache
from ..core.errors import InvalidDescription, ParseError
from ..exact.linalg import QVector
from ..geometry.polytope import ExactPolytope, Halfspace, Hyperplane, hull_from_vertices, vertices_from_halfspaces

FORMATS = ("ext", "ine", "json")
JSON_KIND = "polysum-polytope"


class HalfspaceModel(BaseModel):
    normal: List[str]
    offset: str


class PolytopeModel(BaseModel):
    kind: Literal["polysum-polytope"] = JSON_KIND
    ambient_dim: int
    intrinsic_dim: Optional[int] = None
    vertices: List[List[str]] = []
    facets: List[HalfspaceModel] = []
    equations: List[HalfspaceModel] = []


def _q(token: str, line: Optional[int] = None) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"invalid rational {token!r}", line) from e


def _fmt(x: Fraction) -> str:
    return str(x)


def _row(values: Sequence[Fraction]) -> str:
    return " ".join(_fmt(x) for x in values)


def emit_polytope_file(p: ExactPolytope, fmt: str = "ext") -> str:
    if fmt == "ext":
        lines = ["V-representation", "begin", f"{p.f0} {p.ambient_dim + 1} rational"]
        lines += [_row((Fraction(1),) + v) for v in p.vertices]
        lines.append("end")
        return "\n".join(lines) + "\n"
    if fmt == "ine":
        rows = [(-h.offset,) + h.normal for h in p.facets] + [(-e.offset,) + e.normal for e in p.equations]
        lines = ["H-representation"]
        if p.equations:
            first = len(p.facets) + 1
            idx = " ".join(str(i) for i in range(first, first + len(p.equations)))
            lines.append(f"linearity {len(p.equations)} {idx}")
        lines += ["begin", f"{len(rows)} {p.ambient_dim + 1} rational"]
        lines += [_row(r) for r in rows]
        lines.append("end")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return to_model(p).model_dump_json(indent=2) + "\n"
    raise ValueError(f"unknown polytope format {fmt!r}; expected one of {FORMATS}")


def to_model(p: ExactPolytope) -> PolytopeModel:
    return PolytopeModel(
        ambient_dim=p.ambient_dim,
        intrinsic_dim=p.intrinsic_dim,
        vertices=[[_fmt(x) for x in v] for v in p.vertices],
        facets=[HalfspaceModel(normal=[_fmt(x) for x in h.normal], offset=_fmt(h.offset)) for h in p.facets],
        equations=[HalfspaceModel(normal=[_fmt(x) for x in e.normal], offset=_fmt(e.offset)) for e in p.equations],
    )


def detect_format(text: str) -> str:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return "json"
    for raw in text.splitlines():
        word = raw.strip()
        if word == "V-representation":
            return "ext"
        if word == "H-representation":
            return "ine"
    raise ParseError("cannot tell the file format: no representation header and not JSON")


def _cdd_body(text: str) -> Tuple[str, List[int], List[Tuple[int, List[Fraction]]], int]:
    kind = ""
    linearity: List[int] = []
    rows: List[Tuple[int, List[Fraction]]] = []
    width = 0
    expected = 0
    state = "header"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("*"):
            continue
        if state == "header":
            if line in ("V-representation", "H-representation"):
                kind = line[0]
            elif line.startswith("linearity"):
                parts = line.split()
                try:
                    count = int(parts[1])
                    linearity = [int(t) for t in parts[2:]]
                except (IndexError, ValueError) as e:
                    raise ParseError("malformed linearity line", lineno) from e
                if len(linearity) != count:
                    raise ParseError("linearity count does not match its index list", lineno)
            elif line == "begin":
                state = "counts"
            else:
                raise ParseError(f"unexpected line {line!r} before begin", lineno)
        elif state == "counts":
            parts = line.split()
            if len(parts) != 3 or parts[2] not in ("rational", "integer"):
                raise ParseError("counts line must read 'rows columns rational'", lineno)
            try:
                expected, width = int(parts[0]), int(parts[1])
            except ValueError as e:
                raise ParseError("row and column counts must be integers", lineno) from e
            if width < 1:
                raise ParseError("need at least one column", lineno)
            state = "rows"
        elif state == "rows":
            if line == "end":
                state = "done"
                continue
            tokens = line.split()
            if len(tokens) != width:
                raise ParseError(f"expected {width} entries, found {len(tokens)}", lineno)
            rows.append((lineno, [_q(t, lineno) for t in tokens]))
        else:
            raise ParseError(f"unexpected line {line!r} after end", lineno)
    if not kind:
        raise ParseError("missing representation header")
    if state != "done":
        raise ParseError("file ended before 'end'")
    if len(rows) != expected:
        raise ParseError(f"counts line announces {expected} rows, file has {len(rows)}")
    return kind, linearity, rows, width


def _parse_cdd(text: str) -> ExactPolytope:
    kind, linearity, rows, width = _cdd_body(text)
    if kind == "V":
        if linearity:
            raise ParseError("linearity in a V-representation describes lines, which are unbounded")
        points: List[QVector] = []
        for lineno, row in rows:
            if row[0] != 1:
                raise ParseError("only points (leading 1) are supported in V-representations", lineno)
            points.append(tuple(row[1:]))
        if not points:
            raise ParseError("V-representation has no points")
        return hull_from_vertices(points)
    lin = set(linearity)
    hs: List[Halfspace] = []
    for i, (lineno, row) in enumerate(rows, start=1):
        normal, offset = tuple(row[1:]), -row[0]
        if all(a == 0 for a in normal):
            if (offset > 0) or (i in lin and offset != 0):
                raise ParseError("constant row is infeasible", lineno)
            continue
        if i in lin:
            hs.extend(Hyperplane.make(normal, offset).halfspaces())
        else:
            hs.append(Halfspace.make(normal, offset))
    if not hs:
        raise ParseError("H-representation has no constraints")
    return vertices_from_halfspaces(hs)


def _parse_json(text: str) -> ExactPolytope:
    try:
        model = PolytopeModel.model_validate_json(text)
    except ValidationError as e:
        raise ParseError(f"invalid polytope JSON: {e.errors()[0]['msg']}") from e
    return from_model(model)


def from_model(model: PolytopeModel) -> ExactPolytope:
    vertices = [tuple(_q(x) for x in v) for v in model.vertices]
    facets = [Halfspace(tuple(_q(x) for x in h.normal), _q(h.offset)) for h in model.facets]
    equations = [Hyperplane(tuple(_q(x) for x in e.normal), _q(e.offset)) for e in model.equations]
    for v in vertices:
        if len(v) != model.ambient_dim:
            raise ParseError(f"vertex {v} does not have {model.ambient_dim} coordinates")
    if vertices and (facets or equations):
        try:
            return ExactPolytope.assemble(vertices, facets, equations, check=True)
        except InvalidDescription as e:
            raise ParseError(f"stored description is inconsistent: {e}") from e
    if vertices:
        return hull_from_vertices(vertices)
    if facets or equations:
        hs = list(facets)
        for e in equations:
            hs.extend(e.halfspaces())
        return vertices_from_halfspaces(hs)
    raise ParseError("polytope JSON has neither vertices nor facets")


def parse_polytope_file(text: str, fmt: Optional[str] = None) -> ExactPolytope:
    fmt = fmt or detect_format(text)
    if fmt == "json":
        return _parse_json(text)
    if fmt in ("ext", "ine"):
        return _parse_cdd(text)
    raise ValueError(f"unknown polytope format {fmt!r}; expected one of {FORMATS}")


def cached_build(
    cache: Optional[SimpleDiskCache],
    namespace: str,
    payload: Dict[str, Any],
    build: Callable[[], Tuple[ExactPolytope, Dict[str, Any]]],
) -> Tuple[ExactPolytope, Dict[str, Any]]:
    """Build a polytope and its census once; later calls reload and revalidate the stored copy."""
    if cache is not None:
        doc = cache.read_json(namespace, payload)
        if doc is not None:
            return from_model(PolytopeModel.model_validate(doc["polytope"])), doc["census"]
    p, census = build()
    if cache is not None:
        cache.write_json(namespace, payload, {"polytope": to_model(p).model_dump(), "census": census})
    return p, census
