from __future__ import annotations

from typing import Any, Dict, Optional


class PolysumError(Exception):
    """Base class of every error raised by the package."""


class ConfigError(PolysumError):
    pass


# exact arithmetic
class DegenerateSpan(PolysumError):
    pass


class ZeroVector(PolysumError):
    pass


class LPError(PolysumError):
    pass


# geometry
class EmptyPolytope(PolysumError):
    pass


class UnboundedPolyhedron(PolysumError):
    pass


class EmptySection(PolysumError):
    pass


class NotFullDimensional(PolysumError):
    pass


class InvalidDescription(PolysumError):
    pass


class AmbiguousMinimizer(PolysumError):
    def __init__(self, indices: Any) -> None:
        super().__init__(f"objective is minimized at several vertices: {list(indices)}")
        self.indices = tuple(indices)


class GraphError(PolysumError):
    pass


# minkowski
class DecompositionFailure(PolysumError):
    pass


class EmptyErosion(PolysumError):
    pass


# generators
class CensusMismatch(PolysumError):
    def __init__(self, family: str, diff: Dict[str, Any]) -> None:
        parts = ", ".join(f"{k}: expected {v[0]}, observed {v[1]}" for k, v in sorted(diff.items()))
        super().__init__(f"{family} census mismatch ({parts})")
        self.family = family
        self.diff = diff


class ApexInAffineHull(PolysumError):
    pass


class NonConvexBulge(PolysumError):
    pass


# io
class ParseError(PolysumError):
    def __init__(self, message: str, line: Optional[int] = None) -> None:
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line
