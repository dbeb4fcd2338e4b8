from __future__ import annotations

import csv
import io
import json
from typing import Any, Dict, Iterable, List, Optional

from pydantic import BaseModel, Field


class CheckResult(BaseModel):
    name: str
    instance: str
    passed: bool
    # vertex pairs, geodesics, counts; values are JSON-ready
    witness: Dict[str, Any] = Field(default_factory=dict)
    message: str = ""


class VerificationReport(BaseModel):
    suite: str
    seed: Optional[int] = None
    instances: List[str] = Field(default_factory=list)
    checks: List[CheckResult] = Field(default_factory=list)
    tables: Dict[str, List[Dict[str, Any]]] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def summary(self) -> Dict[str, int]:
        failed = len(self.failures)
        return {"checks": len(self.checks), "passed": len(self.checks) - failed, "failed": failed}

    def add(self, name: str, instance: str, passed: bool, message: str = "", **witness: Any) -> CheckResult:
        result = CheckResult(name=name, instance=instance, passed=bool(passed), witness=witness, message=message)
        self.checks.append(result)
        if instance not in self.instances:
            self.instances.append(instance)
        return result

    def extend(self, other: "VerificationReport") -> "VerificationReport":
        for inst in other.instances:
            if inst not in self.instances:
                self.instances.append(inst)
        self.checks.extend(other.checks)
        self.tables.update(other.tables)
        return self


def merge(suite: str, seed: Optional[int], parts: Iterable[VerificationReport]) -> VerificationReport:
    out = VerificationReport(suite=suite, seed=seed)
    for part in parts:
        out.extend(part)
    return out


def _jsonable(value: Any) -> Any:
    return json.loads(json.dumps(value, default=str))


def render_json(report: VerificationReport) -> str:
    doc = {
        "suite": report.suite,
        "seed": report.seed,
        "passed": report.passed,
        "summary": report.summary(),
        "instances": report.instances,
        "checks": [_jsonable(c.model_dump()) for c in report.checks],
        "tables": _jsonable(report.tables),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def render_csv(report: VerificationReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["suite", "seed", "check", "instance", "passed", "message", "witness"])
    for c in report.checks:
        writer.writerow(
            [
                report.suite,
                "" if report.seed is None else report.seed,
                c.name,
                c.instance,
                "pass" if c.passed else "fail",
                c.message,
                json.dumps(_jsonable(c.witness), sort_keys=True),
            ]
        )
    return buf.getvalue()
