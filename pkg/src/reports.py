#!/usr/bin/env python3
"""
Report models shared by the verification suites and the CLI.
All models round-trip through JSON via pydantic.
"""

import time
from typing import Any, Callable, Dict, List, Literal, Optional

from pydantic import BaseModel, Field


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: Optional[str] = None


class IdentityReport(BaseModel):
    name: str
    status: Literal["pass", "fail", "skip"]
    witness: Optional[str] = None
    provenance: Optional[str] = None
    checks: List[CheckResult] = Field(default_factory=list)
    skipped: List[str] = Field(default_factory=list)
    metrics: Dict[str, Any] = Field(default_factory=dict)
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    @classmethod
    def from_checks(cls, name: str, checks: List[CheckResult], metrics: Optional[Dict[str, Any]] = None,
                    provenance: Optional[str] = None, skipped: Optional[List[str]] = None) -> "IdentityReport":
        failing = [c for c in checks if not c.passed]
        witness = None
        if failing:
            first = failing[0]
            witness = f"{first.name}: {first.detail}" if first.detail else first.name
        return cls(
            name=name,
            status="fail" if failing else "pass",
            witness=witness,
            provenance=provenance,
            checks=checks,
            skipped=skipped or [],
            metrics=metrics or {},
        )

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def render_text(self) -> str:
        marker = {"pass": "✅", "fail": "❌", "skip": "⚠️"}[self.status]
        lines = [f"{marker} {self.name} ({len(self.checks)} checks, {self.elapsed_ms:.1f} ms)"]
        if self.witness:
            lines.append(f"   witness: {self.witness}")
        for item in self.skipped:
            lines.append(f"   ⚠️ skipped: {item}")
        for key, value in self.metrics.items():
            lines.append(f"   {key}: {value}")
        return "\n".join(lines)


class VerificationReport(BaseModel):
    suite: str
    items: List[IdentityReport]
    wall_times_ms: Dict[str, float] = Field(default_factory=dict)
    passed: bool
    version: str
    fingerprint: str

    @classmethod
    def build(cls, suite: str, items: List[IdentityReport], version: str, fingerprint: str) -> "VerificationReport":
        return cls(
            suite=suite,
            items=items,
            wall_times_ms={item.name: item.elapsed_ms for item in items},
            passed=all(item.passed for item in items),
            version=version,
            fingerprint=fingerprint,
        )

    def render_text(self) -> str:
        total = len(self.items)
        good = sum(1 for item in self.items if item.passed)
        lines = [f"📊 Suite: {self.suite}", "=" * 50]
        lines.extend(item.render_text() for item in self.items)
        lines.append("=" * 50)
        lines.append(f"{'✅' if self.passed else '❌'} {good}/{total} passed (version {self.version}, conventions {self.fingerprint[:12]})")
        return "\n".join(lines)


class BenchResult(BaseModel):
    workload: str
    repetitions: int
    min_ms: float
    median_ms: float
    peak_terms: int
    workers: int
    output_hash: str
    golden_hash: Optional[str] = None
    hash_matches: Optional[bool] = None
    metrics: Dict[str, Any] = Field(default_factory=dict)


def check(name: str, condition: bool, detail: Optional[str] = None) -> CheckResult:
    return CheckResult(name=name, passed=bool(condition), detail=None if condition else detail)


def timed(func: Callable[[], IdentityReport]) -> IdentityReport:
    """Run a report-producing function and record its wall time."""
    start = time.perf_counter()
    report = func()
    report.elapsed_ms = round((time.perf_counter() - start) * 1000.0, 3)
    return report
