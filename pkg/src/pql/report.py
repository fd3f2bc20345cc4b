"""Check reports shared by every verification routine."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

from . import __version__


@dataclass
class CheckItem:
    name: str
    expected: Any
    observed: Any
    tolerance: float | str = "exact"
    passed: bool = True

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "expected": _jsonable(self.expected),
            "observed": _jsonable(self.observed),
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass
class CheckReport:
    check_id: str
    params: dict = field(default_factory=dict)
    status: str = "pass"
    items: list[CheckItem] = field(default_factory=list)
    counterexample: Any = None
    duration_ms: float | None = None
    seed: int = 0
    library_version: str = __version__
    message: str | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def add(self, name, expected, observed, tolerance: float | str = "exact",
            passed: bool | None = None, witness: Any = None) -> bool:
        """Record one item; a failing item flips the status and keeps the first witness."""
        if passed is None:
            passed = _within(expected, observed, tolerance)
        self.items.append(CheckItem(name, expected, observed, tolerance, bool(passed)))
        if not passed and self.status != "error":
            self.status = "fail"
            if self.counterexample is None:
                self.counterexample = witness if witness is not None else {"item": name, "observed": observed}
        return bool(passed)

    def to_dict(self, include_timing: bool = False) -> dict:
        return {
            "check_id": self.check_id,
            "params": _jsonable(self.params),
            "status": self.status,
            "items": [it.to_dict() for it in self.items],
            "counterexample": _jsonable(self.counterexample),
            "duration_ms": round(self.duration_ms, 3) if (include_timing and self.duration_ms is not None) else None,
            "seed": self.seed,
            "library_version": self.library_version,
            "message": self.message,
        }

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True, indent=2) + "\n"

    def summary_line(self) -> str:
        mark = {"pass": "PASS", "fail": "FAIL", "error": "ERROR"}[self.status]
        return f"[{mark}] {self.check_id} {json.dumps(_jsonable(self.params), sort_keys=True)}"


def _within(expected, observed, tolerance) -> bool:
    if tolerance == "exact" or tolerance is None:
        return expected == observed
    return abs(float(expected) - float(observed)) <= float(tolerance)


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return repr(value)
        return float(f"{value:.15g}")
    if hasattr(value, "item") and callable(value.item):
        return _jsonable(value.item())
    if isinstance(value, (str, int, bool)) or value is None:
        return value
    return repr(value)
