"""Structured pass/fail reports produced by the verification routines."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    name: str
    passed: bool
    detail: Any = None

    def to_json(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "detail": _jsonable(self.detail)}


@dataclass
class Report:
    name: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: Any = None) -> Check:
        check = Check(name, bool(passed), detail)
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str | None = None) -> None:
        for c in other.checks:
            name = f"{prefix}.{c.name}" if prefix else c.name
            self.checks.append(Check(name, c.passed, c.detail))

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
            "data": _jsonable(self.data),
        }


def _jsonable(obj: Any) -> Any:
    from .rational import UnitRational

    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, UnitRational):
        return {"num": obj.num, "den": obj.den}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "tolist"):
        return _jsonable(obj.tolist())
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return str(obj)
