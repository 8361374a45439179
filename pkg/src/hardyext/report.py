"""Pass/fail records shared by the verification suites and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np


@dataclass
class Check:
    name: str
    passed: bool
    value: object
    bound: object = None


def _encode(v):
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    if isinstance(v, np.ndarray):
        return [_encode(u) for u in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_encode(u) for u in v]
    if isinstance(v, dict):
        return {k: _encode(u) for k, u in v.items()}
    return v


@dataclass
class Report:
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed, value, bound=None) -> None:
        self.checks.append(Check(name, bool(passed), value, bound))

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.value, c.bound))

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "value": _encode(c.value), "bound": _encode(c.bound)}
                for c in self.checks
            ],
        }
