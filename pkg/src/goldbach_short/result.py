"""Shared pass/fail record for every numeric check in the package.

One flat record type keeps the JSON/CSV emitters trivial and lets the
verifier assemble reports from any mix of checks without adapters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a single bounded-quantity check.

    observed and bound carry whatever the check compares (a ratio and
    its cap, a count difference and its slack); details holds the
    inputs and intermediates a reader needs to recompute the line.
    """

    name: str
    passed: bool
    observed: float
    bound: float
    details: dict[str, Any] = field(default_factory=dict)

    def describe(self) -> str:
        state = "pass" if self.passed else "FAIL"
        return f"{self.name}: {state} (observed {self.observed:.12g}, bound {self.bound:.12g})"

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "observed": self.observed,
            "bound": self.bound,
            "details": self.details,
        }
