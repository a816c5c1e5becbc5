"""Structured pass/fail records produced by every verification routine."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class VerificationReport:
    check_name: str
    sigma: tuple[int, ...]
    status: str
    worst_residual: float = 0.0
    tolerance: float = 0.0
    details: list[dict[str, Any]] = field(default_factory=list)

    @classmethod
    def exact(cls, name, sigma, ok: bool, details=None) -> VerificationReport:
        """Exact identity check: residual 0 on success, inf otherwise."""
        return cls(name, _levels(sigma), PASS if ok else FAIL,
                   0.0 if ok else math.inf, 0.0, list(details or []))

    @classmethod
    def numeric(cls, name, sigma, residual: float, tolerance: float, details=None) -> VerificationReport:
        residual = float(residual)
        ok = math.isfinite(residual) and residual <= tolerance
        return cls(name, _levels(sigma), PASS if ok else FAIL, residual, tolerance, list(details or []))

    @classmethod
    def skipped(cls, name, sigma, reason: str) -> VerificationReport:
        return cls(name, _levels(sigma), SKIPPED, 0.0, 0.0, [{"reason": reason}])

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def to_json_obj(self) -> dict:
        return {
            "check": self.check_name,
            "sigma": list(self.sigma),
            "status": self.status,
            "worst_residual": _jsonable(self.worst_residual),
            "tolerance": self.tolerance,
            "cases": [{k: _jsonable(v) for k, v in c.items()} for c in self.details],
        }

    def summary(self) -> str:
        sig = "{" + ",".join(map(str, self.sigma)) + "}"
        return f"[{self.status.upper():7s}] {self.check_name:24s} sigma={sig:12s} residual={self.worst_residual:.3e} tol={self.tolerance:.1e}"


def _levels(sigma) -> tuple[int, ...]:
    return tuple(getattr(sigma, "levels", sigma))


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    if hasattr(v, "item"):
        return _jsonable(v.item())
    return v


def reports_to_json(reports) -> str:
    return json.dumps([r.to_json_obj() for r in reports], indent=2, sort_keys=False)
