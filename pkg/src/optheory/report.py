"""Check records and the versioned JSON report emitted by the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

SCHEMA_VERSION = 1

PASS = "pass"
FAIL = "fail"
INFO = "info"

# axiom: the theory itself is malformed; claim: a premise of the algebraic
# construction fails for this input; informational: measured, never gating.
AXIOM = "axiom"
CLAIM = "claim"
INFORMATIONAL = "informational"


@dataclass(frozen=True)
class Check:
    name: str
    verdict: str
    residual: float | None = None
    category: str = AXIOM
    detail: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict != FAIL

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "category": self.category,
            "verdict": self.verdict,
            "residual": _plain(self.residual),
            "detail": _plain(self.detail),
        }


def check(name: str, residual: float, bound: float, category: str = AXIOM, **detail) -> Check:
    """Pass/fail record for ``residual <= bound``."""
    residual = float(residual)
    verdict = PASS if residual <= bound else FAIL
    return Check(name, verdict, residual, category, {"bound": bound, **detail})


def info(name: str, residual: float | None = None, **detail) -> Check:
    return Check(name, INFO, None if residual is None else float(residual), INFORMATIONAL, detail)


def all_passed(checks) -> bool:
    return all(c.passed for c in checks)


@dataclass
class Report:
    command: str
    theory: str
    tolerances: dict[str, float]
    checks: list[Check]
    version: str
    seed: int | None = None
    data: dict[str, Any] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return 0 if all_passed(self.checks) else 1

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "theory": self.theory,
            "tool_version": self.version,
            "seed": self.seed,
            "tolerances": _plain(self.tolerances),
            "summary": {
                "passed": all_passed(self.checks),
                "axiom_violations": [c.name for c in self.checks if c.verdict == FAIL and c.category == AXIOM],
                "claim_failures": [c.name for c in self.checks if c.verdict == FAIL and c.category == CLAIM],
                "informational": [c.name for c in self.checks if c.verdict == INFO],
            },
            "checks": [c.to_dict() for c in self.checks],
            "data": _plain(self.data),
            "timings": _plain(self.timings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.command} [{self.theory}]  tool {self.version}"]
        for c in self.checks:
            res = "" if c.residual is None else f"  residual={c.residual:.3e}"
            lines.append(f"  [{c.verdict.upper():4s}] {c.name} ({c.category}){res}")
        for key, value in self.data.items():
            if np.isscalar(value):
                lines.append(f"  {key}: {value}")
        lines.append("OK" if self.exit_code == 0 else "FAILED")
        return "\n".join(lines) + "\n"


def _plain(obj):
    """Convert numpy/complex values into JSON-safe builtins."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        if obj.imag == 0:
            return _plain(obj.real)
        return [_plain(obj.real), _plain(obj.imag)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not np.isfinite(x):
            return str(x)
        return x
    return obj
