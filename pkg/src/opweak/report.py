"""Inequality bookkeeping shared by all verification routines.

Library code never asserts a bound; it records a :class:`Check` and lets the
caller decide what a failure means.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

DEFAULT_SLACK = 1e-9


@dataclass(frozen=True)
class Check:
    """One evaluated inequality ``lhs <= rhs`` (or an equality residual)."""

    name: str
    lhs: float
    rhs: float
    passed: bool
    index: int | None = None
    note: str = ""

    @property
    def ratio(self) -> float:
        return safe_ratio(self.lhs, self.rhs)

    def to_dict(self) -> dict[str, Any]:
        d = {"name": self.name, "lhs": _num(self.lhs), "rhs": _num(self.rhs), "passed": self.passed}
        if self.index is not None:
            d["index"] = self.index
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "data": {k: _num(v) for k, v in self.data.items()},
        }


def _num(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return v
    if isinstance(v, np.integer):
        return int(v)
    return v


def safe_ratio(num: float, den: float) -> float:
    """``num/den`` with 0/0 -> 0 and x/0 -> inf."""
    if den > 0:
        return num / den
    return 0.0 if num <= 0 else math.inf


def leq(name: str, lhs: float, rhs: float, slack: float = DEFAULT_SLACK,
        floor: float = 0.0, note: str = "") -> Check:
    """Record ``lhs <= rhs * (1 + slack) + floor``."""
    lhs, rhs = float(lhs), float(rhs)
    return Check(name, lhs, rhs, bool(lhs <= rhs * (1.0 + slack) + floor), note=note)


def leq_vec(name: str, lhs, rhs, slack: float = DEFAULT_SLACK, floor: float = 0.0) -> Check:
    """Entrywise ``lhs[k] <= rhs[k] * (1 + slack) + floor``; reports the worst index."""
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if lhs.shape != rhs.shape:
        raise ValueError(f"shape mismatch {lhs.shape} vs {rhs.shape}")
    if lhs.size == 0:
        return Check(name, 0.0, 0.0, True)
    excess = lhs - (rhs * (1.0 + slack) + floor)
    k = int(np.argmax(excess))
    ok = bool(excess[k] <= 0.0)
    return Check(name, float(lhs[k]), float(rhs[k]), ok, index=None if ok else k)


def close(name: str, a: float, b: float, tol: float, note: str = "") -> Check:
    """Record ``|a - b| <= tol`` as an equality check (lhs is the gap)."""
    gap = abs(float(a) - float(b))
    return Check(name, gap, float(tol), bool(gap <= tol), note=note)
