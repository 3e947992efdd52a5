"""Uniform result record for one inequality evaluation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

TOL_SCALAR = 1e-9
TOL_PSD = 1e-9

OK = "ok"
SKIPPED = "skipped"


@dataclass
class CheckRecord:
    """One evaluated inequality.

    ``lhs`` is always the side that should dominate, so ``margin = lhs - rhs``
    for scalar laws. Operator laws store the minimum eigenvalue of
    ``lhs - rhs`` in ``margin`` and the spectral scale in ``lhs``/``rhs``.
    ``tolerance`` is absolute; ``passed`` is ``margin >= -tolerance``.
    """

    law_id: str
    params: dict = field(default_factory=dict)
    lhs: float = math.nan
    rhs: float = math.nan
    margin: float = math.nan
    passed: bool = False
    tolerance: float = 0.0
    kind: str = "scalar"
    status: str = OK
    notes: str = ""

    @property
    def skipped(self) -> bool:
        return self.status == SKIPPED

    @property
    def failed(self) -> bool:
        return self.status == OK and not self.passed

    def with_params(self, **extra: Any) -> "CheckRecord":
        self.params = {**self.params, **extra}
        return self

    def to_dict(self) -> dict:
        def clean(x):
            if isinstance(x, float) and not math.isfinite(x):
                return None
            return x

        return {
            "law_id": self.law_id,
            "params": {k: clean(v) for k, v in self.params.items()},
            "lhs": clean(self.lhs),
            "rhs": clean(self.rhs),
            "margin": clean(self.margin),
            "pass": self.passed,
            "tolerance": self.tolerance,
            "kind": self.kind,
            "status": self.status,
            "notes": self.notes,
        }


def scalar_record(law_id: str, lhs: float, rhs: float, params: dict | None = None,
                  tol: float = TOL_SCALAR, notes: str = "") -> CheckRecord:
    """Record ``lhs >= rhs`` with relative tolerance ``tol * max(|lhs|, |rhs|, 1)``."""
    lhs, rhs = float(lhs), float(rhs)
    margin = lhs - rhs
    abs_tol = tol * max(abs(lhs), abs(rhs), 1.0)
    ok = math.isfinite(margin) and margin >= -abs_tol
    return CheckRecord(law_id, dict(params or {}), lhs, rhs, margin, ok, abs_tol, "scalar", OK, notes)


def operator_record(law_id: str, margin: float, scale: float, params: dict | None = None,
                    tol: float = TOL_PSD, notes: str = "") -> CheckRecord:
    """Record ``lhs ⪰ rhs`` from the minimum eigenvalue of the difference."""
    margin = float(margin)
    abs_tol = tol * max(1.0, float(scale))
    ok = math.isfinite(margin) and margin >= -abs_tol
    return CheckRecord(law_id, dict(params or {}), float(scale), math.nan, margin, ok, abs_tol, "operator", OK, notes)


def skipped_record(law_id: str, params: dict | None = None, reason: str = "", kind: str = "scalar") -> CheckRecord:
    return CheckRecord(law_id, dict(params or {}), kind=kind, status=SKIPPED, notes=reason)
