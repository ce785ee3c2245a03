"""Verification records and their JSON/CSV/table renderings.

Every identity check in the package funnels into a :class:`VerificationReport`
so the CLI and the test suite agree on what "pass" means.  The JSON schema is
fixed: ``{id, params, lhs, rhs, abs_err, rel_err, tol, pass, meta}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


def _rel_err(lhs: float, rhs: float) -> float:
    scale = max(abs(lhs), abs(rhs))
    if scale == 0.0:
        return 0.0
    return abs(lhs - rhs) / scale


@dataclass
class VerificationReport:
    """One checked identity: both sides, the tolerance, and the verdict.

    ``check`` selects the pass rule:

    * ``"rel"``  -- relative error below ``tol`` (default),
    * ``"abs"``  -- absolute error below ``tol``,
    * ``"le"``   -- ``lhs <= rhs + tol``,
    * ``"ge"``   -- ``lhs >= rhs - tol``.
    """

    id: str
    lhs: float
    rhs: float
    tol: float
    params: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    check: str = "rel"

    @property
    def abs_err(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def rel_err(self) -> float:
        return _rel_err(self.lhs, self.rhs)

    @property
    def passed(self) -> bool:
        if self.check == "rel":
            return self.rel_err < self.tol
        if self.check == "abs":
            return self.abs_err < self.tol
        if self.check == "le":
            return self.lhs <= self.rhs + self.tol
        if self.check == "ge":
            return self.lhs >= self.rhs - self.tol
        raise ValueError(f"unknown check rule {self.check!r}")

    def to_dict(self) -> dict:
        meta = dict(self.meta)
        meta["check"] = self.check
        return {
            "id": self.id,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "tol": self.tol,
            "pass": self.passed,
            "meta": meta,
        }


def sort_reports(reports: list[VerificationReport]) -> list[VerificationReport]:
    return sorted(reports, key=lambda r: r.id)


def reports_to_json(reports: list[VerificationReport]) -> str:
    records = [r.to_dict() for r in sort_reports(reports)]
    return json.dumps(records, indent=2, sort_keys=True) + "\n"


def reports_to_csv(reports: list[VerificationReport]) -> str:
    lines = ["id,lhs,rhs,abs_err,rel_err,tol,pass"]
    for r in sort_reports(reports):
        lines.append(
            f"{r.id},{r.lhs!r},{r.rhs!r},{r.abs_err!r},{r.rel_err!r},{r.tol!r},{int(r.passed)}"
        )
    return "\n".join(lines) + "\n"


def reports_to_table(reports: list[VerificationReport]) -> str:
    """Fixed-width human-readable summary, one row per identity."""
    rows = [("identity", "lhs", "rhs", "rel_err", "tol", "ok")]
    for r in sort_reports(reports):
        rows.append(
            (
                r.id,
                f"{r.lhs:.9g}",
                f"{r.rhs:.9g}",
                f"{r.rel_err:.3g}",
                f"{r.tol:.3g}",
                "pass" if r.passed else "FAIL",
            )
        )
    widths = [max(len(row[j]) for row in rows) for j in range(len(rows[0]))]
    out = []
    for i, row in enumerate(rows):
        out.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            out.append("  ".join("-" * w for w in widths))
    return "\n".join(out) + "\n"
