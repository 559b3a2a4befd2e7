"""Pass/fail reports produced by the verification suites."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any


def digest(obj: Any) -> str:
    """Short stable hash of a JSON-able value (or anything with ``to_json``)."""
    if hasattr(obj, "to_json"):
        obj = obj.to_json()
    text = json.dumps(obj, sort_keys=True, default=str)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass
class Case:
    params: dict
    passed: bool
    lhs_hash: str = ""
    rhs_hash: str = ""
    note: str = ""

    def to_json(self) -> dict:
        out = {"params": self.params, "pass": self.passed,
               "lhs_hash": self.lhs_hash, "rhs_hash": self.rhs_hash}
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def from_json(cls, data: dict) -> Case:
        return cls(data["params"], data["pass"], data.get("lhs_hash", ""),
                   data.get("rhs_hash", ""), data.get("note", ""))


def compare(params: dict, lhs, rhs, note: str = "") -> Case:
    return Case(params, lhs == rhs, digest(lhs), digest(rhs), note)


def _case_key(case: Case):
    # params compare in insertion order; numbers numerically, anything else by text
    return [(k, (0, v, "") if isinstance(v, (int, float)) else (1, 0, str(v)))
            for k, v in case.params.items()]


@dataclass
class Report:
    check_name: str
    p: int
    cases: list[Case] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def failures(self) -> list[Case]:
        return [c for c in self.cases if not c.passed]

    def sort(self) -> Report:
        self.cases.sort(key=_case_key)
        return self

    def to_json(self) -> dict:
        return {"check_name": self.check_name, "p": self.p,
                "cases": [c.to_json() for c in self.cases]}

    @classmethod
    def from_json(cls, data: dict) -> Report:
        return cls(data["check_name"], data["p"], [Case.from_json(c) for c in data["cases"]])

    def summary(self) -> str:
        bad = len(self.failures())
        status = "PASS" if not bad else f"FAIL ({bad} failing)"
        return f"{self.check_name} p={self.p}: {len(self.cases)} cases, {status}"
