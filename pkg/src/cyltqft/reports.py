"""Structured check reports with deterministic rendering.

Every validator and law suite in the package returns a Report: a list of
(check, instance) records, each carrying a pass flag and an optional
witness string.  Rendering is deterministic — records are sorted, JSON is
emitted with sorted keys — so two runs over the same input are
byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckRecord:
    check: str
    instance: str
    passed: bool
    witness: str | None = None
    detail: str | None = None


@dataclass
class Report:
    kind: str
    records: list[CheckRecord] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    config: dict[str, object] = field(default_factory=dict)

    def add(self, check: str, instance: str, passed: bool,
            witness: str | None = None, detail: str | None = None) -> None:
        self.records.append(CheckRecord(check, instance, passed, witness, detail))

    def extend(self, other: Report) -> None:
        self.records.extend(other.records)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.records)

    def failed(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]

    def failed_checks(self) -> list[str]:
        return sorted({r.check for r in self.records if not r.passed})

    def sorted_records(self) -> list[CheckRecord]:
        return sorted(self.records,
                      key=lambda r: (r.check, r.instance, r.passed))

    def to_jsonable(self) -> dict:
        return {
            "kind": self.kind,
            "passed": self.ok,
            "config": {k: self.config[k] for k in sorted(self.config)},
            "notes": list(self.notes),
            "counts": {
                "total": len(self.records),
                "failed": len(self.failed()),
            },
            "records": [
                {
                    "check": r.check,
                    "instance": r.instance,
                    "passed": r.passed,
                    "witness": r.witness,
                    "detail": r.detail,
                }
                for r in self.sorted_records()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable(), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"report: {self.kind}"]
        for k in sorted(self.config):
            lines.append(f"config: {k}={self.config[k]}")
        for note in self.notes:
            lines.append(f"note: {note}")
        for r in self.sorted_records():
            status = "PASS" if r.passed else "FAIL"
            line = f"{status} {r.check} :: {r.instance}"
            if r.detail:
                line += f" [{r.detail}]"
            if r.witness and not r.passed:
                line += f" witness={r.witness}"
            lines.append(line)
        verdict = "OK" if self.ok else "VIOLATIONS"
        lines.append(f"result: {verdict} "
                     f"({len(self.records) - len(self.failed())}/"
                     f"{len(self.records)} checks passed)")
        return "\n".join(lines) + "\n"
