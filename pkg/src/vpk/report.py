"""Check reports: records keyed by check id, canonical JSON and text output."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

REPORT_VERSION = 1
MAX_WITNESSES = 5


@dataclass
class Record:
    check: str
    status: str = "pass"  # pass | fail | inconclusive
    checked: int = 0
    failures: int = 0
    witnesses: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def tick(self, n: int = 1) -> None:
        self.checked += n

    def fail(self, witness: dict) -> None:
        self.status = "fail"
        self.failures += 1
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(witness)

    def inconclusive(self, witness: dict) -> None:
        if self.status == "pass":
            self.status = "inconclusive"
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(witness)

    def expect(self, ok: bool, witness: dict) -> bool:
        self.tick()
        if not ok:
            self.fail(witness)
        return ok

    def renamed(self, check: str, note: str = "") -> "Record":
        info = dict(self.info)
        if note:
            info["note"] = note
        return Record(check, self.status, self.checked, self.failures, list(self.witnesses), info)

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def to_dict(self) -> dict:
        d = {"check": self.check, "status": self.status, "checked": self.checked, "failures": self.failures}
        if self.witnesses:
            d["witnesses"] = self.witnesses
        if self.info:
            d["info"] = self.info
        return d


@dataclass
class Report:
    command: str
    seed: int = 0
    caps: dict = field(default_factory=dict)
    records: list = field(default_factory=list)
    timing: float | None = None

    def add(self, rec: Record) -> Record:
        self.records.append(rec)
        return rec

    def extend(self, other: "Report") -> None:
        self.records.extend(other.records)

    def get(self, check: str) -> Record:
        for r in self.records:
            if r.check == check:
                return r
        raise KeyError(check)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    def failed(self) -> list:
        return [r for r in self.records if r.status == "fail"]

    def to_dict(self, with_timing: bool = False) -> dict:
        recs = sorted(self.records, key=lambda r: r.check)
        d = {
            "report_version": REPORT_VERSION,
            "command": self.command,
            "seed": self.seed,
            "caps": self.caps,
            "records": [r.to_dict() for r in recs],
            "summary": {s: sum(r.status == s for r in recs) for s in ("pass", "fail", "inconclusive")},
        }
        if with_timing and self.timing is not None:
            d["timing_seconds"] = round(self.timing, 3)
        return d

    def to_json(self, with_timing: bool = False) -> str:
        return json.dumps(self.to_dict(with_timing), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.command}  (seed {self.seed})"]
        for r in sorted(self.records, key=lambda r: r.check):
            lines.append(f"  [{r.status:>12}] {r.check}  ({r.checked} checked, {r.failures} failed)")
            for w in r.witnesses:
                lines.append("      witness: " + json.dumps(w, sort_keys=True, ensure_ascii=False))
            for k, v in sorted(r.info.items()):
                lines.append(f"      {k}: {json.dumps(v, sort_keys=True, ensure_ascii=False)}")
        if self.timing is not None:
            lines.append(f"  time: {self.timing:.2f}s")
        return "\n".join(lines) + "\n"
