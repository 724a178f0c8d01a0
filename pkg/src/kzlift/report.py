"""Check records and reports shared by the checkers and the CLI."""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
ERROR = "error"


@dataclass
class CheckRecord:
    check: str
    status: str
    instance: str = ""
    counterexample: Any = None
    detail: Any = None
    seconds: float | None = None

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def as_dict(self, timing: bool = False) -> dict:
        out = {"check": self.check, "instance": self.instance, "status": self.status}
        if self.counterexample is not None:
            out["counterexample"] = jsonable(self.counterexample)
        if self.detail is not None:
            out["detail"] = jsonable(self.detail)
        if timing and self.seconds is not None:
            out["seconds"] = round(self.seconds, 6)
        return out


@dataclass
class Report:
    records: list[CheckRecord] = field(default_factory=list)

    def add(self, check, ok, instance="", counterexample=None, detail=None, status=None):
        if status is None:
            status = PASS if ok else FAIL
        rec = CheckRecord(check, status, instance, counterexample, detail)
        self.records.append(rec)
        return rec

    def extend(self, other: "Report", prefix: str = ""):
        for r in other.records:
            if prefix:
                r = CheckRecord(prefix + r.check, r.status, r.instance, r.counterexample,
                                r.detail, r.seconds)
            self.records.append(r)
        return self

    @property
    def ok(self) -> bool:
        return all(r.status == PASS for r in self.records)

    @property
    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if r.status in (FAIL, ERROR)]

    def by_check(self, name: str) -> list[CheckRecord]:
        return [r for r in self.records if r.check == name]

    def passed(self, name: str) -> bool:
        recs = self.by_check(name)
        return bool(recs) and all(r.ok for r in recs)

    def __len__(self):
        return len(self.records)

    def summary(self) -> dict:
        counts: dict[str, int] = {}
        for r in self.records:
            counts[r.status] = counts.get(r.status, 0) + 1
        return counts


@contextmanager
def timed(record_holder: list):
    start = time.perf_counter()
    yield
    record_holder.append(time.perf_counter() - start)


def jsonable(value):
    """Best-effort conversion of checker payloads to JSON-ready data."""
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (frozenset, set)):
        return sorted((jsonable(v) for v in value), key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    return repr(value)
