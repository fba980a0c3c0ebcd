"""Verification reports: ordered pass/fail/skipped entries with witnesses."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

__all__ = ["PASS", "FAIL", "SKIPPED", "CheckResult", "VerificationReport", "timed"]

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


def _jsonable(x):
    from .multilinear import Difference
    from .scalars import Laurent, format_scalar

    if isinstance(x, Difference):
        return x.as_dict()
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (str, bool)) or x is None:
        return x
    if isinstance(x, int):
        return x
    try:
        import numpy as np

        if isinstance(x, np.integer):
            return int(x)
    except ImportError:  # pragma: no cover
        pass
    if isinstance(x, Laurent) or hasattr(x, "denominator"):
        return format_scalar(x)
    return str(x)


@dataclass
class CheckResult:
    check_id: str
    subject: Tuple = ()
    status: str = PASS
    witness: Optional[Any] = None
    seconds: float = 0.0
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def sort_key(self):
        return (self.check_id, tuple(str(s) for s in self.subject))

    def as_dict(self, with_time: bool = True) -> Dict[str, Any]:
        d = {
            "id": self.check_id,
            "subject": _jsonable(list(self.subject)),
            "status": self.status,
        }
        if self.witness is not None:
            d["witness"] = _jsonable(self.witness)
        if self.detail:
            d["detail"] = self.detail
        if with_time:
            d["seconds"] = round(self.seconds, 6)
        return d

    def line(self, with_time: bool = True) -> str:
        subj = ",".join(str(s) for s in self.subject)
        head = f"[{self.status.upper():7}] {self.check_id}"
        if subj:
            head += f" ({subj})"
        if with_time:
            head += f"  {self.seconds:.3f}s"
        if self.detail:
            head += f"  {self.detail}"
        if self.witness is not None and self.status != PASS:
            head += f"\n          witness: {json.dumps(_jsonable(self.witness), sort_keys=True)}"
        return head


@dataclass
class VerificationReport:
    title: str = ""
    checks: List[CheckResult] = field(default_factory=list)

    def add(self, check_id: str, subject=(), ok: Optional[bool] = True, witness=None,
            seconds: float = 0.0, detail: str = "") -> CheckResult:
        if ok is None:
            status = SKIPPED
        else:
            status = PASS if ok else FAIL
        res = CheckResult(check_id, tuple(subject), status, None if ok else witness, seconds, detail)
        self.checks.append(res)
        return res

    def extend(self, other: "VerificationReport") -> "VerificationReport":
        self.checks.extend(other.checks)
        return self

    def merged(self, others: Iterable["VerificationReport"]) -> "VerificationReport":
        for o in others:
            self.extend(o)
        return self

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    @property
    def all_passed(self) -> bool:
        return bool(self.checks) and all(c.status == PASS for c in self.checks)

    def counts(self) -> Dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if c.status == FAIL]

    def find(self, check_id: str) -> List[CheckResult]:
        return [c for c in self.checks if c.check_id == check_id]

    def as_dict(self, with_time: bool = True) -> Dict[str, Any]:
        return {
            "title": self.title,
            "summary": self.counts(),
            "checks": [c.as_dict(with_time) for c in self.checks],
        }

    def to_json(self, with_time: bool = True) -> str:
        return json.dumps(self.as_dict(with_time), indent=2, sort_keys=False)

    def render(self, with_time: bool = True) -> str:
        lines = [self.title] if self.title else []
        lines += [c.line(with_time) for c in self.checks]
        cnt = self.counts()
        lines.append(f"{cnt[PASS]} passed, {cnt[FAIL]} failed, {cnt[SKIPPED]} skipped")
        return "\n".join(lines)


@contextmanager
def timed():
    """Yields a one-element list that receives the elapsed wall-clock time."""
    box = [0.0]
    t0 = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = time.perf_counter() - t0
