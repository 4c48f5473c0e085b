"""Check reports and their text/JSON serializations."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from . import fintop
from .fintop import ContMap, FinSpace, Subobject

VERDICTS = ("pass", "fail", "bounded-pass")


@dataclass
class CheckResult:
    check: str
    verdict: str
    bound: int | None = None
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    duration: float | None = None


@dataclass
class Report:
    scenario: str
    results: list[CheckResult] = field(default_factory=list)

    @property
    def summary(self) -> dict:
        counts = {v: 0 for v in VERDICTS}
        for r in self.results:
            counts[r.verdict] += 1
        counts["checks"] = len(self.results)
        return counts

    @property
    def exit_code(self) -> int:
        return 1 if any(r.verdict == "fail" for r in self.results) else 0

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "results": [asdict(r) for r in self.results],
            "summary": self.summary,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Report":
        return cls(obj["scenario"], [CheckResult(**r) for r in obj["results"]])


def jsonable(obj):
    """Turn spaces, maps and subobjects into plain JSON values."""
    if isinstance(obj, FinSpace):
        return {"form": fintop.canonical_form(obj), **fintop.space_to_json(obj)}
    if isinstance(obj, ContMap):
        return {"dom": list(obj.dom.points), "cod": list(obj.cod.points), "map": obj.as_labels()}
    if isinstance(obj, Subobject):
        return {"ambient": list(obj.ambient.points), "carrier": obj.labels}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return repr(obj)


def emit_report(r: Report, fmt: str = "text") -> bytes:
    if fmt == "json":
        return (json.dumps(r.to_json(), sort_keys=True, indent=2) + "\n").encode()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [f"scenario: {r.scenario}"]
    for res in r.results:
        bound = "-" if res.bound is None else str(res.bound)
        head = f"{res.verdict.upper():<13} {res.check:<40} bound={bound}"
        if res.duration is not None:
            head += f" time={res.duration:.3f}s"
        lines.append(head)
        for key in sorted(res.details):
            value = res.details[key]
            if key == "table" and isinstance(value, list):
                lines.append("    table:")
                for row in value:
                    lines.append("      " + "  ".join(f"{k}={row[k]}" for k in sorted(row)))
            else:
                lines.append(f"    {key}: {json.dumps(value, sort_keys=True)}")
        for w in res.witnesses:
            lines.append(f"    witness: {json.dumps(w, sort_keys=True)}")
    s = r.summary
    lines.append(
        f"summary: {s['checks']} checks, {s['pass']} pass, {s['bounded-pass']} bounded-pass, {s['fail']} fail"
    )
    return ("\n".join(lines) + "\n").encode()


def parse_report(data: bytes) -> Report:
    return Report.from_json(json.loads(data))
