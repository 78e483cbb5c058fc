from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Case:
    name: str
    metric: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.metric <= self.threshold)

    def to_dict(self) -> dict:
        return {"name": self.name, "metric": self.metric, "threshold": self.threshold, "pass": self.passed}


@dataclass
class Report:
    suite: str
    cases: list[Case] = field(default_factory=list)
    wall_time_ms: int = 0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def to_dict(self, timing: bool = True) -> dict:
        out = {"suite": self.suite, "cases": [c.to_dict() for c in self.cases]}
        if timing:
            out["wall_time_ms"] = self.wall_time_ms
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True)

    def summary_lines(self) -> list[str]:
        lines = []
        for c in self.cases:
            flag = "PASS" if c.passed else "FAIL"
            lines.append(f"{flag}  {c.name:<45s} {c.metric:.3e} <= {c.threshold:.1e}")
        return lines
