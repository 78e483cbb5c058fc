"""Run configuration: one flat JSON document, every field overridable from
the command line."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path


@dataclass
class Config:
    seed: int = 0
    trials: int = 100
    tolerances: dict[str, float] = field(default_factory=dict)
    grid_N: int = 64
    flow_steps: int = 256

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.grid_N < 8 or self.grid_N % 2:
            raise ValueError("grid_N must be even and >= 8")
        if self.flow_steps < 8:
            raise ValueError("flow_steps must be >= 8")
        for name, tol in self.tolerances.items():
            if not tol > 0:
                raise ValueError(f"tolerance for {name!r} must be positive")

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> Config:
        known = {"seed", "trials", "tolerances", "grid_N", "flow_steps"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> Config:
        return cls.from_dict(json.loads(Path(path).read_text()))
