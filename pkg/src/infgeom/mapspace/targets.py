"""Target manifolds with closed-form Riemannian exponential and logarithm.

Points are rows of shape ``(d,)``: an angle for the circle, a unit vector in
R^3 for the round 2-sphere, a vector for euclidean space. All functions are
vectorized over leading axes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from ..errors import CutLocus

__all__ = ["Target", "EPS_INJ", "wrap_angle", "target_exp", "target_log", "log_rows", "distance"]

EPS_INJ = 1e-6
TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Target:
    kind: str
    m: int = 0

    def __post_init__(self):
        if self.kind not in ("circle", "sphere2", "euclidean"):
            raise ValueError(f"unknown target kind {self.kind!r}")
        if self.kind == "euclidean" and self.m < 1:
            raise ValueError("euclidean target needs a dimension m >= 1")

    @classmethod
    def circle(cls) -> Target:
        return cls("circle")

    @classmethod
    def sphere2(cls) -> Target:
        return cls("sphere2")

    @classmethod
    def euclidean(cls, m: int) -> Target:
        return cls("euclidean", m)

    @property
    def dim(self) -> int:
        """Length of the ambient coordinate row for a point or tangent vector."""
        return {"circle": 1, "sphere2": 3}.get(self.kind, self.m)

    def __str__(self) -> str:
        return f"euclidean({self.m})" if self.kind == "euclidean" else self.kind

    @classmethod
    def parse(cls, text: str) -> Target:
        text = text.strip()
        if text in ("circle", "sphere2"):
            return cls(text)
        match = re.fullmatch(r"euclidean\((\d+)\)", text)
        if match:
            return cls.euclidean(int(match.group(1)))
        raise ValueError(f"cannot parse target {text!r}")


def wrap_angle(a: np.ndarray) -> np.ndarray:
    """Reduce angles to ``[0, 2 pi)``."""
    r = np.mod(a, TWO_PI)
    return np.where(r >= TWO_PI, 0.0, r)


def _signed_angle(d: np.ndarray) -> np.ndarray:
    # representative of d mod 2 pi in [-pi, pi)
    return np.mod(d + np.pi, TWO_PI) - np.pi


def target_exp(target: Target, p: np.ndarray, v: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    if target.kind == "circle":
        return wrap_angle(p + v)
    if target.kind == "euclidean":
        return p + v
    nv = np.linalg.norm(v, axis=-1, keepdims=True)
    safe = np.where(nv == 0.0, 1.0, nv)
    return np.cos(nv) * p + np.where(nv == 0.0, 0.0, np.sin(nv) / safe) * v


def log_rows(
    target: Target, p: np.ndarray, q: np.ndarray, eps_inj: float = EPS_INJ
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized logarithm; returns ``(v, bad)`` where ``bad`` flags pairs
    outside the injectivity domain."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if target.kind == "euclidean":
        return q - p, np.zeros(p.shape[:-1], dtype=bool)
    if target.kind == "circle":
        d = _signed_angle(q - p)
        bad = np.abs(d[..., 0]) >= np.pi
        return d, bad
    dot = np.clip(np.sum(p * q, axis=-1, keepdims=True), -1.0, 1.0)
    w = q - dot * p
    sw = np.linalg.norm(w, axis=-1, keepdims=True)
    theta = np.arctan2(sw, dot)
    scale = np.where(sw == 0.0, 0.0, theta / np.where(sw == 0.0, 1.0, sw))
    bad = (theta[..., 0] >= np.pi - eps_inj) | ((sw[..., 0] == 0.0) & (dot[..., 0] < 0))
    return scale * w, bad


def target_log(target: Target, p: np.ndarray, q: np.ndarray, eps_inj: float = EPS_INJ) -> np.ndarray:
    v, bad = log_rows(target, p, q, eps_inj)
    if np.any(bad):
        raise CutLocus("points are outside the injectivity domain of the exponential")
    return v


def distance(target: Target, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Pointwise geodesic distance (used for comparisons and chart guards)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if target.kind == "circle":
        return np.abs(_signed_angle(q - p))[..., 0]
    if target.kind == "euclidean":
        return np.linalg.norm(q - p, axis=-1)
    dot = np.sum(p * q, axis=-1)
    cross = np.linalg.norm(np.cross(p, q), axis=-1)
    return np.arctan2(cross, dot)
