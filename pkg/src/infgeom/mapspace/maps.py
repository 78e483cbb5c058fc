"""Discretized smooth maps from the circle into a target manifold, and the
charts of the mapping manifold built from the target's exponential map.

The chart centred at ``f`` sends a nearby map ``g`` to the section
``theta -> exp_{f(theta)}^{-1}(g(theta))`` of the pullback of the tangent
bundle along ``f``; its inverse applies ``exp`` pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable

import numpy as np

from ..errors import OutsideChart, OutsideDomain
from .targets import EPS_INJ, Target, distance, log_rows, target_exp, wrap_angle
from .trig import GridS1, TrigInterpolant, is_node, spectral_derivative

if TYPE_CHECKING:
    from .diffeo import CircleDiffeo

__all__ = [
    "DiscretizedMap",
    "SectionAlongMap",
    "chart_forward",
    "chart_inverse",
    "chart_change",
    "evaluate",
    "compose_maps",
    "max_distance",
    "is_immersion",
    "immersion_openness_probe",
]

SPHERE_NORM_TOL = 1e-10
TANGENCY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DiscretizedMap:
    """Samples ``f(theta_j)`` of a map S^1 -> target, shape ``(N, target.dim)``."""

    grid: GridS1
    target: Target
    samples: np.ndarray

    def __post_init__(self):
        S = np.array(self.samples, dtype=float)
        if self.target.kind == "circle" and S.ndim == 1:
            S = S[:, None]
        if S.shape != (self.grid.N, self.target.dim):
            raise ValueError(f"samples must have shape {(self.grid.N, self.target.dim)}, got {S.shape}")
        if not np.all(np.isfinite(S)):
            raise ValueError("samples must be finite")
        if self.target.kind == "sphere2":
            dev = np.max(np.abs(np.linalg.norm(S, axis=1) - 1.0))
            if dev > SPHERE_NORM_TOL:
                raise ValueError(f"sphere samples off the unit sphere by {dev:.2e}")
        elif self.target.kind == "circle":
            S = wrap_angle(S)
        S.setflags(write=False)
        object.__setattr__(self, "samples", S)

    @classmethod
    def from_function(cls, N: int, target: Target, fn: Callable[[np.ndarray], np.ndarray]) -> DiscretizedMap:
        """Sample ``fn`` (vectorized over node angles) on an N-point grid."""
        grid = GridS1(N)
        vals = np.asarray(fn(grid.nodes), dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        if target.kind == "sphere2":
            vals = vals / np.linalg.norm(vals, axis=1, keepdims=True)
        return cls(grid, target, vals)

    @property
    def N(self) -> int:
        return self.grid.N

    def to_dict(self) -> dict:
        samples = self.samples[:, 0].tolist() if self.target.kind == "circle" else self.samples.tolist()
        return {"N": self.N, "target": str(self.target), "samples": samples}

    @classmethod
    def from_dict(cls, data: dict) -> DiscretizedMap:
        return cls(GridS1(int(data["N"])), Target.parse(data["target"]), np.asarray(data["samples"], dtype=float))


@dataclass(frozen=True, eq=False)
class SectionAlongMap:
    """Tangent vectors ``vecs[j]`` at ``base(theta_j)``: a point of the model
    space of the chart centred at ``base``."""

    base: DiscretizedMap
    vecs: np.ndarray

    def __post_init__(self):
        V = np.array(self.vecs, dtype=float)
        if self.base.target.kind == "circle" and V.ndim == 1:
            V = V[:, None]
        if V.shape != self.base.samples.shape:
            raise ValueError(f"vecs must have shape {self.base.samples.shape}")
        if self.base.target.kind == "sphere2":
            dots = np.abs(np.sum(self.base.samples * V, axis=1))
            bad = np.flatnonzero(dots > TANGENCY_TOL)
            if bad.size:
                raise ValueError(f"vector at node {bad[0]} is not tangent to the sphere")
        V.setflags(write=False)
        object.__setattr__(self, "vecs", V)

    def __add__(self, other: SectionAlongMap) -> SectionAlongMap:
        return SectionAlongMap(self.base, self.vecs + other.vecs)

    def __mul__(self, s: float) -> SectionAlongMap:
        return SectionAlongMap(self.base, s * self.vecs)

    __rmul__ = __mul__

    @classmethod
    def zero(cls, base: DiscretizedMap) -> SectionAlongMap:
        return cls(base, np.zeros_like(base.samples))


def _check_compatible(f: DiscretizedMap, g: DiscretizedMap) -> None:
    if f.grid != g.grid or f.target != g.target:
        raise ValueError("maps live on different grids or targets")


def chart_forward(f: DiscretizedMap, g: DiscretizedMap, eps_inj: float = EPS_INJ) -> SectionAlongMap:
    """``u_f(g)``: pointwise inverse exponential of ``g`` seen from ``f``."""
    _check_compatible(f, g)
    vecs, bad = log_rows(f.target, f.samples, g.samples, eps_inj)
    if np.any(bad):
        j = int(np.flatnonzero(bad)[0])
        raise OutsideChart(f"g(theta_{j}) is outside the chart domain around f(theta_{j})", index=j)
    if f.target.kind == "sphere2":
        # remove rounding-level normal components so the section is tangent
        vecs = vecs - np.sum(vecs * f.samples, axis=1, keepdims=True) * f.samples
    return SectionAlongMap(f, vecs)


def chart_inverse(f: DiscretizedMap, s: SectionAlongMap, eps_inj: float = EPS_INJ) -> DiscretizedMap:
    """``u_f^{-1}(s)``: apply the exponential pointwise."""
    if s.base is not f:
        _check_compatible(f, s.base)
        if not np.array_equal(f.samples, s.base.samples):
            raise OutsideDomain("section is not based at f")
    lengths = np.linalg.norm(s.vecs, axis=1)
    limit = {"circle": np.pi, "sphere2": np.pi - eps_inj}.get(f.target.kind, np.inf)
    bad = np.flatnonzero(lengths >= limit)
    if bad.size:
        j = int(bad[0])
        raise OutsideDomain(f"section vector at node {j} leaves the exponential's domain", index=j)
    out = target_exp(f.target, f.samples, s.vecs)
    if f.target.kind == "sphere2":
        # renormalize moved points only, so a zero vector returns f(theta_j) exactly
        moved = lengths > 0
        out[moved] /= np.linalg.norm(out[moved], axis=1, keepdims=True)
    return DiscretizedMap(f.grid, f.target, out)


def chart_change(f: DiscretizedMap, g: DiscretizedMap, s: SectionAlongMap, eps_inj: float = EPS_INJ) -> SectionAlongMap:
    """``(u_f o u_g^{-1})(s)`` for a section ``s`` based at ``g``."""
    return chart_forward(f, chart_inverse(g, s, eps_inj), eps_inj)


def max_distance(f: DiscretizedMap, g: DiscretizedMap) -> float:
    _check_compatible(f, g)
    return float(np.max(distance(f.target, f.samples, g.samples)))


def _circle_lift(f: DiscretizedMap) -> tuple[np.ndarray, int]:
    ang = f.samples[:, 0]
    lift = np.unwrap(ang)
    closing = np.mod(ang[0] - ang[-1] + np.pi, 2 * np.pi) - np.pi
    winding = int(round((lift[-1] + closing - lift[0]) / (2 * np.pi)))
    return lift, winding


def _evaluator(f: DiscretizedMap) -> Callable[[np.ndarray], np.ndarray]:
    nodes = f.grid.nodes
    if f.target.kind == "circle":
        lift, w = _circle_lift(f)
        interp = TrigInterpolant(lift - w * nodes)
        return lambda th: wrap_angle(interp(th) + w * th)[..., None]
    interp = TrigInterpolant(f.samples)
    if f.target.kind == "sphere2":
        def ev_sphere(th):
            v = interp(th)
            return v / np.linalg.norm(v, axis=-1, keepdims=True)

        return ev_sphere
    return interp


def evaluate(f: DiscretizedMap, theta: float) -> np.ndarray:
    """Value of ``f`` at an arbitrary angle by trigonometric interpolation.

    Circle-valued maps are interpolated through their lift minus the winding
    term; sphere-valued maps are interpolated in R^3 and renormalized.
    Grid nodes return the stored sample.
    """
    j = is_node(theta, f.N)
    if j is not None:
        return f.samples[j].copy()
    return _evaluator(f)(np.asarray(theta, dtype=float))


def compose_maps(f: DiscretizedMap, g: CircleDiffeo) -> DiscretizedMap:
    """``f o g`` resampled on the grid."""
    if g.N != f.N:
        raise ValueError("grid sizes differ")
    vals = _evaluator(f)(g.lift)
    for i, th in enumerate(g.lift):
        j = is_node(th, f.N)
        if j is not None:
            vals[i] = f.samples[j]
    return DiscretizedMap(f.grid, f.target, vals)


def is_immersion(f: DiscretizedMap, rtol: float = 1e-8) -> bool:
    """Whether the spectral derivative is nonzero at every node, relative to
    the size of the curve."""
    if f.target.kind != "euclidean":
        raise ValueError("immersion test is implemented for euclidean targets")
    speed = np.linalg.norm(spectral_derivative(f.samples), axis=1)
    scale = float(np.max(np.linalg.norm(f.samples, axis=1)))
    scale = scale if scale > 0 else 1.0
    return bool(np.all(speed > rtol * scale))


def immersion_openness_probe(
    f: DiscretizedMap, delta: float, trials: int, rng: np.random.Generator, modes: int = 4
) -> float:
    """Fraction of random smooth perturbations of sup-size ``delta`` that
    remain immersions."""
    nodes = f.grid.nodes
    k = np.arange(1, modes + 1)
    accepted = 0
    for _ in range(trials):
        a = rng.normal(size=(modes, f.target.m))
        b = rng.normal(size=(modes, f.target.m))
        pert = np.cos(np.outer(nodes, k)) @ a + np.sin(np.outer(nodes, k)) @ b
        pert *= delta / max(np.max(np.abs(pert)), 1e-300)
        accepted += is_immersion(DiscretizedMap(f.grid, f.target, f.samples + pert))
    return accepted / trials
