"""The unit sphere of the weak inner product, with its stereographic atlas.

Points are finite sequences of weak norm one. The chart ``u_plus`` projects
from the pole ``a`` onto the hyperplane ``a^perp``; ``u_minus`` projects from
``-a``. Both are defined by closed formulas, as are their inverses, the
transition ``y -> y/|y|^2`` and the great-circle geodesics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

from .errors import NotInCodomain, NotOnSphere, NotTangent, PoleProximity, RayExcluded, ZeroInput
from .seqspace import FinSeq, e, weak_inner, weak_norm

__all__ = [
    "SPHERE_TOL",
    "TANGENT_TOL",
    "EPS_POLE",
    "SpherePoint",
    "StereoChart",
    "SphereTangent",
    "stereo_forward",
    "stereo_inverse",
    "transition",
    "extended_chart",
    "tangent_check",
    "geodesic",
    "geodesic_velocity",
]

SPHERE_TOL = 1e-10
TANGENT_TOL = 1e-10
EPS_POLE = 1e-8


@dataclass(frozen=True)
class SpherePoint:
    coords: FinSeq

    def __post_init__(self):
        if not isinstance(self.coords, FinSeq):
            object.__setattr__(self, "coords", FinSeq(self.coords))
        dev = abs(weak_inner(self.coords, self.coords) - 1.0)
        if dev > SPHERE_TOL:
            raise NotOnSphere(f"|<x,x> - 1| = {dev:.3e} exceeds {SPHERE_TOL}")

    @classmethod
    def normalized(cls, x: FinSeq) -> SpherePoint:
        n = weak_norm(x)
        if n == 0.0:
            raise ZeroInput("cannot normalize the zero sequence")
        return cls(x / n)

    def to_json(self) -> str:
        return self.coords.to_json()


def _pt(x: SpherePoint | FinSeq) -> FinSeq:
    return x.coords if isinstance(x, SpherePoint) else x


@dataclass(frozen=True)
class StereoChart:
    """Stereographic chart with pole ``a``; ``sign='plus'`` omits ``a``,
    ``sign='minus'`` omits ``-a``."""

    pole: SpherePoint = field(default_factory=lambda: SpherePoint(e(1)))
    sign: Literal["plus", "minus"] = "plus"
    eps_pole: float = EPS_POLE

    def __post_init__(self):
        if not isinstance(self.pole, SpherePoint):
            object.__setattr__(self, "pole", SpherePoint(self.pole))
        if self.sign not in ("plus", "minus"):
            raise ValueError(f"sign must be 'plus' or 'minus', got {self.sign!r}")

    @property
    def a(self) -> FinSeq:
        return self.pole.coords

    def partner(self) -> StereoChart:
        return StereoChart(self.pole, "minus" if self.sign == "plus" else "plus", self.eps_pole)


@dataclass(frozen=True)
class SphereTangent:
    foot: SpherePoint
    vec: FinSeq

    def __post_init__(self):
        if not tangent_check(self.foot, self.vec):
            raise NotTangent("vector is not orthogonal to its foot point")


def stereo_forward(chart: StereoChart, x: SpherePoint | FinSeq) -> FinSeq:
    x = _pt(x)
    a = chart.a
    xa = weak_inner(x, a)
    if chart.sign == "plus":
        if xa > 1.0 - chart.eps_pole:
            raise PoleProximity(f"<x,a> = {xa!r} too close to the excluded pole a")
        denom = 1.0 - xa
    else:
        if xa < -1.0 + chart.eps_pole:
            raise PoleProximity(f"<x,a> = {xa!r} too close to the excluded pole -a")
        denom = 1.0 + xa
    return (x - xa * a) / denom


def stereo_inverse(chart: StereoChart, y: FinSeq) -> SpherePoint:
    a = chart.a
    if abs(weak_inner(y, a)) > 1e-10:
        raise NotInCodomain("chart coordinates must be orthogonal to the pole")
    r2 = weak_inner(y, y)
    c = (r2 - 1.0) / (r2 + 1.0)
    if chart.sign == "minus":
        c = -c
    return SpherePoint(c * a + (2.0 / (r2 + 1.0)) * y)


def transition(y: FinSeq) -> FinSeq:
    """The change of charts ``u_minus o u_plus^{-1}``: inversion in the unit sphere."""
    r2 = weak_inner(y, y)
    if r2 == 0.0:
        raise ZeroInput("transition is undefined at the origin")
    return y / r2


def extended_chart(z: FinSeq, chart: StereoChart | None = None) -> FinSeq:
    """Extension of ``u_plus`` to the ambient space minus the ray ``[0, inf) a``.

    The ``a``-component of the result is ``|z| - 1``, so the sphere is the
    zero level of that coordinate.
    """
    chart = chart or StereoChart()
    a = chart.a
    r = weak_norm(z)
    if r == 0.0:
        raise RayExcluded("z = 0 lies on the excluded ray")
    u = z / r
    if weak_inner(u, a) > 1.0 - chart.eps_pole:
        raise RayExcluded("z is a non-negative multiple of the pole")
    plus = chart if chart.sign == "plus" else chart.partner()
    return stereo_forward(plus, u) + (r - 1.0) * a


def tangent_check(x: SpherePoint | FinSeq, v: FinSeq, tol: float = TANGENT_TOL) -> bool:
    return abs(weak_inner(_pt(x), v)) <= tol


def _tangent_vec(v: SphereTangent | FinSeq) -> FinSeq:
    return v.vec if isinstance(v, SphereTangent) else v


def geodesic(x: SpherePoint | FinSeq, v: SphereTangent | FinSeq, t: float) -> SpherePoint:
    """``cos(|v| t) x + sin(|v| t) v/|v|``; constant at ``x`` when ``v = 0``."""
    x = _pt(x)
    v = _tangent_vec(v)
    nv = weak_norm(v)
    if nv == 0.0:
        return SpherePoint(x)
    return SpherePoint(math.cos(nv * t) * x + (math.sin(nv * t) / nv) * v)


def geodesic_velocity(x: SpherePoint | FinSeq, v: SphereTangent | FinSeq, t: float) -> FinSeq:
    """Velocity of :func:`geodesic` at time ``t`` (tangent at the moved point)."""
    x = _pt(x)
    v = _tangent_vec(v)
    nv = weak_norm(v)
    if nv == 0.0:
        return FinSeq()
    return (-nv * math.sin(nv * t)) * x + math.cos(nv * t) * v
