"""Orientation-preserving diffeomorphisms of the circle and vector fields.

A diffeomorphism is stored through its lift on the grid, ``g(theta_j)`` with
``g(theta + 2 pi) = g(theta) + 2 pi``. Its periodic part ``g(theta) - theta``
is interpolated trigonometrically, which defines ``g`` between nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import FlowBreakdown, NotDiffeo
from .trig import GridS1, TrigInterpolant, spectral_derivative

__all__ = [
    "VectorFieldS1",
    "CircleDiffeo",
    "compose_diffeo",
    "invert_diffeo",
    "flow_exp",
    "lie_bracket",
    "usual_bracket",
    "sup_distance",
]

ROOT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class VectorFieldS1:
    """Field ``X(theta) d/dtheta`` sampled on the grid."""

    grid: GridS1
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(-1)
        if v.shape != (self.grid.N,):
            raise ValueError(f"expected {self.grid.N} values")
        if not np.all(np.isfinite(v)):
            raise ValueError("vector field values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, N: int, fn) -> VectorFieldS1:
        grid = GridS1(N)
        return cls(grid, np.broadcast_to(np.asarray(fn(grid.nodes), dtype=float), (N,)))

    def __add__(self, other: VectorFieldS1) -> VectorFieldS1:
        return VectorFieldS1(self.grid, self.values + other.values)

    def __sub__(self, other: VectorFieldS1) -> VectorFieldS1:
        return VectorFieldS1(self.grid, self.values - other.values)

    def __mul__(self, s: float) -> VectorFieldS1:
        return VectorFieldS1(self.grid, s * self.values)

    __rmul__ = __mul__

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))

    def derivative(self) -> np.ndarray:
        return spectral_derivative(self.values)


@dataclass(frozen=True, eq=False)
class CircleDiffeo:
    lift: np.ndarray

    def __post_init__(self):
        lift = np.array(self.lift, dtype=float).reshape(-1)
        N = lift.shape[0]
        grid = GridS1(N)
        if not np.all(np.isfinite(lift)):
            raise NotDiffeo("lift has non-finite values")
        periodic = lift - grid.nodes
        slope = 1.0 + spectral_derivative(periodic)
        if np.any(slope <= 0.0):
            j = int(np.flatnonzero(slope <= 0.0)[0])
            raise NotDiffeo(f"lift is not increasing at node {j}")
        steps = np.diff(np.append(lift, lift[0] + 2 * np.pi))
        if np.any(steps <= 0.0):
            raise NotDiffeo("lift samples are not increasing with winding number 1")
        lift.setflags(write=False)
        object.__setattr__(self, "lift", lift)

    @property
    def N(self) -> int:
        return self.lift.shape[0]

    @property
    def grid(self) -> GridS1:
        return GridS1(self.N)

    @property
    def periodic(self) -> np.ndarray:
        return self.lift - self.grid.nodes

    @classmethod
    def identity(cls, N: int) -> CircleDiffeo:
        return cls(GridS1(N).nodes)

    @classmethod
    def rotation(cls, N: int, angle: float) -> CircleDiffeo:
        return cls(GridS1(N).nodes + angle)

    @classmethod
    def from_periodic(cls, N: int, fn) -> CircleDiffeo:
        """Diffeo ``theta + fn(theta)`` for a 2 pi-periodic ``fn``."""
        nodes = GridS1(N).nodes
        return cls(nodes + np.broadcast_to(np.asarray(fn(nodes), dtype=float), (N,)))

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.lift, self.grid.nodes))

    def interpolant(self) -> TrigInterpolant:
        return TrigInterpolant(self.periodic)

    def __call__(self, theta) -> np.ndarray:
        """Lift evaluated at arbitrary real angles."""
        theta = np.asarray(theta, dtype=float)
        return theta + self.interpolant()(theta)

    def to_dict(self) -> dict:
        return {"N": self.N, "lift": self.lift.tolist()}


def sup_distance(g: CircleDiffeo, h: CircleDiffeo) -> float:
    """Sup-norm distance of two lifts at the nodes."""
    return float(np.max(np.abs(g.lift - h.lift)))


def compose_diffeo(g: CircleDiffeo, h: CircleDiffeo) -> CircleDiffeo:
    """``g o h``: the lift of ``g`` evaluated at the lift values of ``h``."""
    if g.N != h.N:
        raise ValueError("grid sizes differ")
    return CircleDiffeo(h.lift + g.interpolant()(h.lift))


def invert_diffeo(g: CircleDiffeo, tol: float = ROOT_TOL, maxiter: int = 200) -> CircleDiffeo:
    """Solve ``g(phi_j) = theta_j`` at every node by bracketed Newton iteration.

    The lift is strictly increasing, so each equation has a unique root and
    a bisection bracket is always available; Newton steps that leave the
    bracket are replaced by bisection.
    """
    p = g.interpolant()
    nodes = g.grid.nodes
    bound = float(np.max(np.abs(g.periodic))) + 1.0
    lo = nodes - bound
    hi = nodes + bound
    # widen until the residual changes sign (interpolant may overshoot the samples)
    for _ in range(60):
        flo = lo + p(lo) - nodes
        fhi = hi + p(hi) - nodes
        if np.all(flo <= 0) and np.all(fhi >= 0):
            break
        lo = np.where(flo > 0, lo - bound, lo)
        hi = np.where(fhi < 0, hi + bound, hi)
    else:
        raise NotDiffeo("could not bracket the inverse")
    x = nodes - p(nodes)
    x = np.clip(x, lo, hi)
    for _ in range(maxiter):
        fx = x + p(x) - nodes
        lo = np.where(fx <= 0, x, lo)
        hi = np.where(fx >= 0, x, hi)
        dfx = 1.0 + p.derivative(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = x - fx / dfx
        ok = (dfx > 0) & (newton > lo) & (newton < hi)
        x_new = np.where(ok, newton, 0.5 * (lo + hi))
        done = np.max(np.abs(x_new - x)) <= tol
        x = x_new
        if done:
            break
    else:
        raise NotDiffeo("inverse iteration did not converge")
    return CircleDiffeo(x)


def flow_exp(X: VectorFieldS1, steps: int) -> CircleDiffeo:
    """Time-one flow of ``theta' = X(theta)`` from every node, by classical RK4
    with ``steps`` equal steps; ``X`` is evaluated through its trigonometric
    interpolant."""
    if steps < 8:
        raise ValueError("steps must be at least 8")
    field = TrigInterpolant(X.values)
    theta = X.grid.nodes.copy()
    h = 1.0 / steps
    for _ in range(steps):
        k1 = field(theta)
        k2 = field(theta + 0.5 * h * k1)
        k3 = field(theta + 0.5 * h * k2)
        k4 = field(theta + h * k3)
        theta = theta + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    try:
        return CircleDiffeo(theta)
    except NotDiffeo as exc:
        raise FlowBreakdown(f"flow is not resolved at this grid/step size: {exc}") from exc


def usual_bracket(X: VectorFieldS1, Y: VectorFieldS1) -> VectorFieldS1:
    """``[X, Y] = X Y' - Y X'`` for fields on the circle."""
    if X.grid != Y.grid:
        raise ValueError("fields live on different grids")
    return VectorFieldS1(X.grid, X.values * Y.derivative() - Y.values * X.derivative())


def lie_bracket(X: VectorFieldS1, Y: VectorFieldS1) -> VectorFieldS1:
    """Bracket of the Lie algebra of Diff(S^1): the negative of :func:`usual_bracket`."""
    return -1.0 * usual_bracket(X, Y)
