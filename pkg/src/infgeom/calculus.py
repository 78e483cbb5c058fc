"""Curve-based calculus on finite sequences.

Maps are plain callables ``FinSeq -> FinSeq``; :class:`MapHandle` adds an
optional support hint. Derivatives are estimated along the straight curve
``t -> x + t v`` by central differences with one Richardson step.
Products ``E x F`` are encoded inside a single :class:`FinSeq` by
interleaving (see :func:`infgeom.seqspace.pair`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NonFinite
from .seqspace import FinSeq, pair, weak_norm

__all__ = [
    "MapHandle",
    "CurveHandle",
    "TwoArgHandle",
    "default_step",
    "richardson_derivative",
    "derivative_at",
    "central_difference",
    "directional_derivative",
    "chain_rule_residual",
    "curry",
    "uncurry",
    "ev",
    "ins",
    "comp",
    "MackeyResult",
    "mackey_check",
    "ProbeEntry",
    "smoothness_probe",
    "smooth_map_corpus",
]


@dataclass(frozen=True)
class MapHandle:
    """A deterministic map between finite sequences.

    If ``domain_dim_hint`` is set the map only looks at the first
    ``domain_dim_hint`` coordinates of its argument; the handle enforces
    this by truncating inputs before evaluation.
    """

    fn: Callable[[FinSeq], FinSeq]
    domain_dim_hint: int | None = None

    def __call__(self, x: FinSeq) -> FinSeq:
        if self.domain_dim_hint is not None and x.active_len > self.domain_dim_hint:
            x = FinSeq(x.entries[: self.domain_dim_hint])
        return self.fn(x)


@dataclass(frozen=True)
class CurveHandle:
    fn: Callable[[float], FinSeq]
    curve_id: str = "curve"

    def __call__(self, t: float) -> FinSeq:
        return self.fn(t)


@dataclass(frozen=True)
class TwoArgHandle:
    fn: Callable[[FinSeq, FinSeq], FinSeq]

    def __call__(self, x: FinSeq, y: FinSeq) -> FinSeq:
        return self.fn(x, y)


def _checked(value: FinSeq) -> FinSeq:
    if not np.all(np.isfinite(value.entries)):
        raise NonFinite(f"non-finite coordinate in {value!r}")
    return value


def default_step(x: FinSeq, v: FinSeq) -> float:
    return 1e-4 * (1.0 + weak_norm(x)) / (1.0 + weak_norm(v))


def _richardson(a: np.ndarray, b: np.ndarray, c: np.ndarray, d: np.ndarray, h0: float) -> np.ndarray:
    # a, b at t +- h0; c, d at t +- h0/2
    coarse = (a - b) / (2 * h0)
    fine = (c - d) / h0
    return fine + (fine - coarse) / 3.0


def richardson_derivative(phi: Callable[[float], np.ndarray], t: float, h0: float) -> np.ndarray:
    """Derivative of an array-valued curve at ``t``: central differences at
    ``h0`` and ``h0/2`` combined by one Richardson step (error O(h0^4))."""
    if not h0 > 0:
        raise ValueError("step must be positive")
    a, b, c, d = (np.asarray(phi(t + s), dtype=float) for s in (h0, -h0, h0 / 2, -h0 / 2))
    return _richardson(a, b, c, d, h0)


def derivative_at(curve: Callable[[float], FinSeq], t: float, h0: float) -> FinSeq:
    """Derivative of a curve in the sequence space at ``t``."""
    if not h0 > 0:
        raise ValueError("step must be positive")
    samples = [_checked(curve(t + s)) for s in (h0, -h0, h0 / 2, -h0 / 2)]
    n = max(v.active_len for v in samples)
    return FinSeq(_richardson(*(v.padded(n) for v in samples), h0))


def central_difference(f: Callable[[FinSeq], FinSeq], x: FinSeq, v: FinSeq, h: float) -> FinSeq:
    """Plain central difference ``(f(x + h v) - f(x - h v)) / 2h`` (O(h^2))."""
    return (_checked(f(x + h * v)) - _checked(f(x - h * v))) / (2 * h)


def directional_derivative(
    f: Callable[[FinSeq], FinSeq], x: FinSeq, v: FinSeq, h0: float | None = None
) -> FinSeq:
    """Estimate ``df(x)v = lim (f(x + t v) - f(x)) / t``."""
    if h0 is None:
        h0 = default_step(x, v)
    return derivative_at(lambda t: f(x + t * v), 0.0, h0)


def chain_rule_residual(
    f: Callable[[FinSeq], FinSeq],
    g: Callable[[FinSeq], FinSeq],
    x: FinSeq,
    v: FinSeq,
    relative: bool = False,
) -> float:
    """``|d(f o g)(x)v - df(g(x))(dg(x)v)|`` with both sides estimated numerically.

    With ``relative=True`` the residual is divided by ``max(1, |lhs|)``.
    """
    lhs = directional_derivative(lambda y: f(g(y)), x, v)
    inner = directional_derivative(g, x, v)
    rhs = directional_derivative(f, g(x), inner)
    res = weak_norm(lhs - rhs)
    if relative:
        res /= max(1.0, weak_norm(lhs))
    return res


# -- cartesian closedness --------------------------------------------------


def curry(F: Callable[[FinSeq, FinSeq], FinSeq]) -> Callable[[FinSeq], MapHandle]:
    def curried(x: FinSeq) -> MapHandle:
        return MapHandle(lambda y: F(x, y))

    return curried


def uncurry(G: Callable[[FinSeq], Callable[[FinSeq], FinSeq]]) -> TwoArgHandle:
    return TwoArgHandle(lambda x, y: G(x)(y))


def ev(f: Callable[[FinSeq], FinSeq], x: FinSeq) -> FinSeq:
    return f(x)


def ins(x: FinSeq) -> MapHandle:
    """``ins(x)(y) = (x, y)`` in the interleaved pair encoding."""
    return MapHandle(lambda y: pair(x, y))


def comp(f: Callable[[FinSeq], FinSeq], g: Callable[[FinSeq], FinSeq]) -> MapHandle:
    return MapHandle(lambda x: f(g(x)))


# -- Mackey convergence ----------------------------------------------------


@dataclass(frozen=True)
class MackeyResult:
    accepted: bool
    witness: list[float]
    support_bound: int
    scaled_sup: float

    def __iter__(self):
        # allows ``ok, lam = mackey_check(...)``
        yield self.accepted
        yield self.witness


def mackey_check(
    xs: Sequence[FinSeq], x: FinSeq, support_bound: int | None = None
) -> MackeyResult:
    """Finite-prefix diagnostic for Mackey convergence ``xs -> x``.

    The candidate witness is ``lam_n = 1 / max(|x_n - x|_inf, 1/n)`` made
    non-decreasing by taking suffix minima, so ``|lam_n (x_n - x)|_inf <= 1``
    holds by construction. The prefix is accepted when every difference has
    support at most ``support_bound`` and the witness actually grows
    (``lam_last > lam_first``). Without an explicit bound, the largest
    support seen in the first half of the prefix is used: supports that keep
    growing in the second half are read as escaping.
    """
    if not xs:
        raise ValueError("need at least one term")
    diffs = [xn - x for xn in xs]
    raw = np.array([1.0 / max(d.sup_norm(), 1.0 / n) for n, d in enumerate(diffs, start=1)])
    lam = np.minimum.accumulate(raw[::-1])[::-1]
    supports = [d.active_len for d in diffs]
    if support_bound is None:
        half = max(1, math.ceil(len(diffs) / 2))
        support_bound = max(supports[:half])
    scaled_sup = max((lam[i] * diffs[i].sup_norm() for i in range(len(diffs))), default=0.0)
    bounded_support = max(supports) <= support_bound
    growing = len(lam) == 1 or lam[-1] > lam[0]
    return MackeyResult(
        accepted=bool(bounded_support and growing),
        witness=lam.tolist(),
        support_bound=support_bound,
        scaled_sup=float(scaled_sup),
    )


# -- smoothness falsifier --------------------------------------------------


@dataclass(frozen=True)
class ProbeEntry:
    curve_id: str
    order: int
    quotient_max: float
    bounded_flag: bool
    quotients: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        return {
            "curve_id": self.curve_id,
            "order": self.order,
            "quotient_max": self.quotient_max,
            "bounded_flag": self.bounded_flag,
        }


def _central_quotient(
    phi: Callable[[float], np.ndarray], t0: float, h: float, k: int
) -> tuple[float, float]:
    """k-th central difference quotient on nodes ``t0 + (k/2 - j) h``, plus
    the rounding floor below which it is indistinguishable from zero."""
    acc = np.zeros(0)
    mag = 0.0
    for j in range(k + 1):
        val = phi(t0 + (k / 2 - j) * h)
        mag = max(mag, float(np.max(np.abs(val), initial=0.0)))
        acc = _padd(acc, (-1) ** j * math.comb(k, j) * val)
    q = float(np.max(np.abs(acc), initial=0.0)) / h**k
    floor = 2**k * 64 * np.finfo(float).eps * max(mag, 1e-300) / h**k
    return q, floor


def _padd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = max(a.shape[0], b.shape[0])
    out = np.zeros(n)
    out[: a.shape[0]] += a
    out[: b.shape[0]] += b
    return out


def smoothness_probe(
    f: Callable[[FinSeq], FinSeq],
    curves: Sequence[Callable[[float], FinSeq]],
    order: int,
    t0: float = 0.0,
    h_max: float = 0.1,
    levels: int = 7,
    slope_tol: float = -0.5,
) -> list[ProbeEntry]:
    """Difference-quotient falsifier for smoothness along curves.

    For each curve ``c`` and each order ``k = 1..order`` the central k-th
    difference quotient of ``f o c`` at ``t0`` is evaluated on the ladder
    ``h = h_max / 2**i``. A quotient family is flagged unbounded when its
    log-log slope against ``h`` falls below ``slope_tol`` (it blows up
    like a negative power of ``h``). Passing says nothing definitive.
    """
    if not 1 <= order <= 4:
        raise ValueError("order must be between 1 and 4")
    report: list[ProbeEntry] = []
    hs = h_max / 2.0 ** np.arange(levels)
    for idx, c in enumerate(curves):
        cid = getattr(c, "curve_id", f"curve{idx}")

        def phi(t: float, c=c) -> np.ndarray:
            return _checked(f(c(t))).entries

        for k in range(1, order + 1):
            q, floor = np.array([_central_quotient(phi, t0, h, k) for h in hs]).T
            qmax = float(q.max())
            live = q > floor
            if live.sum() < 2:
                # at most one level rises above rounding noise: consistent with zero
                bounded = True
            else:
                slope = np.polyfit(np.log(hs[live]), np.log(q[live]), 1)[0]
                bounded = bool(slope >= slope_tol)
            report.append(ProbeEntry(cid, k, qmax, bounded, tuple(q.tolist())))
    return report


# -- fixed corpus of smooth test maps ----------------------------------------


def _c(x: FinSeq, i: int) -> float:
    return x[i]


def smooth_map_corpus() -> dict[str, MapHandle]:
    """Polynomial and trigonometric maps on the first four coordinates,
    used for chain-rule and linearity checks."""
    A = np.array([[1.0, 2.0, 0.0, -1.0], [0.5, -1.0, 3.0, 0.0], [0.0, 1.0, 1.0, 2.0], [2.0, 0.0, -0.5, 1.0]])
    return {
        "sqnorm": MapHandle(lambda x: FinSeq([x.dot(x)])),
        "scale3": MapHandle(lambda x: 3.0 * x, 4),
        "linear": MapHandle(lambda x: FinSeq(A @ x.padded(max(4, x.active_len))[:4]), 4),
        "cubic": MapHandle(
            lambda x: FinSeq([_c(x, 0) ** 3 - _c(x, 1) * _c(x, 2), _c(x, 0) * _c(x, 1), _c(x, 2) ** 2 * _c(x, 3), _c(x, 3)]),
            4,
        ),
        "trig": MapHandle(
            lambda x: FinSeq(
                [
                    math.sin(_c(x, 0)) + math.cos(_c(x, 1)),
                    math.sin(_c(x, 0) * _c(x, 2)),
                    math.cos(_c(x, 3)) * _c(x, 1),
                    math.sin(_c(x, 2) - _c(x, 3)),
                ]
            ),
            4,
        ),
    }
