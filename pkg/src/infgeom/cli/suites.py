"""Per-module verification suites.

Every case draws its random inputs from ``case_rng(cfg.seed, case_name)``,
so a case's result does not depend on which other cases run or in what
order. A case returns one scalar metric, compared against its threshold.
"""

from __future__ import annotations

import math
import time
from typing import Callable

import numpy as np

from .. import calculus, frames, glinf, sphere
from ..errors import GeometryError, UnknownSuite
from ..mapspace import (
    CircleDiffeo,
    DiscretizedMap,
    SectionAlongMap,
    Target,
    VectorFieldS1,
    chart_change,
    chart_forward,
    chart_inverse,
    compose_diffeo,
    flow_exp,
    immersion_openness_probe,
    invert_diffeo,
    lie_bracket,
    max_distance,
    sup_distance,
)
from ..sampling import (
    case_rng,
    random_algebra,
    random_diffeo,
    random_finseq,
    random_frame,
    random_gl,
    random_orthogonal,
    random_perp,
    random_trig_poly,
    random_unit,
    random_upper_positive,
)
from ..seqspace import FinSeq, e, weak_inner, weak_norm
from .config import Config
from .report import Case, Report

SUITE_NAMES = ("calculus", "sphere", "frames", "glinf", "mapspace")

CaseFn = Callable[[Config, np.random.Generator], float]
_REGISTRY: dict[str, list[tuple[str, float, CaseFn]]] = {name: [] for name in SUITE_NAMES}


def _case(suite: str, name: str, threshold: float):
    def register(fn: CaseFn) -> CaseFn:
        _REGISTRY[suite].append((f"{suite}.{name}", threshold, fn))
        return fn

    return register


def case_names(suite: str = "all") -> list[str]:
    return [name for s in _suites(suite) for name, _, _ in _REGISTRY[s]]


def _suites(name: str) -> tuple[str, ...]:
    if name == "all":
        return SUITE_NAMES
    if name not in SUITE_NAMES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES + ('all',))}")
    return (name,)


def run_suite(name: str, cfg: Config | None = None) -> Report:
    """Run every case of one suite (or of all suites) and collect a report."""
    cfg = cfg or Config()
    suites = _suites(name)
    start = time.perf_counter()
    cases = []
    for s in suites:
        for case_name, default, fn in _REGISTRY[s]:
            try:
                metric = float(fn(cfg, case_rng(cfg.seed, case_name)))
            except GeometryError:
                metric = math.inf
            cases.append(Case(case_name, metric, cfg.tol(case_name, default)))
    wall = int(round(1000 * (time.perf_counter() - start)))
    return Report(name, cases, wall)


def _loglog_slope(x, y) -> float:
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


# -- calculus ---------------------------------------------------------------


def _bilinear(x: FinSeq, y: FinSeq) -> FinSeq:
    n = max(x.active_len, y.active_len)
    return FinSeq(x.padded(n) * y.padded(n) + np.sin(x.padded(n)))


@_case("calculus", "exp_law_roundtrip", 0.0)
def _exp_law(cfg: Config, rng: np.random.Generator) -> float:
    F = calculus.TwoArgHandle(_bilinear)
    G = calculus.curry(F)
    FF = calculus.uncurry(G)
    GG = calculus.curry(calculus.uncurry(G))
    mismatches = 0
    for _ in range(cfg.trials):
        x, y = random_finseq(rng), random_finseq(rng)
        mismatches += FF(x, y) != F(x, y)
        mismatches += GG(x)(y) != G(x)(y)
    return float(mismatches)


@_case("calculus", "derivative_linearity", 1e-6)
def _linearity(cfg: Config, rng: np.random.Generator) -> float:
    f = calculus.smooth_map_corpus()["cubic"]
    worst = 0.0
    for _ in range(cfg.trials):
        x, v, w = (random_finseq(rng, 4) for _ in range(3))
        a, b = rng.normal(size=2)
        lhs = calculus.directional_derivative(f, x, a * v + b * w)
        dv = calculus.directional_derivative(f, x, v)
        dw = calculus.directional_derivative(f, x, w)
        rhs = a * dv + b * dw
        scale = max(abs(a) * weak_norm(dv) + abs(b) * weak_norm(dw), 1.0)
        worst = max(worst, weak_norm(lhs - rhs) / scale)
    return worst


@_case("calculus", "chain_rule", 1e-6)
def _chain_rule(cfg: Config, rng: np.random.Generator) -> float:
    corpus = calculus.smooth_map_corpus()
    worst = 0.0
    for _ in range(cfg.trials):
        x, v = random_finseq(rng, 4), random_finseq(rng, 4)
        for f in corpus.values():
            for g in corpus.values():
                worst = max(worst, calculus.chain_rule_residual(f, g, x, v, relative=True))
    return worst


@_case("calculus", "fd_order", 0.3)
def _fd_order(cfg: Config, rng: np.random.Generator) -> float:
    """Worst deviation of the plain central-difference error slope from 2."""
    hs = np.logspace(-1, -3, 5)
    sin_map = calculus.MapHandle(lambda x: FinSeq(np.sin(x.entries) + x.entries**3))
    worst = 0.0
    for _ in range(min(cfg.trials, 50)):
        x, v = random_finseq(rng, 4), random_unit(rng, 4)
        n = max(x.active_len, v.active_len)
        xv, vv = x.padded(n), v.padded(n)
        exact = FinSeq((np.cos(xv) + 3 * xv**2) * vv)
        errs = [weak_norm(calculus.central_difference(sin_map, x, v, h) - exact) for h in hs]
        if min(errs) == 0.0:
            continue
        worst = max(worst, abs(_loglog_slope(hs, errs) - 2.0))
    return worst


@_case("calculus", "mackey_monotone", 0.0)
def _mackey(cfg: Config, rng: np.random.Generator) -> float:
    """Failures: rejected subsequences of an accepted sequence, plus one if
    the escaping family is accepted."""
    n_terms = 24
    xs = [e(1, 1.0 / n) + e(2, 1.0 / n**2) for n in range(1, n_terms + 1)]
    zero = FinSeq()
    failures = 0 if calculus.mackey_check(xs, zero).accepted else 1
    for _ in range(cfg.trials):
        size = int(rng.integers(2, n_terms + 1))
        idx = np.sort(rng.choice(n_terms, size=size, replace=False))
        failures += not calculus.mackey_check([xs[i] for i in idx], zero).accepted
    failures += calculus.mackey_check([e(n) for n in range(1, n_terms + 1)], zero).accepted
    return float(failures)


@_case("calculus", "smoothness_probe", 0.0)
def _probe(cfg: Config, rng: np.random.Generator) -> float:
    """Misclassifications: smooth maps flagged unbounded, or the kink missed."""
    line = calculus.CurveHandle(lambda t: t * e(1), "line")
    curves = [line]
    for i in range(3):
        d = random_unit(rng, 4)
        curves.append(calculus.CurveHandle(lambda t, d=d: t * d + (t * t) * e(2), f"curve{i}"))
    bad = 0
    for f in calculus.smooth_map_corpus().values():
        bad += sum(not r.bounded_flag for r in calculus.smoothness_probe(f, curves, 4))
    kink = calculus.MapHandle(lambda x: abs(x[0]) * e(1))
    report = calculus.smoothness_probe(kink, [line], 2)
    bad += report[1].bounded_flag
    return float(bad)


# -- sphere -----------------------------------------------------------------


@_case("sphere", "chart_compatibility", 1e-12)
def _transition(cfg: Config, rng: np.random.Generator) -> float:
    plus = sphere.StereoChart()
    minus = plus.partner()
    worst = 0.0
    for _ in range(cfg.trials):
        y = random_perp(rng, 16)
        y = y / weak_norm(y) * math.exp(rng.uniform(-2, 2))
        lhs = sphere.stereo_forward(minus, sphere.stereo_inverse(plus, y))
        worst = max(worst, weak_norm(lhs - sphere.transition(y)))
    return worst


@_case("sphere", "stereo_roundtrip", 1e-10)
def _stereo_roundtrip(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for chart in (sphere.StereoChart(), sphere.StereoChart(sign="minus")):
        for _ in range(cfg.trials):
            y = random_perp(rng, 16)
            back = sphere.stereo_forward(chart, sphere.stereo_inverse(chart, y))
            worst = max(worst, weak_norm(back - y) / max(1.0, weak_norm(y)))
    return worst


@_case("sphere", "sphere_preservation", 1e-10)
def _preservation(cfg: Config, rng: np.random.Generator) -> float:
    chart = sphere.StereoChart()
    worst = 0.0
    for _ in range(cfg.trials):
        y = random_perp(rng, 16)
        worst = max(worst, abs(weak_norm(sphere.stereo_inverse(chart, y).coords) - 1.0))
        x = sphere.SpherePoint.normalized(random_finseq(rng))
        w = random_finseq(rng)
        v = w - weak_inner(w, x.coords) * x.coords
        g = sphere.geodesic(x, v, rng.uniform(-3, 3))
        worst = max(worst, abs(weak_norm(g.coords) - 1.0))
    return worst


@_case("sphere", "pole_independence", 1e-10)
def _pole_independence(cfg: Config, rng: np.random.Generator) -> float:
    """Roundtrip through the overlap of charts with poles e_1 and a random a'."""
    c1 = sphere.StereoChart()
    worst = 0.0
    for _ in range(cfg.trials):
        c2 = sphere.StereoChart(pole=sphere.SpherePoint(random_unit(rng, 8)))
        x = sphere.SpherePoint.normalized(random_finseq(rng, 8))
        try:
            y = sphere.stereo_forward(c1, x)
            z = sphere.stereo_forward(c2, sphere.stereo_inverse(c1, y))
            y_back = sphere.stereo_forward(c1, sphere.stereo_inverse(c2, z))
        except GeometryError:
            continue  # outside the overlap
        worst = max(worst, weak_norm(y_back - y) / max(1.0, weak_norm(y)))
    return worst


@_case("sphere", "geodesic_group", 1e-10)
def _geodesic_group(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(cfg.trials):
        x = sphere.SpherePoint.normalized(random_finseq(rng))
        w = random_finseq(rng)
        v = w - weak_inner(w, x.coords) * x.coords
        nv = weak_norm(v)
        if nv < 1e-6:
            continue
        budget = math.pi / nv
        s, t = rng.uniform(-0.49, 0.49, size=2) * budget
        once = sphere.geodesic(x, v, s + t)
        mid = sphere.geodesic(x, v, s)
        twice = sphere.geodesic(mid, sphere.geodesic_velocity(x, v, s), t)
        worst = max(worst, weak_norm(once.coords - twice.coords))
    return worst


@_case("sphere", "geodesic_velocity_fd", 1e-8)
def _geodesic_fd(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(cfg.trials):
        x = sphere.SpherePoint.normalized(random_finseq(rng))
        w = random_finseq(rng)
        v = w - weak_inner(w, x.coords) * x.coords
        t = rng.uniform(-1, 1)
        fd = calculus.derivative_at(lambda s: sphere.geodesic(x, v, s).coords, t, 1e-3)
        exact = sphere.geodesic_velocity(x, v, t)
        worst = max(worst, weak_norm(fd - exact) / max(1.0, weak_norm(v)))
    return worst


# -- frames -----------------------------------------------------------------


def _random_injective(rng: np.random.Generator) -> frames.Frame:
    k = int(rng.integers(1, 6))
    support = int(rng.integers(k, 21))
    return random_frame(rng, k, support)


@_case("frames", "adjoint_identity", 1e-12)
def _adjoint(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(cfg.trials):
        A = _random_injective(rng)
        x = random_finseq(rng, 25)
        y = rng.normal(size=A.k)
        lhs = float(frames.transpose_apply(A, x) @ y)
        rhs = weak_inner(x, FinSeq(A.matrix() @ y))
        worst = max(worst, abs(lhs - rhs) / (A.scale() * (1.0 + x.norm()) * (1.0 + np.linalg.norm(y))))
    return worst


@_case("frames", "iwasawa_reconstruct", 1e-10)
def _iwasawa_reconstruct(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(cfg.trials):
        B = _random_injective(rng)
        p, q = frames.iwasawa(B)
        worst = max(worst, np.max(np.abs(B.matrix() - p.matrix(B.support) @ q)) / B.scale())
    return worst


@_case("frames", "iwasawa_orthonormal", 1e-10)
def _iwasawa_orthonormal(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(cfg.trials):
        p, _ = frames.iwasawa(_random_injective(rng))
        worst = max(worst, np.max(np.abs(frames.gram(p) - np.eye(p.k))))
    return worst


@_case("frames", "iwasawa_triangular", 0.0)
def _iwasawa_triangular(cfg: Config, rng: np.random.Generator) -> float:
    """Count of q factors with a nonzero below-diagonal entry or a
    non-positive diagonal entry."""
    bad = 0
    for _ in range(cfg.trials):
        _, q = frames.iwasawa(_random_injective(rng))
        bad += bool(np.any(np.tril(q, -1)) or np.any(np.diag(q) <= 0))
    return float(bad)


@_case("frames", "iwasawa_synthesis", 1e-8)
def _iwasawa_synthesis(cfg: Config, rng: np.random.Generator) -> float:
    """Build B = p0 q0 from known factors and recover them."""
    worst = 0.0
    for _ in range(cfg.trials):
        k = int(rng.integers(1, 6))
        n = int(rng.integers(k, 21))
        Q0, _ = np.linalg.qr(rng.normal(size=(n, k)))
        T0 = random_upper_positive(rng, k)
        p, q = frames.iwasawa(frames.Frame.from_matrix(Q0 @ T0))
        worst = max(worst, np.max(np.abs(p.matrix(n) - Q0)), np.max(np.abs(q - T0)))
    return worst


@_case("frames", "iwasawa_equivariance", 1e-8)
def _iwasawa_equivariance(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(cfg.trials):
        A = _random_injective(rng)
        R = random_upper_positive(rng, A.k)
        p, q = frames.iwasawa(A)
        pR, qR = frames.iwasawa(A.right_multiply(R))
        worst = max(worst, np.max(np.abs(qR - q @ R)) / max(1.0, np.max(np.abs(q @ R))))
        worst = max(worst, np.max(np.abs(pR.matrix(A.support) - p.matrix(A.support))))
    return worst


@_case("frames", "bundle_invariance", 1e-8)
def _bundle_invariance(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(cfg.trials):
        A = _random_injective(rng)
        M = random_gl(rng, A.k)
        P1 = frames.grassmann_project(A)
        P2 = frames.grassmann_project(A.right_multiply(M))
        worst = max(worst, np.max(np.abs(P1.block(A.support) - P2.block(A.support))))
    return worst


@_case("frames", "projector_spectrum", 1e-7)
def _spectrum(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(cfg.trials):
        A = _random_injective(rng)
        ev = np.linalg.eigvalsh(frames.grassmann_project(A).proj)
        worst = max(worst, float(np.max(np.minimum(np.abs(ev), np.abs(ev - 1.0)))))
    return worst


@_case("frames", "embed_commutes", 0.0)
def _frames_embed(cfg: Config, rng: np.random.Generator) -> float:
    """Count of frames where gram, iwasawa or the projection changes under
    embedding into a larger ambient space."""
    bad = 0
    for _ in range(cfg.trials):
        A = _random_injective(rng)
        big = frames.embed(A, A.support + int(rng.integers(1, 10)))
        p, q = frames.iwasawa(A)
        pb, qb = frames.iwasawa(big)
        same = (
            np.array_equal(frames.gram(A), frames.gram(big))
            and p == pb
            and np.array_equal(q, qb)
            and frames.grassmann_project(A) == frames.grassmann_project(big)
        )
        bad += not same
    return float(bad)


# -- glinf ------------------------------------------------------------------


def _small_algebra(rng: np.random.Generator, max_norm: float = 0.5) -> glinf.GLInfAlgebra:
    n = int(rng.integers(1, 9))
    return random_algebra(rng, n, rng.uniform(0.0, max_norm))


@_case("glinf", "exp_log_roundtrip", 1e-8)
def _exp_log(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(cfg.trials):
        X = _small_algebra(rng)
        A = glinf.exp(X)
        worst = max(worst, (glinf.log_near_id(A) - X).max_abs())
        worst = max(worst, glinf.exp(glinf.log_near_id(A)).distance(A))
    return worst


@_case("glinf", "exp_inductive_limit", 0.0)
def _exp_embed(cfg: Config, rng: np.random.Generator) -> float:
    bad = 0
    for _ in range(cfg.trials):
        X = _small_algebra(rng, 2.0)
        m = X.n + int(rng.integers(1, 6))
        padded = glinf.exp(glinf.GLInfAlgebra(X.padded(m)))
        bad += not np.array_equal(padded.padded(m), glinf.exp(X).padded(m))
    return float(bad)


@_case("glinf", "det_homomorphism", 1e-8)
def _det_hom(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(cfg.trials):
        n = int(rng.integers(1, 9))
        A = glinf.GLInfElement(random_gl(rng, n, 0.5))
        B = glinf.GLInfElement(random_gl(rng, int(rng.integers(1, 9)), 0.5))
        prod = glinf.det(A) * glinf.det(B)
        worst = max(worst, abs(glinf.det(glinf.compose(A, B)) - prod) / abs(prod))
    return worst


@_case("glinf", "det_exp_trace", 1e-8)
def _det_exp(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(cfg.trials):
        X = random_algebra(rng, int(rng.integers(1, 9)), rng.uniform(0.0, 2.0))
        expected = math.exp(X.trace())
        worst = max(worst, abs(glinf.det(glinf.exp(X)) - expected) / expected)
    return worst


@_case("glinf", "bracket_closure", 0.0)
def _bracket_closure(cfg: Config, rng: np.random.Generator) -> float:
    bad = 0
    for _ in range(cfg.trials):
        n = int(rng.integers(2, 9))
        S1, S2 = rng.normal(size=(2, n, n))
        X, Y = glinf.GLInfAlgebra(S1 - S1.T), glinf.GLInfAlgebra(S2 - S2.T)
        bad += not glinf.in_oalg(glinf.bracket(X, Y))
        T1, T2 = rng.normal(size=(2, n, n))
        T1 -= np.trace(T1) / n * np.eye(n)
        T2 -= np.trace(T2) / n * np.eye(n)
        bad += not glinf.in_slalg(glinf.bracket(glinf.GLInfAlgebra(T1), glinf.GLInfAlgebra(T2)))
    return float(bad)


@_case("glinf", "one_parameter_subgroup", 1e-9)
def _one_param(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(cfg.trials):
        X = _small_algebra(rng, 1.0)
        s, t = rng.uniform(-1, 1, size=2)
        lhs = glinf.exp((s + t) * X)
        rhs = glinf.compose(glinf.exp(s * X), glinf.exp(t * X))
        worst = max(worst, lhs.distance(rhs))
    return worst


@_case("glinf", "isometry_action", 1e-9)
def _isometry(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(cfg.trials):
        A = glinf.GLInfElement(random_orthogonal(rng, int(rng.integers(1, 9))))
        if not glinf.in_o(A):
            return math.inf
        x, y = random_finseq(rng, 12), random_finseq(rng, 12)
        lhs = weak_inner(glinf.act(A, x), glinf.act(A, y))
        worst = max(worst, abs(lhs - weak_inner(x, y)))
    return worst


def bch_residuals(X: glinf.GLInfAlgebra, Y: glinf.GLInfAlgebra, eps=(0.1, 0.05, 0.025)) -> list[float]:
    """``|log(exp(eX) exp(eY)) - bch(eX, eY, 4)|_max`` for each ``e``."""
    out = []
    for s in eps:
        Z = glinf.log_near_id(glinf.compose(glinf.exp(s * X), glinf.exp(s * Y)))
        out.append((Z - glinf.bch(s * X, s * Y, 4)).max_abs())
    return out


@_case("glinf", "bch_order", 0.3)
def _bch_order(cfg: Config, rng: np.random.Generator) -> float:
    eps = (0.1, 0.05, 0.025)
    worst = 0.0
    for _ in range(min(cfg.trials, 20)):
        n = int(rng.integers(2, 7))
        X, Y = random_algebra(rng, n, 1.0), random_algebra(rng, n, 1.0)
        worst = max(worst, abs(_loglog_slope(eps, bch_residuals(X, Y, eps)) - 5.0))
    return worst


@_case("glinf", "transitivity", 1e-10)
def _transitivity(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(cfg.trials):
        x, y = random_unit(rng, 10), random_unit(rng, 10)
        A = glinf.transitive_witness(x, y)
        worst = max(worst, weak_norm(glinf.act(A, x) - y))
    return worst


# -- mapspace ---------------------------------------------------------------

_TARGETS = (Target.circle(), Target.sphere2(), Target.euclidean(3))


def random_map(rng: np.random.Generator, N: int, target: Target, modes: int = 3) -> DiscretizedMap:
    """Smooth random map with band-limited coordinates."""
    nodes = np.arange(N) * 2 * np.pi / N
    if target.kind == "circle":
        winding = int(rng.integers(-2, 3))
        return DiscretizedMap.from_function(N, target, lambda th: winding * th + random_trig_poly(rng, th, modes))
    cols = np.column_stack([random_trig_poly(rng, nodes, modes) for _ in range(target.dim)])
    if target.kind == "sphere2":
        cols = cols + rng.normal(size=3) * 2.0
    return DiscretizedMap.from_function(N, target, lambda th: cols)


def random_section(rng: np.random.Generator, f: DiscretizedMap, size: float, modes: int = 3) -> SectionAlongMap:
    """Smooth section with pointwise length at most ``size``."""
    nodes = f.grid.nodes
    V = np.column_stack([random_trig_poly(rng, nodes, modes) for _ in range(f.target.dim)])
    if f.target.kind == "sphere2":
        V = V - np.sum(V * f.samples, axis=1, keepdims=True) * f.samples
    V *= size / max(float(np.max(np.linalg.norm(V, axis=1))), 1e-300)
    return SectionAlongMap(f, V)


def _roundtrip_case(kind: Target) -> CaseFn:
    def run(cfg: Config, rng: np.random.Generator) -> float:
        worst = 0.0
        for _ in range(cfg.trials):
            f = random_map(rng, cfg.grid_N, kind)
            s = random_section(rng, f, rng.uniform(0.1, 3.0))
            g = chart_inverse(f, s)
            s_back = chart_forward(f, g)
            worst = max(worst, float(np.max(np.abs(s_back.vecs - s.vecs))))
            worst = max(worst, max_distance(chart_inverse(f, s_back), g))
        return worst

    return run


for _t in _TARGETS:
    _case("mapspace", f"chart_roundtrip_{_t.kind}", 1e-10)(_roundtrip_case(_t))


@_case("mapspace", "chart_cocycle", 1e-9)
def _cocycle(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(cfg.trials):
        target = _TARGETS[int(rng.integers(0, 3))]
        f = random_map(rng, cfg.grid_N, target)
        g = chart_inverse(f, random_section(rng, f, 0.4))
        h = chart_inverse(f, random_section(rng, f, 0.4))
        s = random_section(rng, h, 0.4)
        lhs = chart_change(f, g, chart_change(g, h, s))
        rhs = chart_change(f, h, s)
        worst = max(worst, float(np.max(np.abs(lhs.vecs - rhs.vecs))))
    return worst


@_case("mapspace", "tangent_identification", 1e-6)
def _tangent_identification(cfg: Config, rng: np.random.Generator) -> float:
    """FD velocity of ``t -> u_f(g_t)`` at 0 against the analytic velocity
    ``w`` of the family ``g_t = f + t w`` (renormalized on the sphere)."""
    worst = 0.0
    for _ in range(min(cfg.trials, 200)):
        target = _TARGETS[int(rng.integers(0, 3))]
        f = random_map(rng, cfg.grid_N, target)
        w = random_section(rng, f, 1.0).vecs

        def family(t: float) -> np.ndarray:
            vals = f.samples + t * w
            if target.kind == "sphere2":
                vals = vals / np.linalg.norm(vals, axis=1, keepdims=True)
            g = DiscretizedMap(f.grid, target, vals)
            return chart_forward(f, g).vecs

        fd = calculus.richardson_derivative(family, 0.0, 1e-3)
        worst = max(worst, float(np.max(np.abs(fd - w))))
    return worst


def sin_flow_exact(theta0: np.ndarray, t: float = 1.0) -> np.ndarray:
    """Lift of the time-``t`` flow of ``sin(theta) d/dtheta``:
    ``tan(theta/2)`` is multiplied by ``e^t``."""
    tau = np.tan(theta0 / 2)
    return theta0 + 2 * (np.arctan(math.exp(t) * tau) - np.arctan(tau))


@_case("mapspace", "flow_closed_form", 1e-6)
def _flow_closed(cfg: Config, rng: np.random.Generator) -> float:
    X = VectorFieldS1.from_function(cfg.grid_N, np.sin)
    phi = flow_exp(X, cfg.flow_steps)
    return float(np.max(np.abs(phi.lift - sin_flow_exact(X.grid.nodes))))


def flow_group_defects(X: VectorFieldS1, s: float, t: float, steps=(32, 64, 128, 256)) -> list[float]:
    out = []
    for n in steps:
        lhs = compose_diffeo(flow_exp(s * X, n), flow_exp(t * X, n))
        out.append(sup_distance(lhs, flow_exp((s + t) * X, n)))
    return out


@_case("mapspace", "flow_group_order", 0.5)
def _flow_order(cfg: Config, rng: np.random.Generator) -> float:
    steps = (32, 64, 128, 256)
    X = VectorFieldS1.from_function(cfg.grid_N, np.sin)
    s = float(rng.uniform(0.2, 0.8))
    defects = flow_group_defects(X, s, 1.0 - s, steps)
    return abs(-_loglog_slope(steps, defects) - 4.0)


@_case("mapspace", "diffeo_inverse", 1e-8)
def _diffeo_inverse(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    ident = CircleDiffeo.identity(cfg.grid_N)
    for _ in range(min(cfg.trials, 100)):
        g = random_diffeo(rng, cfg.grid_N)
        worst = max(worst, sup_distance(compose_diffeo(g, invert_diffeo(g)), ident))
    return worst


@_case("mapspace", "double_inverse", 1e-8)
def _double_inverse(cfg: Config, rng: np.random.Generator) -> float:
    # a finer grid keeps the interpolation error of the inverse below tolerance
    worst = 0.0
    N = max(cfg.grid_N, 128)
    for _ in range(min(cfg.trials, 50)):
        g = random_diffeo(rng, N, modes=3, max_slope=0.3)
        worst = max(worst, sup_distance(invert_diffeo(invert_diffeo(g)), g))
    return worst


def _random_field(rng: np.random.Generator, N: int, modes: int = 3) -> VectorFieldS1:
    return VectorFieldS1.from_function(N, lambda th: random_trig_poly(rng, th, modes))


@_case("mapspace", "bracket_antisymmetry", 1e-8)
def _antisymmetry(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(cfg.trials):
        X, Y = _random_field(rng, cfg.grid_N), _random_field(rng, cfg.grid_N)
        worst = max(worst, (lie_bracket(X, Y) + lie_bracket(Y, X)).sup())
    return worst


@_case("mapspace", "bracket_jacobi", 1e-8)
def _jacobi(cfg: Config, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(cfg.trials):
        X, Y, Z = (_random_field(rng, cfg.grid_N) for _ in range(3))
        J = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) + lie_bracket(Z, lie_bracket(X, Y))
        worst = max(worst, J.sup())
    return worst


@_case("mapspace", "immersion_openness", 0.0)
def _immersion(cfg: Config, rng: np.random.Generator) -> float:
    """Fraction of small perturbations of an embedded circle that stop being
    immersions."""
    f = DiscretizedMap.from_function(
        cfg.grid_N, Target.euclidean(3), lambda th: np.column_stack([np.cos(th), np.sin(th), 0.2 * np.sin(2 * th)])
    )
    return 1.0 - immersion_openness_probe(f, 1e-3, min(cfg.trials, 200), rng)
