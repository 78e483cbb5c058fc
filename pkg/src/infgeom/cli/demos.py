"""Small worked examples that print their inputs, outputs and residuals."""

from __future__ import annotations

import json

import numpy as np

from .. import frames, glinf
from ..errors import UnknownDemo
from ..mapspace import VectorFieldS1, flow_exp
from ..sampling import case_rng, random_algebra
from .config import Config
from .suites import bch_residuals

DEMO_NAMES = ("iwasawa", "flow", "bch-order")


def parse_field(spec: str, N: int) -> VectorFieldS1:
    """Vector field from a short spec: ``sin``, ``cos``, ``const:C`` or
    ``fourier:a0,a1,b1,a2,b2,...`` (``a0 + sum a_k cos k + b_k sin k``)."""
    spec = spec.strip()
    if spec == "sin":
        return VectorFieldS1.from_function(N, np.sin)
    if spec == "cos":
        return VectorFieldS1.from_function(N, np.cos)
    kind, _, arg = spec.partition(":")
    if kind == "const" and arg:
        c = float(arg)
        return VectorFieldS1.from_function(N, lambda th: np.full_like(th, c))
    if kind == "fourier" and arg:
        coef = [float(a) for a in arg.split(",")]
        if len(coef) % 2 == 0:
            raise ValueError("fourier spec needs a0 followed by (a_k, b_k) pairs")

        def fn(th):
            out = np.full_like(th, coef[0])
            for k in range(1, (len(coef) + 1) // 2):
                out += coef[2 * k - 1] * np.cos(k * th) + coef[2 * k] * np.sin(k * th)
            return out

        return VectorFieldS1.from_function(N, fn)
    raise ValueError(f"cannot parse field spec {spec!r}")


def _fmt_matrix(M: np.ndarray) -> str:
    return "\n".join("  [" + " ".join(f"{v: .6f}" for v in row) + "]" for row in M)


def _iwasawa(cfg: Config, frame: str | None) -> tuple[str, dict]:
    B = np.asarray(json.loads(frame), dtype=float) if frame else np.eye(3)
    if B.ndim == 1:
        B = B[:, None]
    A = frames.Frame.from_matrix(B)
    p, q = frames.iwasawa(A)
    P = p.matrix(A.support)
    resid = float(np.max(np.abs(A.matrix() - P @ q)))
    ortho = float(np.max(np.abs(frames.gram(p) - np.eye(A.k))))
    text = "\n".join(
        [
            f"frame B ({A.support} x {A.k}):",
            _fmt_matrix(A.matrix()),
            "orthonormal factor p:",
            _fmt_matrix(P),
            "triangular factor q:",
            _fmt_matrix(q),
            f"|B - p q|_max = {resid:.3e}",
            f"|p^t p - Id|_max = {ortho:.3e}",
        ]
    )
    data = {"demo": "iwasawa", "B": A.matrix().tolist(), "p": P.tolist(), "q": q.tolist(),
            "reconstruction_error": resid, "orthonormality_error": ortho}
    return text, data


def _flow(cfg: Config, field: str | None) -> tuple[str, dict]:
    spec = field or "const:1"
    X = parse_field(spec, cfg.grid_N)
    phi = flow_exp(X, cfg.flow_steps)
    nodes = X.grid.nodes
    lines = [f"field {spec}, N = {cfg.grid_N}, steps = {cfg.flow_steps}", "  theta_j        Exp(X)(theta_j)   shift"]
    for th, g in zip(nodes, phi.lift):
        lines.append(f"  {th: .10f}  {g: .10f}  {g - th: .10f}")
    data = {"demo": "flow", "field": spec, "N": cfg.grid_N, "steps": cfg.flow_steps, "lift": phi.lift.tolist()}
    return "\n".join(lines), data


def _bch_order(cfg: Config) -> tuple[str, dict]:
    rng = case_rng(cfg.seed, "demo.bch-order")
    X, Y = random_algebra(rng, 4, 1.0), random_algebra(rng, 4, 1.0)
    eps = (0.1, 0.05, 0.025)
    res = bch_residuals(X, Y, eps)
    slope = float(np.polyfit(np.log(eps), np.log(res), 1)[0])
    lines = ["  eps      residual", *(f"  {e:<7g}  {r:.3e}" for e, r in zip(eps, res)),
             f"fitted log-log slope: {slope:.3f} (expected 5)"]
    data = {"demo": "bch-order", "eps": list(eps), "residual": res, "slope": slope}
    return "\n".join(lines), data


def demo(name: str, cfg: Config | None = None, field: str | None = None, frame: str | None = None) -> tuple[str, dict]:
    """Run a demo; returns human-readable text and a JSON-ready dict."""
    cfg = cfg or Config()
    if name == "iwasawa":
        return _iwasawa(cfg, frame)
    if name == "flow":
        return _flow(cfg, field)
    if name == "bch-order":
        return _bch_order(cfg)
    raise UnknownDemo(f"unknown demo {name!r}; choose from {', '.join(DEMO_NAMES)}")
