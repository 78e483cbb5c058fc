"""``infgeom`` command-line entry point.

Exit codes: 0 when every case passes, 1 when a case fails, 2 on usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from ..errors import GeometryError
from ..mapspace import flow_exp, sup_distance
from .config import Config
from .demos import DEMO_NAMES, demo, parse_field
from .suites import SUITE_NAMES, run_suite, sin_flow_exact

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat JSON config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--grid_N", type=int)
    p.add_argument("--flow_steps", type=int)
    p.add_argument("--tolerances", help='JSON object, e.g. \'{"glinf.bch_order": 0.2}\'')
    p.add_argument("--json", metavar="OUT", help="write the JSON report to OUT ('-' for stdout)")


def _config(args: argparse.Namespace) -> Config:
    try:
        data = json.loads(Path(args.config).read_text()) if args.config else {}
        if not isinstance(data, dict):
            raise ValueError("config must be a JSON object")
        for key in ("seed", "trials", "grid_N", "flow_steps"):
            value = getattr(args, key, None)
            if value is not None:
                data[key] = value
        if args.tolerances:
            tol = json.loads(args.tolerances)
            if not isinstance(tol, dict):
                raise ValueError("--tolerances must be a JSON object")
            data["tolerances"] = {**data.get("tolerances", {}), **tol}
        return Config.from_dict(data)
    except (OSError, ValueError, TypeError) as exc:
        raise UsageError(f"bad configuration: {exc}") from exc


def _emit(payload: str, out: str | None) -> None:
    if out in (None, "-"):
        print(payload)
    else:
        Path(out).write_text(payload + "\n")


def _verify(suite: str, args: argparse.Namespace) -> int:
    cfg = _config(args)
    report = run_suite(suite, cfg)
    for line in report.summary_lines():
        print(line, file=sys.stderr)
    _emit(report.to_json(), args.json)
    return EXIT_OK if report.passed else EXIT_FAIL


def _demo(args: argparse.Namespace) -> int:
    cfg = _config(args)
    try:
        text, data = demo(args.name, cfg, field=args.field, frame=args.frame)
    except GeometryError:
        raise
    except ValueError as exc:  # malformed --field / --frame
        raise UsageError(str(exc)) from exc
    print(text)
    if args.json:
        _emit(json.dumps(data, indent=2, sort_keys=True), args.json)
    return EXIT_OK


def flow_report(spec: str, N: int, steps: int, tol: float = 1e-6) -> dict:
    """Flow of a field spec with an error estimate.

    ``max_error`` is measured against the closed form for ``sin`` and
    ``const:C`` fields and against a run with four times the steps
    otherwise; ``order_estimate`` comes from runs at steps, 2 steps and
    4 steps (``None`` when the flow is already exact).
    """
    try:
        X = parse_field(spec, N)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    runs = [flow_exp(X, steps * m) for m in (1, 2, 4)]
    nodes = X.grid.nodes
    if spec.strip() == "sin":
        exact = sin_flow_exact(nodes)
    elif spec.strip().startswith("const:"):
        exact = nodes + float(spec.split(":", 1)[1])
    else:
        exact = runs[2].lift
    max_error = float(np.max(np.abs(runs[0].lift - exact)))
    e1, e2 = sup_distance(runs[0], runs[1]), sup_distance(runs[1], runs[2])
    order = math.log2(e1 / e2) if e1 > 0 and e2 > 0 else None
    return {
        "test": f"flow[{spec}]",
        "N": N,
        "steps": steps,
        "max_error": max_error,
        "order_estimate": order,
        "pass": max_error <= tol,
        "lift": runs[0].lift.tolist(),
    }


def _mapspace_flow(args: argparse.Namespace) -> int:
    cfg = _config(args)
    N = args.N if args.N is not None else cfg.grid_N
    steps = args.steps if args.steps is not None else cfg.flow_steps
    try:
        Config(grid_N=N, flow_steps=steps)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep = flow_report(args.field, N, steps, cfg.tol("mapspace.flow", 1e-6))
    _emit(json.dumps(rep, indent=2, sort_keys=True), args.json)
    return EXIT_OK if rep["pass"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infgeom", description="Verification suites and demos.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", nargs="?", default="all", choices=SUITE_NAMES + ("all",))
    _add_config_flags(p)
    p.set_defaults(handler=lambda a: _verify(a.suite, a))

    p = sub.add_parser("demo", help="run a demo")
    p.add_argument("name", choices=DEMO_NAMES)
    p.add_argument("--field", help="vector field spec for the flow demo (default const:1)")
    p.add_argument("--frame", help="JSON matrix (rows) for the iwasawa demo (default identity)")
    _add_config_flags(p)
    p.set_defaults(handler=_demo)

    for module in SUITE_NAMES:
        mp = sub.add_parser(module, help=f"{module} commands")
        msub = mp.add_subparsers(dest="action", required=True)
        vp = msub.add_parser("verify", help=f"run the {module} suite")
        _add_config_flags(vp)
        vp.set_defaults(handler=lambda a, m=module: _verify(m, a))
        if module == "mapspace":
            fp = msub.add_parser("flow", help="time-one flow of a vector field on the circle")
            fp.add_argument("--field", required=True, help="sin | cos | const:C | fourier:a0,a1,b1,...")
            fp.add_argument("--steps", type=int)
            fp.add_argument("--N", type=int)
            _add_config_flags(fp)
            fp.set_defaults(handler=_mapspace_flow)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"infgeom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GeometryError as exc:
        print(f"infgeom: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
