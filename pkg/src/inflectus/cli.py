"""Command-line front end.

    inflectus analyze --expr "1/z"
    inflectus plot --figure 1 -o fig1.svg
    inflectus classify --expr "z^2 + i"

Every subcommand writes JSON to stdout (``trace`` and ``plot`` also write
files).  Errors are reported as JSON with a nonzero exit status:
2 parse error, 3 numeric failure, 4 degenerate or unsuitable input.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .classify import classify_exact, cubic_singularity_trigger, degree_two_curve_verdict
from .exactness import RESIDUE_TOL, is_exact, primitive
from .geometry import boundedness_analysis, poles, singular_candidates
from .inflection import DegenerateInputError, defining_polynomial, degree_report
from .monodromy import fiber_product_connected
from .parser import CompileError, ParseError, compile_expression
from .ratfun import RationalFunction, derivative
from .tracer import Window, component_report, default_seeds, integrate_trajectories, trace_curve

log = logging.getLogger("inflectus")

EXIT_OK, EXIT_PARSE, EXIT_NUMERIC, EXIT_DEGENERATE = 0, 2, 3, 4

FIGURES = {
    1: "(0.75+0.90i)*z + (1+0.35i)/(z-(-1.25+0.05i)) + (-0.75+0.95i)/(z-(0.85+0.75i)) + (0.85-0.65i)/(z-(0.55-0.95i))",
    2: "(1/3)*z^3 + (0.28+0.35i)*z^2 + (0.40-0.60i)*z + (0.80-0.60i)/(z-(-1.25+0.70i)) + (-0.90+0.70i)/(z-(1.10-0.55i))",
}
FIGURE_POLES = {
    1: (-1.25 + 0.05j, 0.85 + 0.75j, 0.55 - 0.95j),
    2: (-1.25 + 0.70j, 1.10 - 0.55j),
}


def figure_function(n: int) -> RationalFunction:
    return compile_expression(FIGURES[n])


def _clean(obj):
    """Round floats to 12 significant digits and make numpy/complex values JSON-ready."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_clean(float(obj.real)), _clean(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return None
        return float(f"{x:.12g}") + 0.0
    return obj


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(_clean(payload)) + "\n")


def _load(args) -> RationalFunction:
    if args.figure is not None:
        return figure_function(args.figure)
    if args.expr is not None:
        return compile_expression(args.expr)
    data = json.loads(Path(args.json).read_text())
    return RationalFunction.from_json(data)


def _window(args) -> Window | None:
    if args.window is None:
        return None
    return Window.parse(args.window, args.resolution)


def cmd_analyze(R: RationalFunction, args) -> dict:
    bd = boundedness_analysis(R)
    rep = degree_report(R)
    F = defining_polynomial(R)
    return {
        "function": R.to_json(),
        "poles": [p.to_json() for p in poles(R)],
        "boundedness": bd.to_json(),
        "degree": rep.to_json(),
        "singularCandidates": singular_candidates(R),
        "definingPolynomial": F.to_json(),
    }


def _traced(R: RationalFunction, args):
    g = trace_curve(R, _window(args), resolution=args.resolution)
    return g, component_report(g, g.pole_data, boundedness_analysis(R))


def cmd_trace(R: RationalFunction, args) -> dict:
    g, rep = _traced(R, args)
    out = g.to_json()
    out["report"] = [s.to_json() for s in rep]
    if args.output:
        Path(args.output).write_text(json.dumps(_clean(out)))
        return {"graph": args.output, "summary": g.summary(), "report": out["report"]}
    return out


def cmd_plot(R: RationalFunction, args) -> dict:
    from .plotting import render_svg

    g, rep = _traced(R, args)
    trs = integrate_trajectories(R, g.window, default_seeds(R, g.window))
    target = args.output or (f"figure{args.figure}.svg" if args.figure else "inflectus.svg")
    title = f"R{args.figure}" if args.figure else None
    svg, dump = render_svg(g, R, target, trs, title=title)
    return {
        "svg": str(svg),
        "graph": str(dump),
        "bounded": boundedness_analysis(R).verdict == "bounded",
        "summary": g.summary(),
        "report": [s.to_json() for s in rep],
    }


def cmd_exactness(f: RationalFunction, args) -> dict:
    rep = is_exact(f, args.tol)
    out = rep.to_json()
    if rep.exact:
        out["primitive"] = primitive(f, args.tol).to_json()
    return out


def cmd_classify(f: RationalFunction, args) -> dict:
    d = classify_exact(f, args.tol)
    out = d.to_json()
    out["curveVerdict"] = degree_two_curve_verdict(d).to_json() if d.degree == 2 else None
    out["criticalFlags"] = cubic_singularity_trigger(f) if d.degree == 3 else None
    return out


def cmd_irreducibility(f: RationalFunction, args) -> dict:
    return fiber_product_connected(f, seed=args.seed).to_json()


COMMANDS = {
    "analyze": cmd_analyze,
    "trace": cmd_trace,
    "plot": cmd_plot,
    "exactness": cmd_exactness,
    "classify": cmd_classify,
    "irreducibility": cmd_irreducibility,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="inflectus", description="Inflection curves of rational vector fields.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--expr", help="rational expression in z, e.g. 'z + 1/z'")
        src.add_argument("--json", help="file with {'numerator': [[re, im], ...], 'denominator': [...]}")
        src.add_argument("--figure", type=int, choices=(1, 2), help="figure preset R1 or R2")
        p.add_argument("--window", help="cx,cy,hw,hh (default: sized from poles and zeros)")
        p.add_argument("--resolution", type=int, default=512, help="grid cells per axis")
        p.add_argument("--tol", type=float, default=RESIDUE_TOL, help="residue tolerance")
        p.add_argument("-o", "--output", help="output path")
        p.add_argument("--seed", type=int, default=0, help="seed for monodromy base points")
    return ap


def _configure_logging() -> None:
    level = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("INFLECTUS_LOG", "quiet").lower(), logging.ERROR
    )
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        R = _load(args)
        log.info("input %r", R)
        payload = COMMANDS[args.command](R, args)
    except ParseError as exc:
        _emit(exc.to_json() | {"message": str(exc)})
        return EXIT_PARSE
    except CompileError as exc:
        _emit({"error": "compile", "message": str(exc)})
        return EXIT_PARSE
    except (DegenerateInputError, ValueError) as exc:
        _emit({"error": "degenerate", "type": type(exc).__name__, "message": str(exc)})
        return EXIT_DEGENERATE
    except ArithmeticError as exc:
        _emit({"error": "numeric", "type": type(exc).__name__, "message": str(exc)})
        return EXIT_NUMERIC
    _emit(payload)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
