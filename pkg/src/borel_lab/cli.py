"""``borel`` command-line front end.

Exit status: 0 on success, 2 on a negative or inconclusive mathematical
verdict, 1 on bad input or an unexpected failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import fields, replace
from pathlib import Path

from . import __version__
from .borel_engine import DEFAULT_CONFIG, THEOREM1_LAMBDA, EngineConfig, borel_sum_at, circle_sweep, theorem1_check
from .borel_transform import catalog_listing
from .cli_util import SCHEMA, dumps, load_json_arg, pair, parse_complex
from .errors import ContourInvalid, EvaluatorError, NoConvergence, NotSummableHere, QuadratureError, SingularSystem
from .functionals import AnalyticFunctional, G_eval, cauchy_transform_check, contour_pairing, multipole_pairing
from .polygon import BorelPolygonSpec, boundary_segments, inverted_classify, polygon_classify
from .render import polygon_svg, theta_map_svg
from .series_core import coeffs_from_json, from_pair
from .type_analysis import DEFAULT_R_GRID, classify_exponential_type, entire_from_json, exp_type_from_coeffs, parse_phi

EXIT_OK, EXIT_FAIL, EXIT_NEGATIVE = 0, 1, 2
KNOBS = tuple(f.name for f in fields(EngineConfig))
# mathematical obstructions: reported as JSON with exit 2, not as crashes
NEGATIVE = (NotSummableHere, ContourInvalid, NoConvergence, EvaluatorError, QuadratureError, SingularSystem)


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# input parsing


def _unwrap(obj, key):
    # accept our own output, which echoes the input under `key`
    if isinstance(obj, dict) and "kind" not in obj and key in obj:
        return obj[key]
    return obj


def read_coeffs(value, key="coeffs"):
    obj = _unwrap(load_json_arg(value), key)
    return obj, coeffs_from_json(obj)


def read_functional(value):
    obj = _unwrap(load_json_arg(value), "moments")
    sing = obj.get("singularities") if isinstance(obj, dict) else None
    seq = coeffs_from_json({k: v for k, v in obj.items() if k != "singularities"})
    singularities = None if sing is None else tuple(from_pair(z) for z in sing)
    return obj, AnalyticFunctional(seq, label=seq.label, singularities=singularities)


def read_singularities(value):
    obj = load_json_arg(value)
    if isinstance(obj, dict):
        obj = obj.get("singularities", obj)
    if not isinstance(obj, list):
        raise UsageError("--singularities must be a JSON list of [re, im] pairs")
    return [parse_complex(z) if isinstance(z, str) else from_pair(z) for z in obj]


def parse_overrides(items):
    out = {}
    for item in items or ():
        name, sep, raw = item.partition("=")
        name = name.strip().replace("-", "_")
        if not sep:
            raise UsageError(f"--set expects knob=value, got {item!r}")
        if name not in KNOBS:
            raise UsageError(f"unknown knob {name!r}; valid knobs: {', '.join(KNOBS)}")
        kind = type(getattr(DEFAULT_CONFIG, name))
        try:
            out[name] = kind(float(raw)) if kind is int else kind(raw)
        except ValueError:
            raise UsageError(f"knob {name}: cannot parse {raw!r} as {kind.__name__}") from None
    return replace(DEFAULT_CONFIG, **out)


def _floats(text, what):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated numbers, got {text!r}") from None


# --------------------------------------------------------------------------
# output


def verdict_json(v):
    return {
        "status": v.status.value,
        "value": pair(v.value),
        "sup_abs_M": v.sup_abs_M,
        "lambda_max": v.lambda_max,
        "tail": v.tail,
        "diagnostics": v.diagnostics,
    }


def sweep_csv(report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "status", "re", "im", "tail"])
    for theta, v in zip(report.thetas, report.verdicts):
        re_, im_ = ("", "") if v.value is None else (format(v.value.real, ".17g"), format(v.value.imag, ".17g"))
        tail = "" if math.isnan(v.tail) else format(v.tail, ".17g")
        w.writerow([format(theta, ".17g"), v.status.value, re_, im_, tail])
    return buf.getvalue()


def sweep_json(report):
    return {
        "r": report.r,
        "n_theta": len(report.thetas),
        "uniform": report.uniform,
        "worst_theta": report.worst_theta,
        "sup_abs_M": report.sup_abs_M,
        "eps_tail": report.eps_tail,
        "lambda_max": report.lambda_max,
        "mode": report.mode,
        "counts": {s: sum(v.status.value == s for v in report.verdicts) for s in ("summable", "divergent", "inconclusive")},
    }


def _doc(command, **body):
    return {"schema": SCHEMA, "command": command, **body}


# --------------------------------------------------------------------------
# commands; each returns (document, exit code, {path: text})


def cmd_sum(a, cfg):
    obj, seq = read_coeffs(a.coeffs)
    z = parse_complex(a.z)
    v = borel_sum_at(seq, z, a.lambda_max, mode=a.mode, config=cfg)
    doc = _doc("sum", coeffs=obj, z=pair(z), **verdict_json(v))
    return doc, EXIT_OK if v.summable else EXIT_NEGATIVE, {}


def cmd_circle(a, cfg):
    obj, seq = read_coeffs(a.coeffs)
    rep = circle_sweep(seq, a.r, a.n_theta, a.lambda_max, mode=a.mode, config=cfg)
    files = {}
    if a.csv:
        files[a.csv] = sweep_csv(rep)
    if a.svg:
        files[a.svg] = theta_map_svg(rep)
    rows = [{"theta": th, **verdict_json(v)} for th, v in zip(rep.thetas, rep.verdicts)]
    doc = _doc("circle", coeffs=obj, **sweep_json(rep), verdicts=rows)
    return doc, EXIT_OK if rep.uniform else EXIT_NEGATIVE, files


def cmd_theorem1(a, cfg):
    obj, seq = read_coeffs(a.coeffs)
    res = theorem1_check(seq, a.r, lambda_max=a.lambda_max, n_theta=a.n_theta, mode=a.mode, config=cfg)
    rad = res.radius_estimate
    doc = _doc(
        "theorem1",
        coeffs=obj,
        r=a.r,
        hypothesis=res.hypothesis,
        consistent=res.consistent,
        radius_estimate={"value": rad.value, "n_used": rad.n_used, "method": rad.method},
        sweep=sweep_json(res.sweep),
    )
    return doc, EXIT_OK if res.consistent else EXIT_NEGATIVE, {}


def cmd_type(a, cfg):
    obj = _unwrap(load_json_arg(a.taylor), "taylor")
    spec = entire_from_json(obj)
    grid = _floats(a.r_grid, "--r-grid") if a.r_grid else DEFAULT_R_GRID
    rep = classify_exponential_type(spec, grid, lambda_max=a.lambda_max, n_theta=a.n_theta, mode=a.mode, config=cfg)
    est = exp_type_from_coeffs(spec, 64)
    doc = _doc(
        "type",
        taylor=obj,
        is_exp_type_evidence=rep.is_exp_type_evidence,
        best_r=rep.best_r,
        type_bound=rep.type_bound,
        sigma_from_coeffs=est.sigma,
        passes=[{"r": r, "uniform": ok} for r, ok in rep.passes.items()],
    )
    return doc, EXIT_OK if rep.is_exp_type_evidence else EXIT_NEGATIVE, {}


def cmd_polygon(a, cfg):
    sing = read_singularities(a.singularities)
    spec = BorelPolygonSpec(tuple(sing), a.tol)
    classify = inverted_classify if a.inverted else polygon_classify
    queries = []
    for q in a.query or ():
        z = parse_complex(q)
        queries.append({"point": pair(z), "class": classify(spec, z).value})
    files = {}
    window = None
    if a.svg:
        window = _floats(a.window, "--window")
        if len(window) != 4:
            raise UsageError("--window expects xmin,xmax,ymin,ymax")
        segs = boundary_segments(spec, window, a.resolution, inverted=a.inverted)
        marks = [1 / z for z in spec.singularities] if a.inverted else spec.singularities
        title = "Pi(g)" if a.inverted else "Pi(b)"
        files[a.svg] = polygon_svg(segs, window, marks, title=title)
    doc = _doc(
        "polygon",
        singularities=[pair(z) for z in spec.singularities],
        inverted=a.inverted,
        queries=queries,
        window=window,
    )
    return doc, EXIT_OK, files


def cmd_pair(a, cfg):
    obj, g = read_functional(a.moments)
    phi = parse_phi(a.phi)
    body = {"moments": obj, "phi": a.phi}
    if a.contour:
        parts = a.contour.split(",")
        if len(parts) != 2:
            raise UsageError('--contour expects "center,radius", e.g. "0.5+0i,1.0"')
        center, radius = parse_complex(parts[0]), float(parts[1])
        res = contour_pairing(g, phi, center, radius, a.n_quad, a.lambda_max, mode=a.mode, config=cfg)
        body.update(contour={"center": pair(center), "radius": radius})
    else:
        res = multipole_pairing(g, phi, a.n_terms)
    body.update(method=res.method, value=pair(res.value), quad_points=res.quad_points)
    return _doc("pair", **body), EXIT_OK, {}


def cmd_gval(a, cfg):
    obj, g = read_functional(a.moments)
    s = parse_complex(a.s)
    val = G_eval(g, s, a.lambda_max, mode=a.mode, config=cfg)
    return _doc("gval", moments=obj, s=pair(s), value=pair(val)), EXIT_OK, {}


def cmd_ftcheck(a, cfg):
    obj, seq = read_coeffs(a.coeffs)
    s = parse_complex(a.s)
    res = cauchy_transform_check(seq, s, a.lambda_max, mode=a.mode, config=cfg)
    doc = _doc("ftcheck", coeffs=obj, s=pair(s), lhs=pair(res.lhs), rhs=pair(res.rhs), abs_diff=res.abs_diff)
    return doc, EXIT_OK, {}


def cmd_catalog(a, cfg):
    entries = [{"id": cid, "params": list(params), "notes": notes} for cid, params, notes in catalog_listing()]
    return _doc("catalog", entries=entries), EXIT_OK, {}


# --------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="borel", description="Borel summation probes for power series and analytic functionals.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the JSON result here instead of stdout")
    common.add_argument("--set", action="append", metavar="KNOB=VALUE", help=f"engine override; knobs: {', '.join(KNOBS)}")
    common.add_argument("--mode", default="auto", choices=("auto", "series", "closed_form", "pade"))
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("sum", cmd_sum, "Borel sum at one point")
    sp.add_argument("--coeffs", required=True, help="coefficient JSON (inline or file)")
    sp.add_argument("--z", required=True, help='complex point, e.g. "0.5+0i"')
    sp.add_argument("--lambda-max", type=float)

    sp = add("circle", cmd_circle, "summability sweep on |z| = r")
    sp.add_argument("--coeffs", required=True)
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--n-theta", type=int, default=64)
    sp.add_argument("--lambda-max", type=float)
    sp.add_argument("--csv", help="write the per-direction table (theta, status, re, im, tail)")
    sp.add_argument("--svg", help="write the theta-map")

    sp = add("theorem1", cmd_theorem1, "uniform circle summability vs radius of convergence")
    sp.add_argument("--coeffs", required=True)
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--n-theta", type=int, default=64)
    sp.add_argument("--lambda-max", type=float, default=THEOREM1_LAMBDA)

    sp = add("type", cmd_type, "exponential-type evidence for an entire function")
    sp.add_argument("--taylor", required=True, help="Taylor data JSON (list or builtin)")
    sp.add_argument("--r-grid", help="comma-separated ascending radii")
    sp.add_argument("--n-theta", type=int, default=64)
    sp.add_argument("--lambda-max", type=float, default=THEOREM1_LAMBDA)

    sp = add("polygon", cmd_polygon, "Borel polygon membership and boundary plot")
    sp.add_argument("--singularities", required=True, help="JSON list of [re, im] pairs")
    sp.add_argument("--query", action="append", help="point to classify (repeatable)")
    sp.add_argument("--inverted", action="store_true", help="use Pi(g) = {s : 1/s in Pi(b)}")
    sp.add_argument("--svg")
    sp.add_argument("--window", default="-3,3,-3,3")
    sp.add_argument("--resolution", type=int, default=400)
    sp.add_argument("--tol", type=float, default=1e-9)

    sp = add("pair", cmd_pair, "pair an analytic functional with an entire test function")
    sp.add_argument("--moments", required=True, help='moment JSON; optional "singularities" key')
    sp.add_argument("--phi", required=True, help="builtin:1, builtin:s^k, builtin:exp, builtin:exp(c*s)")
    sp.add_argument("--contour", help='"center,radius"; omit for the multipole series')
    sp.add_argument("--n-quad", type=int, default=64)
    sp.add_argument("--n-terms", type=int, default=128)
    sp.add_argument("--lambda-max", type=float)

    sp = add("gval", cmd_gval, "Borel-summed moment function G(s)")
    sp.add_argument("--moments", required=True)
    sp.add_argument("--s", required=True)
    sp.add_argument("--lambda-max", type=float)

    sp = add("ftcheck", cmd_ftcheck, "Cauchy-transform identity check")
    sp.add_argument("--coeffs", required=True)
    sp.add_argument("--s", required=True)
    sp.add_argument("--lambda-max", type=float)

    add("catalog", cmd_catalog, "list builtin coefficient sequences")
    return p


def _negative_doc(a, exc):
    return _doc(a.command, status="error", error=type(exc).__name__, diagnostics=str(exc))


# options whose values may start with "-" (negative numbers, windows)
_VALUE_OPTS = frozenset({"--z", "--s", "--r", "--query", "--contour", "--window", "--r-grid"})


def _glue_values(argv):
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_OPTS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    a = parser.parse_args(_glue_values(argv))
    try:
        cfg = parse_overrides(a.set)
        try:
            doc, code, files = a.fn(a, cfg)
        except NEGATIVE as exc:
            doc, code, files = _negative_doc(a, exc), EXIT_NEGATIVE, {}
        text = dumps(doc) + "\n"
        for path, content in files.items():
            Path(path).write_text(content)
        if a.output:
            Path(a.output).write_text(text)
        else:
            sys.stdout.write(text)
        return code
    except (UsageError, ValueError, KeyError, ArithmeticError, OSError) as exc:
        print(f"borel {a.command}: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
