"""Exponential type of entire functions, from coefficients and from circle sweeps."""

from __future__ import annotations

import json
import math
import re
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .borel_engine import DEFAULT_CONFIG, THEOREM1_LAMBDA, circle_sweep
from .cli_util import parse_complex
from .series_core import (
    NEG_INF,
    ClosedForm,
    CoeffSeq,
    EntireFnSpec,
    as_pair,
    clog,
    from_pair,
    list_seq,
    moment_taylor_seq,
    radius_cauchy_hadamard,
)

DEFAULT_R_GRID = (0.05, 0.1, 0.2, 0.4, 0.8, 1.6)


@dataclass(frozen=True)
class TypeEstimate:
    sigma: float
    n_used: int

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError("sigma must be non-negative")


@dataclass(frozen=True)
class ExpTypeReport:
    is_exp_type_evidence: bool
    best_r: Optional[float]
    type_bound: Optional[float]
    passes: dict = field(default_factory=dict)
    sweeps: dict = field(default_factory=dict, repr=False)


def check_entire(spec: EntireFnSpec):
    """Warn when the Taylor data does not look entire.

    Finite-N Cauchy-Hadamard estimates of an entire function keep growing
    with N (or are infinite); a flat or shrinking estimate is flagged.
    """
    r32 = radius_cauchy_hadamard(spec.taylor_coeffs, 32).value
    r64 = radius_cauchy_hadamard(spec.taylor_coeffs, 64).value
    if math.isinf(r64):
        return True
    if not r64 > 1.2 * r32:
        warnings.warn(
            f"{spec.label or 'function'}: radius estimates {r32:.4g} (N=32), {r64:.4g} (N=64) "
            "do not grow; input may not be entire",
            stacklevel=2,
        )
        return False
    return True


def exp_type_from_coeffs(spec: EntireFnSpec, N: int = 64) -> TypeEstimate:
    """``max n |c_n|^(1/n) / e`` over ``n in [N/2, N]``, zeros skipped."""
    if N < 32:
        raise ValueError("N must be at least 32")
    best = 0.0
    for n in range(N // 2, N + 1):
        lc = spec.taylor_coeffs.log_term(n)
        if lc.real == -math.inf:
            continue
        best = max(best, n * math.exp(lc.real / n) / math.e)
    return TypeEstimate(sigma=best, n_used=N)


def classify_exponential_type(
    spec: EntireFnSpec,
    r_grid=DEFAULT_R_GRID,
    *,
    lambda_max=THEOREM1_LAMBDA,
    n_theta=64,
    mode="auto",
    config=DEFAULT_CONFIG,
) -> ExpTypeReport:
    """Sweep ``sum f^(n)(0) r^n e^{i n theta}`` for each ``r`` in the grid.

    Any uniformly summable radius is evidence of exponential type, with type
    at most ``1 / best_r``. A finite grid never proves the negative.
    """
    r_grid = tuple(float(r) for r in r_grid)
    if not r_grid:
        raise ValueError("r_grid must not be empty")
    if any(r <= 0 for r in r_grid) or list(r_grid) != sorted(r_grid):
        raise ValueError("r_grid must be positive and ascending")
    check_entire(spec)
    moments = moment_taylor_seq(spec)
    sweeps = {r: circle_sweep(moments, r, n_theta, lambda_max, mode=mode, config=config) for r in r_grid}
    passes = {r: rep.uniform for r, rep in sweeps.items()}
    passing = [r for r in r_grid if passes[r]]
    best = max(passing) if passing else None
    return ExpTypeReport(
        is_exp_type_evidence=bool(passing),
        best_r=best,
        type_bound=None if best is None else 1.0 / best,
        passes=passes,
        sweeps=sweeps,
    )


# --------------------------------------------------------------------------
# Builtin entire functions


def _lgamma1(n):
    return math.lgamma(n + 1)


def entire_exp(c=1.0) -> EntireFnSpec:
    c = from_pair(c)
    lc = clog(c)

    def log_terms(n):
        if n == 0:
            return 0j
        if c == 0:
            return NEG_INF
        return n * lc - _lgamma1(n)

    taylor = CoeffSeq(terms=lambda n: complex(np.exp(log_terms(n))), label=f"exp({c}z)", log_terms=log_terms)
    cf = ClosedForm(f=lambda t: np.exp(c * t), log_f=lambda t: c * t, expr=f"exp(({c})*t)")
    return EntireFnSpec(taylor, f"exp({c}z)", cf, json={"kind": "builtin", "name": "exp", "params": {"c": as_pair(c)}})


def entire_exp_z2() -> EntireFnSpec:
    def log_terms(n):
        return NEG_INF if n % 2 else complex(-_lgamma1(n // 2))

    taylor = CoeffSeq(terms=lambda n: complex(np.exp(log_terms(n))), label="exp(z^2)", log_terms=log_terms)
    cf = ClosedForm(f=lambda t: np.exp(t * t), log_f=lambda t: t * t, expr="exp(t^2)")
    return EntireFnSpec(taylor, "exp(z^2)", cf, json={"kind": "builtin", "name": "exp_z2", "params": {}})


def _log_trig(t, kind):
    t = np.asarray(t, dtype=complex)
    # np.where evaluates every branch; only the selected one is finite
    with np.errstate(all="ignore"):
        out = np.log(np.sin(t) if kind == "sin" else np.cos(t))
        up = t.imag > 20
        down = t.imag < -20
        sign = -1.0 if kind == "sin" else 1.0
        # sin t = -e^{-it}(1 - e^{2it})/(2i),  cos t = e^{-it}(1 + e^{2it})/2 for Im t > 0
        lead_up = np.log(0.5j) if kind == "sin" else np.log(0.5)
        lead_down = np.log(-0.5j) if kind == "sin" else np.log(0.5)
        out = np.where(up, -1j * t + np.log1p(sign * np.exp(2j * t)) + lead_up, out)
        out = np.where(down, 1j * t + np.log1p(sign * np.exp(-2j * t)) + lead_down, out)
    return out


def entire_sin() -> EntireFnSpec:
    def log_terms(n):
        if n % 2 == 0:
            return NEG_INF
        k = (n - 1) // 2
        return complex(-_lgamma1(n), math.pi if k % 2 else 0.0)

    taylor = CoeffSeq(terms=lambda n: complex(np.exp(log_terms(n)).real), label="sin(z)", log_terms=log_terms)
    cf = ClosedForm(f=np.sin, log_f=lambda t: _log_trig(t, "sin"), expr="sin(t)")
    return EntireFnSpec(taylor, "sin(z)", cf, json={"kind": "builtin", "name": "sin", "params": {}})


def entire_cos() -> EntireFnSpec:
    def log_terms(n):
        if n % 2:
            return NEG_INF
        k = n // 2
        return complex(-_lgamma1(n), math.pi if k % 2 else 0.0)

    taylor = CoeffSeq(terms=lambda n: complex(np.exp(log_terms(n)).real), label="cos(z)", log_terms=log_terms)
    cf = ClosedForm(f=np.cos, log_f=lambda t: _log_trig(t, "cos"), expr="cos(t)")
    return EntireFnSpec(taylor, "cos(z)", cf, json={"kind": "builtin", "name": "cos", "params": {}})


def entire_poly(coeffs, label=None) -> EntireFnSpec:
    """Polynomial ``sum c_k z^k`` from its ascending coefficients."""
    seq = list_seq(coeffs, label=label or "poly")
    vals = np.array([complex(c) for c in coeffs], dtype=complex)
    cf = ClosedForm(f=lambda t: np.polyval(vals[::-1], t), expr=f"poly{list(coeffs)}")
    return EntireFnSpec(seq, label or f"poly{list(coeffs)}", cf, json=seq.json)


def entire_monomial(k) -> EntireFnSpec:
    return entire_poly([0] * k + [1], label=f"s^{k}")


ENTIRE_BUILTINS = {
    "exp": (entire_exp, ("c",)),
    "exp_z2": (entire_exp_z2, ()),
    "sin": (entire_sin, ()),
    "cos": (entire_cos, ()),
    "one": (lambda: entire_poly([1], label="1"), ()),
    "monomial": (entire_monomial, ("k",)),
}


def entire_from_json(obj) -> EntireFnSpec:
    """Parse Taylor data: ``{"kind": "list", ...}`` or ``{"kind": "builtin", "name": ...}``."""
    kind = obj.get("kind")
    if kind == "list":
        return entire_poly([from_pair(v) for v in obj["values"]], label=obj.get("label"))
    if kind == "builtin":
        name = obj["name"]
        if name not in ENTIRE_BUILTINS:
            raise ValueError(f"unknown entire builtin {name!r} (known: {', '.join(ENTIRE_BUILTINS)})")
        builder, allowed = ENTIRE_BUILTINS[name]
        params = obj.get("params", {})
        unknown = set(params) - set(allowed)
        if unknown:
            raise ValueError(f"{name}: unknown params {sorted(unknown)}; allowed {list(allowed)}")
        return builder(**params)
    raise ValueError(f"unknown entire-function kind {kind!r} (expected list or builtin)")


def entire_to_json(spec: EntireFnSpec) -> dict:
    if spec.json is None:
        raise ValueError(f"{spec.label!r} has no JSON form")
    return spec.json


def parse_phi(text: str) -> EntireFnSpec:
    """Test-function shorthand: ``builtin:1``, ``builtin:s^k``, ``builtin:exp``, ``builtin:exp(c*s)``."""
    text = text.strip()
    if text.startswith("{"):
        return entire_from_json(json.loads(text))
    name = text[len("builtin:") :] if text.startswith("builtin:") else text
    name = name.replace(" ", "")
    if name == "1":
        return ENTIRE_BUILTINS["one"][0]()
    if name == "exp":
        return entire_exp(1.0)
    m = re.fullmatch(r"s\^(\d+)", name)
    if m:
        return entire_monomial(int(m.group(1)))
    m = re.fullmatch(r"exp\((.+?)\*?s\)", name)
    if m:
        return entire_exp(parse_complex(m.group(1)))
    if name in ("sin", "cos", "exp_z2"):
        return ENTIRE_BUILTINS[name][0]()
    raise ValueError(f"unknown test function {text!r}; use builtin:1, builtin:s^k, builtin:exp, builtin:exp(c*s)")
