"""Analytic functionals given by their moments, and their pairings with entire functions."""

from __future__ import annotations

import cmath
import math
import threading
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .borel_engine import DEFAULT_CONFIG, _laplace, _map, borel_sum_at
from .borel_transform import TAIL_RUN, as_evaluator, evaluate_entire
from .errors import ContourInvalid, NoConvergence, NotSummableHere, TailNotSmall
from .polygon import BorelPolygonSpec, circle_points, contour_valid
from .series_core import CoeffSeq, EntireFnSpec, exp_complex, radius_cauchy_hadamard

CONSERVATIVE_POINTS = 64
CONTOUR_RTOL = 1e-9
MAX_QUAD = 4096


@dataclass(frozen=True, eq=False)
class AnalyticFunctional:
    """Functional ``g`` with moments ``mu_n = <g, s^n>``.

    ``singularities`` are those of ``b(z) = sum mu_n z^n``. When omitted they
    come from the moment sequence, or else the circle of convergence is used.
    """

    moments: CoeffSeq
    label: str = ""
    singularities: Optional[tuple] = None
    _g_cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if self.singularities is None and self.moments.singularities is not None:
            object.__setattr__(self, "singularities", tuple(self.moments.singularities))
        # a radius estimate that keeps shrinking with N points to radius 0
        r32 = radius_cauchy_hadamard(self.moments, 32).value
        r64 = radius_cauchy_hadamard(self.moments, 64).value
        if not r64 > 0 or r64 < 0.75 * r32:
            warnings.warn(
                f"{self.label or self.moments.label}: moment radius estimates {r32:.3g} (N=32), "
                f"{r64:.3g} (N=64) suggest radius 0",
                stacklevel=2,
            )

    def polygon_spec(self) -> Optional[BorelPolygonSpec]:
        """``None`` stands for ``Pi(b)`` equal to the whole plane."""
        if self.singularities:
            return BorelPolygonSpec(tuple(self.singularities))
        rho = radius_cauchy_hadamard(self.moments, 64).value
        if math.isinf(rho):
            return None
        ring = rho * np.exp(2j * np.pi * np.arange(CONSERVATIVE_POINTS) / CONSERVATIVE_POINTS)
        return BorelPolygonSpec(tuple(ring))


@dataclass(frozen=True)
class PairingResult:
    value: complex
    method: str
    quad_points: int = 0

    def __post_init__(self):
        if not cmath.isfinite(self.value):
            raise ValueError("pairing value must be finite")
        if self.method not in ("multipole", "contour"):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass(frozen=True)
class TransformCheck:
    lhs: complex
    rhs: complex
    abs_diff: float


def multipole_pairing(g: AnalyticFunctional, phi: EntireFnSpec, N: int = 128, tail_tol=1e-14) -> PairingResult:
    """``<g, phi> = sum_{n<=N} mu_n c_n`` with ``phi = sum c_n s^n``.

    Raises
    ------
    TailNotSmall
        The last ``min(64, N/2)`` terms are not negligible against the sum.
    """
    if N < 16:
        raise ValueError("N must be at least 16")
    logs = np.array([g.moments.log_term(n) + phi.taylor_coeffs.log_term(n) for n in range(N + 1)])
    terms = exp_complex(logs)
    if not np.all(np.isfinite(terms)):
        raise TailNotSmall(f"pairing terms overflow before n={N}")
    total = complex(terms.sum())
    window = min(TAIL_RUN, N // 2)
    tail = np.abs(terms[-window:])
    if np.any(tail > tail_tol * abs(total)):
        raise TailNotSmall(f"pairing terms are not negligible at n={N} (|term| up to {tail.max():.3e})")
    return PairingResult(total, "multipole")


def G_eval(g: AnalyticFunctional, s, lambda_max=None, *, mode="auto", config=DEFAULT_CONFIG) -> complex:
    """``G(s) = -(1/(2 pi i)) (1/s) B[sum mu_n w^n](w = 1/s)``.

    Raises
    ------
    NotSummableHere
        The Borel sum at ``1/s`` is not certified summable.
    """
    s = complex(s)
    if s == 0:
        raise ValueError("s must be non-zero")
    lam = config.lambda_max if lambda_max is None else float(lambda_max)
    key = (s, lam, mode)
    with g._lock:
        if key in g._g_cache:
            return g._g_cache[key]
    verdict = borel_sum_at(g.moments, 1 / s, lam, mode=mode, config=config)
    if not verdict.summable:
        raise NotSummableHere(f"G({s}): Borel sum at 1/s is {verdict.status.value} ({verdict.diagnostics})", verdict)
    value = -verdict.value / (2j * math.pi * s)
    with g._lock:
        g._g_cache[key] = value
    return value


def _trapezoid(g, phi_vals, pts, center, lam, mode, config):
    """Trapezoid value and the matching sum of absolute contributions."""
    n = len(pts)
    G = np.array(_map(lambda s: G_eval(g, s, lam, mode=mode, config=config), list(pts), config.worker_count()))
    terms = (2 * np.pi / n) * G * phi_vals * 1j * (pts - center)
    return complex(-np.sum(terms)), float(np.sum(np.abs(terms)))


def contour_pairing(
    g: AnalyticFunctional,
    phi: EntireFnSpec,
    center,
    radius,
    n_quad=64,
    lambda_max=None,
    *,
    n_check=128,
    mode="auto",
    config=DEFAULT_CONFIG,
) -> PairingResult:
    """``<g, phi> = -oint G(s) phi(s) ds`` on a circle, by the periodic trapezoid rule.

    ``n_quad`` is doubled until two successive values agree to ``1e-9``
    relative (at most 4096 nodes). For a vanishing value the comparison
    scale is ``1e-6`` times the summed absolute contributions.

    Raises
    ------
    ContourInvalid
        The circle leaves ``int Pi(g)`` or does not enclose its complement.
    NotSummableHere
        ``G`` failed at a node.
    NoConvergence
        Node cap reached first.
    """
    center = complex(center)
    radius = float(radius)
    if n_quad < 64 or n_quad & (n_quad - 1):
        raise ValueError("n_quad must be a power of two, at least 64")
    if not contour_valid(g.polygon_spec(), center, radius, n_check):
        raise ContourInvalid(f"circle |s - {center}| = {radius} is not a valid contour for {g.label or 'g'}")

    def value_at(n):
        pts = circle_points(center, radius, n)
        return _trapezoid(g, evaluate_entire(phi, pts), pts, center, lambda_max, mode, config)

    n = n_quad
    prev, _ = value_at(n)
    while True:
        if 2 * n > MAX_QUAD:
            raise NoConvergence(f"trapezoid rule did not settle by n_quad={n}; last value {prev}")
        n *= 2
        cur, mass = value_at(n)
        # vanishing pairings are judged against the size of the integrand
        if abs(cur - prev) <= CONTOUR_RTOL * max(abs(cur), 1e-6 * mass):
            return PairingResult(cur, "contour", n)
        prev = cur


def cauchy_transform_check(seq: CoeffSeq, s, lambda_max=None, *, mode="auto", config=DEFAULT_CONFIG) -> TransformCheck:
    """Compare ``int_0^L e^{ist} f(t) dt`` with ``(i/s) b(i/s)`` for ``Im s > 1``."""
    s = complex(s)
    if not s.imag > 1:
        raise ValueError("need Im s > 1")
    cfg = config.with_lambda(lambda_max)
    ev = as_evaluator(seq, mode)
    lhs = _laplace(ev, 1.0, -1j * s, cfg.lambda_max, cfg).value
    w = 1j / s
    verdict = borel_sum_at(seq, w, cfg.lambda_max, mode=mode, config=config)
    if not verdict.summable:
        raise NotSummableHere(f"Borel sum at i/s = {w} is {verdict.status.value} ({verdict.diagnostics})", verdict)
    rhs = w * verdict.value
    return TransformCheck(complex(lhs), complex(rhs), abs(lhs - rhs))
