"""Partial Laplace integrals, Borel sums and circle summability sweeps.

The Borel sum of ``sum a_n z^n`` is the limit of

    I(lam) = integral_0^lam exp(-u) f(z u) du,   f(t) = sum a_n t^n / n!

as ``lam -> inf``. A finite probe cannot take that limit, so a verdict is
read off a geometric ladder of checkpoints ``lam_j = lam_max * 2^-j``.
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from .borel_transform import TransformEvaluator, as_evaluator, weighted_eval
from .errors import EvaluatorError, NonFiniteIntegrand, OutsideDisk, QuadratureError
from .quadrature import adaptive_quad
from .series_core import CoeffSeq, RadiusEstimate, radius_cauchy_hadamard, rotate_scale

DISK_TOL = 1e-12


class Status(str, Enum):
    SUMMABLE = "summable"
    DIVERGENT = "divergent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class EngineConfig:
    """Tolerances and limits of the summability probes."""

    lambda_max: float = 400.0
    n_checkpoints: int = 7
    tail_top: int = 3
    eps_tail_rel: float = 1e-7
    diverge_abs: float = 1e6
    diverge_growth: float = 10.0
    rtol: float = 1e-10
    atol: float = 1e-14
    max_depth: int = 40
    threads: int = 0

    def with_lambda(self, lambda_max):
        return self if lambda_max is None else replace(self, lambda_max=float(lambda_max))

    def worker_count(self):
        n = self.threads or int(os.environ.get("BOREL_LAB_THREADS", "0") or 0)
        return n if n > 0 else 1


DEFAULT_CONFIG = EngineConfig()


@dataclass(frozen=True)
class SummabilityVerdict:
    status: Status
    value: Optional[complex]
    sup_abs_M: float
    lambda_max: float
    diagnostics: str
    tail: float = math.nan
    checkpoints: tuple = ()
    obstruction: bool = False

    def __post_init__(self):
        if self.status is Status.SUMMABLE and (self.value is None or not cmath.isfinite(self.value)):
            raise ValueError("summable verdict needs a finite value")
        if self.status is Status.DIVERGENT and self.value is not None:
            raise ValueError("divergent verdict carries no value")

    @property
    def summable(self):
        return self.status is Status.SUMMABLE


@dataclass(frozen=True)
class CircleSweepReport:
    r: float
    thetas: tuple
    verdicts: tuple
    uniform: bool
    worst_theta: float
    sup_abs_M: float = 0.0
    eps_tail: float = math.nan
    lambda_max: float = math.nan
    mode: str = ""


@dataclass(frozen=True)
class Theorem1Result:
    hypothesis: bool
    radius_estimate: RadiusEstimate
    consistent: bool
    sweep: CircleSweepReport = field(repr=False, default=None)


def _source(seq_or_ev):
    return seq_or_ev.source if isinstance(seq_or_ev, TransformEvaluator) else seq_or_ev


def _ray_integrand(ev, direction, x_scale):
    direction = complex(direction)
    x_scale = complex(x_scale)

    def integrand(u):
        u = np.asarray(u, dtype=float)
        try:
            return weighted_eval(ev, direction * u, -x_scale * u)
        except EvaluatorError as exc:
            if exc.t is not None and direction != 0:
                exc.u = (complex(exc.t) / direction).real
            raise

    return integrand


def _laplace(ev, direction, x_scale, lam, config, breakpoints=()):
    return adaptive_quad(
        _ray_integrand(ev, direction, x_scale),
        0.0,
        lam,
        rtol=config.rtol,
        atol=config.atol,
        max_depth=config.max_depth,
        breakpoints=breakpoints,
    )


def partial_laplace(ev: TransformEvaluator, omega, x_scale=1.0, lam=None, *, config=DEFAULT_CONFIG):
    """``integral_0^lam exp(-x_scale u) f(e^{i omega} u) du``.

    With ``x_scale = 1`` this is the partial Laplace integral ``M_omega(lam)``
    whose boundedness in ``lam``, uniformly in ``omega``, is the uniform
    summability hypothesis.
    """
    lam = config.lambda_max if lam is None else float(lam)
    x_scale = complex(x_scale)
    if not (x_scale.real > 0 or math.isfinite(lam)):
        raise ValueError("need Re(x_scale) > 0 or a finite lam")
    return _laplace(ev, cmath.exp(1j * omega), x_scale, lam, config).value


def _verdict_from_quad(res, ladder, cfg, mode_desc):
    ps = res.partial_sums()
    idx = np.searchsorted(res.breaks, ladder)
    values = ps[idx]
    sup = float(np.max(np.abs(ps)))
    checkpoints = tuple((float(lam), complex(v)) for lam, v in zip(ladder, values))
    top = values[-1]
    mags = np.abs(values)
    base = dict(sup_abs_M=sup, lambda_max=float(ladder[-1]), checkpoints=checkpoints)
    if sup > cfg.diverge_abs:
        return SummabilityVerdict(
            Status.DIVERGENT, None, diagnostics=f"{mode_desc}; |I| reached {sup:.3e} > {cfg.diverge_abs:g}", **base
        )
    if len(mags) >= 3:
        m2, m1, m0 = mags[-3:]
        if m2 < m1 < m0 and m0 >= cfg.diverge_growth * m2:
            return SummabilityVerdict(
                Status.DIVERGENT,
                None,
                diagnostics=f"{mode_desc}; |I| grew x{m0 / m2:.3g} over the last three checkpoints",
                **base,
            )
    top_slice = values[-1 - cfg.tail_top : -1]
    tail = float(np.max(np.abs(top_slice - top))) if top_slice.size else 0.0
    eps = cfg.eps_tail_rel * (1.0 + abs(top))
    if tail <= eps:
        return SummabilityVerdict(
            Status.SUMMABLE, complex(top), diagnostics=f"{mode_desc}; tail {tail:.3e} <= {eps:.3e}", tail=tail, **base
        )
    return SummabilityVerdict(
        Status.INCONCLUSIVE,
        complex(top),
        diagnostics=f"{mode_desc}; tail {tail:.3e} > {eps:.3e} at lambda_max={ladder[-1]:g}",
        tail=tail,
        **base,
    )


def _sum_along(ev, direction, cfg):
    lam = cfg.lambda_max
    ladder = lam * 2.0 ** -np.arange(cfg.n_checkpoints - 1, -1, -1)
    desc = ev.describe()
    try:
        res = _laplace(ev, direction, 1.0, lam, cfg, breakpoints=ladder[:-1])
    except NonFiniteIntegrand as exc:
        return SummabilityVerdict(
            Status.DIVERGENT,
            None,
            sup_abs_M=math.inf,
            lambda_max=lam,
            diagnostics=f"{desc}; integrand overflow at u={exc.u:.6g}",
        )
    except (EvaluatorError, QuadratureError) as exc:
        where = getattr(exc, "u", None)
        at = f" at u={where:.6g}" if where is not None else ""
        return SummabilityVerdict(
            Status.INCONCLUSIVE,
            None,
            sup_abs_M=math.nan,
            lambda_max=lam,
            diagnostics=f"{desc}; {type(exc).__name__}{at}: {exc}",
            obstruction=True,
        )
    return _verdict_from_quad(res, ladder, cfg, desc)


def borel_sum_at(seq_or_ev, z, lambda_max=None, *, mode="auto", config=DEFAULT_CONFIG) -> SummabilityVerdict:
    """Borel (B') sum of ``sum a_n z^n`` probed up to ``lambda_max``.

    Parameters
    ----------
    seq_or_ev : CoeffSeq or TransformEvaluator
        The series, or an evaluator of its Borel transform.
    z : complex
        Summation point.
    lambda_max : float, optional
        Largest checkpoint (at least 50); defaults to ``config.lambda_max``.
    mode : str
        Evaluator mode used when a bare sequence is passed.

    Returns
    -------
    SummabilityVerdict
        ``summable`` when the top checkpoints agree to
        ``eps_tail_rel * (1 + |I|)``; ``divergent`` on overflow, on
        ``|I| > diverge_abs`` or on a monotone ``diverge_growth``-fold rise
        over the last three checkpoints; ``inconclusive`` otherwise,
        including every evaluator obstruction.
    """
    cfg = config.with_lambda(lambda_max)
    if cfg.lambda_max < 50:
        raise ValueError("lambda_max must be at least 50")
    z = complex(z)
    if z == 0:
        a0 = complex(_source(seq_or_ev)(0))
        return SummabilityVerdict(
            Status.SUMMABLE, a0, sup_abs_M=abs(a0), lambda_max=cfg.lambda_max, diagnostics="z = 0: value a_0", tail=0.0
        )
    return _sum_along(as_evaluator(seq_or_ev, mode), z, cfg)


def b_extension(seq_or_ev, z0, z, lambda_max=None, *, mode="auto", config=DEFAULT_CONFIG) -> complex:
    """Analytic extension ``b_{z0}(z)`` into the disk with diameter ``[0, z0]``."""
    cfg = config.with_lambda(lambda_max)
    z0, z = complex(z0), complex(z)
    if z0 == 0:
        raise ValueError("z0 must be non-zero")
    if abs(z - z0 / 2) >= abs(z0) / 2 - DISK_TOL:
        raise OutsideDisk(f"z={z} is not inside the disk |z - z0/2| < |z0|/2 for z0={z0}")
    x = z0 / z
    assert x.real > 1.0, "Re(z0/z) > 1 inside the disk"
    ev = as_evaluator(seq_or_ev, mode)
    return x * _laplace(ev, z0, x, cfg.lambda_max, cfg).value


def _map(fn, items, workers):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def circle_sweep(seq_or_ev, r, n_theta=64, lambda_max=None, *, mode="auto", config=DEFAULT_CONFIG):
    """Probe Borel summability at ``z = r e^{i theta_k}``, ``theta_k = 2 pi k / n_theta``.

    A bare sequence is rotated with :func:`rotate_scale` so each direction
    becomes the sum of ``a_n (r e^{i theta})^n`` at ``z = 1``. The sweep is
    uniform when every direction is summable under one shared tail bound at
    one shared ``lambda_max``.
    """
    if not r > 0:
        raise ValueError("r must be positive")
    if n_theta < 16:
        raise ValueError("n_theta must be at least 16")
    cfg = config.with_lambda(lambda_max)
    thetas = tuple(2 * math.pi * k / n_theta for k in range(n_theta))

    if isinstance(seq_or_ev, TransformEvaluator):
        ev = seq_or_ev
        mode_desc = ev.describe()

        def probe(theta):
            return borel_sum_at(ev, cmath.rect(r, theta), config=cfg)

    else:
        seq = seq_or_ev
        mode_desc = as_evaluator(seq, mode).describe()

        def probe(theta):
            return borel_sum_at(rotate_scale(seq, cmath.rect(r, theta)), 1.0, mode=mode, config=cfg)

    verdicts = tuple(_map(probe, thetas, cfg.worker_count()))
    summed = [v for v in verdicts if v.summable]
    scale = max((abs(v.value) for v in summed), default=0.0)
    eps = cfg.eps_tail_rel * (1.0 + scale)
    sup = max((v.sup_abs_M for v in verdicts), default=0.0)
    all_ok = len(summed) == len(verdicts)
    uniform = bool(all_ok and max(v.tail for v in verdicts) <= eps and math.isfinite(sup))
    failing = [th for th, v in zip(thetas, verdicts) if not v.summable]
    if failing:
        worst = failing[0]
    else:
        worst = thetas[int(np.argmax([v.tail for v in verdicts]))]
    return CircleSweepReport(
        r=float(r),
        thetas=thetas,
        verdicts=verdicts,
        uniform=uniform,
        worst_theta=worst,
        sup_abs_M=sup,
        eps_tail=eps,
        lambda_max=cfg.lambda_max,
        mode=mode_desc,
    )


THEOREM1_LAMBDA = 1600.0
RADIUS_SLACK = 0.05


def theorem1_check(
    seq_or_ev, r, *, lambda_max=THEOREM1_LAMBDA, n_theta=64, radius_N=64, mode="auto", config=DEFAULT_CONFIG
) -> Theorem1Result:
    """Compare uniform circle summability at radius ``r`` with the radius estimate.

    Uniform summability on ``|z| = r`` forces a radius of convergence of at
    least ``r``; ``consistent`` is false only when the sweep passes while the
    Cauchy-Hadamard estimate falls more than 5% short of ``r``.
    """
    sweep = circle_sweep(seq_or_ev, r, n_theta, lambda_max, mode=mode, config=config)
    radius = radius_cauchy_hadamard(_source(seq_or_ev), radius_N)
    consistent = (not sweep.uniform) or radius.value >= r * (1 - RADIUS_SLACK)
    return Theorem1Result(hypothesis=sweep.uniform, radius_estimate=radius, consistent=consistent, sweep=sweep)


__all__ = [
    "CircleSweepReport",
    "CoeffSeq",
    "EngineConfig",
    "Status",
    "SummabilityVerdict",
    "Theorem1Result",
    "b_extension",
    "borel_sum_at",
    "circle_sweep",
    "partial_laplace",
    "theorem1_check",
]
