"""Evaluable Borel transforms ``f(t) = sum a_n t^n / n!`` and the builtin catalog.

Three evaluation modes are supported and the caller always chooses one:

* ``series``: truncated power series with an explicit tail test,
* ``pade``: an [L/M] Padé approximant, continuing ``f`` past its series disk,
* ``closed_form``: a known formula (ground truth for the catalog).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CatalogMiss, CancellationLoss, NonFiniteCoefficient, PoleNearby, SingularSystem, TailNotSmall
from .series_core import (
    NEG_INF,
    ClosedForm,
    CoeffSeq,
    EntireFnSpec,
    _Powers,
    as_pair,
    clog,
    coeffs_from_json,
    coeffs_to_json,
    exp_complex,
    from_pair,
)

DEFAULT_N_MAX = 400
DEFAULT_TAIL_TOL = 1e-14
TAIL_RUN = 64
POLE_GUARD = 1e-12
PIVOT_REL = 1e-13
# fewer than ~8 significant digits survive past this ratio of max|term| to |sum|
CANCELLATION_RATIO = 1e8

MODES = ("series", "pade", "closed_form")


@dataclass(frozen=True, eq=False)
class TransformEvaluator:
    mode: str
    source: CoeffSeq
    n_max: int = DEFAULT_N_MAX
    tail_tol: float = DEFAULT_TAIL_TOL
    L: Optional[int] = None
    M: Optional[int] = None
    anchor_N: Optional[int] = None
    catalog_id: Optional[str] = None
    closed: Optional[ClosedForm] = None
    num: Optional[np.ndarray] = field(default=None, repr=False)
    den: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "pade":
            if self.M is None or self.L is None or self.M < 1 or self.L < 1:
                raise ValueError("pade mode needs L, M >= 1")
            if self.anchor_N is None or self.L + self.M + 1 > self.anchor_N:
                raise ValueError("pade mode needs L + M + 1 <= anchor_N")
        if self.mode == "closed_form" and self.closed is None:
            raise CatalogMiss(self.catalog_id or self.source.label)

    def __call__(self, t):
        return eval_transform(self, t)

    @property
    def pade_degrees(self):
        """Degrees (L, M) actually used after any degree reduction."""
        if self.mode != "pade":
            return None
        return len(self.num) - 1, len(self.den) - 1

    def describe(self):
        if self.mode == "series":
            return f"series(N_max={self.n_max}, tail_tol={self.tail_tol:g})"
        if self.mode == "pade":
            return f"pade(L={self.L}, M={self.M}, effective={self.pade_degrees})"
        return f"closed_form({self.catalog_id or self.closed.expr})"


# --------------------------------------------------------------------------
# Power series summation


def sum_log_series(logc, t, tail_tol=DEFAULT_TAIL_TOL, run=TAIL_RUN):
    """Sum ``sum_n exp(logc[n]) t^n`` at every point of ``t``.

    The terms are formed as ``exp(logc[n] + n log t)`` so neither ``t^n`` nor
    the coefficients have to be representable on their own. A point is
    accepted once ``run`` consecutive terms are at most ``tail_tol`` times the
    partial sum; otherwise :class:`TailNotSmall` is raised. Points whose terms
    exceed the sum by more than ``CANCELLATION_RATIO`` raise
    :class:`CancellationLoss`.
    """
    t = np.asarray(t, dtype=complex)
    shape = t.shape
    flat = t.ravel()
    logc = np.asarray(logc, dtype=complex)
    n_terms = logc.size
    n = np.arange(n_terms)[:, None]
    out = np.empty(flat.size, dtype=complex)
    chunk = max(1, 400_000 // max(n_terms, 1))
    for start in range(0, flat.size, chunk):
        tc = flat[start : start + chunk]
        with np.errstate(divide="ignore", invalid="ignore"):
            logt = np.log(tc)
            expo = logc[:, None] + n * logt[None, :]
        expo[0, :] = logc[0]
        terms = exp_complex(expo)
        partial = np.cumsum(terms, axis=0)
        mag = np.abs(terms)
        below = mag <= tail_tol * np.abs(partial)
        if n_terms < run:
            raise TailNotSmall(f"only {n_terms} terms available, tail test needs {run}", t=complex(tc[0]))
        counts = np.cumsum(below, axis=0)
        window = counts[run - 1 :] - np.concatenate([np.zeros((1, tc.size)), counts[:-run]], axis=0)
        done = window >= run
        settled = done.any(axis=0)
        if not settled.all():
            bad = complex(tc[~settled][0])
            raise TailNotSmall(f"series tail not below {tail_tol:g} within {n_terms} terms at t={bad}", t=bad)
        stop = np.argmax(done, axis=0) + run - 1
        cols = np.arange(tc.size)
        value = partial[stop, cols]
        biggest = mag.max(axis=0)
        lost = biggest > CANCELLATION_RATIO * np.abs(value)
        if lost.any():
            bad = complex(tc[lost][0])
            raise CancellationLoss(f"catastrophic cancellation in series at t={bad}", t=bad)
        out[start : start + chunk] = value
    return out.reshape(shape)


def series_evaluator(seq: CoeffSeq, n_max=DEFAULT_N_MAX, tail_tol=DEFAULT_TAIL_TOL) -> TransformEvaluator:
    return TransformEvaluator(mode="series", source=seq, n_max=n_max, tail_tol=tail_tol)


def closed_form_evaluator(seq: CoeffSeq) -> TransformEvaluator:
    if seq.closed_form is None:
        raise CatalogMiss(seq.label or "<anonymous>")
    return TransformEvaluator(mode="closed_form", source=seq, closed=seq.closed_form, catalog_id=seq.label)


def as_evaluator(seq_or_ev, mode="auto") -> TransformEvaluator:
    """Wrap a sequence in an evaluator.

    ``mode="auto"`` selects the closed form when the sequence carries one and
    the series otherwise; the chosen mode is visible through ``describe()``.
    """
    if isinstance(seq_or_ev, TransformEvaluator):
        return seq_or_ev
    if mode == "auto":
        mode = "closed_form" if seq_or_ev.closed_form is not None else "series"
    if mode == "series":
        return series_evaluator(seq_or_ev)
    if mode == "closed_form":
        return closed_form_evaluator(seq_or_ev)
    if mode == "pade":
        return build_pade(seq_or_ev, 8, 8)
    raise ValueError(f"unknown mode {mode!r}")


def _series_logc(ev: TransformEvaluator):
    key = ("series_logc", ev.n_max)
    cache = ev.source._cache
    if key not in cache:
        n = ev.n_max + 1
        if ev.source.max_index_hint is not None:
            n = min(n, ev.source.max_index_hint + 1)
        cache[key] = ev.source.borel_log_values(n)
    return cache[key]


def eval_transform(ev: TransformEvaluator, t):
    """Evaluate the Borel transform at a point or an array of points."""
    scalar = np.ndim(t) == 0
    t = np.asarray(t, dtype=complex)
    if ev.mode == "series":
        out = sum_log_series(_series_logc(ev), t, ev.tail_tol)
    elif ev.mode == "pade":
        num = np.polyval(ev.num[::-1], t)
        den = np.polyval(ev.den[::-1], t)
        near = np.abs(den) < POLE_GUARD
        if near.any():
            bad = complex(t[near][0]) if t.ndim else complex(t)
            raise PoleNearby(f"Padé denominator below {POLE_GUARD:g} at t={bad}", t=bad)
        out = num / den
    else:
        out = ev.closed(t)
    return complex(out) if scalar else out


def weighted_eval(ev: TransformEvaluator, t, log_w):
    """``exp(log_w) * f(t)``, combined in log form for closed forms."""
    t = np.asarray(t, dtype=complex)
    log_w = np.asarray(log_w, dtype=complex)
    if ev.mode == "closed_form":
        return exp_complex(ev.closed.log(t) + log_w)
    return eval_transform(ev, t) * exp_complex(log_w)


# --------------------------------------------------------------------------
# Padé continuation


def _solve_partial_pivot(A, rhs):
    A = np.array(A, dtype=complex)
    x = np.array(rhs, dtype=complex)
    m = A.shape[0]
    row_norm = np.abs(A).max(axis=1)
    perm = np.arange(m)
    for k in range(m):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if p != k:
            A[[k, p]] = A[[p, k]]
            x[[k, p]] = x[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        if abs(A[k, k]) < PIVOT_REL * max(row_norm[perm[k]], np.finfo(float).tiny):
            raise SingularSystem(f"pivot {abs(A[k, k]):.3e} below {PIVOT_REL:g} x row norm at step {k}")
        factors = A[k + 1 :, k] / A[k, k]
        A[k + 1 :, k:] -= factors[:, None] * A[k, k:]
        x[k + 1 :] -= factors * x[k]
    out = np.empty(m, dtype=complex)
    for k in range(m - 1, -1, -1):
        out[k] = (x[k] - A[k, k + 1 :] @ out[k + 1 :]) / A[k, k]
    return out


def pade_coefficients(b, L, M, reduce_degree=True):
    """Numerator and denominator (ascending, ``den[0] = 1``) of the [L/M] approximant."""
    b = np.asarray(b, dtype=complex)
    if not np.any(b[: L + M + 1]):
        return np.zeros(1, dtype=complex), np.ones(1, dtype=complex)

    def coef(k):
        return b[k] if k >= 0 else 0j

    q = np.ones(1, dtype=complex)
    for m in range(M, 0, -1):
        A = [[coef(L + i - j) for j in range(1, m + 1)] for i in range(1, m + 1)]
        rhs = [-coef(L + i) for i in range(1, m + 1)]
        try:
            q = np.concatenate([[1.0], _solve_partial_pivot(A, rhs)])
            break
        except SingularSystem:
            if not reduce_degree:
                raise
    m = q.size - 1
    p = np.array([sum(q[j] * b[k - j] for j in range(min(k, m) + 1)) for k in range(L + 1)])
    return p, q


def build_pade(seq: CoeffSeq, L: int, M: int, *, anchor_N=None, reduce_degree=True) -> TransformEvaluator:
    """[L/M] Padé approximant of ``sum (a_n/n!) t^n``.

    The denominator solves the M x M Toeplitz system by Gaussian elimination
    with partial pivoting. A singular system (degenerate block of the Padé
    table) lowers M until the system is regular, unless ``reduce_degree`` is
    false, in which case :class:`SingularSystem` is raised. The all-zero
    series yields the zero evaluator.
    """
    if L < 1 or M < 1:
        raise ValueError("L and M must be >= 1")
    anchor_N = L + M + 1 if anchor_N is None else anchor_N
    b = exp_complex(seq.borel_log_values(L + M + 1))
    num, den = pade_coefficients(b, L, M, reduce_degree=reduce_degree)
    return TransformEvaluator(mode="pade", source=seq, L=L, M=M, anchor_N=anchor_N, num=num, den=den)


# --------------------------------------------------------------------------
# Catalog


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    coeffs: CoeffSeq
    transform_closed_form: ClosedForm
    notes: str


def _pole_guarded_inverse(t):
    d = 1.0 + np.asarray(t, dtype=complex)
    near = np.abs(d) < POLE_GUARD
    if near.any():
        bad = complex(np.asarray(t)[near][0]) if np.ndim(t) else complex(t)
        raise PoleNearby(f"1/(1+t) pole at t={bad}", t=bad)
    return 1.0 / d


def _log_inverse(t):
    _pole_guarded_inverse(t)
    return -np.log(1.0 + np.asarray(t, dtype=complex))


def _neg_exp(t):
    """-e^t without nan for huge real parts."""
    e = exp_complex(np.asarray(t, dtype=complex))
    return -e


def _ones():
    cf = ClosedForm(f=np.exp, log_f=lambda t: t, expr="exp(t)")
    seq = CoeffSeq(
        terms=lambda n: 1.0 + 0j,
        label="ones",
        borel_log=lambda n: complex(-math.lgamma(n + 1)),
        log_terms=lambda n: 0j,
        closed_form=cf,
        singularities=(1.0 + 0j,),
        json={"kind": "builtin", "name": "ones", "params": {}},
    )
    return CatalogEntry("ones", seq, cf, "a_n = 1; f(t) = e^t; sum 1/(1-z)")


def _alt_factorial():
    cf = ClosedForm(
        f=_pole_guarded_inverse,
        log_f=_log_inverse,
        expr="1/(1+t)",
    )
    sign = lambda n: complex(0.0, math.pi) if n % 2 else 0j  # noqa: E731
    seq = CoeffSeq(
        terms=lambda n: (-1.0) ** n * float(math.factorial(n)),
        max_index_hint=170,
        label="alt_factorial",
        borel_log=sign,
        log_terms=lambda n: math.lgamma(n + 1) + sign(n),
        closed_form=cf,
        json={"kind": "builtin", "name": "alt_factorial", "params": {}},
    )
    return CatalogEntry("alt_factorial", seq, cf, "a_n = (-1)^n n!; f(t) = 1/(1+t); Euler's divergent series")


class _ComplementaryBell:
    """Exact integers B~_n with exp(1 - e^t) = sum B~_n t^n / n!."""

    def __init__(self):
        self._vals = [1]
        self._lock = threading.Lock()

    def __call__(self, n):
        vals = self._vals
        if n >= len(vals):
            with self._lock:
                while len(vals) <= n:
                    k = len(vals) - 1
                    vals.append(-sum(math.comb(k, j) * vals[j] for j in range(k + 1)))
        return vals[n]


_CBELL = _ComplementaryBell()


def _hardy_log_terms(n):
    v = _CBELL(n)
    if v == 0:
        return NEG_INF
    return complex(math.log(abs(v)) - 1.0, math.pi if v < 0 else 0.0)


def _hardy_borel_log(n):
    lt = _hardy_log_terms(n)
    return lt if lt.real == -math.inf else lt - math.lgamma(n + 1)


def _hardy_terms(n):
    try:
        return complex(_CBELL(n) / math.e)
    except OverflowError:
        raise NonFiniteCoefficient(f"hardy_ex: a_{n} exceeds binary64") from None


def _hardy_ex():
    cf = ClosedForm(f=lambda t: exp_complex(_neg_exp(t)), log_f=_neg_exp, expr="exp(-exp(t))")
    seq = CoeffSeq(
        terms=_hardy_terms,
        label="hardy_ex",
        borel_log=_hardy_borel_log,
        log_terms=_hardy_log_terms,
        closed_form=cf,
        json={"kind": "builtin", "name": "hardy_ex", "params": {}},
    )
    return CatalogEntry(
        "hardy_ex",
        seq,
        cf,
        "a_n = sum_k (-1)^k k^n / k!; f(t) = exp(-e^t); summable on the real axis only (Re z > 0)",
    )


def _exp_sigma(sigma=1.0):
    sigma = from_pair(sigma)
    pw = _Powers(sigma)
    lsig = clog(sigma)

    def borel_log(n):
        if n == 0:
            return 0j
        if sigma == 0:
            return NEG_INF
        return n * lsig - math.lgamma(n + 1)

    cf = ClosedForm(f=lambda t: np.exp(sigma * t), log_f=lambda t: sigma * t, expr=f"exp(({sigma})*t)")
    seq = CoeffSeq(
        terms=pw,
        label=f"exp_sigma({sigma})",
        borel_log=borel_log,
        log_terms=lambda n: 0j if n == 0 else (NEG_INF if sigma == 0 else n * lsig),
        closed_form=cf,
        singularities=(1.0 / sigma,) if sigma != 0 else (),
        json={"kind": "builtin", "name": "exp_sigma", "params": {"sigma": as_pair(sigma)}},
    )
    return CatalogEntry("exp_sigma", seq, cf, "a_n = sigma^n; f(t) = e^(sigma t); sum 1/(1 - sigma z)")


def _exp_z2_log_terms(n):
    if n % 2:
        return NEG_INF
    m = n // 2
    return complex(math.lgamma(n + 1) - math.lgamma(m + 1))


def _exp_z2_moments():
    cf = ClosedForm(f=lambda t: np.exp(t * t), log_f=lambda t: t * t, expr="exp(t^2)")

    def terms(n):
        if n % 2:
            return 0j
        m = n // 2
        return complex(float(math.factorial(n) // math.factorial(m)))

    seq = CoeffSeq(
        terms=terms,
        label="exp_z2_moments",
        borel_log=lambda n: NEG_INF if n % 2 else complex(-math.lgamma(n // 2 + 1)),
        log_terms=_exp_z2_log_terms,
        closed_form=cf,
        json={"kind": "builtin", "name": "exp_z2_moments", "params": {}},
    )
    return CatalogEntry(
        "exp_z2_moments", seq, cf, "a_2m = (2m)!/m!, odd terms 0; f(t) = e^(t^2); radius 0, not of exponential type"
    )


_BUILDERS = {
    "ones": (_ones, ()),
    "alt_factorial": (_alt_factorial, ()),
    "hardy_ex": (_hardy_ex, ()),
    "exp_sigma": (_exp_sigma, ("sigma",)),
    "exp_z2_moments": (_exp_z2_moments, ()),
}

CATALOG_IDS = tuple(_BUILDERS)


def catalog_lookup(id: str, **params) -> CatalogEntry:
    """Resolve a builtin catalog id, e.g. ``catalog_lookup("exp_sigma", sigma=2)``."""
    if id not in _BUILDERS:
        raise CatalogMiss(id, CATALOG_IDS)
    builder, allowed = _BUILDERS[id]
    unknown = set(params) - set(allowed)
    if unknown:
        raise ValueError(f"{id}: unknown params {sorted(unknown)}; allowed {list(allowed)}")
    return builder(**params)


def catalog_listing():
    """``(id, parameter names, notes)`` for every builtin."""
    return [(cid, _BUILDERS[cid][1], catalog_lookup(cid).notes) for cid in CATALOG_IDS]


# --------------------------------------------------------------------------
# JSON and entire functions


def evaluator_from_json(obj) -> TransformEvaluator:
    """Parse ``{"kind": "transform", "mode": ..., "coeffs": {...}}``."""
    if obj.get("kind") != "transform":
        raise ValueError("transform JSON must have kind 'transform'")
    seq = coeffs_from_json(obj["coeffs"])
    mode = obj.get("mode", "series")
    if mode == "series":
        return series_evaluator(seq, int(obj.get("N_max", DEFAULT_N_MAX)), float(obj.get("tail_tol", DEFAULT_TAIL_TOL)))
    if mode == "pade":
        return build_pade(seq, int(obj["L"]), int(obj["M"]), anchor_N=obj.get("anchor_N"))
    if mode == "closed_form":
        return closed_form_evaluator(seq)
    raise ValueError(f"unknown transform mode {mode!r}")


def evaluator_to_json(ev: TransformEvaluator) -> dict:
    out = {"kind": "transform", "mode": ev.mode, "coeffs": coeffs_to_json(ev.source)}
    if ev.mode == "series":
        out.update(N_max=ev.n_max, tail_tol=ev.tail_tol)
    elif ev.mode == "pade":
        out.update(L=ev.L, M=ev.M, anchor_N=ev.anchor_N)
    return out


def evaluate_entire(spec: EntireFnSpec, s, tail_tol=DEFAULT_TAIL_TOL, n_max=DEFAULT_N_MAX):
    """Value of an entire function at ``s`` from its closed form or Taylor series."""
    scalar = np.ndim(s) == 0
    if spec.closed_form is not None:
        out = spec.closed_form(s)
    else:
        taylor = spec.taylor_coeffs
        n = n_max + 1 if taylor.max_index_hint is None else min(n_max, taylor.max_index_hint) + 1
        key = ("taylor_logc", n)
        if key not in taylor._cache:
            taylor._cache[key] = np.array([taylor.log_term(k) for k in range(n)], dtype=complex)
        out = sum_log_series(taylor._cache[key], s, tail_tol)
    return complex(out) if scalar else np.asarray(out)


__all__ = [
    "CATALOG_IDS",
    "CatalogEntry",
    "TransformEvaluator",
    "as_evaluator",
    "build_pade",
    "catalog_listing",
    "catalog_lookup",
    "closed_form_evaluator",
    "eval_transform",
    "evaluate_entire",
    "evaluator_from_json",
    "evaluator_to_json",
    "pade_coefficients",
    "series_evaluator",
    "sum_log_series",
    "weighted_eval",
]

