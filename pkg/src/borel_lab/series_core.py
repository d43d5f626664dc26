"""Coefficient sequences and the utilities built directly on them.

A :class:`CoeffSeq` is a lazily evaluated complex sequence ``a_0, a_1, ...``.
Besides the raw terms it can carry closed-form metadata: the Borel transform
``f(t) = sum a_n t^n / n!`` as a :class:`ClosedForm`, the logarithms of the
scaled coefficients ``a_n / n!`` (so that transforms of factorially growing
sequences never form ``n!``), and the singularities of the continued sum
``b(z) = sum a_n z^n`` when they are known.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import CoefficientOverflow, NonFiniteCoefficient
from .quadrature import adaptive_quad

NEG_INF = complex(-math.inf, 0.0)


def as_pair(z):
    z = complex(z)
    return [z.real, z.imag]


def from_pair(v):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"complex pair must have 2 entries, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def clog(z):
    """Complex log with log(0) = -inf + 0j instead of an exception."""
    z = complex(z)
    if z == 0:
        return NEG_INF
    return cmath.log(z)


def exp_complex(logz):
    """Vectorized exp for complex logs that may be -inf or carry huge phases."""
    logz = np.asarray(logz, dtype=complex)
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        mag = np.exp(logz.real)
        out = mag * (np.cos(logz.imag) + 1j * np.sin(logz.imag))
    out = np.where(mag == 0, 0.0, out)
    return np.where(np.isinf(mag), complex(math.inf, 0.0), out)


@dataclass(frozen=True)
class ClosedForm:
    """Vectorized closed form of a function, optionally with a log form.

    ``log_f`` lets weighted integrands ``exp(-x u) f(z u)`` be formed without
    overflow when ``f`` itself exceeds the binary64 range.
    """

    f: Callable[[np.ndarray], np.ndarray]
    log_f: Optional[Callable[[np.ndarray], np.ndarray]] = None
    expr: str = ""

    def __call__(self, t):
        return np.asarray(self.f(np.asarray(t, dtype=complex)), dtype=complex)

    def log(self, t):
        t = np.asarray(t, dtype=complex)
        if self.log_f is not None:
            return np.asarray(self.log_f(t), dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(self(t))

    def scaled(self, c):
        """Closed form of t -> f(c t)."""
        c = complex(c)
        f, log_f = self.f, self.log_f
        return ClosedForm(
            f=lambda t: f(c * np.asarray(t, dtype=complex)),
            log_f=None if log_f is None else (lambda t: log_f(c * np.asarray(t, dtype=complex))),
            expr=f"({self.expr})(({c})*t)" if self.expr else "",
        )


class _Powers:
    """c^0, c^1, ... by iterated multiplication, cached."""

    def __init__(self, c):
        self.c = complex(c)
        self._vals = [1.0 + 0j]
        self._lock = threading.Lock()

    def __call__(self, n):
        vals = self._vals
        if n >= len(vals):
            with self._lock:
                while len(vals) <= n:
                    vals.append(vals[-1] * self.c)
        return vals[n]


@dataclass(frozen=True, eq=False)
class CoeffSeq:
    """Complex coefficient sequence ``n -> a_n``.

    Only ``terms`` is required. ``borel_log(n)`` returns ``log(a_n / n!)``
    and ``log_terms(n)`` returns ``log(a_n)`` (both ``-inf`` for zero terms);
    when absent they are derived from ``terms``.
    """

    terms: Callable[[int], complex]
    max_index_hint: Optional[int] = None
    label: str = ""
    borel_log: Optional[Callable[[int], complex]] = None
    log_terms: Optional[Callable[[int], complex]] = None
    closed_form: Optional[ClosedForm] = None
    singularities: Optional[tuple] = None
    json: Optional[dict] = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __call__(self, n):
        return complex(self.terms(n))

    def check_index(self, n):
        if self.max_index_hint is not None and n > self.max_index_hint:
            raise ValueError(
                f"{self.label or 'sequence'}: index {n} beyond max_index_hint={self.max_index_hint}"
            )

    def values(self, n):
        """Array of a_0 .. a_{n-1}."""
        key = ("values", n)
        if key not in self._cache:
            self.check_index(n - 1)
            self._cache[key] = np.array([complex(self.terms(k)) for k in range(n)], dtype=complex)
        return self._cache[key]

    def log_term(self, n):
        if self.log_terms is not None:
            return complex(self.log_terms(n))
        a = complex(self.terms(n))
        if not cmath.isfinite(a):
            raise NonFiniteCoefficient(f"a_{n} = {a} is not finite")
        return clog(a)

    def borel_log_at(self, n):
        if self.borel_log is not None:
            return complex(self.borel_log(n))
        lt = self.log_term(n)
        if lt.real == -math.inf:
            return NEG_INF
        return lt - math.lgamma(n + 1)

    def borel_log_values(self, n):
        """Array of log(a_k / k!) for k < n."""
        key = ("borel_log", n)
        if key not in self._cache:
            self._cache[key] = np.array([self.borel_log_at(k) for k in range(n)], dtype=complex)
        return self._cache[key]


@dataclass(frozen=True)
class RadiusEstimate:
    value: float
    n_used: int
    method: str = "cauchy_hadamard"

    def __post_init__(self):
        if not self.value >= 0:
            raise ValueError("radius must be non-negative")


@dataclass(frozen=True, eq=False)
class EntireFnSpec:
    """Entire function given by its Taylor coefficients ``c_n`` at 0."""

    taylor_coeffs: CoeffSeq
    label: str = ""
    closed_form: Optional[ClosedForm] = None
    json: Optional[dict] = None


def list_seq(values, label="list"):
    """Finite coefficient list, padded with zeros."""
    vals = tuple(complex(v) for v in values)
    for k, v in enumerate(vals):
        if not cmath.isfinite(v):
            raise NonFiniteCoefficient(f"a_{k} = {v} is not finite")
    n_vals = len(vals)

    def terms(n):
        return vals[n] if n < n_vals else 0j

    return CoeffSeq(
        terms=terms,
        label=label,
        json={"kind": "list", "values": [as_pair(v) for v in vals]},
    )


def rotate_scale(seq: CoeffSeq, c) -> CoeffSeq:
    """Sequence ``a_n c^n``, so that sums at ``c z`` become sums at ``z``."""
    c = complex(c)
    pw = _Powers(c)
    logc = clog(c)

    def shift(n, base):
        if n == 0:
            return base
        if c == 0 or base.real == -math.inf:
            return NEG_INF
        return base + n * logc

    sing = None
    if seq.singularities is not None and c != 0:
        sing = tuple(complex(z) / c for z in seq.singularities)
    elif seq.singularities is not None:
        sing = ()
    return CoeffSeq(
        terms=lambda n: seq.terms(n) * pw(n),
        max_index_hint=seq.max_index_hint,
        label=f"{seq.label}*({c})^n",
        borel_log=lambda n: shift(n, seq.borel_log_at(n)),
        log_terms=lambda n: shift(n, seq.log_term(n)),
        closed_form=None if seq.closed_form is None else seq.closed_form.scaled(c),
        singularities=sing,
        json=None if seq.json is None else {"kind": "rotate_scale", "c": as_pair(c), "base": seq.json},
    )


def radius_cauchy_hadamard(seq: CoeffSeq, N: int = 64) -> RadiusEstimate:
    """Cauchy-Hadamard estimate ``1 / max |a_n|^(1/n)`` over ``n in [N/2, N]``.

    Zero coefficients are skipped so lacunary series are not penalised; an
    all-zero window gives an infinite radius.
    """
    if N < 16:
        raise ValueError("N must be at least 16")
    best = -math.inf
    for n in range(N // 2, N + 1):
        lt = seq.log_term(n)
        if not (cmath.isfinite(lt) or lt.real == -math.inf):
            raise NonFiniteCoefficient(f"a_{n} is not finite")
        if lt.real == -math.inf:
            continue
        best = max(best, lt.real / n)
    value = math.inf if best == -math.inf else math.exp(-best)
    return RadiusEstimate(value=value, n_used=N, method="cauchy_hadamard")


def _vectorize(fn):
    def wrapped(x):
        x = np.asarray(x, dtype=float)
        out = fn(x)
        if np.shape(out) != x.shape:
            out = np.array([complex(fn(float(v))) for v in x.ravel()]).reshape(x.shape)
        return np.asarray(out, dtype=complex)

    return wrapped


def cesaro_mean(samples, lam, panels=16, *, rtol=1e-10, atol=1e-14):
    """(C,1) mean ``(1/lam) * integral_0^lam psi(t) dt``."""
    if not lam > 0:
        raise ValueError("lam must be positive")
    if panels < 16:
        raise ValueError("panels must be at least 16")
    edges = np.linspace(0.0, lam, panels + 1)
    res = adaptive_quad(_vectorize(samples), 0.0, lam, rtol=rtol, atol=atol, breakpoints=edges[1:-1])
    return res.value / lam


class _MomentTaylorTerms:
    def __init__(self, taylor: CoeffSeq):
        self.taylor = taylor
        self._a = []
        self._c = []
        self._fact = [1.0]
        self._lock = threading.Lock()

    def _extend(self, n):
        a, c, fact = self._a, self._c, self._fact
        while len(a) <= n:
            k = len(a)
            ck = complex(self.taylor.terms(k))
            if k > 0:
                fact.append(fact[-1] * k)
            if k == 0:
                ak = ck
            elif c[k - 1] != 0:
                ak = a[k - 1] * k * (ck / c[k - 1])
            else:
                ak = fact[k] * ck
            if ck != 0 and not cmath.isfinite(ak):
                ak = complex(math.nan, math.nan)
            a.append(ak)
            c.append(ck)

    def __call__(self, n):
        if n >= len(self._a):
            with self._lock:
                self._extend(n)
        val = self._a[n]
        if not cmath.isfinite(val):
            raise CoefficientOverflow(n)
        return val


def moment_taylor_seq(f_spec: EntireFnSpec) -> CoeffSeq:
    """Sequence ``a_n = f^(n)(0) = n! c_n`` of an entire function.

    Its Borel transform is the function itself, so ``borel_log`` and
    ``closed_form`` are inherited from the Taylor data.
    """
    taylor = f_spec.taylor_coeffs
    terms = _MomentTaylorTerms(taylor)

    def log_terms(n):
        lc = taylor.log_term(n)
        if lc.real == -math.inf:
            return NEG_INF
        return lc + math.lgamma(n + 1)

    return CoeffSeq(
        terms=terms,
        max_index_hint=taylor.max_index_hint,
        label=f"moments({f_spec.label})",
        borel_log=taylor.log_term,
        log_terms=log_terms,
        closed_form=f_spec.closed_form,
        json=None if f_spec.json is None else {"kind": "moment_taylor", "taylor": f_spec.json},
    )


def coeffs_from_json(obj) -> CoeffSeq:
    """Parse the JSON form of a coefficient sequence."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("coefficient JSON must be an object with a 'kind' field")
    kind = obj["kind"]
    if kind == "list":
        return list_seq([from_pair(v) for v in obj["values"]], label=obj.get("label", "list"))
    if kind == "builtin":
        from .borel_transform import catalog_lookup

        return catalog_lookup(obj["name"], **obj.get("params", {})).coeffs
    if kind == "rotate_scale":
        return rotate_scale(coeffs_from_json(obj["base"]), from_pair(obj["c"]))
    if kind == "moment_taylor":
        from .type_analysis import entire_from_json

        return moment_taylor_seq(entire_from_json(obj["taylor"]))
    raise ValueError(f"unknown coefficient kind {kind!r} (expected list, builtin, rotate_scale, moment_taylor)")


def coeffs_to_json(seq: CoeffSeq) -> dict:
    if seq.json is None:
        raise ValueError(f"sequence {seq.label!r} has no JSON form")
    return seq.json
