"""Batched adaptive Gauss-Legendre quadrature for complex integrands.

Every interval is estimated with a 10-point Gauss-Legendre rule and bisected
until the sum over the two halves differs from the parent estimate by less
than its share of the global tolerance. All pending intervals of one round
are evaluated in a single vectorized call to the integrand.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DepthExceeded, NonFiniteIntegrand

_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)


@dataclass(frozen=True)
class QuadResult:
    value: complex
    breaks: np.ndarray
    pieces: np.ndarray
    n_evals: int

    def partial_sums(self):
        """Cumulative integral at every break point (starting with 0)."""
        return np.concatenate([[0j], np.cumsum(self.pieces)])


def _gl_nodes(lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    return mid[:, None] + half[:, None] * _GL_X[None, :], half


def adaptive_quad(
    fn,
    a,
    b,
    *,
    rtol=1e-10,
    atol=1e-14,
    max_depth=40,
    breakpoints=(),
    max_intervals=200_000,
):
    """Integrate a vectorized complex function over ``[a, b]``.

    Parameters
    ----------
    fn : callable
        Maps a float array of abscissae to a complex array of the same shape.
    a, b : float
        Finite limits with ``a < b``.
    rtol, atol : float
        The accepted global error is ``max(rtol * |I|, atol)``, distributed
        over intervals in proportion to their length.
    max_depth : int
        Maximum number of bisections of an initial panel.
    breakpoints : sequence of float
        Interior points that become initial panel edges (and therefore exact
        break points of the result).

    Returns
    -------
    QuadResult
        Total value plus the accepted partition and per-interval integrals.

    Raises
    ------
    NonFiniteIntegrand
        Some sample was inf or nan.
    DepthExceeded
        An interval still failed the tolerance test at ``max_depth``.
    """
    a, b = float(a), float(b)
    if not b > a:
        raise ValueError("need a < b")
    edges = np.unique(np.concatenate([[a, b], np.asarray(breakpoints, dtype=float)]))
    edges = edges[(edges >= a) & (edges <= b)]
    total_len = b - a
    n_evals = 0

    def evaluate(lo, hi):
        nonlocal n_evals
        nodes, half = _gl_nodes(lo, hi)
        vals = np.asarray(fn(nodes.ravel()), dtype=complex).reshape(nodes.shape)
        n_evals += nodes.size
        bad = ~np.isfinite(vals)
        if bad.any():
            u = float(nodes[bad][0])
            raise NonFiniteIntegrand(f"integrand is not finite at u={u!r}", u=u)
        return half * (vals @ _GL_W)

    lo, hi = edges[:-1], edges[1:]
    depth = np.zeros(lo.size, dtype=int)
    parent = evaluate(lo, hi)
    acc_lo, acc_hi, acc_val = [], [], []
    accepted_sum = 0j

    while lo.size:
        mid = 0.5 * (lo + hi)
        both = evaluate(np.concatenate([lo, mid]), np.concatenate([mid, hi]))
        left, right = both[: lo.size], both[lo.size :]
        refined = left + right
        err = np.abs(refined - parent)
        scale = abs(accepted_sum + refined.sum())
        tol = max(rtol * scale, atol) * (hi - lo) / total_len
        ok = err <= tol
        if ok.any():
            acc_lo.append(lo[ok])
            acc_hi.append(hi[ok])
            acc_val.append(refined[ok])
            accepted_sum += refined[ok].sum()
        todo = ~ok
        if not todo.any():
            break
        if (depth[todo] + 1 >= max_depth).any():
            where = float(mid[todo][depth[todo] + 1 >= max_depth][0])
            raise DepthExceeded(f"no convergence near u={where!r} at depth {max_depth}", u=where)
        if sum(x.size for x in acc_lo) + 2 * int(todo.sum()) > max_intervals:
            raise DepthExceeded(f"interval budget {max_intervals} exhausted", u=float(mid[todo][0]))
        lo = np.concatenate([lo[todo], mid[todo]])
        hi = np.concatenate([mid[todo], hi[todo]])
        parent = np.concatenate([left[todo], right[todo]])
        depth = np.concatenate([depth[todo] + 1, depth[todo] + 1])

    lo_all = np.concatenate(acc_lo)
    hi_all = np.concatenate(acc_hi)
    val_all = np.concatenate(acc_val)
    order = np.argsort(lo_all, kind="stable")
    breaks = np.concatenate([lo_all[order], hi_all[order][-1:]])
    pieces = val_all[order]
    # sum in interval order: result must not depend on refinement order
    return QuadResult(value=complex(pieces.sum()), breaks=breaks, pieces=pieces, n_evals=n_evals)
