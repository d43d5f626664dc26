"""Borel polygons of finite singularity sets.

``Pi(b)`` is kept implicitly as the intersection of the half-planes
``Re(z / zeta_k) <= 1``; ``Pi(g)`` is its image under ``s -> 1/s``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

DEFAULT_TOL = 1e-9


class RegionClass(str, Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class BorelPolygonSpec:
    singularities: tuple
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        kept = []
        for z in self.singularities:
            z = complex(z)
            if not np.isfinite(z):
                raise ValueError(f"singularity {z} is not finite")
            if abs(z) <= self.tol:
                raise ValueError("a singularity at 0 leaves an empty polygon")
            if all(abs(z - k) > self.tol for k in kept):
                kept.append(z)
        if not kept:
            raise ValueError("need at least one singularity")
        object.__setattr__(self, "singularities", tuple(kept))

    @property
    def zeta(self):
        return np.array(self.singularities, dtype=complex)


def support(spec: BorelPolygonSpec, z):
    """``max_k Re(z / zeta_k)``; vectorized over ``z``."""
    z = np.asarray(z, dtype=complex)
    return np.max((z[..., None] / spec.zeta).real, axis=-1)


def _classify(m, tol):
    if m < 1 - tol:
        return RegionClass.INTERIOR
    if m > 1 + tol:
        return RegionClass.EXTERIOR
    return RegionClass.BOUNDARY


def polygon_classify(spec: BorelPolygonSpec, z) -> RegionClass:
    return _classify(float(support(spec, complex(z))), spec.tol)


def disk_diameter_oracle(z, singularities) -> bool:
    """True iff some ``zeta`` lies in the closed disk with diameter ``[0, z]``."""
    z = complex(z)
    return any(abs(complex(w) - z / 2) <= abs(z) / 2 for w in singularities)


def inverted_classify(spec: BorelPolygonSpec, s) -> RegionClass:
    """Membership in ``Pi(g) = {s : 1/s in Pi(b)}``; ``s = 0`` is exterior."""
    s = complex(s)
    if s == 0:
        return RegionClass.EXTERIOR
    return polygon_classify(spec, 1 / s)


def circle_points(center, radius, n):
    theta = 2 * np.pi * np.arange(n) / n
    return complex(center) + radius * np.exp(1j * theta)


def contour_valid(spec, center, radius, n_check=128) -> bool:
    """Circle lies in ``int Pi(g)`` and encloses ``{0} u {1/zeta_k}``.

    ``spec=None`` means ``Pi(b)`` is the whole plane, so only 0 is excluded.
    """
    if not radius > 0:
        raise ValueError("radius must be positive")
    if n_check < 64:
        raise ValueError("n_check must be at least 64")
    center = complex(center)
    probes = [0j]
    if spec is not None:
        probes += [1 / z for z in spec.singularities]
    if any(abs(p - center) >= radius for p in probes):
        return False
    pts = circle_points(center, radius, n_check)
    if spec is None:
        return bool(np.all(pts != 0))
    if np.any(pts == 0):
        return False
    return bool(np.all(support(spec, 1 / pts) < 1 - spec.tol))


def classify_field(spec, xs, ys, inverted=False):
    """``support - 1`` on the grid ``xs x ys`` (rows follow ``ys``)."""
    grid = xs[None, :] + 1j * ys[:, None]
    if not inverted:
        return support(spec, grid) - 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        field = support(spec, 1 / grid) - 1.0
    return np.where(grid == 0, 1.0, field)


def _interp(p0, p1, f0, f1):
    t = f0 / (f0 - f1)
    return p0 + t * (p1 - p0)


def boundary_segments(spec, window=(-3.0, 3.0, -3.0, 3.0), resolution=400, inverted=False):
    """Marching-squares line segments of the zero level of :func:`classify_field`.

    Returns an ``(n, 2, 2)`` array of ``((x0, y0), (x1, y1))`` pairs.
    """
    x0, x1, y0, y1 = map(float, window)
    if not (x1 > x0 and y1 > y0):
        raise ValueError("window must be xmin,xmax,ymin,ymax with xmin<xmax, ymin<ymax")
    xs = np.linspace(x0, x1, resolution)
    ys = np.linspace(y0, y1, resolution)
    F = classify_field(spec, xs, ys, inverted)
    X, Y = np.meshgrid(xs, ys)
    P = np.stack([X, Y], axis=-1)

    # corners in order: bottom-left, bottom-right, top-right, top-left
    corners = [(slice(None, -1), slice(None, -1)), (slice(None, -1), slice(1, None)),
               (slice(1, None), slice(1, None)), (slice(1, None), slice(None, -1))]
    f = [F[c] for c in corners]
    p = [P[c] for c in corners]
    inside = [v > 0 for v in f]
    crossings, masks = [], []
    for k in range(4):
        j = (k + 1) % 4
        m = inside[k] != inside[j]
        with np.errstate(divide="ignore", invalid="ignore"):
            pt = _interp(p[k], p[j], f[k][..., None], f[j][..., None])
        crossings.append(pt)
        masks.append(m)
    count = sum(m.astype(int) for m in masks)
    segs = []
    two = count == 2
    if two.any():
        pts = []
        for k in range(4):
            pts.append(np.where(masks[k][..., None], crossings[k], np.nan))
        stacked = np.stack(pts, axis=-2)[two]
        order = np.argsort(np.isnan(stacked[..., 0]), axis=-1, kind="stable")
        first = np.take_along_axis(stacked, order[:, :1, None], axis=1)[:, 0]
        second = np.take_along_axis(stacked, order[:, 1:2, None], axis=1)[:, 0]
        segs.append(np.stack([first, second], axis=1))
    four = count == 4
    if four.any():
        c = [crossings[k][four] for k in range(4)]
        segs.append(np.stack([c[0], c[1]], axis=1))
        segs.append(np.stack([c[2], c[3]], axis=1))
    if not segs:
        return np.zeros((0, 2, 2))
    return np.concatenate(segs)
