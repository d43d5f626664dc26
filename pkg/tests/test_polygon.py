import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from borel_lab.borel_engine import Status, borel_sum_at
from borel_lab.borel_transform import catalog_lookup
from borel_lab.polygon import (
    BorelPolygonSpec,
    RegionClass,
    boundary_segments,
    contour_valid,
    disk_diameter_oracle,
    inverted_classify,
    polygon_classify,
    support,
)

I, B, E = RegionClass.INTERIOR, RegionClass.BOUNDARY, RegionClass.EXTERIOR


class TestSpec:
    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            BorelPolygonSpec((1, 0))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            BorelPolygonSpec(())

    def test_dedupes(self):
        assert BorelPolygonSpec((1, 1 + 1e-12, 2j)).singularities == (1 + 0j, 2j)


class TestClassify:
    def test_half_plane(self):
        assert polygon_classify(BorelPolygonSpec((1,)), 0.5) is I

    def test_strip(self):
        spec = BorelPolygonSpec((1, -1))
        assert polygon_classify(spec, 0.7 + 5j) is I
        assert not disk_diameter_oracle(0.7 + 5j, spec.singularities)

    def test_boundary(self):
        assert polygon_classify(BorelPolygonSpec((1,)), 1) is B

    def test_exterior(self):
        assert polygon_classify(BorelPolygonSpec((1j,)), 3j) is E


class TestOracle:
    def test_center(self):
        assert disk_diameter_oracle(2, [1])

    def test_far(self):
        assert not disk_diameter_oracle(0.5, [1])

    def test_boundary_case(self):
        assert disk_diameter_oracle(1 + 1j, [1])
        assert polygon_classify(BorelPolygonSpec((1,)), 1 + 1j) is B


complex_in = st.builds(lambda r, t: r * cmath.exp(1j * t), st.floats(0, 3), st.floats(0, 2 * math.pi))
sing_in = st.builds(lambda r, t: r * cmath.exp(1j * t), st.floats(1, 2), st.floats(0, 2 * math.pi))


@settings(max_examples=1000, deadline=None)
@given(z=complex_in, zs=st.lists(sing_in, min_size=1, max_size=5))
def test_oracle_equivalence(z, zs):
    spec = BorelPolygonSpec(tuple(zs))
    m = float(support(spec, z))
    if abs(m - 1) <= spec.tol:
        return
    assert disk_diameter_oracle(z, spec.singularities) == (polygon_classify(spec, z) is not I)


class TestInverted:
    spec = BorelPolygonSpec((1,))

    def test_far_point(self):
        assert inverted_classify(self.spec, 2) is I

    def test_inside_excluded_disk(self):
        assert inverted_classify(self.spec, 0.5) is E
        assert disk_diameter_oracle(1 / 0.5, self.spec.singularities)

    def test_on_circle(self):
        assert inverted_classify(self.spec, 0.5 + 0.5j) is B

    def test_origin(self):
        assert inverted_classify(self.spec, 0) is E

    def test_involution(self):
        rng = np.random.default_rng(3)
        spec = BorelPolygonSpec((1, 1j, -0.5 - 2j))
        for s in rng.normal(size=50) + 1j * rng.normal(size=50):
            assert inverted_classify(spec, s) is polygon_classify(spec, 1 / s)


class TestContour:
    spec = BorelPolygonSpec((1,))

    def test_valid(self):
        assert contour_valid(self.spec, 0.5, 1.0)
        # independent check: every sample point classified interior
        pts = 0.5 + np.exp(2j * np.pi * np.arange(128) / 128)
        assert all(inverted_classify(self.spec, s) is I for s in pts)

    def test_too_small(self):
        assert not contour_valid(self.spec, 0.5, 0.4)

    def test_origin_not_enclosed(self):
        assert not contour_valid(self.spec, 5, 1)

    def test_crossing_excluded_region(self):
        assert not contour_valid(BorelPolygonSpec((1, 1j)), 0.5, 0.6)

    def test_whole_plane(self):
        assert contour_valid(None, 0, 1)
        assert not contour_valid(None, 2, 1)

    def test_arguments(self):
        with pytest.raises(ValueError):
            contour_valid(self.spec, 0, 1, n_check=32)
        with pytest.raises(ValueError):
            contour_valid(self.spec, 0, -1)


class TestBoundary:
    def test_vertical_line(self):
        segs = boundary_segments(BorelPolygonSpec((1,)), (-3, 3, -3, 3), 400)
        assert len(segs) > 0
        np.testing.assert_allclose(segs[..., 0], 1.0, atol=1e-9)
        assert segs[..., 1].min() == pytest.approx(-3) and segs[..., 1].max() == pytest.approx(3)

    def test_matches_classifier(self):
        spec = BorelPolygonSpec((1, 1j, -1.5))
        segs = boundary_segments(spec, (-3, 3, -3, 3), 200)
        mids = segs.mean(axis=1)
        m = support(spec, mids[:, 0] + 1j * mids[:, 1])
        assert np.max(np.abs(m - 1)) < 0.05

    def test_inverted_circle(self):
        segs = boundary_segments(BorelPolygonSpec((1,)), (-1, 2, -1.5, 1.5), 300, inverted=True)
        pts = segs.reshape(-1, 2)
        r = np.abs(pts[:, 0] + 1j * pts[:, 1] - 0.5)
        assert np.max(np.abs(r - 0.5)) < 0.02

    def test_bad_window(self):
        with pytest.raises(ValueError):
            boundary_segments(BorelPolygonSpec((1,)), (1, -1, 0, 1))


def test_summability_cross_check():
    # a finite ladder only certifies points whose decay rate 1 - Re z is not tiny
    seq = catalog_lookup("ones").coeffs
    spec = BorelPolygonSpec((1,))
    rng = np.random.default_rng(11)
    interior = []
    while len(interior) < 50:
        z = complex(*rng.uniform(-2, 2, 2))
        if abs(z) <= 2 and polygon_classify(spec, z) is I and z.real < 0.85:
            interior.append(z)
    for z in interior:
        v = borel_sum_at(seq, z, 1600)
        assert v.summable
        assert abs(v.value - 1 / (1 - z)) < 1e-8
    for _ in range(50):
        z = complex(rng.uniform(1.1, 3), rng.uniform(-2, 2))
        assert borel_sum_at(seq, z).status is Status.DIVERGENT
