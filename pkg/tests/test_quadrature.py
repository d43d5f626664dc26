import math

import numpy as np
import pytest

from borel_lab.errors import DepthExceeded, NonFiniteIntegrand
from borel_lab.quadrature import adaptive_quad


def test_polynomial_exact():
    res = adaptive_quad(lambda u: u**5 + 0j, 0.0, 2.0)
    assert res.value == pytest.approx(64 / 6, rel=1e-14)


def test_oscillatory_complex():
    res = adaptive_quad(lambda u: np.exp(1j * 7 * u), 0.0, 3.0)
    exact = (np.exp(21j) - 1) / 7j
    assert abs(res.value - exact) < 1e-12


def test_decaying_exponential_long_range():
    res = adaptive_quad(lambda u: np.exp(-u) + 0j, 0.0, 400.0, breakpoints=[50.0, 100.0, 200.0])
    assert res.value == pytest.approx(1.0, rel=1e-10)
    for b in (50.0, 100.0, 200.0):
        assert b in res.breaks


def test_partial_sums_match_breaks():
    res = adaptive_quad(lambda u: np.ones_like(u, dtype=complex), 0.0, 8.0, breakpoints=[2.0, 4.0])
    ps = res.partial_sums()
    assert ps[0] == 0
    idx = np.searchsorted(res.breaks, [2.0, 4.0, 8.0])
    np.testing.assert_allclose(ps[idx].real, [2.0, 4.0, 8.0], rtol=1e-14)


def test_non_finite_reports_location():
    with pytest.raises(NonFiniteIntegrand) as info:
        adaptive_quad(lambda u: np.where(u > 3, np.inf, 1.0) + 0j, 0.0, 5.0)
    assert info.value.u > 3


def test_depth_exceeded():
    with pytest.raises(DepthExceeded):
        adaptive_quad(lambda u: np.sign(u - math.pi) + 0j, 0.0, 5.0, rtol=1e-15, atol=0.0, max_depth=6)


def test_bad_limits():
    with pytest.raises(ValueError):
        adaptive_quad(lambda u: u + 0j, 1.0, 1.0)
