import math
import warnings

import numpy as np
import pytest

from borel_lab.series_core import CoeffSeq, EntireFnSpec
from borel_lab.type_analysis import (
    DEFAULT_R_GRID,
    check_entire,
    classify_exponential_type,
    entire_cos,
    entire_exp,
    entire_exp_z2,
    entire_from_json,
    entire_poly,
    entire_sin,
    exp_type_from_coeffs,
    parse_phi,
)


class TestCoefficientType:
    def test_exp_2z(self):
        sigma = exp_type_from_coeffs(entire_exp(2.0), 64).sigma
        # direct evaluation at n = 64 with lgamma
        direct = 64 * math.exp((64 * math.log(2) - math.lgamma(65)) / 64) / math.e
        assert sigma == pytest.approx(2.0, rel=0.05)
        assert sigma >= direct

    def test_polynomial(self):
        assert exp_type_from_coeffs(entire_poly([1, 2, 3, 4]), 64).sigma == 0

    def test_exp_z2_grows(self):
        s64 = exp_type_from_coeffs(entire_exp_z2(), 64).sigma
        s128 = exp_type_from_coeffs(entire_exp_z2(), 128).sigma
        assert s64 >= 5 and s128 > s64

    def test_small_N(self):
        with pytest.raises(ValueError):
            exp_type_from_coeffs(entire_exp(1.0), 16)


class TestClassifier:
    def test_exp_2z_custom_grid(self):
        rep = classify_exponential_type(entire_exp(2.0), (0.1, 0.25, 0.4, 0.45))
        assert rep.is_exp_type_evidence
        assert rep.best_r == 0.45
        assert rep.type_bound == pytest.approx(1 / 0.45)
        assert not classify_exponential_type(entire_exp(2.0), (0.55,)).is_exp_type_evidence

    def test_exp_z2(self):
        rep = classify_exponential_type(entire_exp_z2(), (0.05, 0.1, 0.5, 1.0))
        assert not rep.is_exp_type_evidence
        assert not any(rep.passes.values())
        assert rep.best_r is None and rep.type_bound is None

    def test_constant(self):
        rep = classify_exponential_type(entire_poly([1]), DEFAULT_R_GRID)
        assert all(rep.passes.values())
        assert rep.type_bound == pytest.approx(1 / max(DEFAULT_R_GRID))

    @pytest.mark.parametrize("spec", [entire_exp(0.5), entire_exp(1.0), entire_exp(2.0), entire_sin()],
                             ids=["exp0.5", "exp1", "exp2", "sin"])
    def test_consistent_with_coefficient_oracle(self, spec):
        rep = classify_exponential_type(spec)
        assert rep.is_exp_type_evidence
        assert exp_type_from_coeffs(spec, 64).sigma <= rep.type_bound * 1.1

    @pytest.mark.parametrize("spec", [entire_exp(1.0), entire_cos()], ids=["exp", "cos"])
    def test_monotone_in_r(self, spec):
        rep = classify_exponential_type(spec)
        passes = [rep.passes[r] for r in DEFAULT_R_GRID]
        first_fail = passes.index(False) if False in passes else len(passes)
        assert all(passes[:first_fail]) and not any(passes[first_fail:])

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            classify_exponential_type(entire_exp(1.0), ())
        with pytest.raises(ValueError):
            classify_exponential_type(entire_exp(1.0), (0.4, 0.2))


class TestEntireSpecs:
    @pytest.mark.parametrize("spec,fn", [(entire_sin(), np.sin), (entire_cos(), np.cos), (entire_exp(1.5j), lambda t: np.exp(1.5j * t))])
    def test_taylor_matches_function(self, spec, fn):
        for t in (0.3, -1.1 + 0.4j, 2.0j):
            series = sum(spec.taylor_coeffs(n) * t**n for n in range(60))
            assert series == pytest.approx(fn(t), rel=1e-12)

    @pytest.mark.parametrize("spec", [entire_sin(), entire_cos()])
    def test_log_form_far_off_axis(self, spec):
        t = np.array([3 + 40j, -2 - 35j, 1 + 25j])
        ratio = np.exp(spec.closed_form.log(t)) / spec.closed_form(t)
        np.testing.assert_allclose(ratio, 1.0, rtol=1e-12)

    def test_json(self):
        spec = entire_from_json({"kind": "builtin", "name": "exp", "params": {"c": [2, 0]}})
        assert spec.taylor_coeffs(3) == pytest.approx(8 / 6)
        spec = entire_from_json({"kind": "list", "values": [[1, 0], [0, 1]]})
        assert spec.taylor_coeffs(1) == 1j
        with pytest.raises(ValueError, match="known"):
            entire_from_json({"kind": "builtin", "name": "gamma"})

    def test_not_entire_warns(self):
        spec = EntireFnSpec(CoeffSeq(terms=lambda n: 1.0, label="geometric"), "1/(1-z)")
        with pytest.warns(UserWarning, match="not be entire"):
            check_entire(spec)

    def test_entire_does_not_warn(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert check_entire(entire_exp(3.0))
            assert check_entire(entire_poly([1, 2]))


class TestPhiShorthand:
    def test_variants(self):
        assert parse_phi("builtin:1").taylor_coeffs(0) == 1
        assert parse_phi("builtin:s^3").taylor_coeffs(3) == 1
        assert parse_phi("builtin:exp").taylor_coeffs(2) == pytest.approx(0.5)
        assert parse_phi("builtin:exp(0.25*s)").taylor_coeffs(1) == pytest.approx(0.25)
        assert parse_phi("builtin:exp(0.5+1i*s)").taylor_coeffs(1) == pytest.approx(0.5 + 1j)

    def test_unknown(self):
        with pytest.raises(ValueError, match="builtin:s"):
            parse_phi("builtin:gamma")
