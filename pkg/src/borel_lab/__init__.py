"""Numerical laboratory for Borel (B') summability."""

from .borel_engine import EngineConfig, Status, SummabilityVerdict, borel_sum_at, circle_sweep, theorem1_check
from .borel_transform import as_evaluator, catalog_lookup
from .functionals import AnalyticFunctional, cauchy_transform_check, contour_pairing, multipole_pairing
from .polygon import BorelPolygonSpec, RegionClass, inverted_classify, polygon_classify
from .series_core import CoeffSeq, EntireFnSpec
from .type_analysis import classify_exponential_type, exp_type_from_coeffs

__all__ = [
    "AnalyticFunctional",
    "BorelPolygonSpec",
    "CoeffSeq",
    "EngineConfig",
    "EntireFnSpec",
    "RegionClass",
    "Status",
    "SummabilityVerdict",
    "as_evaluator",
    "borel_sum_at",
    "catalog_lookup",
    "cauchy_transform_check",
    "circle_sweep",
    "classify_exponential_type",
    "contour_pairing",
    "exp_type_from_coeffs",
    "inverted_classify",
    "multipole_pairing",
    "polygon_classify",
    "theorem1_check",
]

__version__ = "0.1.0"
