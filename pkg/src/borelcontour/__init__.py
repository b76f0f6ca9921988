"""Laplace-Borel integrals along curvilinear contours: quadrature, asymptotic
series, explicit remainder bounds, resummation ambiguity and a Borel-plane
demo for Adler-type series."""
from .contour import (
    Contour,
    SectorRegion,
    build_contour,
    fig1_contour,
    fig1_parameters,
    ray_contour,
    straighten,
    validate_lemma2,
    validate_lemma3,
    validate_watson,
)
from .errors import BorelContourError
from .functions import AnalyticFunction
from .quad import QuadResult, ToleranceSpec, integrate, lambda_scan
from .series import AsymptoticSeries, asymptotic_coefficients, extract_coefficients, remainder_scan
from .bounds import BoundCertificate, build_certificate, certify
from .ambiguity import AmbiguityReport, beyond_all_orders_check, compare_contours
from .adler import BorelModel, borel_transform, perturbative_coefficients, pv_resum, resum

__version__ = "0.1.0"

__all__ = [
    "AmbiguityReport", "AnalyticFunction", "AsymptoticSeries", "BorelContourError", "BorelModel",
    "BoundCertificate", "Contour", "QuadResult", "SectorRegion", "ToleranceSpec",
    "asymptotic_coefficients", "beyond_all_orders_check", "borel_transform", "build_certificate",
    "build_contour", "certify", "compare_contours", "extract_coefficients", "fig1_contour",
    "fig1_parameters", "integrate", "lambda_scan", "perturbative_coefficients", "pv_resum",
    "ray_contour", "remainder_scan", "resum", "straighten", "validate_lemma2", "validate_lemma3",
    "validate_watson",
]
