"""High-precision evaluation of gamma, hypergeometric series, Barnes integrals and L."""
from .barnes import BarnesIntegrand, barnes_first_lemma, barnes_second_lemma, contour_integral
from .config import DEFAULT_CONFIG, EvaluationResult, Method, ParameterPoint, PrecisionConfig
from .gamma import complex_gamma, pochhammer, reciprocal_gamma
from .lfunc import eval_L, eval_L_7F6, eval_L_barnes, eval_L_series
from .series import hyp_series_unit

__all__ = [
    "BarnesIntegrand", "barnes_first_lemma", "barnes_second_lemma", "contour_integral",
    "DEFAULT_CONFIG", "EvaluationResult", "Method", "ParameterPoint", "PrecisionConfig",
    "complex_gamma", "pochhammer", "reciprocal_gamma", "hyp_series_unit",
    "eval_L", "eval_L_7F6", "eval_L_barnes", "eval_L_series",
]
