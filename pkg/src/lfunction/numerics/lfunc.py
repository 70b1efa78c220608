"""The L function through three independent representations.

* ``eval_L_series``: the defining difference of two Saalschuetzian 4F3(1) series.
* ``eval_L_7F6``: a gamma prefactor times a very-well-poised 7F6(1) series.
* ``eval_L_barnes``: a Barnes integral along the straight line Re(t) = -1/4.
"""
from __future__ import annotations

import mpmath
from mpmath import mp

from ..errors import CancellationError, PoleError, PreconditionError
from .barnes import BarnesIntegrand, contour_integral
from .config import DEFAULT_CONFIG, EvaluationResult, Method, ParameterPoint, PrecisionConfig
from .gamma import complex_gamma, reciprocal_gamma
from .series import hyp_series_unit

# the Barnes contour is Re(t) = -BARNES_SHIFT
BARNES_SHIFT = mpmath.mpf(1) / 4


def _gamma_error(cfg: PrecisionConfig, count: int):
    """Relative error committed by a product of ``count`` gamma evaluations."""
    return count * mpmath.mpf(10) ** (5 - cfg.working_digits)


def _reciprocal_product(args, cfg: PrecisionConfig, where: str):
    """prod 1/Gamma(z) over ``args``; refuses arguments near the poles of Gamma."""
    out = mpmath.mpc(1)
    for z in args:
        n = mpmath.nint(mpmath.re(z))
        if n <= 0 and abs(z - n) < cfg.pole_clearance:
            raise PoleError(f"{where}: gamma argument {mpmath.nstr(z, 8)} is near a pole", argument=z)
        out *= reciprocal_gamma(z, cfg)
    return out


def eval_L_series(x: ParameterPoint, cfg: PrecisionConfig = DEFAULT_CONFIG) -> EvaluationResult:
    """L(x) as the difference of its two 4F3(1) terms.

    The error estimate propagates the relative errors of both series to
    their (possibly much larger) terms, so it also measures cancellation.
    CancellationError is raised when that estimate exceeds
    ``cfg.tolerance * |L|``; retry with ``cfg.escalated()``.
    """
    with mp.workdps(cfg.working_digits):
        a, b, c, d, e, f, g = x.vector
        n = mpmath.nint(mpmath.re(e))
        if abs(e - n) < cfg.pole_clearance:
            raise PoleError(f"sin(pi e) vanishes near e = {mpmath.nstr(e, 8)}", argument=e)
        sin_e = mpmath.sinpi(e)
        one = mpmath.mpf(1)

        first = hyp_series_unit([a, b, c, d], [e, f, g], cfg)
        pre1 = _reciprocal_product([e, f, g, one + a - e, one + b - e, one + c - e, one + d - e], cfg, "first term")
        second = hyp_series_unit(
            [one + a - e, one + b - e, one + c - e, one + d - e], [one + f - e, one + g - e, 2 - e], cfg
        )
        pre2 = _reciprocal_product([a, b, c, d, one + f - e, one + g - e, 2 - e], cfg, "second term")

        t1 = first.value * pre1 / sin_e
        t2 = second.value * pre2 / sin_e
        value = t1 - t2
        rel1 = first.relative_error + _gamma_error(cfg, 8)
        rel2 = second.relative_error + _gamma_error(cfg, 8)
        err = abs(t1) * rel1 + abs(t2) * rel2
        if err > cfg.tolerance * abs(value):
            raise CancellationError(
                f"|L| = {mpmath.nstr(abs(value), 5)} but the terms have size {mpmath.nstr(max(abs(t1), abs(t2)), 5)}; "
                f"error estimate {mpmath.nstr(err, 3)} exceeds the tolerance"
            )
        return EvaluationResult(+value, +err, Method.SeriesPair, first.terms_used + second.terms_used)


def eval_L_7F6(x: ParameterPoint, cfg: PrecisionConfig = DEFAULT_CONFIG) -> EvaluationResult:
    """L(x) as a gamma prefactor times a very-well-poised 7F6(1); needs Re(f - d) > 0."""
    with mp.workdps(cfg.working_digits):
        a, b, c, d, e, f, g = x.vector
        if mpmath.re(f - d) <= 0:
            raise PreconditionError(f"the 7F6 form needs Re(f - d) > 0, got {mpmath.nstr(mpmath.re(f - d), 6)}")
        one = mpmath.mpf(1)
        s = d + g - e
        numerators = [s, one + s / 2, g - a, g - b, g - c, d, one + d - e]
        denominators = [s / 2, one + a + d - e, one + b + d - e, one + c + d - e, one + g - e, g]
        series = hyp_series_unit(numerators, denominators, cfg)
        pre = complex_gamma(one + s, cfg) * _reciprocal_product(
            [g, one + g - e, f - d, one + a + d - e, one + b + d - e, one + c + d - e], cfg, "7F6 prefactor"
        )
        pre /= mpmath.pi
        value = pre * series.value
        err = abs(pre) * series.error_estimate + abs(value) * _gamma_error(cfg, 7)
        return EvaluationResult(+value, +err, Method.VeryWellPoised, series.terms_used)


def eval_L_barnes(x: ParameterPoint, cfg: PrecisionConfig = DEFAULT_CONFIG) -> EvaluationResult:
    """L(x) from its Barnes integral along Re(t) = -1/4.

    Needs Re(a), Re(b), Re(c), Re(d) > 1/4 and Re(1 - e) > -1/4 (with
    ``cfg.pole_clearance`` to spare), otherwise ContourError.
    """
    with mp.workdps(cfg.working_digits):
        a, b, c, d, e, f, g = x.vector
        one = mpmath.mpf(1)
        pre = _reciprocal_product(
            [a, b, c, d, one + a - e, one + b - e, one + c - e, one + d - e], cfg, "Barnes prefactor"
        ) / mpmath.pi
        integrand = BarnesIntegrand(plus=(a, b, c, d), minus=(one - e, mpmath.mpc(0)), plus_den=(f, g), cfg=cfg)
        integral = contour_integral(integrand, -BARNES_SHIFT, cfg)
        value = pre * integral.value
        err = abs(pre) * integral.error_estimate + abs(value) * _gamma_error(cfg, 8 + 8 * integral.terms_used)
        return EvaluationResult(+value, +err, Method.BarnesContour, integral.terms_used)


def eval_L(x: ParameterPoint, cfg: PrecisionConfig = DEFAULT_CONFIG) -> EvaluationResult:
    """eval_L_series, retried once with doubled precision after a CancellationError."""
    try:
        return eval_L_series(x, cfg)
    except CancellationError:
        return eval_L_series(x, cfg.escalated())
