"""Barnes contour integrals along a straight vertical line Re(t) = c.

(1/2 pi i) int G(t) dt = (1/2 pi) int G(c + i y) dy, evaluated by the
trapezoid rule.  The integrands here decay like exp(-2 pi |y|), so the rule
converges geometrically in the step; the step is halved until two levels agree.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
from mpmath import mp

from ..errors import ContourError, NonConvergedError, PreconditionError
from .config import DEFAULT_CONFIG, EvaluationResult, Method, PrecisionConfig
from .gamma import complex_gamma, reciprocal_gamma

MAX_HALVINGS = 12


@dataclass(frozen=True)
class BarnesIntegrand:
    """prod Gamma(p+t) prod Gamma(q-t) / (prod Gamma(r+t) prod Gamma(s-t))."""

    plus: tuple = ()
    minus: tuple = ()
    plus_den: tuple = ()
    minus_den: tuple = ()
    cfg: PrecisionConfig = field(default=DEFAULT_CONFIG, compare=False)

    def __call__(self, t):
        cfg = self.cfg
        val = mpmath.mpc(1)
        for p in self.plus:
            val *= complex_gamma(p + t, cfg)
        for q in self.minus:
            val *= complex_gamma(q - t, cfg)
        for r in self.plus_den:
            val *= reciprocal_gamma(r + t, cfg)
        for s in self.minus_den:
            val *= reciprocal_gamma(s - t, cfg)
        return val

    def separating_interval(self):
        """Open interval of real c for which Re(t) = c separates the two pole families."""
        lo = max((-mpmath.re(p) for p in self.plus), default=-mpmath.inf)
        hi = min((mpmath.re(q) for q in self.minus), default=mpmath.inf)
        return lo, hi


def contour_integral(integrand: BarnesIntegrand, shift, cfg: PrecisionConfig = DEFAULT_CONFIG) -> EvaluationResult:
    """(1/2 pi i) times the integral of ``integrand`` along Re(t) = shift."""
    with mp.workdps(cfg.working_digits):
        shift = mpmath.mpf(shift)
        lo, hi = integrand.separating_interval()
        if not lo + cfg.pole_clearance <= shift <= hi - cfg.pole_clearance:
            raise ContourError(
                f"line Re(t) = {mpmath.nstr(shift, 6)} does not clear the poles "
                f"(feasible interval ({mpmath.nstr(lo, 6)}, {mpmath.nstr(hi, 6)}))"
            )
        tol = mpmath.mpf(cfg.tolerance)
        h = mpmath.mpf(cfg.quadrature_step)
        H = mpmath.mpf(cfg.quadrature_halfwidth)

        def G(y):
            return integrand(mpmath.mpc(shift, y))

        # find the truncation half-width on the coarse grid
        values = {0: G(0)}
        peak = abs(values[0])
        k = 0
        cutoff = tol * 1e-3
        while True:
            k += 1
            if k * h > H:
                break
            vp, vm = G(k * h), G(-k * h)
            values[k], values[-k] = vp, vm
            peak = max(peak, abs(vp), abs(vm))
            if max(abs(vp), abs(vm)) < cutoff * peak and k * h >= 1:
                break
        K = min(k, int(H / h))
        edge = max(abs(values[K]), abs(values[-K]))
        # the neglected tails decay like |y|^s exp(-2 pi |y|); integrate that
        # envelope over both sides, doubled to cover the algebraic factor
        truncation = 2 * 2 * edge / (2 * mpmath.pi)

        total = sum(values[j] for j in range(-K, K + 1))
        level = total * h
        previous = None
        points = 2 * K + 1
        for _ in range(MAX_HALVINGS):
            h /= 2
            mids = sum(G((2 * j + 1) * h) for j in range(-K, K))
            points += 2 * K
            total += mids
            K *= 2
            previous, level = level, total * h
            scale = max(abs(level), truncation)
            if abs(level - previous) <= tol * scale:
                break
        else:
            raise NonConvergedError(f"trapezoid rule did not settle after {points} points")
        value = level / (2 * mpmath.pi)
        err = (abs(level - previous) + truncation) / (2 * mpmath.pi)
        return EvaluationResult(+value, +err, Method.BarnesContour, terms_used=points)


def barnes_first_lemma(alpha, beta, gamma_, delta, cfg: PrecisionConfig = DEFAULT_CONFIG):
    """Both sides of Barnes' first lemma: (quadrature, closed gamma form)."""
    with mp.workdps(cfg.working_digits):
        al, be, ga, de = (mpmath.mpc(v) for v in (alpha, beta, gamma_, delta))
        for s in (al + ga, al + de, be + ga, be + de):
            n = mpmath.nint(mpmath.re(s))
            if n <= 0 and abs(s - n) < cfg.pole_clearance:
                raise PreconditionError(f"parameter sum {mpmath.nstr(s, 6)} is a non-positive integer")
        integrand = BarnesIntegrand(plus=(al, be), minus=(ga, de), cfg=cfg)
        lo, hi = integrand.separating_interval()
        if lo >= hi:
            raise ContourError("no straight contour separates the pole families")
        lhs = contour_integral(integrand, (lo + hi) / 2, cfg)
        rhs = (complex_gamma(al + ga, cfg) * complex_gamma(al + de, cfg) * complex_gamma(be + ga, cfg)
               * complex_gamma(be + de, cfg) * reciprocal_gamma(al + be + ga + de, cfg))
        return lhs, rhs


def barnes_second_lemma(a, b, c, e, f, cfg: PrecisionConfig = DEFAULT_CONFIG):
    """Both sides of Barnes' second lemma; requires e + f - a - b - c = 1."""
    with mp.workdps(cfg.working_digits):
        a, b, c, e, f = (mpmath.mpc(v) for v in (a, b, c, e, f))
        # double-precision inputs are accepted; their rounding is far below any tolerance used here
        scale = max(1, *(abs(v) for v in (a, b, c, e, f)))
        if abs(e + f - a - b - c - 1) > scale * mpmath.mpf("1e-12"):
            raise PreconditionError("Barnes' second lemma needs e + f - a - b - c = 1")
        integrand = BarnesIntegrand(plus=(a, b, c), minus=(1 - e, mpmath.mpc(0)), plus_den=(f,), cfg=cfg)
        lo, hi = integrand.separating_interval()
        if lo >= hi:
            raise ContourError("no straight contour separates the pole families")
        lhs = contour_integral(integrand, (lo + hi) / 2, cfg)
        rhs = (complex_gamma(a, cfg) * complex_gamma(b, cfg) * complex_gamma(c, cfg)
               * complex_gamma(1 + a - e, cfg) * complex_gamma(1 + b - e, cfg) * complex_gamma(1 + c - e, cfg)
               * reciprocal_gamma(f - a, cfg) * reciprocal_gamma(f - b, cfg) * reciprocal_gamma(f - c, cfg))
        return lhs, rhs
