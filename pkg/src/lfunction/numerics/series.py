"""Unit-argument generalized hypergeometric series with a fitted power-law tail.

For a non-terminating series with parameter excess s = sum(b) - sum(a), the
terms behave like n^-(1+s) * (c_0 + c_1/n + c_2/n^2 + ...).  After summing the
first N terms exactly, that expansion is fitted on the last TAIL_WINDOW terms
and summed to infinity with Hurwitz zeta values.
"""
from __future__ import annotations

import math

import mpmath
from gmpy2 import mpz
from mpmath import mp

from ..errors import DivergentSeries, NonConvergedError, PoleError
from .config import DEFAULT_CONFIG, EvaluationResult, PrecisionConfig

TAIL_WINDOW = 32
# consecutive negligible terms that end the summation early
NEGLIGIBLE_RUN = 8


def _terminating_index(params, digits):
    """Smallest m with some parameter equal to -m (m >= 0), else None."""
    best = None
    tol = mpmath.mpf(10) ** (5 - digits)
    for p in params:
        n = mpmath.nint(mpmath.re(p))
        if n <= 0 and abs(p - n) <= tol:
            m = int(-n)
            best = m if best is None else min(best, m)
    return best


def _to_fixed(z, bits):
    return (mpz(int(mpmath.nint(mpmath.ldexp(mpmath.re(z), bits)))),
            mpz(int(mpmath.nint(mpmath.ldexp(mpmath.im(z), bits)))))


def _cmul(x, y, bits):
    return ((x[0] * y[0] - x[1] * y[1]) >> bits, (x[0] * y[1] + x[1] * y[0]) >> bits)


def _term_generator(numerators, denominators, bits):
    """Yield the terms t_0, t_1, ... as fixed-point complex integer pairs."""
    one = mpz(1) << bits
    nums = [_to_fixed(a, bits) for a in numerators]
    dens = [_to_fixed(b, bits) for b in denominators]
    t = (one, mpz(0))
    n = 0
    while True:
        yield t
        shift = n * one
        num = (one, mpz(0))
        for a in nums:
            num = _cmul(num, (a[0] + shift, a[1]), bits)
        den = (shift + one, mpz(0))
        for b in dens:
            den = _cmul(den, (b[0] + shift, b[1]), bits)
        num = _cmul(t, num, bits)
        # num / den = num * conj(den) / |den|^2
        norm = den[0] * den[0] + den[1] * den[1]
        if norm == 0:
            raise PoleError("denominator parameter reached a pole")
        re = ((num[0] * den[0] + num[1] * den[1]) << bits) // norm
        im = ((num[1] * den[0] - num[0] * den[1]) << bits) // norm
        t = (re, im)
        n += 1


def _from_fixed(t, bits):
    return mpmath.mpc(mpmath.ldexp(int(t[0]), -bits), mpmath.ldexp(int(t[1]), -bits))


def _fit_tail(window, first_index, exponent, order):
    """Least-squares fit of t_n ~ sum_j c_j n^-(exponent+j), j=0..order, over ``window``.

    Returns the tail sum over n >= first_index + len(window) and the max residual.
    """
    N = first_index + len(window)
    rows = []
    for i in range(len(window)):
        n = mpmath.mpf(first_index + i)
        u = mpmath.mpf(N) / n
        base = mpmath.power(u, exponent)
        rows.append([base * u ** j for j in range(order + 1)])
    M = mpmath.matrix(rows)
    rhs = mpmath.matrix([w * mpmath.power(N, exponent) for w in window])
    MH = M.transpose_conj()
    coeffs = mpmath.lu_solve(MH * M, MH * rhs)
    resid = max(abs(((M * coeffs)[i] - rhs[i])) for i in range(len(window))) / mpmath.power(N, mpmath.re(exponent))
    tail = mpmath.mpc(0)
    for j in range(order + 1):
        # the fitted model is t_n = sum_j coeffs[j] N^j n^-(exponent+j)
        cj = coeffs[j] * mpmath.power(N, j)
        tail += cj * mpmath.zeta(exponent + j, N)
    return tail, resid


def hyp_series_unit(numerators, denominators, cfg: PrecisionConfig = DEFAULT_CONFIG) -> EvaluationResult:
    """Sum the (p+1)F(p) series at z = 1.

    Terminating series are summed exactly; otherwise the error estimate
    combines the disagreement of successive tail-fit orders, the fit residual
    and rounding.
    """
    digits = cfg.working_digits
    with mp.workdps(digits + 10):
        nums = [mpmath.mpc(a) for a in numerators]
        dens = [mpmath.mpc(b) for b in denominators]
        if len(nums) != len(dens) + 1:
            raise ValueError("expected p+1 numerator and p denominator parameters")
        stop = _terminating_index(nums, digits)
        for b in dens:
            n = mpmath.nint(mpmath.re(b))
            if n <= 0 and abs(b - n) < cfg.pole_clearance:
                if stop is None or stop > -n:
                    raise PoleError(f"denominator parameter {mpmath.nstr(b, 8)} is near a pole", argument=b)
        bits = int(math.ceil((digits + 20) * math.log2(10)))
        gen = _term_generator(nums, dens, bits)
        eps = mpmath.mpf(10) ** (-digits)

        if stop is not None:
            total = (mpz(0), mpz(0))
            biggest = mpmath.mpf(0)
            for n, t in zip(range(stop + 1), gen):
                total = (total[0] + t[0], total[1] + t[1])
                biggest = max(biggest, abs(_from_fixed(t, bits)))
            value = _from_fixed(total, bits)
            err = (stop + 1) ** 2 * biggest * mpmath.ldexp(1, 4 - bits)
            return EvaluationResult(+value, err, terms_used=stop + 1)

        excess = sum(dens) - sum(nums)
        if mpmath.re(excess) <= 0:
            raise DivergentSeries(f"Re(sum(b) - sum(a)) = {mpmath.nstr(mpmath.re(excess), 6)} is not positive")
        exponent = 1 + excess

        N = cfg.series_max_terms
        total = (mpz(0), mpz(0))
        window = []
        negligible = 0
        biggest = mpz(0)
        count = 0
        for n, t in zip(range(N), gen):
            total = (total[0] + t[0], total[1] + t[1])
            count = n + 1
            mag = abs(t[0]) + abs(t[1])
            biggest = max(biggest, mag)
            if n >= N - TAIL_WINDOW:
                window.append(_from_fixed(t, bits))
            smag = abs(total[0]) + abs(total[1])
            if n > 0 and mag * 10 ** digits < smag:
                negligible += 1
                if negligible >= NEGLIGIBLE_RUN:
                    break
            else:
                negligible = 0
        partial = _from_fixed(total, bits)
        rounding = count ** 2 * _from_fixed((biggest, 0), bits).real * mpmath.ldexp(1, 4 - bits)
        if negligible >= NEGLIGIBLE_RUN:
            return EvaluationResult(+partial, rounding + abs(partial) * eps, terms_used=count)

        order = cfg.tail_fit_order
        tail, resid = _fit_tail(window, N - TAIL_WINDOW, exponent, order)
        if order > 0:
            lower, _ = _fit_tail(window, N - TAIL_WINDOW, exponent, order - 1)
            fit_err = abs(tail - lower)
        else:
            fit_err = abs(tail) / N
        # a residual r per term leaks into the tail roughly N/(Re s) times
        resid_err = resid * N / max(mpmath.re(excess), mpmath.mpf("0.01"))
        value = partial + tail
        err = fit_err + resid_err + rounding + abs(value) * eps
        if err > cfg.tolerance * abs(value):
            raise NonConvergedError(
                f"tail fit error {mpmath.nstr(err, 3)} exceeds tolerance for |sum| = {mpmath.nstr(abs(value), 5)} "
                f"after {N} terms"
            )
        return EvaluationResult(+value, +err, terms_used=N)
