"""Complex gamma function via Spouge's approximation, plus Pochhammer symbols."""
from __future__ import annotations

import math
from functools import lru_cache

import mpmath
from gmpy2 import mpz
from mpmath import mp

from ..errors import PoleError
from .config import DEFAULT_CONFIG, PrecisionConfig

# Pochhammer symbols with n below this are formed as a direct product
POCHHAMMER_DIRECT_LIMIT = 64


@lru_cache(maxsize=32)
def _spouge_coefficients(digits: int, extra: int = 0):
    """Spouge parameter ``a``, fixed-point scale bits and integer coefficients c_k * 2^bits."""
    # relative error < a^(-1/2) (2 pi)^(-(a+1/2)); aim two digits below the target
    a = int(math.ceil((digits + 2) * math.log(10) / math.log(2 * math.pi))) + 1
    # the c_k grow to roughly e^a before cancelling in the sum
    guard = int(math.ceil(a * math.log10(math.e))) + 10 + extra
    bits = int(math.ceil((digits + guard) * math.log2(10)))
    with mp.workdps(digits + guard + 5):
        coeffs = [mpmath.sqrt(2 * mpmath.pi)]
        fact = mpmath.mpf(1)
        for k in range(1, a):
            if k > 1:
                fact *= k - 1
            ck = (-1) ** (k - 1) / fact * mpmath.power(a - k, k - mpmath.mpf(0.5)) * mpmath.exp(a - k)
            coeffs.append(ck)
        # pre-shifted by 2*bits so each partial fraction needs a single division
        fixed = tuple(mpz(int(mpmath.nint(mpmath.ldexp(c, 3 * bits)))) for c in coeffs)
    return a, guard, bits, fixed


def _near_nonpositive_integer(z, clearance) -> bool:
    n = mpmath.nint(mpmath.re(z))
    return n <= 0 and abs(z - n) < clearance


def _is_nonpositive_integer(z) -> bool:
    z = mpmath.mpc(z)
    if mpmath.im(z) != 0:
        return False
    re = mpmath.re(z)
    return re <= 0 and re == mpmath.floor(re)


def _spouge(z, digits):
    """Gamma(z) for Re(z) >= 1/2."""
    z = mpmath.mpc(z)
    # for large |Im z| the Spouge sum is exponentially small relative to its terms
    extra = 10 * int(math.ceil(float(abs(mpmath.im(z))) * 0.07))
    a, guard, bits, fixed = _spouge_coefficients(digits, extra)
    with mp.workdps(digits + guard):
        x = mpz(int(mpmath.nint(mpmath.ldexp(mpmath.re(z), bits))))
        y = mpz(int(mpmath.nint(mpmath.ldexp(mpmath.im(z), bits))))
        one = mpz(1) << bits
        re_sum = fixed[0] >> bits
        im_sum = mpz(0)
        y2 = y * y
        for k in range(1, a):
            xk = x + k * one
            q = fixed[k] // (xk * xk + y2)
            re_sum += q * xk
            im_sum -= q * y
        s = mpmath.mpc(mpmath.ldexp(int(re_sum), -2 * bits), mpmath.ldexp(int(im_sum), -2 * bits))
        za = z + a
        # Gamma(z+1) / z
        g1 = mpmath.exp((z + mpmath.mpf(0.5)) * mpmath.log(za) - za) * s
        return g1 / z


def complex_gamma(z, cfg: PrecisionConfig = DEFAULT_CONFIG):
    """Gamma(z) to relative accuracy 10^(5 - working_digits).

    Raises PoleError within ``cfg.pole_clearance`` of 0, -1, -2, ...
    """
    digits = cfg.working_digits
    with mp.workdps(digits):
        z = mpmath.mpc(z)
        if _near_nonpositive_integer(z, cfg.pole_clearance):
            raise PoleError(f"Gamma has a pole near {mpmath.nstr(z, 8)}", argument=z)
        if mpmath.re(z) < 0.5:
            with mp.workdps(digits + 10):
                val = mpmath.pi / (mpmath.sinpi(z) * _spouge(1 - z, digits + 10))
        else:
            val = _spouge(z, digits)
        return +val


def reciprocal_gamma(z, cfg: PrecisionConfig = DEFAULT_CONFIG):
    """1/Gamma(z); exactly zero at the non-positive integers."""
    digits = cfg.working_digits
    with mp.workdps(digits):
        z = mpmath.mpc(z)
        if _is_nonpositive_integer(z):
            return mpmath.mpc(0)
        if mpmath.re(z) < 0.5:
            with mp.workdps(digits + 10):
                val = mpmath.sinpi(z) * _spouge(1 - z, digits + 10) / mpmath.pi
        else:
            val = 1 / _spouge(z, digits)
        return +val


def pochhammer(a, n: int, cfg: PrecisionConfig = DEFAULT_CONFIG):
    """Rising factorial (a)_n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    with mp.workdps(cfg.working_digits):
        a = mpmath.mpc(a)
        if n == 0:
            return mpmath.mpc(1)
        if n < POCHHAMMER_DIRECT_LIMIT or _near_nonpositive_integer(a, cfg.pole_clearance):
            return _pochhammer_direct(a, n, cfg)
        return _pochhammer_gamma(a, n, cfg)


def _pochhammer_direct(a, n, cfg):
    with mp.workdps(cfg.working_digits + 5):
        p = mpmath.mpc(1)
        for k in range(n):
            p *= a + k
    return +p


def _pochhammer_gamma(a, n, cfg):
    with mp.workdps(cfg.working_digits + 5):
        hi = PrecisionConfig(working_digits=cfg.working_digits + 5, pole_clearance=cfg.pole_clearance)
        return complex_gamma(a + n, hi) * reciprocal_gamma(a, hi)
