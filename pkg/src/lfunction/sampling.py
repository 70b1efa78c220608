"""Random generic points on the hyperplane e+f+g-a-b-c-d = 1.

A point is generic when no gamma argument that any catalog relation can
produce sits near a pole and sin(pi e') stays away from zero for every
transformed e-parameter.  Every such argument is an affine form in the
orbit, under M_L, of a short list of base forms, so the whole set is
enumerated once and checked with numpy.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .groups import CONSTRAINT, governing_group
from .numerics.config import ParameterPoint

# gamma arguments of the L definition, the 7F6 and Barnes forms, and the
# three-term coefficients; they must stay off the non-positive integers
GAMMA_BASE_FORMS = (
    "a", "b", "c", "d", "e", "f", "g",
    "1+a-e", "1+b-e", "1+c-e", "1+d-e", "1+f-e", "1+g-e", "2-e",
    "e-a", "e-b", "e-c", "e-d", "1+a-f", "1+b-f", "1+c-f", "1+d-f",
    "g-a", "g-b", "g-c", "g-d", "f-d", "d+g-e", "1+d+g-e", "1+a+d-e", "1+b+d-e", "1+c+d-e",
)
# arguments whose sine divides: the e-slot of every transformed point
SINE_BASE_FORMS = ("e",)

REAL_ABCD = (0.35, 0.85)
REAL_FG = (1.1, 1.6)
IMAG = (0.05, 0.3)


def _orbit(forms) -> tuple[np.ndarray, np.ndarray]:
    """Constants and coefficient rows of {l o M : M in M_L}, reduced modulo the constraint."""
    from .symbolic import AffineForm

    base = [AffineForm.parse(f) for f in forms]
    F = np.array([f.coeffs for f in base], dtype=np.int64)
    C = np.array([f.const for f in base], dtype=np.int64)
    stack = governing_group().stack
    rows = np.einsum("kj,nji->nki", F, stack).reshape(-1, 7)
    consts = np.tile(C, len(stack))
    # shift by a multiple of (constraint - 1) that clears the a-coefficient
    k = rows[:, 0].copy()
    rows = rows + k[:, None] * CONSTRAINT[None, :]
    consts = consts - k
    both = np.unique(np.column_stack([consts, rows]), axis=0)
    return both[:, 0].astype(float), both[:, 1:].astype(float)


@lru_cache(maxsize=None)
def orbit_forms():
    return {"gamma": _orbit(GAMMA_BASE_FORMS), "sine": _orbit(SINE_BASE_FORMS)}


def point_is_generic(x: ParameterPoint, clearance: float = 0.02, barnes: bool = False) -> bool:
    """True when every relation, evaluator and coefficient stays ``clearance`` away from its poles.

    With ``barnes=True`` the straight Barnes contour Re(t) = -1/4 must also
    clear the poles: Re(a..d) > 1/4 and Re(e) < 5/4, each with ``clearance`` to spare.
    """
    vec = np.array([complex(v) for v in x.vector])
    forms = orbit_forms()
    consts, rows = forms["gamma"]
    vals = consts + rows @ vec
    nearest = np.rint(vals.real)
    if np.any((nearest <= 0) & (np.abs(vals - nearest) < clearance)):
        return False
    consts, rows = forms["sine"]
    vals = consts + rows @ vec
    if np.any(np.abs(vals - np.rint(vals.real)) < clearance):
        return False
    if barnes:
        if min(vec[:4].real) <= 0.25 + clearance or vec[4].real >= 1.25 - clearance:
            return False
    return True


@dataclass(frozen=True)
class Box:
    real_abcd: tuple[float, float] = REAL_ABCD
    real_fg: tuple[float, float] = REAL_FG
    imag: tuple[float, float] = IMAG


def _signed(rng, lo, hi):
    return rng.uniform(lo, hi) * (1.0 if rng.random() < 0.5 else -1.0)


def draw_point(rng: np.random.Generator, box: Box = Box()) -> ParameterPoint:
    """One candidate with e = 1+a+b+c+d-f-g and |Im e| >= the lower imaginary bound."""
    while True:
        abcd = [complex(rng.uniform(*box.real_abcd), _signed(rng, *box.imag)) for _ in range(4)]
        fg = [complex(rng.uniform(*box.real_fg), _signed(rng, *box.imag)) for _ in range(2)]
        im_e = sum(z.imag for z in abcd) - sum(z.imag for z in fg)
        if abs(im_e) >= box.imag[0]:
            return ParameterPoint.from_free(*(mpmath.mpc(z.real, z.imag) for z in abcd + fg))
