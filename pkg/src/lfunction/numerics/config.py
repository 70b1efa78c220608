from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import mpmath
from mpmath import mp

from ..errors import ConstraintError, PreconditionError

PARAMETER_NAMES = ("a", "b", "c", "d", "e", "f", "g")


@dataclass(frozen=True)
class PrecisionConfig:
    """Knobs shared by every numerical routine.

    ``tolerance`` is the relative accuracy that series, quadrature and the
    cancellation check in the L evaluators must certify before returning.
    """

    working_digits: int = 60
    series_max_terms: int = 500
    tail_fit_order: int = 4
    quadrature_halfwidth: float | None = None
    quadrature_step: float = 0.25
    pole_clearance: float = 0.02
    tolerance: float = 1e-10

    def __post_init__(self):
        if self.working_digits < 30:
            raise PreconditionError("working_digits must be at least 30")
        if self.series_max_terms < 64:
            raise PreconditionError("series_max_terms must be at least 64")
        if not 0 <= self.tail_fit_order <= 4:
            raise PreconditionError("tail_fit_order must lie in 0..4")
        if self.pole_clearance <= 0:
            raise PreconditionError("pole_clearance must be positive")
        if self.quadrature_step <= 0:
            raise PreconditionError("quadrature_step must be positive")
        if self.quadrature_halfwidth is None:
            object.__setattr__(self, "quadrature_halfwidth", 40.0 * self.working_digits / 60.0)
        elif self.quadrature_halfwidth <= 0:
            raise PreconditionError("quadrature_halfwidth must be positive")

    @property
    def epsilon(self):
        return mpmath.mpf(10) ** (-self.working_digits)

    def escalated(self) -> "PrecisionConfig":
        """Twice the digits and twice the series length; used after a CancellationError."""
        return replace(
            self,
            working_digits=2 * self.working_digits,
            series_max_terms=2 * self.series_max_terms,
            quadrature_halfwidth=None,
        )


DEFAULT_CONFIG = PrecisionConfig()


class Method(enum.Enum):
    SeriesPair = "SeriesPair"
    VeryWellPoised = "VeryWellPoised"
    BarnesContour = "BarnesContour"


@dataclass(frozen=True)
class EvaluationResult:
    value: mpmath.mpc
    error_estimate: mpmath.mpf
    method: Method | None = None
    terms_used: int = 0

    def __complex__(self):
        return complex(self.value)

    @property
    def relative_error(self):
        return self.error_estimate / abs(self.value) if self.value else mpmath.inf


def _mpc(v):
    return v if isinstance(v, mpmath.mpc) else mpmath.mpc(v)


@dataclass(frozen=True)
class ParameterPoint:
    """A point (a,b,c,d,e,f,g) with e+f+g-a-b-c-d = 1."""

    a: mpmath.mpc
    b: mpmath.mpc
    c: mpmath.mpc
    d: mpmath.mpc
    e: mpmath.mpc
    f: mpmath.mpc
    g: mpmath.mpc
    _checked: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        for name in PARAMETER_NAMES:
            object.__setattr__(self, name, _mpc(getattr(self, name)))
        defect = self.e + self.f + self.g - self.a - self.b - self.c - self.d - 1
        scale = max(1, *(abs(v) for v in self.vector))
        if abs(defect) > scale * mpmath.mpf(2) ** (8 - mp.prec):
            raise ConstraintError(f"e+f+g-a-b-c-d-1 = {mpmath.nstr(defect, 5)} is not zero")

    @classmethod
    def from_free(cls, a, b, c, d, f, g) -> "ParameterPoint":
        """Build from (a,b,c,d,f,g), deriving e = 1+a+b+c+d-f-g exactly."""
        vals = [_mpc(v) for v in (a, b, c, d, f, g)]
        with mp.workprec(max(mp.prec, 512)):
            e = 1 + vals[0] + vals[1] + vals[2] + vals[3] - vals[4] - vals[5]
        return cls(vals[0], vals[1], vals[2], vals[3], e, vals[4], vals[5])

    @classmethod
    def from_sequence(cls, values) -> "ParameterPoint":
        values = list(values)
        if len(values) == 6:
            return cls.from_free(*values)
        if len(values) == 7:
            return cls(*values)
        raise PreconditionError(f"expected 6 or 7 parameters, got {len(values)}")

    @property
    def vector(self) -> tuple:
        return (self.a, self.b, self.c, self.d, self.e, self.f, self.g)

    def transform(self, matrix) -> "ParameterPoint":
        """The point ``M x`` for an integer matrix ``M`` (anything with ``.apply``)."""
        with mp.workprec(max(mp.prec, 512)):
            images = matrix.apply(self.vector)
        return ParameterPoint(*images)

    def to_json(self) -> list:
        return [[str(mpmath.re(v)), str(mpmath.im(v))] for v in self.vector]

    @classmethod
    def from_json(cls, data) -> "ParameterPoint":
        vals = []
        for item in data:
            if isinstance(item, (list, tuple)):
                vals.append(mpmath.mpc(mpmath.mpf(item[0]), mpmath.mpf(item[1])))
            else:
                vals.append(mpmath.mpc(item))
        return cls.from_sequence(vals)

    def __str__(self):
        def show(v):
            return mpmath.nstr(v.real, 8) if v.imag == 0 else mpmath.nstr(v, 8)

        return "(" + ", ".join(f"{n}={show(v)}" for n, v in zip(PARAMETER_NAMES, self.vector)) + ")"
