"""Exact affine forms in (a,b,c,d,e,f,g) and sine/gamma product coefficients.

An :class:`AffineForm` is ``const + coeffs . x`` with integer data.  A
:class:`CoefficientExpression` is

    prefactor * pi^pi_power * prod sin(pi l) * prod Gamma(l) / prod Gamma(l')

with every ``l`` an AffineForm.  Substituting ``x -> M x`` for an integer
matrix ``M`` maps each form ``l`` to ``l o M``, which is again an AffineForm,
so coefficients transform exactly.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
from mpmath import mp

from .errors import PoleError
from .groups import CONSTRAINT, DIM, VARIABLES, GroupElement
from .numerics.config import DEFAULT_CONFIG, ParameterPoint, PrecisionConfig
from .numerics.gamma import complex_gamma, reciprocal_gamma

_CONSTRAINT = tuple(int(v) for v in CONSTRAINT)
_TOKEN = re.compile(r"([+-]?)\s*(\d*)\s*(\*?)\s*([a-g]?)")


@dataclass(frozen=True, order=True)
class AffineForm:
    """const + sum_i coeffs[i] * x_i over the variables a..g."""

    const: int = 0
    coeffs: tuple[int, ...] = (0,) * DIM

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != DIM:
            raise ValueError(f"expected {DIM} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "const", int(self.const))

    # construction -----------------------------------------------------
    @classmethod
    def variable(cls, name: str) -> "AffineForm":
        coeffs = [0] * DIM
        coeffs[VARIABLES.index(name)] = 1
        return cls(0, tuple(coeffs))

    @classmethod
    def constant(cls, value: int) -> "AffineForm":
        return cls(value)

    @classmethod
    def parse(cls, text: str) -> "AffineForm":
        """Parse expressions such as ``"1+a+b-f"``, ``"2-e"`` or ``"e - 2c"``."""
        s = text.replace(" ", "").replace("−", "-")
        if not s:
            raise ValueError("empty affine form")
        const = 0
        coeffs = [0] * DIM
        pos = 0
        while pos < len(s):
            m = _TOKEN.match(s, pos)
            if not m or m.end() == pos or not (m.group(2) or m.group(4)) or (m.group(3) and not m.group(4)):
                raise ValueError(f"cannot parse affine form {text!r} at position {pos}")
            if pos > 0 and not m.group(1):
                raise ValueError(f"missing operator in {text!r} at position {pos}")
            sign = -1 if m.group(1) == "-" else 1
            mult = int(m.group(2)) if m.group(2) else 1
            if m.group(4):
                coeffs[VARIABLES.index(m.group(4))] += sign * mult
            else:
                const += sign * mult
            pos = m.end()
        return cls(const, tuple(coeffs))

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _as_form(other)
        return AffineForm(self.const + other.const, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return AffineForm(-self.const, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-_as_form(other))

    def __rsub__(self, other):
        return _as_form(other) - self

    def scale(self, k: int) -> "AffineForm":
        return AffineForm(k * self.const, tuple(k * c for c in self.coeffs))

    def is_constant(self) -> bool:
        return not any(self.coeffs)

    def compose(self, g: GroupElement) -> "AffineForm":
        """The form x -> self(g x): same constant, coefficient vector g^T coeffs."""
        rows = g.rows
        coeffs = tuple(sum(self.coeffs[i] * rows[i][j] for i in range(DIM)) for j in range(DIM))
        return AffineForm(self.const, coeffs)

    def evaluate(self, x: ParameterPoint | Sequence):
        vec = x.vector if isinstance(x, ParameterPoint) else x
        total = mpmath.mpc(self.const)
        for c, v in zip(self.coeffs, vec):
            if c:
                total += c * v
        return total

    # the hyperplane ---------------------------------------------------
    def shifted(self, k: int) -> "AffineForm":
        """self + k (e+f+g-a-b-c-d-1); equal to self on the hyperplane."""
        return AffineForm(self.const - k, tuple(c + k * v for c, v in zip(self.coeffs, _CONSTRAINT)))

    def reduced(self) -> "AffineForm":
        """Canonical representative modulo the constraint: the a-coefficient is eliminated."""
        return self.shifted(self.coeffs[0])

    def simplified(self) -> "AffineForm":
        """Representative with the fewest variables, for display.

        Ties prefer the smaller constant in absolute value, then the
        smaller coefficient sum, then the unshifted form.
        """
        best = None
        for k in range(-4, 5):
            cand = self.shifted(k)
            key = (sum(1 for c in cand.coeffs if c), abs(cand.const), sum(abs(c) for c in cand.coeffs), abs(k))
            if best is None or key < best[0]:
                best = (key, cand)
        return best[1]

    def linearized(self) -> "AffineForm":
        """Equivalent form on the hyperplane with zero constant."""
        return self.shifted(self.const)

    def equivalent(self, other: "AffineForm") -> bool:
        """Equal as functions on the hyperplane."""
        return self.reduced() == _as_form(other).reduced()

    # display and serialization ----------------------------------------
    def render(self) -> str:
        """Constant first, then positive terms, then negative terms (alphabetical)."""
        parts = []
        if self.const or self.is_constant():
            parts.append(str(self.const))
        pos = [(n, c) for n, c in zip(VARIABLES, self.coeffs) if c > 0]
        neg = [(n, c) for n, c in zip(VARIABLES, self.coeffs) if c < 0]
        for name, c in pos + neg:
            mag = "" if abs(c) == 1 else str(abs(c))
            sign = "-" if c < 0 else "+"
            parts.append(f"{sign}{mag}{name}")
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"AffineForm({self.render()!r})"

    def to_json(self) -> dict:
        return {"const": self.const, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, data) -> "AffineForm":
        if isinstance(data, str):
            return cls.parse(data)
        return cls(int(data["const"]), tuple(int(c) for c in data["coeffs"]))


def _as_form(value) -> AffineForm:
    if isinstance(value, AffineForm):
        return value
    if isinstance(value, int):
        return AffineForm(value)
    if isinstance(value, str):
        return AffineForm.parse(value)
    raise TypeError(f"cannot interpret {value!r} as an affine form")


def compose_form(form: AffineForm, g: GroupElement) -> AffineForm:
    return form.compose(g)


def evaluate_form(form: AffineForm, x: ParameterPoint):
    return form.evaluate(x)


def _display(forms: Iterable[AffineForm]) -> list[str]:
    # display order only; the stored order stays the canonical one
    return sorted(f.simplified().render() for f in forms)


def _forms(items: Iterable) -> tuple[AffineForm, ...]:
    return tuple(sorted(_as_form(v) for v in items))


@dataclass(frozen=True)
class CoefficientExpression:
    """prefactor * pi^pi_power * prod sin(pi l) * prod Gamma(l) / prod Gamma(l')."""

    prefactor: Fraction = Fraction(1)
    pi_power: int = 0
    sin_factors: tuple[AffineForm, ...] = ()
    gamma_numerator: tuple[AffineForm, ...] = ()
    gamma_denominator: tuple[AffineForm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "prefactor", Fraction(self.prefactor))
        object.__setattr__(self, "pi_power", int(self.pi_power))
        for name in ("sin_factors", "gamma_numerator", "gamma_denominator"):
            object.__setattr__(self, name, _forms(getattr(self, name)))

    @classmethod
    def build(cls, prefactor=1, pi_power=0, sin=(), gamma_num=(), gamma_den=()) -> "CoefficientExpression":
        """Convenience constructor accepting strings for the forms."""
        return cls(Fraction(prefactor), pi_power, tuple(sin), tuple(gamma_num), tuple(gamma_den))

    @property
    def summands(self) -> tuple["CoefficientExpression", ...]:
        return (self,)

    def canonical(self) -> "CoefficientExpression":
        return CoefficientExpression(self.prefactor, self.pi_power, self.sin_factors,
                                     self.gamma_numerator, self.gamma_denominator)

    def substitute(self, g: GroupElement) -> "CoefficientExpression":
        """The coefficient x -> self(g x)."""
        return CoefficientExpression(
            self.prefactor,
            self.pi_power,
            tuple(f.compose(g) for f in self.sin_factors),
            tuple(f.compose(g) for f in self.gamma_numerator),
            tuple(f.compose(g) for f in self.gamma_denominator),
        )

    def scaled(self, factor) -> "CoefficientExpression":
        return CoefficientExpression(self.prefactor * Fraction(factor), self.pi_power, self.sin_factors,
                                     self.gamma_numerator, self.gamma_denominator)

    def __mul__(self, other: "CoefficientExpression") -> "CoefficientExpression":
        return CoefficientExpression(
            self.prefactor * other.prefactor,
            self.pi_power + other.pi_power,
            self.sin_factors + other.sin_factors,
            self.gamma_numerator + other.gamma_numerator,
            self.gamma_denominator + other.gamma_denominator,
        )

    def __neg__(self):
        return self.scaled(-1)

    def evaluate(self, x: ParameterPoint, cfg: PrecisionConfig = DEFAULT_CONFIG):
        """Numerical value at ``x``; PoleError names the offending gamma numerator."""
        with mp.workdps(cfg.working_digits):
            val = mpmath.mpc(self.prefactor.numerator) / self.prefactor.denominator
            if self.pi_power:
                val *= mpmath.pi ** self.pi_power
            for f in self.sin_factors:
                val *= mpmath.sinpi(f.evaluate(x))
            for f in self.gamma_numerator:
                z = f.evaluate(x)
                try:
                    val *= complex_gamma(z, cfg)
                except PoleError as exc:
                    raise PoleError(f"Gamma({f}) = Gamma({mpmath.nstr(z, 8)}) is at a pole", argument=z) from exc
            for f in self.gamma_denominator:
                val *= reciprocal_gamma(f.evaluate(x), cfg)
            return +val

    def normalized(self) -> tuple[Fraction, "CoefficientExpression"]:
        """Split off a rational scalar so that equal functions on the hyperplane compare equal.

        Each sine argument is reduced modulo the constraint, its integer part
        removed and its leading coefficient made positive, with the resulting
        signs collected in the scalar.  Gamma arguments are reduced modulo the
        constraint and common numerator/denominator factors cancelled.  This
        is used only for comparisons; stored expressions keep their printed shape.
        Returns (scalar, expression with prefactor 1); a vanishing sine gives scalar 0.
        """
        sign = 1
        sins = []
        for f in self.sin_factors:
            r = f.reduced()
            sign *= -1 if r.const % 2 else 1
            lin = AffineForm(0, r.coeffs)
            if lin.is_constant():
                return Fraction(0), CoefficientExpression()
            lead = next(c for c in lin.coeffs if c)
            if lead < 0:
                sign = -sign
                lin = -lin
            sins.append(lin)
        num = [f.reduced() for f in self.gamma_numerator]
        den = []
        for f in self.gamma_denominator:
            r = f.reduced()
            if r in num:
                num.remove(r)
            else:
                den.append(r)
        expr = CoefficientExpression(Fraction(1), self.pi_power, tuple(sins), tuple(num), tuple(den))
        return self.prefactor * sign, expr

    def render(self) -> str:
        parts = []
        p = self.prefactor
        if p != 1 or not (self.sin_factors or self.gamma_numerator or self.gamma_denominator or self.pi_power):
            parts.append(str(p))
        if self.pi_power:
            parts.append("pi" if self.pi_power == 1 else f"pi^{self.pi_power}")
        parts += [f"sin pi({f})" for f in _display(self.sin_factors)]
        parts += [f"Gamma({f})" for f in _display(self.gamma_numerator)]
        text = " ".join(parts) if parts else "1"
        if self.gamma_denominator:
            text += " / [" + " ".join(f"Gamma({f})" for f in _display(self.gamma_denominator)) + "]"
        return text

    def __str__(self):
        return self.render()

    def to_json(self) -> dict:
        return {
            "prefactor": [self.prefactor.numerator, self.prefactor.denominator],
            "pi_power": self.pi_power,
            "sin": [f.to_json() for f in self.sin_factors],
            "gamma_num": [f.to_json() for f in self.gamma_numerator],
            "gamma_den": [f.to_json() for f in self.gamma_denominator],
        }

    @classmethod
    def from_json(cls, data) -> "CoefficientExpression":
        num, den = data.get("prefactor", [1, 1])
        return cls(
            Fraction(int(num), int(den)),
            int(data.get("pi_power", 0)),
            tuple(AffineForm.from_json(f) for f in data.get("sin", [])),
            tuple(AffineForm.from_json(f) for f in data.get("gamma_num", [])),
            tuple(AffineForm.from_json(f) for f in data.get("gamma_den", [])),
        )


@dataclass(frozen=True)
class CoefficientSum:
    """A formal sum of CoefficientExpressions, evaluated term by term."""

    terms: tuple[CoefficientExpression, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("a coefficient sum needs at least one summand")

    @property
    def summands(self) -> tuple[CoefficientExpression, ...]:
        return self.terms

    def canonical(self):
        return CoefficientSum(tuple(t.canonical() for t in self.terms))

    def substitute(self, g: GroupElement) -> "CoefficientSum":
        return CoefficientSum(tuple(t.substitute(g) for t in self.terms))

    def scaled(self, factor) -> "CoefficientSum":
        return CoefficientSum(tuple(t.scaled(factor) for t in self.terms))

    def evaluate(self, x: ParameterPoint, cfg: PrecisionConfig = DEFAULT_CONFIG):
        with mp.workdps(cfg.working_digits):
            return +sum((t.evaluate(x, cfg) for t in self.terms), mpmath.mpc(0))

    def render(self) -> str:
        return "(" + " + ".join(t.render() for t in self.terms) + ")"

    def __str__(self):
        return self.render()

    def to_json(self) -> dict:
        return {"sum": [t.to_json() for t in self.terms]}


Coefficient = CoefficientExpression | CoefficientSum


def coefficient_from_json(data) -> Coefficient:
    if "sum" in data:
        return CoefficientSum(tuple(CoefficientExpression.from_json(t) for t in data["sum"]))
    return CoefficientExpression.from_json(data)


def substitute(expr: Coefficient, g: GroupElement) -> Coefficient:
    return expr.substitute(g)


def evaluate_coeff(expr: Coefficient, x: ParameterPoint, cfg: PrecisionConfig = DEFAULT_CONFIG):
    return expr.evaluate(x, cfg)


def projective_ratio(first: Coefficient, second: Coefficient) -> Fraction | None:
    """The rational r with first = r * second as functions on the hyperplane, if the
    normalized structures match; None when they do not (or either side vanishes)."""
    left = [t.normalized() for t in first.summands]
    right = [t.normalized() for t in second.summands]
    if len(left) != len(right) or any(s == 0 for s, _ in left + right):
        return None
    ratio = None
    remaining = list(right)
    for s, expr in left:
        match = next((i for i, (_, e) in enumerate(remaining) if e == expr), None)
        if match is None:
            return None
        r = s / remaining[match][0]
        if ratio is None:
            ratio = r
        elif r != ratio:
            return None
        remaining.pop(match)
    return ratio
