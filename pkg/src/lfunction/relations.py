"""Two-term invariances, three-term relations and the classical limiting identities.

A :class:`Relation` states that sum_k coefficient_k(x) * L(M_k x) = 0 on the
hyperplane.  The three-term relations for all 220 triples of right cosets
are produced from two fundamental ones by a change of variable x -> mu x.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

import mpmath
from mpmath import mp

from .errors import InvalidTriple, NotInGroup, PreconditionError
from .groups import (
    IDENTITY, CosetLabel, GroupElement, builtin_matrices, coset_table, double_cosets, format_triple,
    invariance_group, is_coherent, parse_triple, sigma_group, DOUBLE_COSET_REPRESENTATIVES,
)
from .numerics import (
    DEFAULT_CONFIG, ParameterPoint, PrecisionConfig, barnes_first_lemma, barnes_second_lemma, eval_L,
    hyp_series_unit, pochhammer, reciprocal_gamma,
)
from .numerics.gamma import complex_gamma
from .symbolic import (
    AffineForm, Coefficient, CoefficientExpression, CoefficientSum, coefficient_from_json, projective_ratio,
)


class RelationKind(enum.Enum):
    TwoTermInvariance = "TwoTermInvariance"
    ThreeTermCoherent = "ThreeTermCoherent"
    ThreeTermIncoherent = "ThreeTermIncoherent"


@dataclass(frozen=True)
class Term:
    matrix: GroupElement
    coefficient: Coefficient
    label: CosetLabel | None = None

    def parameters(self) -> list[AffineForm]:
        """The seven entries of M x, each written with as few variables as possible."""
        return [AffineForm(0, row).simplified() for row in self.matrix.rows]

    def render_L(self) -> str:
        p = [f.render() for f in self.parameters()]
        return f"L[{','.join(p[:4])}; {p[4]}; {','.join(p[5:])}]"

    def to_json(self) -> dict:
        return {
            "matrix": self.matrix.to_json(),
            "label": None if self.label is None else str(self.label),
            "coefficient": self.coefficient.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "Term":
        label = data.get("label")
        return cls(
            GroupElement.from_json(data["matrix"]),
            coefficient_from_json(data["coefficient"]),
            None if label is None else CosetLabel.parse(label),
        )


LEvaluator = Callable[[ParameterPoint, PrecisionConfig], object]


@dataclass(frozen=True)
class Relation:
    """sum over terms of coefficient(x) * L(matrix x) = 0 for generic x on the hyperplane."""

    name: str
    kind: RelationKind
    terms: tuple[Term, ...]
    triple: frozenset[CosetLabel] | None = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        expected = 2 if self.kind is RelationKind.TwoTermInvariance else 3
        if len(self.terms) != expected:
            raise ValueError(f"{self.kind.value} relation needs {expected} terms, got {len(self.terms)}")

    @property
    def labels(self) -> list[CosetLabel | None]:
        return [t.label for t in self.terms]

    def change_of_variable(self, nu: GroupElement, name: str | None = None) -> "Relation":
        """Apply x -> nu x to every coefficient and L argument."""
        table = coset_table()
        terms = []
        for t in self.terms:
            m = t.matrix @ nu
            terms.append(Term(m, t.coefficient.substitute(nu), table.coset_label(m)))
        triple = frozenset(t.label for t in terms) if self.triple is not None else None
        return Relation(name or f"{self.name} o nu", self.kind, tuple(terms), triple)

    def term_values(self, x: ParameterPoint, cfg: PrecisionConfig = DEFAULT_CONFIG,
                    evaluate_L: LEvaluator | None = None) -> list:
        """coefficient(x) * L(M x) for each term."""
        evaluate_L = evaluate_L or (lambda y, c: eval_L(y, c).value)
        with mp.workdps(cfg.working_digits):
            return [t.coefficient.evaluate(x, cfg) * evaluate_L(x.transform(t.matrix), cfg) for t in self.terms]

    def residual(self, x: ParameterPoint, cfg: PrecisionConfig = DEFAULT_CONFIG,
                 evaluate_L: LEvaluator | None = None):
        """|sum of terms| / max |term|."""
        values = self.term_values(x, cfg, evaluate_L)
        scale = max(abs(v) for v in values)
        return abs(sum(values)) / scale if scale else mpmath.mpf(0)

    def projective_ratio(self, other: "Relation") -> Fraction | None:
        """Rational r with self = r * other termwise (terms matched by coset label), else None."""
        if self.kind is not other.kind:
            return None
        if self.kind is RelationKind.TwoTermInvariance:
            pairs = list(zip(self.terms, other.terms))
            if any(a.matrix != b.matrix for a, b in pairs):
                return None
        else:
            by_label = {t.label: t for t in other.terms}
            if set(by_label) != {t.label for t in self.terms}:
                return None
            pairs = [(t, by_label[t.label]) for t in self.terms]
        ratio = None
        for a, b in pairs:
            r = projective_ratio(a.coefficient, b.coefficient)
            if r is None or (ratio is not None and r != ratio):
                return None
            ratio = r
        return ratio

    def matches(self, other: "Relation") -> bool:
        return self.projective_ratio(other) is not None

    def render(self) -> str:
        head = self.name
        if self.triple is not None:
            head += f" {format_triple(self.triple)}"
        lines = [head]
        for k, t in enumerate(self.terms):
            sign = "  " if k == 0 else "+ "
            label = f"  [coset {t.label}]" if t.label is not None else ""
            lines.append(f"{sign}{t.coefficient.render()}")
            lines.append(f"    * {t.render_L()}{label}")
        lines.append("= 0")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind.value,
            "triple": None if self.triple is None else sorted(str(l) for l in self.triple),
            "terms": [t.to_json() for t in self.terms],
        }

    @classmethod
    def from_json(cls, data) -> "Relation":
        triple = data.get("triple")
        return cls(
            data["name"],
            RelationKind(data["kind"]),
            tuple(Term.from_json(t) for t in data["terms"]),
            None if triple is None else frozenset(CosetLabel.parse(l) for l in triple),
        )


def _gammas(*forms: str) -> tuple[AffineForm, ...]:
    return tuple(AffineForm.parse(f) for f in forms)


def _expr(prefactor=1, pi_power=0, sin=(), num=(), den=()) -> CoefficientExpression:
    return CoefficientExpression(Fraction(prefactor), pi_power, _gammas(*sin), _gammas(*num), _gammas(*den))


def _linear_matrix(forms: Iterable[str]) -> GroupElement:
    """The matrix whose rows agree on the hyperplane with the given affine entries."""
    return GroupElement.from_array([AffineForm.parse(f).linearized().coeffs for f in forms])


def _label(text: str) -> CosetLabel:
    return CosetLabel.parse(text)


# -- two-term invariances ------------------------------------------------

@lru_cache(maxsize=None)
def _invariance_classes():
    classes = double_cosets(invariance_group(), sigma_group())
    m = builtin_matrices()
    types = []
    for name in DOUBLE_COSET_REPRESENTATIVES:
        rep = m[name]
        types.append(next(c for c in classes if rep in c.members))
    return tuple(types)


def invariance_relation(matrix: GroupElement, name: str | None = None) -> Relation:
    """L(x) - L(M x) = 0 for M in G_L."""
    one = CoefficientExpression()
    terms = (Term(IDENTITY, one, _label("6")), Term(matrix, one.scaled(-1), _label("6")))
    return Relation(name or "invariance", RelationKind.TwoTermInvariance, terms)


def invariance_catalog() -> list[Relation]:
    """The six invariances given by the double-coset representatives, in type order 1..6."""
    m = builtin_matrices()
    return [invariance_relation(m[name], f"invariance type {k}")
            for k, name in enumerate(DOUBLE_COSET_REPRESENTATIVES, start=1)]


def classify_invariance(mu: GroupElement) -> int:
    """Type 1..6 of mu in G_L, by the double coset of Sigma containing it."""
    for k, cls in enumerate(_invariance_classes(), start=1):
        if mu in cls.members:
            return k
    raise NotInGroup("matrix is not in the invariance group")


# -- three-term relations ------------------------------------------------

def gamma_coefficients() -> tuple[CoefficientExpression, ...]:
    """gamma_1, gamma_2, gamma_3 of the fundamental coherent relation, built by cyclic substitution."""
    g1 = _expr(sin=("f-g",), den=("e-a", "e-b", "e-c", "e-d"))
    cyc = builtin_matrices()["(576)"]
    g2 = g1.substitute(cyc)
    g3 = g2.substitute(cyc)
    return g1, g2, g3


def beta_coefficients() -> tuple[Coefficient, ...]:
    b1 = _expr(sin=("g", "f-g"), den=("1+a-f", "1+b-f", "1+c-f", "1+d-f", "e-a", "e-b", "e-c", "e-d"))
    b2 = CoefficientSum((
        _expr(pi_power=-4, sin=("g", "g-e", "f-a", "f-b", "f-c", "f-d")),
        _expr(pi_power=-4, sin=("f", "e-f", "g-a", "g-b", "g-c", "g-d")),
    ))
    b3 = _expr(sin=("e-f", "f-g"), den=("a", "b", "c", "d", "g-a", "g-b", "g-c", "g-d"))
    return b1, b2, b3


COHERENT_BASE = (_label("6"), _label("5"), _label("4"))
INCOHERENT_BASE = (_label("6"), _label("5"), _label("6b"))


def fundamental_coherent() -> Relation:
    """The relation of type {6,5,4} with coefficients gamma_1, gamma_2, gamma_3."""
    reps = coset_table().representatives
    terms = tuple(Term(reps[lab], coef, lab) for lab, coef in zip(COHERENT_BASE, gamma_coefficients()))
    return Relation("fundamental coherent", RelationKind.ThreeTermCoherent, terms, frozenset(COHERENT_BASE))


def intermediate_654bar() -> Relation:
    """The relation of type {6,5,4b} that precedes the fundamental coherent one."""
    terms = (
        Term(IDENTITY, _expr(sin=("e",), den=("1+a-f", "1+b-f", "1+c-f", "1+d-f")), _label("6")),
        Term(builtin_matrices()["(56)"], _expr(sin=("-f",), den=("1+a-e", "1+b-e", "1+c-e", "1+d-e")), _label("5")),
        Term(_linear_matrix(["1-a", "1-b", "1-c", "1-d", "2-g", "2-f", "2-e"]),
             _expr(sin=("e-f",), den=("a", "b", "c", "d")), _label("4b")),
    )
    triple = frozenset(t.label for t in terms)
    return Relation("intermediate", RelationKind.ThreeTermCoherent, terms, triple)


def fundamental_incoherent() -> Relation:
    """The relation of type {6,5,6b} with coefficients beta_1, beta_2, beta_3."""
    m = builtin_matrices()
    matrices = (IDENTITY, m["(56)"], _linear_matrix(["1-a", "1-b", "1-c", "1-d", "2-e", "2-f", "2-g"]))
    terms = tuple(Term(M, coef, lab) for M, coef, lab in zip(matrices, beta_coefficients(), INCOHERENT_BASE))
    return Relation("fundamental incoherent", RelationKind.ThreeTermIncoherent, terms, frozenset(INCOHERENT_BASE))


def three_term(triple) -> Relation:
    """The three-term relation of the given type, transported from a fundamental one.

    With {6,5,4} . mu = {i,j,k} and i = 6.mu, j = 5.mu, k = 4.mu, the terms are
    gamma_m(mu x) L_i(x) etc., where L_i is evaluated at the canonical representative
    of coset i.  Incoherent triples use {6,5,6b} and the beta coefficients.
    """
    if isinstance(triple, str):
        triple = parse_triple(triple)
    labels = frozenset(CosetLabel.parse(l) for l in triple)
    if len(labels) != 3:
        raise InvalidTriple(f"expected three distinct coset labels, got {triple!r}")
    coherent = is_coherent(labels)
    if not coherent and sum(1 for l in labels if l.bar() in labels) != 2:
        raise InvalidTriple(f"{format_triple(labels)} is neither coherent nor contains exactly one barred pair")
    table = coset_table()
    base, coefs, kind = (
        (COHERENT_BASE, gamma_coefficients(), RelationKind.ThreeTermCoherent) if coherent
        else (INCOHERENT_BASE, beta_coefficients(), RelationKind.ThreeTermIncoherent)
    )
    mu, corr = table.find_transporter(base, labels)
    terms = tuple(
        Term(table.representatives[corr[src]], coef.substitute(mu), corr[src])
        for src, coef in zip(base, coefs)
    )
    return Relation("three-term", kind, terms, labels)


def all_triples() -> list[frozenset[CosetLabel]]:
    orbits = coset_table().triple_orbits()
    return sorted((t for orb in orbits for t in orb), key=lambda t: sorted(l.code for l in t))


def three_term_catalog() -> list[Relation]:
    return [three_term(t) for t in all_triples()]


# -- classical identities ------------------------------------------------

class IdentityName(enum.Enum):
    Thomae = "Thomae"
    Bailey = "Bailey"
    BarnesFirst = "BarnesFirst"
    BarnesSecond = "BarnesSecond"
    FundamentalTwoTerm = "FundamentalTwoTerm"


@dataclass(frozen=True)
class IdentityCheck:
    """lhs(params) = rhs(params) on the region where ``valid(params)`` holds.

    ``sampler(rng)`` draws one candidate parameter dict; callers reject
    candidates with ``valid``.  ``constraint`` documents a linear relation the
    sampler enforces (for example e+f-a-b-c = 1).
    """

    name: IdentityName
    parameters: tuple[str, ...]
    lhs: Callable
    rhs: Callable
    sampler: Callable
    valid: Callable
    constraint: str | None = None
    region: str = ""
    label: str = ""
    fixed: dict = field(default_factory=dict)

    def sides(self, params: dict, cfg: PrecisionConfig = DEFAULT_CONFIG):
        if not self.valid(params):
            raise PreconditionError(f"{self.label or self.name.value}: parameters outside the validity region")
        with mp.workdps(cfg.working_digits):
            return self.lhs(params, cfg), self.rhs(params, cfg)


def _draw(rng, lo, hi, imag=(0.05, 0.3)):
    re = rng.uniform(lo, hi)
    im = rng.uniform(*imag) * rng.choice([-1.0, 1.0])
    return mpmath.mpc(re, im)


def _near_pole(z, clearance=0.05):
    n = mpmath.nint(mpmath.re(z))
    return n <= 0 and abs(z - n) < clearance


def _rgam(*args, cfg):
    out = mpmath.mpc(1)
    for z in args:
        out *= reciprocal_gamma(z, cfg)
    return out


def _series(nums, dens, cfg):
    return hyp_series_unit(nums, dens, cfg).value


def thomae_lhs(p, cfg):
    b, c, d, f, g = (p[k] for k in "bcdfg")
    return _series([b, c, d], [f, g], cfg) * _rgam(f, g, f + g - b - c - d, cfg=cfg)


def thomae_rhs(p, cfg):
    b, c, d, f, g = (p[k] for k in "bcdfg")
    s = f + g - b - c - d
    return _series([f - b, g - b, s], [f + g - b - d, f + g - b - c], cfg) * _rgam(b, f + g - b - d, f + g - b - c, cfg=cfg)


def thomae_rhs_530(p, cfg):
    b, c, d, f, g = (p[k] for k in "bcdfg")
    return _series([b, g - c, g - d], [f + g - c - d, g], cfg) * _rgam(f + g - c - d, g, f - b, cfg=cfg)


def thomae_530_map(p: dict) -> dict:
    """Parameters (b,c,d,f,g) such that the left side at the result equals the 530 right side at p."""
    b, c, d, f, g = (p[k] for k in "bcdfg")
    return {"b": b, "c": g - c, "d": g - d, "f": f + g - c - d, "g": g}


def _thomae_valid(p, margin=0.1):
    b, c, d, f, g = (p[k] for k in "bcdfg")
    if mpmath.re(f + g - b - c - d) <= margin or mpmath.re(f - b) <= margin or mpmath.re(b) <= margin:
        return False
    args = [f, g, f + g - b - c - d, b, f + g - b - d, f + g - b - c, f + g - c - d, f - b]
    return not any(_near_pole(z) for z in args)


def _thomae_sampler(rng):
    return {"b": _draw(rng, 0.2, 0.8), "c": _draw(rng, 0.2, 0.8), "d": _draw(rng, 0.2, 0.8),
            "f": _draw(rng, 1.0, 1.6), "g": _draw(rng, 1.0, 1.6)}


def classical_thomae(form: str = "540") -> IdentityCheck:
    """Thomae's 3F2(1) transformation; ``form="530"`` selects the one-step variant."""
    if form not in ("540", "530"):
        raise PreconditionError("form must be '540' or '530'")
    return IdentityCheck(
        IdentityName.Thomae, ("b", "c", "d", "f", "g"),
        thomae_lhs, thomae_rhs if form == "540" else thomae_rhs_530,
        _thomae_sampler, _thomae_valid,
        region="Re(f+g-b-c-d) > 0, Re(f-b) > 0, Re(b) > 0",
        label="Thomae" if form == "540" else "Thomae (one-step form)",
    )


def classical_bailey(n: int, b=None, c=None, d=None, f=None, g=None) -> IdentityCheck:
    """Bailey's terminating 4F3(1) transformation with e = 1-n+b+c+d-f-g.

    Parameters passed here are used as the default point for ``sides``; the
    sampler draws fresh ones.
    """
    if n < 0:
        raise PreconditionError("n must be non-negative")

    def e_of(p):
        return 1 - n + p["b"] + p["c"] + p["d"] - p["f"] - p["g"]

    def lhs(p, cfg):
        e = e_of(p)
        return _series([-n, p["b"], p["c"], p["d"]], [e, p["f"], p["g"]], cfg)

    def rhs(p, cfg):
        b, c, d, f, g = (p[k] for k in "bcdfg")
        e = e_of(p)
        ratio = (pochhammer(e - b, n, cfg) * pochhammer(f - b, n, cfg)
                 / (pochhammer(e, n, cfg) * pochhammer(f, n, cfg)))
        return ratio * _series([-n, b, g - c, g - d], [1 - n + b - f, 1 - n + b - e, g], cfg)

    def valid(p):
        e = e_of(p)
        b, f, g = p["b"], p["f"], p["g"]
        for base in (e, f, g, 1 - n + b - f, 1 - n + b - e):
            if any(abs(base + k) < 0.05 for k in range(max(n, 1))):
                return False
        return True

    def sampler(rng):
        return {"b": _draw(rng, 0.2, 0.8), "c": _draw(rng, 0.2, 0.8), "d": _draw(rng, 0.2, 0.8),
                "f": _draw(rng, 1.0, 1.6), "g": _draw(rng, 1.0, 1.6)}

    fixed = {"n": n}
    given = {k: v for k, v in zip("bcdfg", (b, c, d, f, g)) if v is not None}
    if given:
        fixed["point"] = {k: mpmath.mpc(v) for k, v in given.items()}
    return IdentityCheck(
        IdentityName.Bailey, ("b", "c", "d", "f", "g"), lhs, rhs, sampler, valid,
        constraint=f"e+f+g-b-c-d+{n} = 1", region="denominator parameters off the poles up to index n",
        label=f"Bailey n={n}", fixed=fixed,
    )


def classical_barnes_first() -> IdentityCheck:
    def lhs(p, cfg):
        return barnes_first_lemma(p["alpha"], p["beta"], p["gamma"], p["delta"], cfg)[0].value

    def rhs(p, cfg):
        al, be, ga, de = (p[k] for k in ("alpha", "beta", "gamma", "delta"))
        return (complex_gamma(al + ga, cfg) * complex_gamma(al + de, cfg) * complex_gamma(be + ga, cfg)
                * complex_gamma(be + de, cfg) * reciprocal_gamma(al + be + ga + de, cfg))

    def valid(p):
        al, be, ga, de = (p[k] for k in ("alpha", "beta", "gamma", "delta"))
        lo = max(-mpmath.re(al), -mpmath.re(be))
        hi = min(mpmath.re(ga), mpmath.re(de))
        return hi - lo > 0.2 and not any(_near_pole(z) for z in (al + ga, al + de, be + ga, be + de))

    def sampler(rng):
        return {k: _draw(rng, 0.2, 0.8) for k in ("alpha", "beta", "gamma", "delta")}

    return IdentityCheck(IdentityName.BarnesFirst, ("alpha", "beta", "gamma", "delta"), lhs, rhs, sampler, valid,
                         region="a straight line separates the pole families", label="Barnes first lemma")


def classical_barnes_second() -> IdentityCheck:
    """Barnes' second lemma with e = 1+a+b+c-f."""

    def lhs(p, cfg):
        return barnes_second_lemma(p["a"], p["b"], p["c"], p["e"], p["f"], cfg)[0].value

    def rhs(p, cfg):
        a, b, c, e, f = (p[k] for k in "abcef")
        return (complex_gamma(a, cfg) * complex_gamma(b, cfg) * complex_gamma(c, cfg)
                * complex_gamma(1 + a - e, cfg) * complex_gamma(1 + b - e, cfg) * complex_gamma(1 + c - e, cfg)
                * _rgam(f - a, f - b, f - c, cfg=cfg))

    def valid(p):
        a, b, c, e, f = (p[k] for k in "abcef")
        lo = max(-mpmath.re(a), -mpmath.re(b), -mpmath.re(c))
        hi = min(mpmath.re(1 - e), 0)
        return hi - lo > 0.2

    def sampler(rng):
        a, b, c = (_draw(rng, 0.2, 0.8) for _ in range(3))
        f = _draw(rng, 1.0, 2.6)
        return {"a": a, "b": b, "c": c, "f": f, "e": 1 + a + b + c - f}

    return IdentityCheck(IdentityName.BarnesSecond, ("a", "b", "c", "e", "f"), lhs, rhs, sampler, valid,
                         constraint="e+f-a-b-c = 1", region="a straight line separates the pole families",
                         label="Barnes second lemma")


def expanded_two_term_rhs(x: ParameterPoint, cfg: PrecisionConfig = DEFAULT_CONFIG):
    """Right side of the fundamental two-term relation written out as two 4F3(1) terms."""
    a, b, c, d, e, f, g = x.vector
    with mp.workdps(cfg.working_digits):
        s = mpmath.sinpi(1 + a + b - f)
        t1 = _series([a, b, g - c, g - d], [1 + a + b - f, 1 + a + b - e, g], cfg) * _rgam(
            1 + a + b - f, 1 + a + b - e, g, f - b, f - a, 1 + d - e, 1 + c - e, cfg=cfg) / s
        t2 = _series([f - b, f - a, 1 + d - e, 1 + c - e], [1 + f - e, f + g - a - b, 1 + f - a - b], cfg) * _rgam(
            a, b, g - c, g - d, 1 + f - e, f + g - a - b, 1 + f - a - b, cfg=cfg) / s
        return t1 - t2


def fundamental_two_term_check() -> IdentityCheck:
    """L(x) = L(A x) at generic points of the hyperplane."""
    from .sampling import draw_point, point_is_generic

    A = builtin_matrices()["A"]

    def lhs(p, cfg):
        return eval_L(p["x"], cfg).value

    def rhs(p, cfg):
        return eval_L(p["x"].transform(A), cfg).value

    return IdentityCheck(IdentityName.FundamentalTwoTerm, ("x",), lhs, rhs,
                         lambda rng: {"x": draw_point(rng)}, lambda p: point_is_generic(p["x"]),
                         constraint="e+f+g-a-b-c-d = 1", region="generic points", label="fundamental two-term")


def classical_identities() -> list[IdentityCheck]:
    return [classical_thomae(), classical_barnes_first(), classical_barnes_second()] + [
        classical_bailey(n) for n in (0, 1, 2, 3, 5)
    ]
