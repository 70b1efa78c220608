"""Seeded sampling and numerical certification of relations and identities.

Every check produces a :class:`ResidualReport`.  Errors raised while
evaluating a point are recorded in the report and make it fail; they are
never propagated to the caller.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable

import mpmath
import numpy as np
from mpmath import mp

from .errors import LFunctionError, SamplingExhausted
from .groups import format_triple, invariance_group
from .numerics import (
    DEFAULT_CONFIG, ParameterPoint, PrecisionConfig, eval_L, eval_L_7F6, eval_L_barnes, eval_L_series,
)
from .relations import IdentityCheck, Relation, invariance_relation
from .sampling import IMAG, REAL_ABCD, REAL_FG, Box, draw_point, point_is_generic

MAX_REJECTIONS = 1000
TOL_RELATION = 1e-6
TOL_CLASSICAL = 1e-8
TOL_TERMINATING = 1e-10


@dataclass(frozen=True)
class SampleSpec:
    seed: int = 0
    count: int = 20
    real_abcd: tuple[float, float] = REAL_ABCD
    real_fg: tuple[float, float] = REAL_FG
    imag: tuple[float, float] = IMAG
    pole_clearance: float = 0.02
    barnes: bool = False

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def sample_points(spec: SampleSpec) -> list[ParameterPoint]:
    """Deterministic generic points; with ``spec.barnes`` the Barnes contour condition also holds."""
    rng = spec.rng()
    box = Box(spec.real_abcd, spec.real_fg, spec.imag)
    points = []
    for _ in range(spec.count):
        for _attempt in range(MAX_REJECTIONS):
            x = draw_point(rng, box)
            if point_is_generic(x, spec.pole_clearance, spec.barnes):
                points.append(x)
                break
        else:
            raise SamplingExhausted(f"no generic point after {MAX_REJECTIONS} draws")
    return points


def _num(z) -> list[str]:
    z = mpmath.mpc(z)
    return [mpmath.nstr(mpmath.re(z), 20), mpmath.nstr(mpmath.im(z), 20)]


@dataclass
class PointResult:
    index: int
    point: object
    values: list = field(default_factory=list)
    residual: object = None
    scale: object = None
    relative: object = None
    error: str | None = None

    def to_json(self) -> dict:
        point = self.point.to_json() if isinstance(self.point, ParameterPoint) else {
            k: (_num(v) if isinstance(v, (mpmath.mpc, mpmath.mpf, complex, float)) else v)
            for k, v in self.point.items()
        }
        out = {"index": self.index, "point": point, "values": [_num(v) for v in self.values]}
        if self.error is not None:
            out["error"] = self.error
        else:
            out.update(residual=mpmath.nstr(self.residual, 6), scale=mpmath.nstr(self.scale, 12),
                       relative=mpmath.nstr(self.relative, 6))
        return out


@dataclass
class ResidualReport:
    relation_id: str
    tolerance: float
    points: list[PointResult] = field(default_factory=list)

    @property
    def worst(self):
        rel = [p.relative for p in self.points if p.error is None]
        return max(rel) if rel else None

    @property
    def errors(self) -> list[str]:
        return [p.error for p in self.points if p.error is not None]

    @property
    def passed(self) -> bool:
        return bool(self.points) and not self.errors and self.worst <= self.tolerance

    def to_json(self) -> dict:
        worst = self.worst
        return {
            "relation": self.relation_id,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "worst_relative_residual": None if worst is None else mpmath.nstr(worst, 6),
            "points": [p.to_json() for p in self.points],
        }

    def summary(self) -> str:
        worst = "n/a" if self.worst is None else mpmath.nstr(self.worst, 3)
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({len(self.errors)} errors: {self.errors[0]})" if self.errors else ""
        return f"{status}  {self.relation_id:<44} points={len(self.points):<3} worst={worst:<10} tol={self.tolerance:g}{extra}"

    def to_text(self) -> str:
        lines = [self.summary()]
        for p in self.points:
            if p.error is not None:
                lines.append(f"    #{p.index:<3} error: {p.error}")
            else:
                lines.append(f"    #{p.index:<3} relative={mpmath.nstr(p.relative, 3):<10} scale={mpmath.nstr(p.scale, 6)}")
        return "\n".join(lines)


class LCache:
    """L values keyed by (matrix, point); L depends only on M x, so repeated terms are free."""

    def __init__(self, evaluator: Callable = eval_L):
        self.evaluator = evaluator
        self._values: dict = {}

    def __call__(self, y: ParameterPoint, cfg: PrecisionConfig):
        key = (tuple(str(v) for v in y.vector), cfg.working_digits)
        if key not in self._values:
            self._values[key] = self.evaluator(y, cfg).value
        return self._values[key]


def _evaluate_point(index, point, compute) -> PointResult:
    result = PointResult(index, point)
    try:
        values = compute()
    except (LFunctionError, ArithmeticError, ValueError, ZeroDivisionError) as exc:
        result.error = f"{type(exc).__name__}: {exc}"
        return result
    result.values = list(values)
    return result


def check_relation(relation: Relation, spec: SampleSpec, tol: float = TOL_RELATION,
                   cfg: PrecisionConfig = DEFAULT_CONFIG, points: list[ParameterPoint] | None = None,
                   cache: LCache | None = None) -> ResidualReport:
    """Relative residual |sum of terms| / max |term| at each sample point."""
    points = sample_points(spec) if points is None else points
    cache = cache or LCache()
    name = relation.name if relation.triple is None else f"{relation.name} {format_triple(relation.triple)}"
    report = ResidualReport(name, tol)
    with mp.workdps(cfg.working_digits):
        for k, x in enumerate(points):
            res = _evaluate_point(k, x, lambda: relation.term_values(x, cfg, cache))
            if res.error is None:
                res.scale = max(abs(v) for v in res.values)
                res.residual = abs(sum(res.values))
                res.relative = res.residual / res.scale if res.scale else mpmath.mpf(0)
            report.points.append(res)
    return report


def _draw_identity_params(idc: IdentityCheck, spec: SampleSpec) -> list[dict]:
    rng = spec.rng()
    out = []
    for _ in range(spec.count):
        for _attempt in range(MAX_REJECTIONS):
            p = idc.sampler(rng)
            if idc.valid(p):
                out.append(p)
                break
        else:
            raise SamplingExhausted(f"{idc.label}: no valid parameters after {MAX_REJECTIONS} draws")
    return out


def check_identity(idc: IdentityCheck, spec: SampleSpec, tol: float = TOL_CLASSICAL,
                   cfg: PrecisionConfig = DEFAULT_CONFIG) -> ResidualReport:
    """|lhs - rhs| / max(|lhs|, |rhs|) at each sampled parameter set."""
    report = ResidualReport(idc.label or idc.name.value, tol)
    with mp.workdps(cfg.working_digits):
        for k, p in enumerate(_draw_identity_params(idc, spec)):
            res = _evaluate_point(k, p, lambda: idc.sides(p, cfg))
            if res.error is None:
                lhs, rhs = res.values
                res.scale = max(abs(lhs), abs(rhs))
                res.residual = abs(lhs - rhs)
                res.relative = res.residual / res.scale if res.scale else mpmath.mpf(0)
            report.points.append(res)
    return report


def check_representations(spec: SampleSpec, tol: float = TOL_RELATION,
                          cfg: PrecisionConfig = DEFAULT_CONFIG) -> ResidualReport:
    """Largest pairwise disagreement of the series, 7F6 and Barnes values, relative to the largest."""
    spec = SampleSpec(**{**spec.__dict__, "barnes": True})
    report = ResidualReport("representation agreement", tol)
    with mp.workdps(cfg.working_digits):
        for k, x in enumerate(sample_points(spec)):
            res = _evaluate_point(k, x, lambda: [f(x, cfg).value for f in (eval_L_series, eval_L_7F6, eval_L_barnes)])
            if res.error is None:
                res.scale = max(abs(v) for v in res.values)
                res.residual = max(abs(u - v) for u, v in itertools.combinations(res.values, 2))
                res.relative = res.residual / res.scale
            report.points.append(res)
    return report


def random_invariance_elements(count: int, seed: int, exclude=()) -> list:
    """``count`` distinct elements of G_L, drawn deterministically, avoiding ``exclude``."""
    group = invariance_group()
    rng = np.random.default_rng(seed)
    order = [group.elements[i] for i in rng.permutation(len(group))]
    skip = set(exclude)
    return [g for g in order if g not in skip][:count]


def random_invariance_relations(count: int, seed: int) -> list[Relation]:
    from .groups import DOUBLE_COSET_REPRESENTATIVES, builtin_matrices

    reps = [builtin_matrices()[n] for n in DOUBLE_COSET_REPRESENTATIVES]
    elems = random_invariance_elements(count, seed, exclude=reps)
    return [invariance_relation(g, f"random G_L element #{k}") for k, g in enumerate(elems)]


def reports_to_json(reports: list[ResidualReport]) -> str:
    payload = {"passed": all(r.passed for r in reports), "reports": [r.to_json() for r in reports]}
    return json.dumps(payload, indent=2, sort_keys=True)


def reports_to_text(reports: list[ResidualReport], detail: bool = False) -> str:
    body = [r.to_text() if detail else r.summary() for r in reports]
    total = sum(r.passed for r in reports)
    body.append(f"{total}/{len(reports)} checks passed")
    return "\n".join(body)


SUITES = ("invariances", "random-gl", "three-term", "classical", "representations")


def run_suite(name: str, seed: int = 0, samples: int | None = None, tol: float | None = None,
              cfg: PrecisionConfig = DEFAULT_CONFIG, progress: Callable[[ResidualReport], None] | None = None
              ) -> list[ResidualReport]:
    """Run one named suite (or ``"all"``) and return its reports in a fixed order.

    ``tol`` overrides the L-relation tolerance; classical identities keep
    their own tighter defaults unless ``tol`` is looser than those.
    """
    from .relations import classical_identities, invariance_catalog, three_term_catalog

    names = SUITES if name == "all" else (name,)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite {unknown[0]!r}; expected one of {', '.join(SUITES)} or all")
    rel_tol = TOL_RELATION if tol is None else tol
    reports: list[ResidualReport] = []

    def emit(r):
        reports.append(r)
        if progress:
            progress(r)

    cache = LCache()
    if "invariances" in names or "random-gl" in names:
        points = sample_points(SampleSpec(seed=seed, count=samples or 20))
        if "invariances" in names:
            for rel in invariance_catalog():
                emit(check_relation(rel, SampleSpec(seed=seed), rel_tol, cfg, points, cache))
        if "random-gl" in names:
            for rel in random_invariance_relations(50, seed):
                emit(check_relation(rel, SampleSpec(seed=seed), rel_tol, cfg, points, cache))
    if "three-term" in names:
        points = sample_points(SampleSpec(seed=seed + 1, count=samples or 3))
        for rel in three_term_catalog():
            emit(check_relation(rel, SampleSpec(seed=seed + 1), rel_tol, cfg, points, cache))
    if "classical" in names:
        counts = {"Thomae": 20, "Barnes first lemma": 10, "Barnes second lemma": 10}
        for idc in classical_identities():
            default = TOL_TERMINATING if idc.name.value == "Bailey" else TOL_CLASSICAL
            count = samples or counts.get(idc.label, 3)
            emit(check_identity(idc, SampleSpec(seed=seed, count=count), max(default, tol or 0), cfg))
    if "representations" in names:
        emit(check_representations(SampleSpec(seed=seed, count=samples or 20), rel_tol, cfg))
    return reports
