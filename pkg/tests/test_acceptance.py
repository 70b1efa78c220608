"""End-to-end acceptance checks, one test per criterion.

Each test records a ``PASS criterion k: ...`` or ``FAIL criterion k: ...`` line;
the lines are printed together at the end of the pytest run.  Numerical
criteria run at the default 60-digit working precision.
"""
import dataclasses
import itertools
import math
import time

import mpmath
import numpy as np
import pytest

from lfunction.groups import (
    A, ALL_LABELS, DOUBLE_COSET_REPRESENTATIVES, IDENTITY, ML_GENERATORS, CosetLabel, builtin_matrices,
    coset_label, coset_table, double_cosets, generate_closure, invariance_group, is_coherent,
    perm, permutation_rep, sigma_group,
)
from lfunction.numerics import DEFAULT_CONFIG
from lfunction.relations import (
    Relation, Term, fundamental_coherent, fundamental_incoherent, intermediate_654bar, invariance_catalog,
    invariance_relation, three_term, three_term_catalog,
)
from lfunction.symbolic import CoefficientSum
from lfunction.verify import LCache, SampleSpec, check_relation, run_suite, sample_points

from conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.slow
M = builtin_matrices()
CANARY_TOL = 1e-3


def record(k: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def worst_of(reports):
    vals = [r.worst for r in reports if r.worst is not None]
    return max(vals) if vals else None


def failing(reports):
    return [r.relation_id for r in reports if not r.passed]


# -- 1-4: exact combinatorics ----------------------------------------------------

def test_criterion_1_group_orders():
    start = time.perf_counter()
    ml = generate_closure([M[g] for g in ML_GENERATORS], cap=230400)
    elapsed = time.perf_counter() - start
    orders = (len(sigma_group()), len(invariance_group()), len(ml))
    ok = orders == (48, 1920, 23040) and elapsed < 10
    record(1, ok, f"|Sigma|, |G_L|, |M_L| = {orders}; M_L closure {elapsed:.2f} s")


def test_criterion_2_double_cosets():
    classes = double_cosets(invariance_group(), sigma_group())
    sizes = sorted(c.size for c in classes)
    homes = [next(k for k, c in enumerate(classes) if M[n] in c.members) for n in DOUBLE_COSET_REPRESENTATIVES]
    rep_sizes = [classes[k].size for k in homes]
    ok = (len(classes) == 6 and sizes == sorted([48, 576, 576, 576, 96, 48]) and len(set(homes)) == 6
          and rep_sizes == [48, 576, 576, 576, 96, 48])
    record(2, ok, f"{len(classes)} classes, sizes of the named representatives' classes {rep_sizes}")


def printed_representatives():
    """The twelve coset representatives rebuilt from their printed words."""
    c = perm("(1234)(567)")
    w0 = perm("(12)(34)") @ ((c @ c) @ A) ** 4
    w1 = perm("(1234)") @ (c @ A) ** 3 @ perm("(1432)")
    w2 = w0 @ w1
    s56, s57 = perm("(56)"), perm("(57)")
    return {"6": IDENTITY, "5": s56, "4": s57, "3": w2, "2": s56 @ w2, "1": s57 @ w2,
            "6b": w0, "5b": s56 @ w0, "4b": s57 @ w0, "3b": w1, "2b": s56 @ w1, "1b": s57 @ w1}


PHI_TABLE = {
    "a1'": "2b 1b 3 4 5 6", "a1": "2 1 3 4 5 6", "a2": "1 3 2 4 5 6",
    "a3": "1 2 4 3 5 6", "a4": "1 2 3 5 4 6", "a5": "1 2 3 4 6 5",
}


def test_criterion_3_coset_combinatorics():
    table = coset_table()
    sizes = {len(table.coset_members(lab)) for lab in ALL_LABELS}
    reps = printed_representatives()
    labels_ok = all(coset_label(mu) == CosetLabel.parse(lab) for lab, mu in reps.items())
    w0 = reps["6b"]
    central = w0 != IDENTITY and w0 @ w0 == IDENTITY and all(w0 @ M[g] == M[g] @ w0 for g in ML_GENERATORS)
    swaps = all(table.act(lab, w0) == lab.bar() for lab in ALL_LABELS)
    phi_ok = all([str(lab) for lab in permutation_rep(M[g]).images] == PHI_TABLE[g].split() for g in PHI_TABLE)
    images = {tuple(row) for row in table.phi_table}
    even = all(sum(c >= 6 for c in row[:6]) % 2 == 0 for row in images)
    ok = len(ALL_LABELS) == 12 and sizes == {1920} and labels_ok and central and swaps and phi_ok
    ok = ok and len(images) == 23040 and even
    record(3, ok, f"12 cosets of size {sizes}, labels {labels_ok}, w0 central {central} and bar-swapping {swaps}, "
                  f"Phi table {phi_ok}, |Phi(M_L)| = {len(images)}, even bar counts {even}")


def test_criterion_4_orbits():
    orbits = coset_table().triple_orbits()
    lengths = [len(o) for o in orbits]
    ok = (lengths == [160, 60] and sum(lengths) == math.comb(12, 3)
          and all(is_coherent(t) for t in orbits[0]) and not any(is_coherent(t) for t in orbits[1]))
    record(4, ok, f"orbit lengths {lengths}, first all coherent, second all incoherent")


# -- 5-8: numerical certification -----------------------------------------------

def test_criterion_5_two_term_certification():
    start = time.perf_counter()
    reports = run_suite("invariances", seed=0, cfg=DEFAULT_CONFIG)
    reports += run_suite("random-gl", seed=0, cfg=DEFAULT_CONFIG)
    elapsed = time.perf_counter() - start
    bad = failing(reports)
    counts = {len(r.points) for r in reports}
    ok = len(reports) == 56 and counts == {20} and not bad and elapsed < 600
    record(5, ok, f"{len(reports) - len(bad)}/{len(reports)} relations at {counts} points, "
                  f"worst {mpmath.nstr(worst_of(reports), 3)}, {elapsed:.0f} s at {DEFAULT_CONFIG.working_digits} digits")


def test_criterion_6_representation_agreement():
    (report,) = run_suite("representations", seed=0, cfg=DEFAULT_CONFIG)
    ok = report.passed and len(report.points) == 20 and report.tolerance == 1e-6
    record(6, ok, f"series / 7F6 / Barnes at {len(report.points)} points, worst pairwise "
                  f"{mpmath.nstr(report.worst, 3)}")


def test_criterion_7_three_term_certification():
    reports = run_suite("three-term", seed=0, cfg=DEFAULT_CONFIG)
    bad = failing(reports)
    stored = {"6,5,4": fundamental_coherent(), "6,5,4b": intermediate_654bar(),
              "6,5,6b": fundamental_incoherent()}
    matches = {t: three_term(t).matches(rel) for t, rel in stored.items()}
    ok = len(reports) == 220 and {len(r.points) for r in reports} == {3} and not bad and all(matches.values())
    record(7, ok, f"{220 - len(bad)}/220 at 3 points, worst {mpmath.nstr(worst_of(reports), 3)}; "
                  f"symbolic matches {matches}")


def test_criterion_8_classical_identities():
    reports = run_suite("classical", seed=0, cfg=DEFAULT_CONFIG)
    by_id = {r.relation_id: r for r in reports}
    want = {"Thomae": (20, 1e-8), "Barnes first lemma": (10, 1e-8), "Barnes second lemma": (10, 1e-8)}
    want.update({f"Bailey n={n}": (None, 1e-10) for n in (0, 1, 2, 3, 5)})
    ok = True
    parts = []
    for name, (count, tol) in want.items():
        r = by_id.get(name)
        good = r is not None and r.passed and r.tolerance <= tol and (count is None or len(r.points) == count)
        ok &= good
        parts.append(f"{name} {mpmath.nstr(r.worst, 2) if r else 'missing'}")
    record(8, ok, "; ".join(parts))


# -- 9: mutation canary ----------------------------------------------------------

def _canary_points():
    return sample_points(SampleSpec(seed=1, count=3))


def test_criterion_9_mutation_canary():
    cfg = DEFAULT_CONFIG
    points = _canary_points()
    cache = LCache()

    def caught(rel):
        return not check_relation(rel, SampleSpec(seed=1), CANARY_TOL, cfg, points, cache).passed

    # the unmutated relations must pass at the canary tolerance, otherwise the canary proves nothing
    base = invariance_catalog() + three_term_catalog()
    assert all(not caught(rel) for rel in base)

    # single-entry perturbations of A, entered through the type-2 invariance
    assert invariance_catalog()[1].terms[1].matrix == A
    single, single_missed = 0, []
    for i, j, delta in itertools.product(range(7), range(7), (1, -1)):
        arr = np.array(A.array)
        arr[i, j] += delta
        single += 1
        if not caught(invariance_relation(A.from_array(arr, check=False))):
            single_missed.append((i, j, delta))

    # paired perturbations that keep e+f+g-a-b-c-d fixed, so only the numerics can catch them
    paired, paired_missed = 0, []
    for j in range(7):
        for i, k in ((0, 1), (2, 3), (4, 5), (5, 6)):
            arr = np.array(A.array)
            arr[i, j] += 1
            arr[k, j] -= 1
            mutated = A.from_array(arr, check=False)
            assert mutated.preserves_constraint()
            paired += 1
            if not caught(invariance_relation(mutated)):
                paired_missed.append((i, k, j))

    # unit change to each prefactor, one term (or one summand of a sum) at a time
    prefactor, prefactor_missed = 0, []
    for rel in base:
        for t_idx, term in enumerate(rel.terms):
            for s_idx, summand in enumerate(term.coefficient.summands):
                bumped = dataclasses.replace(summand, prefactor=summand.prefactor + 1)
                if isinstance(term.coefficient, CoefficientSum):
                    parts = list(term.coefficient.terms)
                    parts[s_idx] = bumped
                    coeff = CoefficientSum(tuple(parts))
                else:
                    coeff = bumped
                terms = list(rel.terms)
                terms[t_idx] = Term(term.matrix, coeff, term.label)
                prefactor += 1
                if not caught(Relation(rel.name + " (mutated)", rel.kind, tuple(terms), rel.triple)):
                    prefactor_missed.append((rel.name, t_idx, s_idx))

    ok = not (single_missed or paired_missed or prefactor_missed)
    record(9, ok, f"caught {single - len(single_missed)}/{single} single-entry A mutants, "
                  f"{paired - len(paired_missed)}/{paired} constraint-preserving A mutants, "
                  f"{prefactor - len(prefactor_missed)}/{prefactor} prefactor mutants at tol {CANARY_TOL:g}")
