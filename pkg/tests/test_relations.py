"""Invariances, three-term relations, their transport, and the classical identities."""
import json
from collections import Counter

import mpmath
import numpy as np
import pytest

from lfunction.errors import InvalidTriple, NotInGroup, PreconditionError
from lfunction.groups import (
    builtin_matrices, coset_label, coset_table, invariance_group, parse_triple, perm,
)
from lfunction.numerics import ParameterPoint, eval_L
from lfunction.relations import (
    Relation, RelationKind, _linear_matrix, all_triples, classical_bailey, classical_barnes_first,
    classical_barnes_second, classical_thomae, classify_invariance, expanded_two_term_rhs, fundamental_coherent,
    fundamental_incoherent, fundamental_two_term_check, intermediate_654bar, invariance_catalog, thomae_530_map,
    thomae_lhs, thomae_rhs, thomae_rhs_530, three_term, three_term_catalog,
)

from conftest import rel_diff

M = builtin_matrices()

PRINTED_INVARIANCES = [
    "L[a,b,c,d; e; f,g]",
    "L[a,b,g-c,g-d; 1+a+b-f; 1+a+b-e,g]",
    "L[1+a-e,g-c,a,f-c; 1+a-c; 1+a+b-e,1+a+d-e]",
    "L[1+d-e,1+a-e,g-c,g-b; 1+g-b-c; 1+a+d-e,1+g-e]",
    "L[g-a,g-b,g-c,g-d; 1+g-f; 1+g-e,g]",
    "L[1+c-e,1+d-e,1+a-e,1+b-e; 2-e; 1+g-e,1+f-e]",
]


def test_invariance_catalog_renders_the_printed_lists():
    catalog = invariance_catalog()
    assert [r.terms[1].render_L() for r in catalog] == PRINTED_INVARIANCES
    assert all(r.terms[0].render_L() == "L[a,b,c,d; e; f,g]" for r in catalog)
    assert [classify_invariance(r.terms[1].matrix) for r in catalog] == [1, 2, 3, 4, 5, 6]


def test_classify_covers_GL():
    counts = Counter(classify_invariance(g) for g in invariance_group())
    assert counts == {1: 48, 2: 576, 3: 576, 4: 576, 5: 96, 6: 48}
    with pytest.raises(NotInGroup):
        classify_invariance(M["(56)"])


def test_invariances_hold_at_a_point(x0, cfg40):
    for rel in invariance_catalog():
        assert rel.residual(x0, cfg40) < 1e-14


# -- fundamental three-term relations -------------------------------------------

def test_linearized_third_matrices_are_coset_representatives():
    assert _linear_matrix(["1-a", "1-b", "1-c", "1-d", "2-g", "2-f", "2-e"]) == M["mu4b"]
    assert _linear_matrix(["1-a", "1-b", "1-c", "1-d", "2-e", "2-f", "2-g"]) == M["w0"]


def test_fundamental_relations_render_the_printed_arguments():
    coh = fundamental_coherent()
    assert [t.render_L() for t in coh.terms] == [
        "L[a,b,c,d; e; f,g]", "L[a,b,c,d; f; e,g]", "L[a,b,c,d; g; f,e]"]
    assert [t.render_L() for t in intermediate_654bar().terms] == [
        "L[a,b,c,d; e; f,g]", "L[a,b,c,d; f; e,g]", "L[1-a,1-b,1-c,1-d; 2-g; 2-f,2-e]"]
    assert [t.render_L() for t in fundamental_incoherent().terms] == [
        "L[a,b,c,d; e; f,g]", "L[a,b,c,d; f; e,g]", "L[1-a,1-b,1-c,1-d; 2-e; 2-f,2-g]"]


@pytest.mark.parametrize("build", [fundamental_coherent, intermediate_654bar, fundamental_incoherent])
def test_fundamental_relations_hold(build, x0, cfg40):
    rel = build()
    assert rel.residual(x0, cfg40) < 1e-14
    for t in rel.terms:
        assert coset_label(t.matrix) == t.label


def test_intermediate_transports_to_the_coherent_relation():
    mu = perm("(14)(23)") @ M["[(123)A]^3"]
    moved = intermediate_654bar().change_of_variable(mu)
    assert moved.triple == parse_triple("6,5,4")
    assert moved.projective_ratio(fundamental_coherent()) == 1


def test_incoherent_relation_from_two_coherent_ones(x0, cfg40):
    """Eliminating L_4 between {6,5,4} and {6,5,4}.mu with mu = (14)(23)[(123)A]^3 (576) gives {6,5,6b}."""
    mu = perm("(14)(23)") @ M["[(123)A]^3"] @ M["(576)"]
    coh = fundamental_coherent()
    other = coh.change_of_variable(mu)
    assert other.triple == parse_triple("5,4,6b")
    v1 = {t.label: t.coefficient.evaluate(x0, cfg40) for t in coh.terms}
    v2 = {t.label: t.coefficient.evaluate(x0, cfg40) for t in other.terms}
    four = coh.terms[2].label
    combo = {lab: v1.get(lab, 0) * v2[four] - v2.get(lab, 0) * v1[four] for lab in set(v1) | set(v2)}
    assert abs(combo[four]) < 1e-35
    target = {t.label: t.coefficient.evaluate(x0, cfg40) for t in fundamental_incoherent().terms}
    ratios = [combo[lab] / target[lab] for lab in target]
    assert max(abs(r - ratios[0]) for r in ratios) < 1e-30 * abs(ratios[0])


@pytest.mark.parametrize("triple,ratio", [("6,5,4", 1), ("6,5,4b", -1), ("6,5,6b", 1)])
def test_three_term_matches_stored_transcriptions(triple, ratio):
    stored = {"6,5,4": fundamental_coherent, "6,5,4b": intermediate_654bar, "6,5,6b": fundamental_incoherent}
    assert three_term(triple).projective_ratio(stored[triple]()) == ratio


def test_catalog_shape():
    catalog = three_term_catalog()
    assert len(catalog) == 220
    assert len({r.triple for r in catalog}) == 220
    kinds = Counter(r.kind for r in catalog)
    assert kinds == {RelationKind.ThreeTermCoherent: 160, RelationKind.ThreeTermIncoherent: 60}
    reps = coset_table().representatives
    for r in catalog:
        assert frozenset(r.labels) == r.triple
        assert all(t.matrix == reps[t.label] for t in r.terms)


def test_catalog_closure_under_change_of_variable(cfg40):
    """three_term(t) after x -> nu x is a multiple of three_term(t . nu) (checked at a point)."""
    x = ParameterPoint.from_free(*(mpmath.mpc(z) for z in (
        0.45 + 0.11j, 0.52 - 0.23j, 0.61 + 0.19j, 0.77 - 0.07j, 1.21 + 0.13j, 1.47 - 0.21j)))
    table = coset_table()
    rng = np.random.default_rng(8)
    triples = all_triples()
    for k in rng.choice(len(triples), size=8, replace=False):
        nu = table.ml.elements[rng.integers(len(table.ml))]
        moved = three_term(triples[k]).change_of_variable(nu)
        target = three_term(moved.triple)
        mine = {t.label: t.coefficient.evaluate(x, cfg40) for t in moved.terms}
        theirs = {t.label: t.coefficient.evaluate(x, cfg40) for t in target.terms}
        ratios = [mine[lab] / theirs[lab] for lab in theirs]
        assert max(abs(r - ratios[0]) for r in ratios) < 1e-25 * abs(ratios[0])


def test_three_term_rejects_bad_input():
    with pytest.raises(InvalidTriple):
        three_term("6,5")
    with pytest.raises(InvalidTriple):
        three_term(["6", "6", "5"])


def test_relation_json_round_trip():
    rels = invariance_catalog() + [fundamental_coherent(), fundamental_incoherent()] + three_term_catalog()[::17]
    for r in rels:
        data = json.loads(json.dumps(r.to_json()))
        assert Relation.from_json(data) == r


def test_render_header():
    text = three_term("6,5,6b").render()
    assert text.splitlines()[0] == "three-term {6,5,6b}"
    assert text.endswith("= 0")


def test_relation_term_count_is_checked():
    coh = fundamental_coherent()
    with pytest.raises(ValueError):
        Relation("bad", RelationKind.ThreeTermCoherent, coh.terms[:2])


# -- classical identities --------------------------------------------------------

THOMAE_POINT = {"b": mpmath.mpc(0.43, 0.12), "c": mpmath.mpc(0.61, -0.2), "d": mpmath.mpc(0.35, 0.07),
                "f": mpmath.mpc(1.32, 0.18), "g": mpmath.mpc(1.47, -0.11)}


def test_thomae_both_forms(cfg40):
    lhs = thomae_lhs(THOMAE_POINT, cfg40)
    assert rel_diff(lhs, thomae_rhs(THOMAE_POINT, cfg40)) < 1e-12
    assert rel_diff(lhs, thomae_rhs_530(THOMAE_POINT, cfg40)) < 1e-12


def test_thomae_one_step_twice_gives_two_step(cfg40):
    p = THOMAE_POINT
    swapped = dict(p, b=p["c"], c=p["b"])
    q = thomae_530_map(swapped)
    r = thomae_530_map({"b": q["c"], "c": q["b"], "d": q["d"], "f": q["g"], "g": q["f"]})
    # r carries the parameters of the two-step right side: {g-b, s, f-b} over {f+g-b-c, f+g-b-d}
    s = p["f"] + p["g"] - p["b"] - p["c"] - p["d"]
    got = [r["b"], r["c"], r["d"]]
    for want in (p["g"] - p["b"], s, p["f"] - p["b"]):
        got.remove(next(v for v in got if abs(v - want) < 1e-40))
    assert rel_diff(thomae_lhs(r, cfg40), thomae_rhs(p, cfg40)) < 1e-25


@pytest.mark.parametrize("n", [0, 1, 2, 3, 5])
def test_bailey(n, cfg40):
    idc = classical_bailey(n)
    p = {"b": mpmath.mpc(0.31, 0.1), "c": mpmath.mpc(0.57, -0.2), "d": mpmath.mpc(0.72, 0.05),
         "f": mpmath.mpc(1.2, 0.15), "g": mpmath.mpc(1.45, -0.1)}
    lhs, rhs = idc.sides(p, cfg40)
    assert rel_diff(lhs, rhs) < 1e-30
    assert idc.fixed == {"n": n}


def test_barnes_identity_checks(cfg40):
    first = classical_barnes_first()
    p = {"alpha": mpmath.mpc(0.3, 0.1), "beta": mpmath.mpc(0.5, -0.2), "gamma": mpmath.mpc(0.4, 0.05),
         "delta": mpmath.mpc(0.6, 0.2)}
    assert rel_diff(*first.sides(p, cfg40)) < 1e-9
    second = classical_barnes_second()
    a, b, c, f = mpmath.mpc(0.35, 0.1), mpmath.mpc(0.45, -0.15), mpmath.mpc(0.3, 0.05), mpmath.mpc(2.2, 0.1)
    q = {"a": a, "b": b, "c": c, "f": f, "e": 1 + a + b + c - f}
    assert rel_diff(*second.sides(q, cfg40)) < 1e-9


def test_identity_outside_region_is_refused(cfg40):
    idc = classical_thomae()
    bad = dict(THOMAE_POINT, f=mpmath.mpc(0.2), g=mpmath.mpc(0.3))
    with pytest.raises(PreconditionError):
        idc.sides(bad, cfg40)
    with pytest.raises(PreconditionError):
        classical_thomae("999")
    with pytest.raises(PreconditionError):
        classical_bailey(-1)


def test_expanded_two_term_relation(x0, cfg40):
    """The fundamental two-term relation written out with two 4F3 series."""
    assert rel_diff(expanded_two_term_rhs(x0, cfg40), eval_L(x0, cfg40).value) < 1e-12
    assert rel_diff(expanded_two_term_rhs(x0, cfg40), eval_L(x0.transform(M["A"]), cfg40).value) < 1e-12


def test_fundamental_two_term_check(cfg40):
    idc = fundamental_two_term_check()
    rng = np.random.default_rng(4)
    p = idc.sampler(rng)
    while not idc.valid(p):
        p = idc.sampler(rng)
    assert rel_diff(*idc.sides(p, cfg40)) < 1e-12
