"""Property-based checks of the symbolic layer and the group action."""
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from lfunction.groups import builtin_matrices, governing_group, permutation_rep
from lfunction.symbolic import AffineForm, CoefficientExpression, coefficient_from_json

small = st.integers(min_value=-3, max_value=3)
forms = st.builds(lambda c, v: AffineForm(c, tuple(v)), small, st.lists(small, min_size=7, max_size=7))
indices = st.integers(min_value=0, max_value=23039)


@given(forms)
def test_affine_render_parse_round_trip(f):
    assert AffineForm.parse(f.render()) == f
    assert AffineForm.from_json(f.to_json()) == f


@given(forms, indices, indices)
@settings(max_examples=60, deadline=None)
def test_compose_is_a_right_action(f, i, j):
    group = governing_group()
    g, h = group.elements[i], group.elements[j]
    assert f.compose(g).compose(h) == f.compose(g @ h)
    assert f.compose(g).equivalent(f.reduced().compose(g))


@given(indices, indices)
@settings(max_examples=60, deadline=None)
def test_phi_respects_products(i, j):
    group = governing_group()
    g, h = group.elements[i], group.elements[j]
    assert permutation_rep(g @ h) == permutation_rep(g).then(permutation_rep(h))
    # composing with the central w0 toggles the bar on every image
    w0 = builtin_matrices()["w0"]
    assert [lab.bar() for lab in permutation_rep(g).images] == list(permutation_rep(g @ w0).images)


@given(st.fractions(max_denominator=20).filter(lambda q: q != 0), st.integers(-2, 2),
       st.lists(forms, max_size=3), st.lists(forms, max_size=3), st.lists(forms, max_size=3))
@settings(deadline=None)
def test_coefficient_json_round_trip(pref, pip, sin, num, den):
    expr = CoefficientExpression.build(Fraction(pref), pip, sin, num, den)
    assert coefficient_from_json(expr.to_json()) == expr
