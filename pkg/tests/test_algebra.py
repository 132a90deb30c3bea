from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dpforge import fixtures
from dpforge.algebra import (
    AlgebraSpec,
    MorphismSpec,
    apply_diff,
    basis_vector,
    eval_bilinear,
    module_act,
    morphism_apply,
    spec_from_dict,
    spec_to_dict,
)
from dpforge.errors import DimensionMismatch, ParseError, ValidationError, VariantMismatch, WeightMismatch
from dpforge.linalg import SparseVector

H, E, F = 0, 1, 2


def test_sl2_bracket_and_product_values():
    s = fixtures.sl2(lam=1, k=2)
    assert eval_bilinear(s, "bracket", basis_vector(H), basis_vector(E)) == SparseVector({E: 2})
    # e.f = (k/2) h, so with k = 2 the product lands on h
    assert eval_bilinear(s, "product", basis_vector(E), basis_vector(F)) == SparseVector({H: 1})
    assert eval_bilinear(s, "product", basis_vector(H), SparseVector()).is_zero()


def test_sl2_diff_values():
    lam = Fraction(3, 2)
    s = fixtures.sl2(lam=lam)
    assert apply_diff(s, basis_vector(F)) == SparseVector({H: -1, E: -lam})
    assert apply_diff(s, basis_vector(E)).is_zero()
    zero_d = fixtures.abelian2()
    assert apply_diff(zero_d, basis_vector(1)).is_zero()


def test_eval_dimension_mismatch():
    s = fixtures.sl2(1)
    with pytest.raises(DimensionMismatch):
        eval_bilinear(s, "product", SparseVector({7: 1}), basis_vector(0))
    with pytest.raises(DimensionMismatch):
        apply_diff(s, SparseVector({-1: 1}))


def test_morphism_apply_examples():
    s = fixtures.sl2(1)
    ident = fixtures.identity_morphism(s)
    x = SparseVector({H: 1, E: Fraction(1, 2)})
    assert morphism_apply(ident, x) == x
    zero = fixtures.zero_morphism(s)
    assert morphism_apply(zero, x).is_zero()
    # projection onto span{h}: e, f -> 0
    proj = MorphismSpec(s, s, {H: {H: 1}})
    assert morphism_apply(proj, SparseVector({H: 1, E: 1})) == basis_vector(H)


def test_morphism_weight_and_variant_guards():
    a = fixtures.sl2(1)
    with pytest.raises(WeightMismatch):
        MorphismSpec(a, fixtures.sl2(2), {})
    with pytest.raises(VariantMismatch):
        MorphismSpec(a, fixtures.sl2(1, diff="d2"), {})


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=3), min_size=3, max_size=3),
    st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=3), min_size=3, max_size=3),
    st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=3), min_size=3, max_size=3),
    st.fractions(min_value=-5, max_value=5, max_denominator=3),
)
def test_bilinearity_and_linearity(xs, ys, zs, alpha):
    s = fixtures.sl2(lam=Fraction(1, 2), k=3)
    x, y, z = (SparseVector(dict(enumerate(v))) for v in (xs, ys, zs))
    for which in ("product", "bracket"):
        f = lambda a, b: eval_bilinear(s, which, a, b)
        assert f(x + z, y) == f(x, y) + f(z, y)
        assert f(x.scale(alpha), y) == f(x, y).scale(alpha)
        assert f(x, y + z) == f(x, y) + f(x, z)
    assert apply_diff(s, x + y.scale(alpha)) == apply_diff(s, x) + apply_diff(s, y).scale(alpha)


def test_unit_axiom_enforced_at_load():
    with pytest.raises(ValidationError):
        AlgebraSpec("bad", ("u", "t"), 1, "weighted", {(0, 0): {0: 1}}, {}, {}, {0: 1, 1: 1})
    d = fixtures.dual_numbers(1)
    for i in range(d.dim):
        assert eval_bilinear(d, "product", d.unit, basis_vector(i)) == basis_vector(i)
        assert eval_bilinear(d, "product", basis_vector(i), d.unit) == basis_vector(i)


def test_label_validation():
    with pytest.raises(ValidationError):
        AlgebraSpec("bad", ("a", "a"), 1, "weighted", {}, {}, {})
    with pytest.raises(ValidationError):
        AlgebraSpec("bad", ("a.b",), 1, "weighted", {}, {}, {})
    with pytest.raises(ValidationError):
        AlgebraSpec("bad", ("x",), 1, "nonsense", {}, {}, {})


@pytest.mark.parametrize(
    "build",
    [
        lambda: fixtures.sl2(Fraction(3, 2), k=-3),
        lambda: fixtures.sl2(0, diff="d2"),
        lambda: fixtures.matrix2(5),
        lambda: fixtures.dual_numbers(7),
        lambda: fixtures.abelian2(),
        lambda: fixtures.one_dim_nilpotent(1),
        lambda: fixtures.poisson3(),
    ],
)
def test_spec_serialization_round_trip(build):
    spec = build()
    doc = spec_to_dict(spec)
    back = spec_from_dict(doc)
    assert back.labels == spec.labels
    assert back.lam == spec.lam and back.variant == spec.variant
    assert back.product == spec.product and back.bracket == spec.bracket and back.diff == spec.diff
    assert back.unit == spec.unit


def test_spec_from_dict_errors():
    base = spec_to_dict(fixtures.dual_numbers(1))
    bad = dict(base)
    bad["lambda"] = "1/0"
    with pytest.raises(ParseError):
        spec_from_dict(bad)
    bad = dict(base)
    bad["dim"] = 3
    with pytest.raises(ParseError):
        spec_from_dict(bad)
    bad = dict(base)
    bad["product"] = [{"i": "u", "j": "zz", "out": {}}]
    with pytest.raises(ParseError):
        spec_from_dict(bad)


def test_module_action_evaluation():
    d = fixtures.dual_numbers(1)
    reg = fixtures.regular_module(d)
    t = basis_vector(1)
    assert module_act(reg, "action", d.unit, t) == t
    assert module_act(reg, "action", t, t).is_zero()
