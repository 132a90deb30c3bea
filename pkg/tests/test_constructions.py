from fractions import Fraction

import pytest

from dpforge import fixtures
from dpforge.algebra import MorphismSpec, basis_vector, eval_bilinear, morphism_apply
from dpforge.axioms import profile_for, verify_algebra, verify_morphism
from dpforge.constructions import (
    check_ideal,
    cohomology,
    first_iso,
    full_space,
    opposite,
    quotient,
    restrict_to_subalgebra,
    tensor,
)
from dpforge.errors import MorphismInvalid, NotAnIdeal, QuotientNotContained, VariantMismatch, WeightMismatch
from dpforge.linalg import SparseVector, row_reduce

H, E, F = 0, 1, 2

CLOSURE_FIXTURES = [
    fixtures.sl2(1, 2),
    fixtures.sl2(Fraction(3, 2), -3, diff="d2"),
    fixtures.matrix2(5),
    fixtures.dual_numbers(1),
    fixtures.abelian2(),
    fixtures.poisson3(),
    fixtures.one_dim_nilpotent(1),
]


def span(*vecs):
    return row_reduce([SparseVector(v) for v in vecs])


def test_opposite_negates_bracket_only():
    s = fixtures.sl2(1, 2)
    op = opposite(s)
    assert op.product == s.product and op.diff == s.diff
    assert eval_bilinear(op, "bracket", basis_vector(H), basis_vector(E)) == SparseVector({E: -2})
    opop = opposite(op)
    assert opop.product == s.product and opop.bracket == s.bracket and opop.diff == s.diff


@pytest.mark.parametrize("spec", CLOSURE_FIXTURES, ids=lambda s: s.name)
def test_opposite_closure(spec):
    out = opposite(spec)
    assert verify_algebra(out, profile_for(out, "paper")).passed


def test_opposite_of_abelian_is_identical():
    ab = fixtures.abelian2()
    out = opposite(ab)
    assert out.product == ab.product and out.bracket == ab.bracket and out.diff == ab.diff


def test_tensor_shape_and_guards():
    s = fixtures.sl2(1, 2)
    t = tensor(s, fixtures.sl2(1, 2, name="sl2b"))
    assert t.dim == 9 and t.labels[0] == "h⊗h"
    with pytest.raises(WeightMismatch):
        tensor(s, fixtures.sl2(2))
    with pytest.raises(VariantMismatch):
        tensor(s, fixtures.sl2(1, diff="d2"))


def test_tensor_with_unit_factor_reproduces_tensors():
    s = fixtures.sl2(1, 2)
    t = tensor(s, fixtures.one_dim_unital(1))
    assert t.dim == s.dim
    assert t.product == s.product and t.bracket == s.bracket and t.diff == s.diff
    assert verify_algebra(t, profile_for(t, "paper")).passed


def test_tensor_closure_for_commutative_products():
    pairs = [
        (fixtures.dual_numbers(1), fixtures.dual_numbers(1, name="dual2b")),
        (fixtures.poisson3(), fixtures.dual_numbers(1)),
        (fixtures.abelian2(1), fixtures.abelian2(1, name="ab2")),
        (fixtures.poisson3(), fixtures.poisson3(name="poisson3b")),
    ]
    for a, b in pairs:
        out = tensor(a, b)
        assert verify_algebra(out, profile_for(out, "paper")).passed, (a.name, b.name)


def test_tensor_modified_variant():
    lam = Fraction(2)
    a = fixtures.dual_numbers(lam, variant="modified")
    # valid modified operator on dual numbers: d(u) = -lam u, d(t) = (1-lam) t
    from dpforge.algebra import AlgebraSpec

    a = AlgebraSpec("dm", a.labels, lam, "modified", a.product, {}, {0: {0: -lam}, 1: {1: 1 - lam}}, {0: 1})
    out = tensor(a, AlgebraSpec("dm2", a.labels, lam, "modified", a.product, {}, a.diff, {0: 1}))
    assert verify_algebra(out, profile_for(out, "paper")).passed


def test_tensor_of_sl2_breaks_antisymmetry_exactly():
    # {h(x)h, e(x)e} = 4k e(x)e = {e(x)e, h(x)h}: the componentwise bracket is
    # not antisymmetric when the factor products fail to commute
    s = fixtures.sl2(1, 2)
    t = tensor(s, fixtures.sl2(1, 2, name="sl2b"))
    report = verify_algebra(t, profile_for(t, "paper"))
    assert not report.passed
    failing = report.first_failure()
    assert failing.check == "BracketAntisym"
    x = SparseVector({t.labels.index("h⊗h"): 1})
    y = SparseVector({t.labels.index("e⊗e"): 1})
    lhs = eval_bilinear(t, "bracket", x, y)
    rhs = eval_bilinear(t, "bracket", y, x)
    assert lhs == rhs == SparseVector({t.labels.index("e⊗e"): 8})


def test_functoriality_smoke():
    a = fixtures.poisson3()
    b = fixtures.dual_numbers(1)
    left = opposite(tensor(a, b))
    right = tensor(opposite(a), opposite(b))
    plain = tensor(a, b)
    assert left.product == right.product == plain.product
    assert left.diff == right.diff == plain.diff
    assert left.bracket == right.bracket
    negated = {k: {i: -v for i, v in col.items()} for k, col in plain.bracket.items()}
    assert left.bracket == negated


def test_check_ideal_examples():
    ab = fixtures.abelian2()
    ok, _ = check_ideal(ab, span({1: 1}))
    assert ok
    s = fixtures.sl2(1, 2)
    ok, report = check_ideal(s, span({E: 1}))
    assert not ok
    failing = report.first_failure()
    assert failing.check == "{A,B}" and failing.witness["element"] == "(f, e)"
    ok, _ = check_ideal(s, full_space(s.dim))
    assert ok


def test_quotient_examples():
    ab = fixtures.abelian2()
    q, proj = quotient(ab, span({1: 1}))
    assert q.dim == 1 and q.product == {} and q.bracket == {} and q.diff == {}
    assert verify_algebra(q, profile_for(q, "paper")).passed
    assert verify_morphism(proj).passed
    q0, _ = quotient(ab, row_reduce([]))
    assert q0.dim == 2 and q0.labels == ab.labels
    qf, _ = quotient(ab, full_space(2))
    assert qf.dim == 0
    with pytest.raises(NotAnIdeal):
        quotient(fixtures.sl2(1), span({E: 1}))


@pytest.mark.parametrize("spec", CLOSURE_FIXTURES, ids=lambda s: s.name)
def test_quotient_closure_by_full_and_zero(spec):
    for ideal in (row_reduce([]), full_space(spec.dim)):
        q, _ = quotient(spec, ideal)
        assert verify_algebra(q, profile_for(q, "paper")).passed


def test_quotient_of_matrix_algebra_by_zero_keeps_unit():
    m = fixtures.matrix2(1)
    q, _ = quotient(m, row_reduce([]))
    assert q.is_unital and verify_algebra(q, profile_for(q, "strict")).passed


def test_first_iso_identity_and_zero():
    s = fixtures.sl2(1, 2)
    fi = first_iso(fixtures.identity_morphism(s))
    assert fi.kernel.dim == 0 and fi.image.dim == s.dim and fi.quotient.dim == s.dim
    assert fi.report.passed
    ab = fixtures.abelian2()
    z = fixtures.zero_morphism(ab)
    fi0 = first_iso(z)
    assert fi0.kernel.dim == 2 and fi0.quotient.dim == 0 and fi0.report.passed


def test_first_iso_projection_fixture():
    ab = fixtures.abelian2()
    q, proj = quotient(ab, span({1: 1}))
    fi = first_iso(proj)
    assert fi.report.passed
    assert fi.kernel.dim == 1 and fi.quotient.dim == 1 and fi.image.dim == 1
    ok, _ = fi.kernel.contains(SparseVector({1: 1}))
    assert ok
    # projection o iso o inclusion reproduces the original morphism matrix
    for j in range(ab.dim):
        via = morphism_apply(
            fi.inclusion, morphism_apply(fi.iso, morphism_apply(fi.projection, basis_vector(j)))
        )
        assert via == morphism_apply(proj, basis_vector(j)) or fi.im_spec.dim == 0


def test_first_iso_rank_nullity():
    s = fixtures.sl2(1, 2)
    proj_h = MorphismSpec(s, s, {})  # zero morphism
    fi = first_iso(proj_h)
    assert s.dim == fi.kernel.dim + fi.image.dim
    with pytest.raises(MorphismInvalid):
        first_iso(MorphismSpec(s, s, {0: {0: 1}, 1: {2: 1}, 2: {1: 1}}))  # swap e,f


def test_restrict_to_subalgebra():
    s = fixtures.sl2(1, 2)
    # span{e} is closed under product, bracket, and d1
    sub, inc = restrict_to_subalgebra(s, span({E: 1}))
    assert sub.dim == 1 and sub.product == {} and sub.bracket == {} and sub.diff == {}
    assert verify_morphism(inc).passed


def test_cohomology_d_zero_is_isomorphic_to_spec():
    m = fixtures.matrix2(1)
    h, report = cohomology(m)
    assert report.passed
    assert h.dim == m.dim
    assert verify_algebra(h, profile_for(h, "strict")).passed
    assert h.product == m.product and h.bracket == m.bracket and h.diff == {}


def test_cohomology_of_abelian2_vanishes():
    h, _ = cohomology(fixtures.abelian2())
    assert h.dim == 0


def test_cohomology_of_sl2_explicit_kernel_image():
    s = fixtures.sl2(Fraction(1), 2)
    from dpforge.constructions import _coho_subspaces

    K, I = _coho_subspaces(s.diff, s.dim)
    assert K.dim == 1 and K.contains(basis_vector(E))[0]
    assert I.dim == 1 and I.contains(basis_vector(E))[0]
    h, _ = cohomology(s)
    assert h.dim == 0


def test_cohomology_of_dual_numbers():
    d = fixtures.dual_numbers(1)
    h, _ = cohomology(d)
    assert h.dim == 1 and h.is_unital
    assert verify_algebra(h, profile_for(h, "strict")).passed


@pytest.mark.parametrize(
    "spec",
    [f for f in CLOSURE_FIXTURES if f.variant == "weighted"],
    ids=lambda s: s.name,
)
def test_cohomology_closure_weighted(spec):
    h, report = cohomology(spec)
    assert report.passed
    assert verify_algebra(h, profile_for(h, "paper")).passed
