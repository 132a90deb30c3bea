import random
from fractions import Fraction

import pytest

from dpforge import fixtures
from dpforge.algebra import AlgebraSpec, MorphismSpec, apply_diff, basis_vector, eval_bilinear
from dpforge.axioms import (
    AxiomProfile,
    PAPER_PROFILE,
    identity_sides,
    profile_for,
    verify_algebra,
    verify_module,
    verify_morphism,
)
from dpforge.errors import ValidationError
from dpforge.linalg import SparseVector, parse_scalar

LAMBDAS = (0, 1, -1, Fraction(3, 2), 7)
KS = (1, 2, -3)


def test_sl2_d1_passes_paper_profile_over_samples():
    for lam in LAMBDAS:
        for k in KS:
            s = fixtures.sl2(lam, k)
            report = verify_algebra(s, profile_for(s, "paper"))
            assert report.passed, (lam, k, report.first_failure().to_dict())


def test_sl2_d2_modified_passes_paper_profile():
    for lam in LAMBDAS:
        for k in KS:
            s = fixtures.sl2(lam, k, diff="d2")
            report = verify_algebra(s, profile_for(s, "paper"))
            assert report.passed, (lam, k, report.first_failure().to_dict())


def test_perturbed_bracket_fails_with_witness():
    s = fixtures.sl2(1, 2)
    bracket = {k: dict(v) for k, v in s.bracket.items()}
    bracket[(0, 1)] = {1: Fraction(3)}  # {h,e} := 3e, antisymmetric partner left at -2e
    bad = AlgebraSpec("sl2bad", s.labels, s.lam, s.variant, s.product, bracket, s.diff)
    report = verify_algebra(bad, profile_for(bad, "paper"))
    assert not report.passed
    failing = report.first_failure()
    assert failing.witness["residual"]


def test_witness_soundness_reevaluates_exactly():
    s = fixtures.sl2(1, 2)
    bracket = {k: dict(v) for k, v in s.bracket.items()}
    bracket[(0, 1)] = {1: Fraction(3)}
    bracket[(1, 0)] = {1: Fraction(-3)}  # keep antisymmetry; breaks Jacobi/Leibniz instead
    bad = AlgebraSpec("sl2bad", s.labels, s.lam, s.variant, s.product, bracket, s.diff)
    report = verify_algebra(bad, profile_for(bad, "paper"))
    failing = report.first_failure()
    assert failing is not None
    idx = [bad.labels.index(lbl) for lbl in failing.witness["indices"]]
    arity, sides = identity_sides(bad, failing.check)
    lhs, rhs = sides(*[basis_vector(i) for i in idx])
    residual = {bad.labels[k]: str(v) for k, v in sorted((lhs - rhs).items())}
    expected = {k: str(parse_scalar(v)) for k, v in failing.witness["residual"].items()}
    assert residual == expected and lhs != rhs


def test_first_failing_tuple_is_lexicographic():
    s = fixtures.sl2(1, 2)
    report = verify_algebra(s, profile_for(s, "strict"))
    failing = report["ProdAssoc"]
    # h.(h.e) = k^2 e while (h.h).e = 0: earliest failing triple in lex order
    assert failing.witness["indices"] == ["h", "h", "e"]


def test_strict_profile_on_matrix_algebra():
    for lam in (0, 1, 5):
        m = fixtures.matrix2(lam)
        assert verify_algebra(m, profile_for(m, "strict")).passed


def test_profile_validation():
    s = fixtures.sl2(1)
    with pytest.raises(ValidationError):
        AxiomProfile(set())
    with pytest.raises(ValidationError):
        AxiomProfile({"NotACheck"})
    with pytest.raises(ValidationError):
        verify_algebra(s, AxiomProfile({"DiffOfUnit"}))  # sl2 has no unit
    assert profile_for(s, "strict").checks == PAPER_PROFILE | {"ProdAssoc"}
    d = fixtures.dual_numbers(1)
    assert "DiffOfUnit" in profile_for(d, "strict").checks


def test_diff_of_unit_variant_aware():
    # modified operators are forced to send 1 to -lambda * 1
    d = fixtures.dual_numbers(2, variant="modified")
    lam = d.lam
    diff = {0: {0: -lam}, 1: {1: Fraction(1) - lam}}
    mod = AlgebraSpec("dual2m", d.labels, lam, "modified", d.product, {}, diff, {0: 1})
    report = verify_algebra(mod, profile_for(mod, "strict"))
    assert report.passed, report.first_failure().to_dict()


def test_commutator_closure_property():
    # associative product + commutator bracket + weighted d => paper profile
    rng = random.Random(7)
    specs = [fixtures.matrix2(1), fixtures.matrix2(5), fixtures.upper_triangular2()]
    for base in specs:
        bracket = {}
        for i in range(base.dim):
            for j in range(base.dim):
                acc = {}
                for k, v in base.product.get((i, j), {}).items():
                    acc[k] = acc.get(k, Fraction(0)) + v
                for k, v in base.product.get((j, i), {}).items():
                    acc[k] = acc.get(k, Fraction(0)) - v
                acc = {k: v for k, v in acc.items() if v}
                if acc:
                    bracket[(i, j)] = acc
        spec = AlgebraSpec(base.name + ".comm", base.labels, rng.randrange(5), "weighted", base.product, bracket, {})
        assert verify_algebra(spec, profile_for(spec, "paper")).passed


def test_random_vector_spot_checks_after_pass():
    s = fixtures.sl2(Fraction(3, 2), -3)
    report = verify_algebra(s, profile_for(s, "paper"), spot_checks=4, seed=11)
    assert report.passed
    assert any(c.check.endswith(":spot") for c in report.checks)


def test_morphism_identity_and_zero_pass():
    s = fixtures.sl2(1, 2)
    assert verify_morphism(fixtures.identity_morphism(s)).passed
    z = fixtures.zero_morphism(fixtures.abelian2(), fixtures.abelian2(name="ab2"))
    assert verify_morphism(z).passed


def test_swap_e_f_fails_bracket_check():
    s = fixtures.sl2(1, 2)
    swap = MorphismSpec(s, s, {0: {0: 1}, 1: {2: 1}, 2: {1: 1}})
    report = verify_morphism(swap)
    assert not report.passed
    checks = {c.check: c for c in report.checks}
    assert not checks["MorphismBracket"].ok


def test_regular_and_zero_modules():
    d = fixtures.dual_numbers(Fraction(3, 2))
    assert verify_module(fixtures.regular_module(d)).passed
    assert verify_module(fixtures.zero_module(fixtures.sl2(1))).passed
    assert verify_module(fixtures.regular_module(fixtures.abelian2())).passed
    assert verify_module(fixtures.regular_module(fixtures.poisson3())).passed


def test_wrong_variant_module_diff_fails():
    # weighted algebra acting on itself but with the modified operator as d_M
    s = fixtures.sl2(1, 2)
    s_mod = fixtures.sl2(1, 2, diff="d2")
    bad = fixtures.regular_module(s)
    bad = type(bad)(
        "bad", s, s.labels, bad.action, bad.bracket_action, {j: dict(col) for j, col in s_mod.diff.items()}, "left"
    )
    report = verify_module(bad)
    assert not report.passed
    # the bracket-differential compatibility is the Eq-(2) analogue; it must
    # fail on its own, independently of the associativity check
    assert not report["BracketActionDiffLeibniz"].ok
    assert report["BracketActionDiffLeibniz"].witness["residual"]


def test_noncommutative_regular_module_fails_poisson_law():
    # {ab, m} = a{b,m} + b{a,m} needs commutativity; the matrix algebra breaks it
    report = verify_module(fixtures.regular_module(fixtures.matrix2(1)))
    assert not report.passed
    assert report.first_failure().check == "ModulePoisson2"
