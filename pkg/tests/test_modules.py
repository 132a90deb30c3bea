from fractions import Fraction

import pytest

from dpforge import fixtures
from dpforge.algebra import DPModuleSpec
from dpforge.axioms import verify_module
from dpforge.constructions import (
    check_submodule,
    full_space,
    module_cohomology,
    module_first_iso,
    module_opposite,
    module_quotient,
    module_tensor,
)
from dpforge.errors import NotAModuleMorphism, NotASubmodule
from dpforge.linalg import SparseVector, row_reduce


def span(*vecs):
    return row_reduce([SparseVector(v) for v in vecs])


def test_module_opposite_right_module_over_opposite_algebra():
    d = fixtures.dual_numbers(Fraction(3, 2))
    reg = fixtures.regular_module(d)
    op = module_opposite(reg)
    assert op.side == "right"
    assert op.algebra.name.endswith(".op")
    assert verify_module(op).passed
    back = module_opposite(op)
    assert back.side == "left" and verify_module(back).passed


def test_module_opposite_commutative_coincides():
    # for a commutative associative algebra, a*m = m*a: identical tensors
    d = fixtures.poisson3()
    reg = fixtures.regular_module(d)
    op = module_opposite(reg)
    assert op.action == reg.action and op.bracket_action == reg.bracket_action
    assert verify_module(op).passed


def test_module_tensor():
    a = fixtures.dual_numbers(1)
    b = fixtures.poisson3()
    mm = fixtures.regular_module(a)
    mn = fixtures.regular_module(b)
    t = module_tensor(mm, mn)
    assert t.mdim == mm.mdim * mn.mdim
    assert verify_module(t).passed


def test_module_tensor_of_zero_modules_is_zero():
    a = fixtures.dual_numbers(1)
    b = fixtures.dual_numbers(1, name="dual2b")
    t = module_tensor(fixtures.zero_module(a), fixtures.zero_module(b))
    assert t.mdim == 1 and not t.action and not t.bracket_action and not t.diff_m
    assert verify_module(t).passed


def test_check_submodule_and_quotient():
    ab = fixtures.abelian2()
    reg = fixtures.regular_module(ab)
    ok, _ = check_submodule(reg, span({1: 1}))
    assert ok
    q = module_quotient(reg, span({1: 1}))
    assert q.mdim == 1 and verify_module(q).passed
    # span{x} is not d_M-stable: d(x) = y
    ok, report = check_submodule(reg, span({0: 1}))
    assert not ok and report.first_failure().check == "d_M(N)"
    with pytest.raises(NotASubmodule):
        module_quotient(reg, span({0: 1}))


def test_module_cohomology():
    ab = fixtures.abelian2()
    h = module_cohomology(fixtures.regular_module(ab))[0]
    assert h.mdim == 0
    d = fixtures.dual_numbers(1)
    hm, report = module_cohomology(fixtures.regular_module(d))
    assert report.passed
    assert hm.mdim == 1 and hm.algebra.dim == 1
    assert verify_module(hm).passed
    p = fixtures.poisson3()  # d = 0: cohomology module is the module itself
    hp, _ = module_cohomology(fixtures.regular_module(p))
    assert hp.mdim == p.dim and verify_module(hp).passed


def test_module_first_iso_identity_and_zero():
    d = fixtures.dual_numbers(1)
    reg = fixtures.regular_module(d)
    fi = module_first_iso(reg, reg, {0: {0: 1}, 1: {1: 1}})
    assert fi.report.passed and fi.kernel.dim == 0 and fi.quotient.mdim == 2
    fi0 = module_first_iso(reg, fixtures.zero_module(d), {})
    assert fi0.kernel.dim == 2 and fi0.quotient.mdim == 0 and fi0.report.passed


def test_module_first_iso_projection_fixture():
    ab = fixtures.abelian2()
    reg = fixtures.regular_module(ab)
    q = module_quotient(reg, span({1: 1}))
    fi = module_first_iso(reg, q, {0: {0: 1}})
    assert fi.report.passed
    assert fi.kernel.dim == 1 and fi.quotient.mdim == 1 and fi.im_module.mdim == 1


def test_module_first_iso_rejects_non_intertwining():
    d = fixtures.dual_numbers(1)
    reg = fixtures.regular_module(d)
    with pytest.raises(NotAModuleMorphism):
        module_first_iso(reg, reg, {0: {1: 1}, 1: {0: 1}})  # swap u,t breaks the action


def test_module_closure_chain():
    # quotient of a tensor of regular modules still verifies
    a = fixtures.dual_numbers(1)
    t = module_tensor(fixtures.regular_module(a), fixtures.regular_module(fixtures.dual_numbers(1, name="d2b")))
    ok, _ = check_submodule(t, full_space(t.mdim))
    assert ok
    q = module_quotient(t, full_space(t.mdim))
    assert q.mdim == 0 and verify_module(q).passed
