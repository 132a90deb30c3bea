"""Builders for the small algebras used in tests, demos and bundled files."""

from __future__ import annotations

from fractions import Fraction

from .algebra import AlgebraSpec, DPModuleSpec, MorphismSpec

try:
    from importlib.resources import files as _pkg_files
except ImportError:  # pragma: no cover
    _pkg_files = None


def sl2(lam, k=2, diff="d1", variant=None, name=None):
    """The rescaled sl2: {h,e}=2e, {h,f}=-2f, {e,f}=h, products scaled by k.

    ``d1`` is a weighted differential operator (dh=2e, de=0, df=-h-lam*e);
    ``d2`` is a modified one (dh=-lam*h+2e+2f, de=-h-lam*e, df=-h-lam*f).
    The product is neither commutative nor associative; it is non-unital.
    """
    lam = Fraction(lam)
    k = Fraction(k)
    H, E, F = 0, 1, 2
    product = {
        (H, E): {E: k},
        (H, F): {F: -k},
        (E, H): {E: -k},
        (E, F): {H: k / 2},
        (F, H): {F: k},
        (F, E): {H: -k / 2},
    }
    bracket = {
        (H, E): {E: 2},
        (E, H): {E: -2},
        (H, F): {F: -2},
        (F, H): {F: 2},
        (E, F): {H: 1},
        (F, E): {H: -1},
    }
    if diff == "d1":
        diff_m = {H: {E: 2}, F: {H: -1, E: -lam}}
        variant = variant or "weighted"
    elif diff == "d2":
        diff_m = {H: {H: -lam, E: 2, F: 2}, E: {H: -1, E: -lam}, F: {H: -1, F: -lam}}
        variant = variant or "modified"
    else:
        raise ValueError(f"unknown sl2 differential {diff!r}")
    return AlgebraSpec(name or f"sl2_{diff}", ("h", "e", "f"), lam, variant, product, bracket, diff_m)


def matrix2(lam, name="mat2"):
    """The full algebra of 2x2 matrices with commutator bracket and d = 0."""
    labels = ("E11", "E12", "E21", "E22")
    idx = {lbl: i for i, lbl in enumerate(labels)}
    product = {}
    for i in ("1", "2"):
        for j in ("1", "2"):
            for k in ("1", "2"):
                for l in ("1", "2"):
                    if j == k:
                        product[(idx[f"E{i}{j}"], idx[f"E{k}{l}"])] = {idx[f"E{i}{l}"]: 1}
    bracket = {}
    for p in range(4):
        for q in range(4):
            acc = {}
            col = product.get((p, q), {})
            for k, v in col.items():
                acc[k] = acc.get(k, 0) + v
            col = product.get((q, p), {})
            for k, v in col.items():
                acc[k] = acc.get(k, 0) - v
            acc = {k: v for k, v in acc.items() if v}
            if acc:
                bracket[(p, q)] = acc
    unit = {idx["E11"]: 1, idx["E22"]: 1}
    return AlgebraSpec(name, labels, lam, "weighted", product, bracket, {}, unit)


def abelian2(lam=0, variant="weighted", name="abelian2"):
    """Two-dimensional space with zero product and bracket, d(x)=y, d(y)=0."""
    return AlgebraSpec(name, ("x", "y"), lam, variant, {}, {}, {0: {1: 1}})


def one_dim_unital(lam, variant="weighted", name="k1"):
    """The ground field: u*u = u, zero bracket, d = 0, unit u."""
    return AlgebraSpec(name, ("u",), lam, variant, {(0, 0): {0: 1}}, {}, {}, {0: 1})


def one_dim_nilpotent(lam, variant="weighted", name="k1nil"):
    """One-dimensional non-unital algebra with x*x = 0 and zero bracket."""
    return AlgebraSpec(name, ("x",), lam, variant, {}, {}, {})


def dual_numbers(lam, dt=1, variant="weighted", name="dual2"):
    """k[t]/(t^2): commutative, associative, unital, with d(t) = dt * t.

    d(1) = 0 and d(t.t) = 0 hold for every weight, so one fixture serves all
    lambda samples.  The bracket is zero (forced: brackets with the unit
    vanish and {t,t} = 0 by antisymmetry).
    """
    product = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}
    diff = {1: {1: Fraction(dt)}} if dt else {}
    return AlgebraSpec(name, ("u", "t"), lam, variant, product, {}, diff, {0: 1})


def upper_triangular2(lam=1, name="tri2z"):
    """Noncommutative associative 2-dim algebra with zero bracket and d = 0.

    a*a = a, a*b = b, b*a = b*b = 0.  The zero bracket keeps its envelope
    from collapsing, so the product's noncommutativity stays visible there.
    """
    return AlgebraSpec(name, ("a", "b"), lam, "weighted", {(0, 0): {0: 1}, (0, 1): {1: 1}}, {}, {})


def poisson3(lam=1, name="poisson3"):
    """Commutative unital 3-dim algebra with a nonzero bracket and d = 0.

    Basis u (unit), x, y with x*x = x*y = y*y = 0 and {x, y} = x.
    """
    product = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1}}
    bracket = {(1, 2): {1: 1}, (2, 1): {1: -1}}
    return AlgebraSpec(name, ("u", "x", "y"), lam, "weighted", product, bracket, {}, {0: 1})


def regular_module(spec, name=None):
    """The algebra acting on itself by its own product, bracket and d."""
    action = {(i, j): dict(col) for (i, j), col in spec.product.items()}
    bracket_action = {(i, j): dict(col) for (i, j), col in spec.bracket.items()}
    diff_m = {j: dict(col) for j, col in spec.diff.items()}
    return DPModuleSpec(name or f"{spec.name}.reg", spec, spec.labels, action, bracket_action, diff_m, "left")


def zero_module(spec, name=None):
    """One-dimensional module with every structure map zero."""
    return DPModuleSpec(name or f"{spec.name}.zero", spec, ("z",), {}, {}, {}, "left")


def identity_morphism(spec):
    return MorphismSpec(spec, spec, {j: {j: 1} for j in range(spec.dim)})


def zero_morphism(domain, codomain=None):
    return MorphismSpec(domain, codomain or domain, {})


def bundled_path(filename):
    """Path to one of the spec files shipped with the package."""
    if _pkg_files is None:  # pragma: no cover
        raise RuntimeError("importlib.resources unavailable")
    return _pkg_files("dpforge").joinpath("data").joinpath(filename)
