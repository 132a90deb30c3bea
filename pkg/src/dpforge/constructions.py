"""Closure constructions: each one emits a new validated spec plus evidence.

All constructions are exact and deterministic: quotient bases are the
non-pivot coordinate vectors under the fixed basis order, tensor bases are
row-major, and cohomology is computed as ker d modulo (im d intersected
with ker d) with explicit well-definedness checks instead of assuming that
d squares to zero.
"""

from __future__ import annotations

from .algebra import (
    AlgebraSpec,
    DPModuleSpec,
    MorphismSpec,
    apply_diff,
    basis_vector,
    eval_bilinear,
    module_act,
    module_diff,
    morphism_apply,
)
from .axioms import verify_module, verify_morphism
from .errors import (
    MorphismInvalid,
    NotAModuleMorphism,
    NotAnIdeal,
    NotASubmodule,
    NotWellDefined,
    ValidationError,
    VariantMismatch,
    WeightMismatch,
)
from .linalg import SparseVector, Subspace, kernel_image, quotient_basis, row_reduce, subspace_intersection
from .report import VerificationReport

TENSOR_SIGN = "⊗"  # separator in tensor basis labels


def opposite(spec):
    """Same product and differential, negated bracket."""
    bracket = {key: {k: -v for k, v in col.items()} for key, col in spec.bracket.items()}
    return AlgebraSpec(
        f"{spec.name}.op",
        spec.labels,
        spec.lam,
        spec.variant,
        spec.product,
        bracket,
        spec.diff,
        spec.unit,
    )


def tensor(a, b, name=None):
    """Tensor product algebra on the row-major basis x(x)y.

    Product and bracket follow the componentwise rules; the differential is
    dA(x)(x)y + x(x)dB(y) + lam*dA(x)(x)dB(y) in the weighted convention and
    dA(x)(x)y + x(x)dB(y) + lam*x(x)y in the modified one.
    """
    if a.lam != b.lam:
        raise WeightMismatch(f"weights differ: {a.lam} vs {b.lam}")
    if a.variant != b.variant:
        raise VariantMismatch(f"variants differ: {a.variant} vs {b.variant}")
    nb = b.dim
    labels = tuple(f"{la}{TENSOR_SIGN}{lb}" for la in a.labels for lb in b.labels)
    flat = lambda i, j: i * nb + j

    product = {}
    bracket = {}
    for (i, i2), cola in a.product.items():
        for (j, j2), colb in b.product.items():
            col = {}
            for k, va in cola.items():
                for l, vb in colb.items():
                    col[flat(k, l)] = va * vb
            if col:
                product[(flat(i, j), flat(i2, j2))] = col

    def add_bracket(i, j, i2, j2, col):
        key = (flat(i, j), flat(i2, j2))
        acc = bracket.setdefault(key, {})
        for k, v in col.items():
            nv = acc.get(k, 0) + v
            if nv:
                acc[k] = nv
            else:
                del acc[k]
        if not acc:
            del bracket[key]

    for (i, i2), cola in a.product.items():
        for (j, j2), colb in b.bracket.items():
            col = {flat(k, l): va * vb for k, va in cola.items() for l, vb in colb.items()}
            add_bracket(i, j, i2, j2, col)
    for (i, i2), cola in a.bracket.items():
        for (j, j2), colb in b.product.items():
            col = {flat(k, l): va * vb for k, va in cola.items() for l, vb in colb.items()}
            add_bracket(i, j, i2, j2, col)

    diff = {}
    for i in range(a.dim):
        da = a.diff.get(i, {})
        for j in range(b.dim):
            db = b.diff.get(j, {})
            col = {}

            def bump(k, l, v):
                if not v:
                    return
                key = flat(k, l)
                nv = col.get(key, 0) + v
                if nv:
                    col[key] = nv
                else:
                    del col[key]

            for k, v in da.items():
                bump(k, j, v)
            for l, v in db.items():
                bump(i, l, v)
            if a.variant == "modified":
                bump(i, j, a.lam)
            else:
                for k, va in da.items():
                    for l, vb in db.items():
                        bump(k, l, a.lam * va * vb)
            if col:
                diff[flat(i, j)] = col

    unit = None
    if a.is_unital and b.is_unital:
        unit = {flat(i, j): va * vb for i, va in a.unit.items() for j, vb in b.unit.items()}
    return AlgebraSpec(
        name or f"{a.name}{TENSOR_SIGN}{b.name}", labels, a.lam, a.variant, product, bracket, diff, unit
    )


# ---------------------------------------------------------------------------
# ideals and quotients
# ---------------------------------------------------------------------------

IDEAL_CONDITIONS = ("d(B)", "{A,B}", "{B,A}", "A.B", "B.A")


def check_ideal(spec, candidate):
    """Test d(B), {A,B}, {B,A}, A.B, B.A all inside B; first violation wins."""
    report = VerificationReport()
    basis = [basis_vector(i) for i in range(spec.dim)]

    def violation(condition, desc, vec, residual):
        report.add(
            condition,
            False,
            {
                "condition": condition,
                "element": desc,
                "value": spec.render_vector(vec),
                "residual": spec.render_vector(residual),
            },
        )

    for condition in IDEAL_CONDITIONS:
        failed = False
        if condition == "d(B)":
            for w in candidate.basis:
                img = apply_diff(spec, w)
                ok, res = candidate.contains(img)
                if not ok:
                    violation(condition, f"d({spec.render_vector(w)})", img, res)
                    failed = True
                    break
        else:
            which = "bracket" if "{" in condition else "product"
            b_first = condition in ("{B,A}", "B.A")
            for i in range(spec.dim):
                for w in candidate.basis:
                    x, y = (w, basis[i]) if b_first else (basis[i], w)
                    img = eval_bilinear(spec, which, x, y)
                    ok, res = candidate.contains(img)
                    if not ok:
                        desc = f"({spec.render_vector(x)}, {spec.render_vector(y)})"
                        violation(condition, desc, img, res)
                        failed = True
                        break
                if failed:
                    break
        if not failed:
            report.add(condition, True)
        else:
            break
    return report.passed, report


class CosetChart:
    """Deterministic coordinates on K/I for nested subspaces I <= K.

    When K is the full coordinate space the representatives come out as the
    non-pivot standard basis vectors, which is the canonical quotient basis.
    """

    def __init__(self, ambient_labels, K, I):
        self.K = K
        self.I = I
        reduced = row_reduce([I.contains(v)[1] for v in K.basis])
        self.reps = reduced.basis
        self.pivots = reduced.pivots
        self.labels = self._labels(ambient_labels)

    def _labels(self, ambient_labels):
        labels = []
        for rep in self.reps:
            items = list(rep.items())
            if len(items) == 1 and items[0][1] == 1:
                lbl = ambient_labels[items[0][0]]
            else:
                lbl = f"c{len(labels)}"
            while lbl in labels:
                lbl += "'"
            labels.append(lbl)
        return tuple(labels)

    @property
    def dim(self):
        return len(self.reps)

    def express(self, vec, what="element"):
        """Coordinates of vec + I in the representative basis."""
        ok, _ = self.K.contains(vec)
        if not ok:
            raise NotWellDefined(f"{what} leaves the subspace", condition=what)
        _, res = self.I.contains(vec)
        coords = {q: res[p] for q, p in enumerate(self.pivots) if res[p]}
        recon = SparseVector()
        for q, c in coords.items():
            recon = recon + self.reps[q].scale(c)
        if recon != res:
            raise NotWellDefined(f"{what} has no representative coordinates", condition=what)
        return coords


def full_space(dim):
    return row_reduce([basis_vector(i) for i in range(dim)])


def _induced_algebra(spec, chart, name):
    """Evaluate structure maps on representatives and reduce along the chart."""
    product, bracket, diff = {}, {}, {}
    for q1, r1 in enumerate(chart.reps):
        for q2, r2 in enumerate(chart.reps):
            col = chart.express(eval_bilinear(spec, "product", r1, r2), "product value")
            if col:
                product[(q1, q2)] = col
            col = chart.express(eval_bilinear(spec, "bracket", r1, r2), "bracket value")
            if col:
                bracket[(q1, q2)] = col
        col = chart.express(apply_diff(spec, r1), "differential value")
        if col:
            diff[q1] = col
    unit = None
    if spec.unit is not None and chart.K.contains(spec.unit)[0]:
        coords = chart.express(spec.unit, "unit")
        if chart.dim:
            unit = coords
    return AlgebraSpec(name, chart.labels, spec.lam, spec.variant, product, bracket, diff, unit)


def quotient(spec, ideal):
    """Quotient by a verified ideal, with the canonical projection morphism."""
    ok, report = check_ideal(spec, ideal)
    if not ok:
        raise NotAnIdeal(f"candidate violates {report.first_failure().check}")
    chart = CosetChart(spec.labels, full_space(spec.dim), ideal)
    q = _induced_algebra(spec, chart, f"{spec.name}.quo")
    matrix = {}
    for j in range(spec.dim):
        col = chart.express(basis_vector(j), "basis vector")
        if col:
            matrix[j] = col
    proj = MorphismSpec(spec, q, matrix)
    if not verify_morphism(proj).passed:
        raise NotAnIdeal("projection fails the homomorphism checks")
    return q, proj


def restrict_to_subalgebra(spec, sub, name=None):
    """Spec induced on a subspace closed under product, bracket and d."""
    chart = CosetChart(spec.labels, sub, row_reduce([]))
    try:
        out = _induced_algebra(spec, chart, name or f"{spec.name}.sub")
    except NotWellDefined as exc:
        raise ValidationError(f"subspace is not closed: {exc}", field="subalgebra")
    matrix = {q: rep.to_dict() for q, rep in enumerate(chart.reps)}
    inclusion = MorphismSpec(out, spec, matrix)
    return out, inclusion


class FirstIso:
    """ker, im, quotient and the induced isomorphism of one morphism."""

    __slots__ = ("kernel", "image", "quotient", "projection", "im_spec", "inclusion", "iso", "report")

    def __init__(self, kernel, image, quotient, projection, im_spec, inclusion, iso, report):
        self.kernel = kernel
        self.image = image
        self.quotient = quotient
        self.projection = projection
        self.im_spec = im_spec
        self.inclusion = inclusion
        self.iso = iso
        self.report = report


def first_iso(m):
    """Certify domain/ker f = im f for a verified morphism."""
    report = VerificationReport()
    morph_report = verify_morphism(m)
    report.extend(morph_report, prefix="morphism:")
    if not morph_report.passed:
        raise MorphismInvalid("first_iso requires a verified homomorphism")
    ker, im = kernel_image(m.matrix, m.domain.dim)
    ok, ideal_report = check_ideal(m.domain, ker)
    report.add("KernelIsIdeal", ok, None if ok else ideal_report.first_failure().witness)
    if not ok:
        raise MorphismInvalid("kernel of a verified morphism must be an ideal")
    q, proj = quotient(m.domain, ker)
    im_spec, inclusion = restrict_to_subalgebra(m.codomain, im, name=f"im({m.domain.name})")
    im_chart = CosetChart(m.codomain.labels, im, row_reduce([]))
    chart = CosetChart(m.domain.labels, full_space(m.domain.dim), ker)
    matrix = {}
    for qx, rep in enumerate(chart.reps):
        col = im_chart.express(morphism_apply(m, rep), "image value")
        if col:
            matrix[qx] = col
    iso = MorphismSpec(q, im_spec, matrix)
    iso_report = verify_morphism(iso)
    report.extend(iso_report, prefix="iso:")
    bijective = q.dim == im_spec.dim and row_reduce(
        [SparseVector(matrix.get(j, {})) for j in range(q.dim)]
    ).dim == q.dim
    report.add(
        "IsoBijective",
        bijective,
        None if bijective else {"dim_domain": q.dim, "dim_image": im_spec.dim},
    )
    report.add("RankNullity", m.domain.dim == ker.dim + im.dim, None if m.domain.dim == ker.dim + im.dim else {})
    return FirstIso(ker, im, q, proj, im_spec, inclusion, iso, report)


# ---------------------------------------------------------------------------
# cohomology
# ---------------------------------------------------------------------------

def _coho_subspaces(diff_columns, dim):
    ker, im = kernel_image(diff_columns, dim)
    inter = subspace_intersection(im, ker)
    return ker, inter


def cohomology(spec):
    """ker d / (im d intersected with ker d), with stability evidence.

    The coset differential is the reduction of d restricted to ker d, hence
    the zero map.  Raises NotWellDefined when ker d is not closed under the
    operations or when the divided-out subspace is not stable under
    multiplication or bracket by ker d.
    """
    report = VerificationReport()
    report.note(
        "cohomology uses ker d modulo (im d intersect ker d); "
        "d^2 = 0 is not assumed and cosets are restricted to ker d"
    )
    K, I = _coho_subspaces(spec.diff, spec.dim)

    def stable(condition, pairs, inside):
        for desc, vec in pairs:
            ok, res = inside.contains(vec)
            if not ok:
                witness = {
                    "condition": condition,
                    "element": desc,
                    "residual": spec.render_vector(res),
                }
                report.add(condition, False, witness)
                raise NotWellDefined(f"cohomology is not well defined: {condition}", condition, witness)
        report.add(condition, True)

    kb = K.basis
    ib = I.basis
    stable(
        "ker closed under product",
        [
            (f"({spec.render_vector(u)}).({spec.render_vector(v)})", eval_bilinear(spec, "product", u, v))
            for u in kb
            for v in kb
        ],
        K,
    )
    stable(
        "ker closed under bracket",
        [
            (f"{{{spec.render_vector(u)},{spec.render_vector(v)}}}", eval_bilinear(spec, "bracket", u, v))
            for u in kb
            for v in kb
        ],
        K,
    )
    pairs = []
    for u in kb:
        for w in ib:
            pairs.append((f"({spec.render_vector(u)}).({spec.render_vector(w)})", eval_bilinear(spec, "product", u, w)))
            pairs.append((f"({spec.render_vector(w)}).({spec.render_vector(u)})", eval_bilinear(spec, "product", w, u)))
    stable("im stable under product by ker", pairs, I)
    pairs = []
    for u in kb:
        for w in ib:
            pairs.append((f"{{{spec.render_vector(u)},{spec.render_vector(w)}}}", eval_bilinear(spec, "bracket", u, w)))
            pairs.append((f"{{{spec.render_vector(w)},{spec.render_vector(u)}}}", eval_bilinear(spec, "bracket", w, u)))
    stable("im stable under bracket by ker", pairs, I)

    chart = CosetChart(spec.labels, K, I)
    h = _induced_algebra(spec, chart, f"H({spec.name})")
    return h, report


# ---------------------------------------------------------------------------
# module constructions
# ---------------------------------------------------------------------------

def module_opposite(mod):
    """Left modules become right modules over the opposite algebra.

    The stored tensors are unchanged: the flipped side reinterprets
    action[(i, m)] as m*e_i and bracket_action[(i, m)] as {m, e_i}.
    """
    return DPModuleSpec(
        f"{mod.name}.op",
        opposite(mod.algebra),
        mod.mlabels,
        mod.action,
        mod.bracket_action,
        mod.diff_m,
        "right" if mod.side == "left" else "left",
    )


def module_tensor(mm, mn, name=None):
    """Tensor of a left A-module and a left B-module over tensor(A, B)."""
    if mm.side != "left" or mn.side != "left":
        raise ValidationError("module tensor is defined for left modules", field="side")
    alg = tensor(mm.algebra, mn.algebra)
    a, b = mm.algebra, mn.algebra
    nb, nn = b.dim, mn.mdim
    flat_a = lambda i, j: i * nb + j
    flat_m = lambda m, n: m * nn + n
    labels = tuple(f"{lm}{TENSOR_SIGN}{ln}" for lm in mm.mlabels for ln in mn.mlabels)

    def combine(t1, t2):
        out = {}
        for (i, m), col1 in t1.items():
            for (j, n), col2 in t2.items():
                col = {flat_m(k, l): v1 * v2 for k, v1 in col1.items() for l, v2 in col2.items()}
                if col:
                    out[(flat_a(i, j), flat_m(m, n))] = col
        return out

    action = combine(mm.action, mn.action)
    bracket_action = {}
    for key, col in combine(mm.action, mn.bracket_action).items():
        bracket_action[key] = dict(col)
    for key, col in combine(mm.bracket_action, mn.action).items():
        acc = bracket_action.setdefault(key, {})
        for k, v in col.items():
            nv = acc.get(k, 0) + v
            if nv:
                acc[k] = nv
            else:
                del acc[k]
        if not acc:
            del bracket_action[key]

    diff = {}
    for m in range(mm.mdim):
        dm = mm.diff_m.get(m, {})
        for n in range(mn.mdim):
            dn = mn.diff_m.get(n, {})
            col = {}

            def bump(k, l, v):
                if not v:
                    return
                key = flat_m(k, l)
                nv = col.get(key, 0) + v
                if nv:
                    col[key] = nv
                else:
                    del col[key]

            for k, v in dm.items():
                bump(k, n, v)
            for l, v in dn.items():
                bump(m, l, v)
            if a.variant == "modified":
                bump(m, n, a.lam)
            else:
                for k, v1 in dm.items():
                    for l, v2 in dn.items():
                        bump(k, l, a.lam * v1 * v2)
            if col:
                diff[flat_m(m, n)] = col
    return DPModuleSpec(
        name or f"{mm.name}{TENSOR_SIGN}{mn.name}", alg, labels, action, bracket_action, diff, "left"
    )


SUBMODULE_CONDITIONS = ("A*N", "{A,N}", "d_M(N)")


def check_submodule(mod, candidate):
    """Stability of a subspace under action, bracket action and d_M."""
    report = VerificationReport()
    for condition in SUBMODULE_CONDITIONS:
        witness = None
        if condition == "d_M(N)":
            for w in candidate.basis:
                ok, res = candidate.contains(module_diff(mod, w))
                if not ok:
                    witness = {"condition": condition, "element": mod.render_vector(w), "residual": mod.render_vector(res)}
                    break
        else:
            which = "action" if condition == "A*N" else "bracket_action"
            for i in range(mod.algebra.dim):
                for w in candidate.basis:
                    ok, res = candidate.contains(module_act(mod, which, basis_vector(i), w))
                    if not ok:
                        witness = {
                            "condition": condition,
                            "element": f"({mod.algebra.labels[i]}, {mod.render_vector(w)})",
                            "residual": mod.render_vector(res),
                        }
                        break
                if witness:
                    break
        report.add(condition, witness is None, witness)
        if witness:
            break
    return report.passed, report


def _induced_module(mod, algebra, alg_chart, mod_chart, name):
    action, bracket_action, diff = {}, {}, {}
    for qa, ra in enumerate(alg_chart.reps):
        for qm, rm in enumerate(mod_chart.reps):
            col = mod_chart.express(module_act(mod, "action", ra, rm), "action value")
            if col:
                action[(qa, qm)] = col
            col = mod_chart.express(module_act(mod, "bracket_action", ra, rm), "bracket action value")
            if col:
                bracket_action[(qa, qm)] = col
    for qm, rm in enumerate(mod_chart.reps):
        col = mod_chart.express(module_diff(mod, rm), "module differential value")
        if col:
            diff[qm] = col
    return DPModuleSpec(name, algebra, mod_chart.labels, action, bracket_action, diff, mod.side)


def module_quotient(mod, sub):
    """Quotient module by a verified submodule."""
    ok, report = check_submodule(mod, sub)
    if not ok:
        raise NotASubmodule(f"candidate violates {report.first_failure().check}")
    alg_chart = CosetChart(mod.algebra.labels, full_space(mod.algebra.dim), row_reduce([]))
    mod_chart = CosetChart(mod.mlabels, full_space(mod.mdim), sub)
    return _induced_module(mod, mod.algebra, alg_chart, mod_chart, f"{mod.name}.quo")


def module_cohomology(mod):
    """Cohomology module over the cohomology algebra, with stability checks."""
    h_alg, report = cohomology(mod.algebra)
    K_A, I_A = _coho_subspaces(mod.algebra.diff, mod.algebra.dim)
    K_M, I_M = _coho_subspaces(mod.diff_m, mod.mdim)

    def stable(condition, triples, inside):
        for desc, vec in triples:
            ok, res = inside.contains(vec)
            if not ok:
                witness = {"condition": condition, "element": desc, "residual": mod.render_vector(res)}
                report.add(condition, False, witness)
                raise NotWellDefined(f"module cohomology is not well defined: {condition}", condition, witness)
        report.add(condition, True)

    for which in ("action", "bracket_action"):
        stable(
            f"ker stable: {which}",
            [
                (f"({mod.algebra.render_vector(a)}, {mod.render_vector(m)})", module_act(mod, which, a, m))
                for a in K_A.basis
                for m in K_M.basis
            ],
            K_M,
        )
        stable(
            f"im stable: {which} by im-d(A)",
            [
                (f"({mod.algebra.render_vector(a)}, {mod.render_vector(m)})", module_act(mod, which, a, m))
                for a in I_A.basis
                for m in K_M.basis
            ],
            I_M,
        )
        stable(
            f"im stable: {which} into im-d(M)",
            [
                (f"({mod.algebra.render_vector(a)}, {mod.render_vector(m)})", module_act(mod, which, a, m))
                for a in K_A.basis
                for m in I_M.basis
            ],
            I_M,
        )

    alg_chart = CosetChart(mod.algebra.labels, K_A, I_A)
    mod_chart = CosetChart(mod.mlabels, K_M, I_M)
    out = _induced_module(mod, h_alg, alg_chart, mod_chart, f"H({mod.name})")
    return out, report


class ModuleFirstIso:
    __slots__ = ("kernel", "image", "quotient", "im_module", "iso_matrix", "report")

    def __init__(self, kernel, image, quotient, im_module, iso_matrix, report):
        self.kernel = kernel
        self.image = image
        self.quotient = quotient
        self.im_module = im_module
        self.iso_matrix = iso_matrix
        self.report = report


def _restrict_module(mod, sub, name):
    chart = CosetChart(mod.mlabels, sub, row_reduce([]))
    alg_chart = CosetChart(mod.algebra.labels, full_space(mod.algebra.dim), row_reduce([]))
    try:
        return _induced_module(mod, mod.algebra, alg_chart, chart, name), chart
    except NotWellDefined as exc:
        raise NotASubmodule(f"image subspace is not stable: {exc}")


def module_first_iso(mm, mn, matrix):
    """Module-level first isomorphism for an intertwining matrix M -> N."""
    if mm.algebra is not mn.algebra and mm.algebra.name != mn.algebra.name:
        raise NotAModuleMorphism("modules live over different algebras")
    if mm.side != mn.side:
        raise NotAModuleMorphism("modules have different sides")
    report = VerificationReport()
    cols = {j: dict(col) for j, col in matrix.items()}
    f = lambda v: _matrix_apply(cols, v)
    for check, op in (
        ("IntertwinesAction", lambda a, m: (f(module_act(mm, "action", a, m)), module_act(mn, "action", a, f(m)))),
        (
            "IntertwinesBracketAction",
            lambda a, m: (f(module_act(mm, "bracket_action", a, m)), module_act(mn, "bracket_action", a, f(m))),
        ),
    ):
        failed = False
        for i in range(mm.algebra.dim):
            for m in range(mm.mdim):
                lhs, rhs = op(basis_vector(i), basis_vector(m))
                if lhs != rhs:
                    report.add(check, False, {"indices": [mm.algebra.labels[i], mm.mlabels[m]], "residual": mn.render_vector(lhs - rhs)})
                    failed = True
                    break
            if failed:
                break
        else:
            report.add(check, True)
    for m in range(mm.mdim):
        lhs = f(module_diff(mm, basis_vector(m)))
        rhs = module_diff(mn, f(basis_vector(m)))
        if lhs != rhs:
            report.add("IntertwinesDiff", False, {"indices": [mm.mlabels[m]], "residual": mn.render_vector(lhs - rhs)})
            break
    else:
        report.add("IntertwinesDiff", True)
    if not report.passed:
        raise NotAModuleMorphism("matrix fails to intertwine the module structure")

    ker, im = kernel_image(cols, mm.mdim)
    ok, sub_report = check_submodule(mm, ker)
    report.add("KernelIsSubmodule", ok, None if ok else sub_report.first_failure().witness)
    if not ok:
        raise NotAModuleMorphism("kernel of an intertwining map must be a submodule")
    q = module_quotient(mm, ker)
    im_mod, im_chart = _restrict_module(mn, im, f"im({mm.name})")
    chart = CosetChart(mm.mlabels, full_space(mm.mdim), ker)
    iso_matrix = {}
    for qx, rep in enumerate(chart.reps):
        col = im_chart.express(f(rep), "image value")
        if col:
            iso_matrix[qx] = col
    bijective = q.mdim == im_mod.mdim and row_reduce(
        [SparseVector(iso_matrix.get(j, {})) for j in range(q.mdim)]
    ).dim == q.mdim
    report.add("IsoBijective", bijective, None if bijective else {"dim_domain": q.mdim, "dim_image": im_mod.mdim})
    iso_checks = module_first_iso_verify(q, im_mod, iso_matrix)
    report.extend(iso_checks, prefix="iso:")
    return ModuleFirstIso(ker, im, q, im_mod, iso_matrix, report)


def module_first_iso_verify(mq, mi, matrix):
    """Intertwining checks for the induced map between quotient and image."""
    report = VerificationReport()
    cols = {j: dict(col) for j, col in matrix.items()}
    f = lambda v: _matrix_apply(cols, v)
    ok = True
    for i in range(mq.algebra.dim):
        for m in range(mq.mdim):
            a, em = basis_vector(i), basis_vector(m)
            if f(module_act(mq, "action", a, em)) != module_act(mi, "action", a, f(em)):
                ok = False
            if f(module_act(mq, "bracket_action", a, em)) != module_act(mi, "bracket_action", a, f(em)):
                ok = False
    for m in range(mq.mdim):
        if f(module_diff(mq, basis_vector(m))) != module_diff(mi, f(basis_vector(m))):
            ok = False
    report.add("InducedIntertwines", ok, None if ok else {"detail": "induced map fails intertwining"})
    return report


def _matrix_apply(cols, v):
    acc = {}
    for j, c in v.items():
        col = cols.get(j)
        if not col:
            continue
        for k, w in col.items():
            nv = acc.get(k, 0) + c * w
            if nv:
                acc[k] = nv
            else:
                del acc[k]
    return SparseVector(acc)
