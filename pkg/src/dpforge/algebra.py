"""Finite-dimensional candidate algebras, morphisms, modules, and their file format.

An :class:`AlgebraSpec` stores a product tensor, a bracket tensor and a
differential matrix by structure constants over exact rationals, together
with the weight ``lambda`` and the differential convention (``weighted`` or
``modified``).  Nothing here assumes the axioms hold; deciding that is the
job of :mod:`dpforge.axioms`.  All objects are immutable after validation
and all evaluation maps are pure.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import (
    DimensionMismatch,
    ParseError,
    ValidationError,
    VariantMismatch,
    WeightMismatch,
)
from .linalg import SparseVector, ZERO, format_scalar, parse_scalar

VARIANTS = ("weighted", "modified")

_FORBIDDEN_LABEL_CHARS = set("]*.+\t\n ")


def _check_label(label):
    if not isinstance(label, str) or not label:
        raise ValidationError("basis labels must be nonempty strings", field="basis")
    if set(label) & _FORBIDDEN_LABEL_CHARS:
        raise ValidationError(f"label {label!r} contains a reserved character", field="basis")


def basis_vector(i):
    return SparseVector({i: 1})


def _clean_tensor(tensor, dim, field):
    """Validate and copy a sparse 3-tensor {(i, j): {k: scalar}}."""
    out = {}
    for (i, j), col in tensor.items():
        if not (0 <= i < dim and 0 <= j < dim):
            raise ValidationError(f"index pair ({i}, {j}) out of range", field=field)
        cleaned = {}
        for k, v in col.items():
            if not (0 <= k < dim):
                raise ValidationError(f"output index {k} out of range", field=field)
            v = Fraction(v)
            if v:
                cleaned[k] = v
        if cleaned:
            out[(i, j)] = cleaned
    return out


def _clean_matrix(matrix, ncols, nrows, field):
    """Validate and copy a sparse matrix stored by columns {j: {k: scalar}}."""
    out = {}
    for j, col in matrix.items():
        if not (0 <= j < ncols):
            raise ValidationError(f"column index {j} out of range", field=field)
        cleaned = {}
        for k, v in col.items():
            if not (0 <= k < nrows):
                raise ValidationError(f"row index {k} out of range", field=field)
            v = Fraction(v)
            if v:
                cleaned[k] = v
        if cleaned:
            out[j] = cleaned
    return out


class AlgebraSpec:
    """A candidate (modified) weighted differential Poisson algebra.

    ``product`` and ``bracket`` map basis index pairs ``(i, j)`` to the
    sparse coordinates of ``e_i . e_j`` and ``{e_i, e_j}``; ``diff`` maps a
    basis index ``j`` to the coordinates of ``d(e_j)``.  No symmetry of any
    kind is assumed: the data model must be able to hold non-commutative,
    non-associative products.
    """

    __slots__ = ("name", "dim", "labels", "lam", "variant", "product", "bracket", "diff", "unit")

    def __init__(self, name, labels, lam, variant, product, bracket, diff, unit=None):
        self.name = str(name)
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        for lbl in self.labels:
            _check_label(lbl)
        if len(set(self.labels)) != self.dim:
            raise ValidationError("duplicate basis labels", field="basis")
        self.lam = Fraction(lam)
        if variant not in VARIANTS:
            raise ValidationError(f"variant must be one of {VARIANTS}", field="variant")
        self.variant = variant
        self.product = _clean_tensor(product, self.dim, "product")
        self.bracket = _clean_tensor(bracket, self.dim, "bracket")
        self.diff = _clean_matrix(diff, self.dim, self.dim, "diff")
        if unit is None:
            self.unit = None
        else:
            self.unit = unit if isinstance(unit, SparseVector) else SparseVector(unit)
            for k in self.unit:
                if not (0 <= k < self.dim):
                    raise ValidationError(f"unit index {k} out of range", field="unit")
            for i in range(self.dim):
                e = basis_vector(i)
                left = eval_bilinear(self, "product", self.unit, e)
                right = eval_bilinear(self, "product", e, self.unit)
                if left != e or right != e:
                    raise ValidationError(
                        f"unit vector fails unit.e = e.unit = e at basis {self.labels[i]!r}",
                        field="unit",
                    )

    @property
    def is_unital(self):
        return self.unit is not None

    def label_index(self):
        return {lbl: i for i, lbl in enumerate(self.labels)}

    def render_vector(self, vec):
        """Deterministic text form of a coordinate vector, e.g. ``h + 2*e``."""
        if not vec:
            return "0"
        parts = []
        for i in sorted(vec.keys()):
            c = vec[i]
            lbl = self.labels[i]
            if c == 1:
                parts.append(lbl)
            elif c == -1:
                parts.append("-" + lbl)
            else:
                parts.append(f"{format_scalar(c)}*{lbl}")
        return " + ".join(parts)

    def __repr__(self):
        return f"AlgebraSpec({self.name!r}, dim={self.dim}, lambda={format_scalar(self.lam)}, {self.variant})"


def eval_bilinear(spec, which, x, y):
    """Bilinear extension of the product or bracket tensor to sparse vectors."""
    tensor = spec.product if which == "product" else spec.bracket
    for v in (x, y):
        for k in v:
            if not (0 <= k < spec.dim):
                raise DimensionMismatch(f"coordinate {k} outside dimension {spec.dim}")
    acc = {}
    for i, xi in x.items():
        for j, yj in y.items():
            col = tensor.get((i, j))
            if not col:
                continue
            c = xi * yj
            for k, v in col.items():
                nv = acc.get(k, ZERO) + c * v
                if nv:
                    acc[k] = nv
                else:
                    del acc[k]
    return SparseVector(acc)


def apply_diff(spec, x):
    """Matrix-vector product d(x)."""
    for k in x:
        if not (0 <= k < spec.dim):
            raise DimensionMismatch(f"coordinate {k} outside dimension {spec.dim}")
    acc = {}
    for j, xj in x.items():
        col = spec.diff.get(j)
        if not col:
            continue
        for k, v in col.items():
            nv = acc.get(k, ZERO) + xj * v
            if nv:
                acc[k] = nv
            else:
                del acc[k]
    return SparseVector(acc)


class MorphismSpec:
    """A linear map between two specs, stored column-wise like ``diff``.

    Weights and variants must agree on both sides; a map between algebras of
    different weights has no meaning here.
    """

    __slots__ = ("domain", "codomain", "matrix")

    def __init__(self, domain, codomain, matrix):
        if domain.lam != codomain.lam:
            raise WeightMismatch(
                f"domain weight {format_scalar(domain.lam)} != codomain weight {format_scalar(codomain.lam)}"
            )
        if domain.variant != codomain.variant:
            raise VariantMismatch(f"domain variant {domain.variant} != codomain variant {codomain.variant}")
        self.domain = domain
        self.codomain = codomain
        self.matrix = _clean_matrix(matrix, domain.dim, codomain.dim, "matrix")

    def column(self, j):
        return SparseVector(self.matrix.get(j, {}))

    def __repr__(self):
        return f"MorphismSpec({self.domain.name!r} -> {self.codomain.name!r})"


def morphism_apply(m, x):
    for k in x:
        if not (0 <= k < m.domain.dim):
            raise DimensionMismatch(f"coordinate {k} outside dimension {m.domain.dim}")
    acc = {}
    for j, xj in x.items():
        col = m.matrix.get(j)
        if not col:
            continue
        for k, v in col.items():
            nv = acc.get(k, ZERO) + xj * v
            if nv:
                acc[k] = nv
            else:
                del acc[k]
    return SparseVector(acc)


class DPModuleSpec:
    """A candidate (modified) differential Poisson module over an AlgebraSpec.

    ``action[(i, m)]`` holds the coordinates of ``e_i * u_m`` for a left
    module and of ``u_m * e_i`` for a right one; ``bracket_action`` holds
    ``{e_i, u_m}`` respectively ``{u_m, e_i}``.
    """

    __slots__ = ("name", "algebra", "mdim", "mlabels", "action", "bracket_action", "diff_m", "side")

    def __init__(self, name, algebra, mlabels, action, bracket_action, diff_m, side="left"):
        self.name = str(name)
        self.algebra = algebra
        self.mlabels = tuple(mlabels)
        self.mdim = len(self.mlabels)
        for lbl in self.mlabels:
            _check_label(lbl)
        if len(set(self.mlabels)) != self.mdim:
            raise ValidationError("duplicate module labels", field="basis")
        if side not in ("left", "right"):
            raise ValidationError("side must be 'left' or 'right'", field="side")
        self.side = side
        self.action = self._clean_action(action, "action")
        self.bracket_action = self._clean_action(bracket_action, "bracket_action")
        self.diff_m = _clean_matrix(diff_m, self.mdim, self.mdim, "diff_m")

    def _clean_action(self, tensor, field):
        out = {}
        for (i, m), col in tensor.items():
            if not (0 <= i < self.algebra.dim):
                raise ValidationError(f"algebra index {i} out of range", field=field)
            if not (0 <= m < self.mdim):
                raise ValidationError(f"module index {m} out of range", field=field)
            cleaned = {}
            for k, v in col.items():
                if not (0 <= k < self.mdim):
                    raise ValidationError(f"output index {k} out of range", field=field)
                v = Fraction(v)
                if v:
                    cleaned[k] = v
            if cleaned:
                out[(i, m)] = cleaned
        return out

    def render_vector(self, vec):
        if not vec:
            return "0"
        parts = []
        for i in sorted(vec.keys()):
            c = vec[i]
            lbl = self.mlabels[i]
            if c == 1:
                parts.append(lbl)
            elif c == -1:
                parts.append("-" + lbl)
            else:
                parts.append(f"{format_scalar(c)}*{lbl}")
        return " + ".join(parts)

    def __repr__(self):
        return f"DPModuleSpec({self.name!r}, over={self.algebra.name!r}, mdim={self.mdim}, side={self.side})"


def module_act(mod, which, a, m):
    """Evaluate the action or bracket action on sparse vectors (a in A, m in M)."""
    tensor = mod.action if which == "action" else mod.bracket_action
    for k in a:
        if not (0 <= k < mod.algebra.dim):
            raise DimensionMismatch(f"algebra coordinate {k} outside dimension {mod.algebra.dim}")
    for k in m:
        if not (0 <= k < mod.mdim):
            raise DimensionMismatch(f"module coordinate {k} outside dimension {mod.mdim}")
    acc = {}
    for i, ai in a.items():
        for j, mj in m.items():
            col = tensor.get((i, j))
            if not col:
                continue
            c = ai * mj
            for k, v in col.items():
                nv = acc.get(k, ZERO) + c * v
                if nv:
                    acc[k] = nv
                else:
                    del acc[k]
    return SparseVector(acc)


def module_diff(mod, m):
    for k in m:
        if not (0 <= k < mod.mdim):
            raise DimensionMismatch(f"module coordinate {k} outside dimension {mod.mdim}")
    acc = {}
    for j, mj in m.items():
        col = mod.diff_m.get(j)
        if not col:
            continue
        for k, v in col.items():
            nv = acc.get(k, ZERO) + mj * v
            if nv:
                acc[k] = nv
            else:
                del acc[k]
    return SparseVector(acc)


# ---------------------------------------------------------------------------
# canonical file format
# ---------------------------------------------------------------------------

def _vec_to_labels(vec, labels):
    return {labels[k]: format_scalar(v) for k, v in sorted(vec.items())}


def _tensor_to_json(tensor, labels):
    rows = []
    for (i, j) in sorted(tensor):
        rows.append({"i": labels[i], "j": labels[j], "out": _vec_to_labels(SparseVector(tensor[(i, j)]), labels)})
    return rows


def _matrix_to_json(matrix, col_labels, row_labels):
    return {
        col_labels[j]: {row_labels[k]: format_scalar(v) for k, v in sorted(col.items())}
        for j, col in sorted(matrix.items())
    }


def spec_to_dict(spec):
    doc = {
        "name": spec.name,
        "dim": spec.dim,
        "basis": list(spec.labels),
        "lambda": format_scalar(spec.lam),
        "variant": spec.variant,
        "product": _tensor_to_json(spec.product, spec.labels),
        "bracket": _tensor_to_json(spec.bracket, spec.labels),
        "diff": _matrix_to_json(spec.diff, spec.labels, spec.labels),
    }
    if spec.unit is not None:
        unit = [ZERO] * spec.dim
        for k, v in spec.unit.items():
            unit[k] = v
        doc["unit"] = [format_scalar(v) for v in unit]
    return doc


def _require(doc, key, kind, where):
    if key not in doc:
        raise ParseError(f"{where}: missing field {key!r}")
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        raise ParseError(f"{where}: field {key!r} has wrong type")
    return val


def _tensor_from_json(rows, index, where):
    if not isinstance(rows, list):
        raise ParseError(f"{where}: expected a list of entries")
    tensor = {}
    for entry in rows:
        i_lbl = _require(entry, "i", str, where)
        j_lbl = _require(entry, "j", str, where)
        out = _require(entry, "out", dict, where)
        try:
            i, j = index[i_lbl], index[j_lbl]
        except KeyError as exc:
            raise ParseError(f"{where}: unknown basis label {exc.args[0]!r}")
        key = (i, j)
        if key in tensor:
            raise ParseError(f"{where}: duplicate entry for ({i_lbl}, {j_lbl})")
        col = {}
        for k_lbl, text in out.items():
            if k_lbl not in index:
                raise ParseError(f"{where}: unknown basis label {k_lbl!r}")
            col[index[k_lbl]] = parse_scalar(text)
        tensor[key] = col
    return tensor


def _matrix_from_json(doc, col_index, row_index, where):
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: expected an object keyed by column label")
    matrix = {}
    for j_lbl, col in doc.items():
        if j_lbl not in col_index:
            raise ParseError(f"{where}: unknown column label {j_lbl!r}")
        if not isinstance(col, dict):
            raise ParseError(f"{where}: column {j_lbl!r} must be an object")
        cleaned = {}
        for k_lbl, text in col.items():
            if k_lbl not in row_index:
                raise ParseError(f"{where}: unknown row label {k_lbl!r}")
            cleaned[row_index[k_lbl]] = parse_scalar(text)
        matrix[col_index[j_lbl]] = cleaned
    return matrix


def spec_from_dict(doc, where="spec"):
    name = _require(doc, "name", str, where)
    dim = _require(doc, "dim", int, where)
    basis = _require(doc, "basis", list, where)
    if dim != len(basis):
        raise ParseError(f"{where}: dim {dim} does not match basis length {len(basis)}")
    lam = parse_scalar(_require(doc, "lambda", (str, int), where))
    variant = _require(doc, "variant", str, where)
    index = {lbl: i for i, lbl in enumerate(basis)}
    if len(index) != len(basis):
        raise ParseError(f"{where}: duplicate basis labels")
    product = _tensor_from_json(doc.get("product", []), index, f"{where}.product")
    bracket = _tensor_from_json(doc.get("bracket", []), index, f"{where}.bracket")
    diff = _matrix_from_json(doc.get("diff", {}), index, index, f"{where}.diff")
    unit = None
    if "unit" in doc:
        raw = doc["unit"]
        if not isinstance(raw, list) or len(raw) != dim:
            raise ParseError(f"{where}: unit must be a list of {dim} scalars")
        unit = {i: parse_scalar(v) for i, v in enumerate(raw)}
    return AlgebraSpec(name, basis, lam, variant, product, bracket, diff, unit)


def morphism_to_dict(m):
    return {
        "domain": m.domain.name,
        "codomain": m.codomain.name,
        "matrix": _matrix_to_json(m.matrix, m.domain.labels, m.codomain.labels),
    }


def morphism_from_dict(doc, domain, codomain, where="morphism"):
    dom_name = _require(doc, "domain", str, where)
    cod_name = _require(doc, "codomain", str, where)
    if dom_name != domain.name:
        raise ParseError(f"{where}: domain name {dom_name!r} does not match loaded spec {domain.name!r}")
    if cod_name != codomain.name:
        raise ParseError(f"{where}: codomain name {cod_name!r} does not match loaded spec {codomain.name!r}")
    matrix = _matrix_from_json(
        _require(doc, "matrix", dict, where), domain.label_index(), codomain.label_index(), f"{where}.matrix"
    )
    return MorphismSpec(domain, codomain, matrix)


def module_to_dict(mod):
    a_labels, m_labels = mod.algebra.labels, mod.mlabels

    def action_json(tensor):
        rows = []
        for (i, m) in sorted(tensor):
            rows.append(
                {
                    "i": a_labels[i],
                    "j": m_labels[m],
                    "out": {m_labels[k]: format_scalar(v) for k, v in sorted(tensor[(i, m)].items())},
                }
            )
        return rows

    return {
        "name": mod.name,
        "algebra": mod.algebra.name,
        "mdim": mod.mdim,
        "basis": list(m_labels),
        "side": mod.side,
        "action": action_json(mod.action),
        "bracket_action": action_json(mod.bracket_action),
        "diff_m": _matrix_to_json(mod.diff_m, m_labels, m_labels),
    }


def module_from_dict(doc, algebra, where="module"):
    name = _require(doc, "name", str, where)
    alg_name = _require(doc, "algebra", str, where)
    if alg_name != algebra.name:
        raise ParseError(f"{where}: algebra name {alg_name!r} does not match loaded spec {algebra.name!r}")
    mdim = _require(doc, "mdim", int, where)
    basis = _require(doc, "basis", list, where)
    if mdim != len(basis):
        raise ParseError(f"{where}: mdim {mdim} does not match basis length {len(basis)}")
    side = doc.get("side", "left")
    a_index = algebra.label_index()
    m_index = {lbl: i for i, lbl in enumerate(basis)}

    def action_from(rows, field):
        if not isinstance(rows, list):
            raise ParseError(f"{where}.{field}: expected a list")
        tensor = {}
        for entry in rows:
            i_lbl = _require(entry, "i", str, f"{where}.{field}")
            j_lbl = _require(entry, "j", str, f"{where}.{field}")
            out = _require(entry, "out", dict, f"{where}.{field}")
            if i_lbl not in a_index:
                raise ParseError(f"{where}.{field}: unknown algebra label {i_lbl!r}")
            if j_lbl not in m_index:
                raise ParseError(f"{where}.{field}: unknown module label {j_lbl!r}")
            col = {}
            for k_lbl, text in out.items():
                if k_lbl not in m_index:
                    raise ParseError(f"{where}.{field}: unknown module label {k_lbl!r}")
                col[m_index[k_lbl]] = parse_scalar(text)
            tensor[(a_index[i_lbl], m_index[j_lbl])] = col
        return tensor

    action = action_from(doc.get("action", []), "action")
    bracket_action = action_from(doc.get("bracket_action", []), "bracket_action")
    diff_m = _matrix_from_json(doc.get("diff_m", {}), m_index, m_index, f"{where}.diff_m")
    return DPModuleSpec(name, algebra, basis, action, bracket_action, diff_m, side)


def load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})")


def load_spec(path):
    return spec_from_dict(load_json(path), where=str(path))


def save_spec(spec, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec_to_dict(spec), fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")
