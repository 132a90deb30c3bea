"""Exact rational scalars and sparse linear algebra over ordered opaque keys.

Every question the engine answers ultimately reduces to membership of a
vector in the row space of an exactly row-reduced matrix.  Keys are opaque:
the same elimination kernel serves basis-indexed coordinate spaces (keys are
small integers) and word-indexed slices of free algebras (keys are encoded
monomials).  No floating point is used anywhere; arithmetic is over
``fractions.Fraction`` which keeps every value in canonical ``p/q`` form
with a positive denominator.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError, QuotientNotContained

Scalar = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)

_SCALAR_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_scalar(text):
    """Parse ``"p"`` or ``"p/q"`` into a Fraction; reject anything else."""
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _SCALAR_RE.match(text.strip()):
        raise ParseError(f"not a rational literal: {text!r}")
    text = text.strip()
    if "/" in text:
        p, q = text.split("/")
        if int(q) == 0:
            raise ParseError(f"zero denominator: {text!r}")
        return Fraction(int(p), int(q))
    return Fraction(int(text))


def format_scalar(x):
    """Canonical text form: ``p`` when the denominator is 1, else ``p/q``."""
    return str(Fraction(x))


class SparseVector:
    """Immutable sparse vector: a map from keys to nonzero rationals.

    Zero coefficients are dropped at construction, so two vectors are equal
    iff their stored entries are equal.
    """

    __slots__ = ("_e",)

    def __init__(self, entries=()):
        if isinstance(entries, SparseVector):
            self._e = dict(entries._e)
            return
        items = entries.items() if hasattr(entries, "items") else entries
        e = {}
        for k, v in items:
            v = Fraction(v)
            if v:
                e[k] = v
        self._e = e

    @classmethod
    def _raw(cls, mapping):
        # internal: caller guarantees no zero values
        v = object.__new__(cls)
        v._e = mapping
        return v

    def __getitem__(self, key):
        return self._e.get(key, ZERO)

    def __contains__(self, key):
        return key in self._e

    def __iter__(self):
        return iter(self._e)

    def __len__(self):
        return len(self._e)

    def __bool__(self):
        return bool(self._e)

    def is_zero(self):
        return not self._e

    def keys(self):
        return self._e.keys()

    def items(self):
        return self._e.items()

    def __eq__(self, other):
        if isinstance(other, SparseVector):
            return self._e == other._e
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._e.items()))

    def __add__(self, other):
        e = dict(self._e)
        for k, v in other._e.items():
            nv = e.get(k, ZERO) + v
            if nv:
                e[k] = nv
            else:
                e.pop(k, None)
        return SparseVector._raw(e)

    def __sub__(self, other):
        e = dict(self._e)
        for k, v in other._e.items():
            nv = e.get(k, ZERO) - v
            if nv:
                e[k] = nv
            else:
                e.pop(k, None)
        return SparseVector._raw(e)

    def __neg__(self):
        return SparseVector._raw({k: -v for k, v in self._e.items()})

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return SparseVector._raw({})
        return SparseVector._raw({k: c * v for k, v in self._e.items()})

    def __repr__(self):
        inside = ", ".join(f"{k!r}: {format_scalar(v)}" for k, v in sorted(self._e.items(), key=lambda kv: repr(kv[0])))
        return f"SparseVector({{{inside}}})"

    def to_dict(self):
        return dict(self._e)


def _echelonize(rows, descending, track=False):
    """Row-reduce plain dicts in place of SparseVectors (hot path).

    Returns ``(pivrows, combos)`` where ``pivrows`` maps each pivot key to a
    fully reduced row (coefficient 1 at the pivot, tail free of pivot keys)
    and ``combos``, when tracking, expresses each row as a combination of the
    input rows by index.  The pivot of a row is its first nonzero entry under
    the key order: the smallest key when ascending, the largest when
    descending.
    """
    lead = max if descending else min
    pivrows = {}
    combos = {} if track else None
    for idx, raw in enumerate(rows):
        row = dict(raw)
        combo = {idx: ONE} if track else None
        while row:
            p = lead(row)
            piv = pivrows.get(p)
            if piv is None:
                c = row[p]
                if c != 1:
                    inv = ONE / c
                    row = {k: v * inv for k, v in row.items()}
                    if track:
                        combo = {k: v * inv for k, v in combo.items()}
                pivrows[p] = row
                if track:
                    combos[p] = combo
                break
            c = row.pop(p)
            for k, v in piv.items():
                if k is p or k == p:
                    continue
                nv = row.get(k, ZERO) - c * v
                if nv:
                    row[k] = nv
                else:
                    del row[k]
            if track:
                pc = combos[p]
                for k, v in pc.items():
                    nv = combo.get(k, ZERO) - c * v
                    if nv:
                        combo[k] = nv
                    else:
                        del combo[k]
    # back substitution to full reduced form; tails of already-processed
    # pivots are pivot-free, so one pass per row suffices
    for p in sorted(pivrows, reverse=not descending):
        row = pivrows[p]
        hit = [k for k in row if k != p and k in pivrows]
        for q in hit:
            c = row.pop(q)
            for k, v in pivrows[q].items():
                if k == q:
                    continue
                nv = row.get(k, ZERO) - c * v
                if nv:
                    row[k] = nv
                else:
                    del row[k]
            if track:
                combo = combos[p]
                for k, v in combos[q].items():
                    nv = combo.get(k, ZERO) - c * v
                    if nv:
                        combo[k] = nv
                    else:
                        del combo[k]
    return pivrows, combos


def _residual(pivrows, vec, track=False):
    """Reduce ``vec`` (a dict) modulo fully reduced pivot rows.

    Tails of pivot rows contain no pivot keys, so eliminating each pivot key
    present in ``vec`` once, in any order, yields the unique representative
    supported away from the pivots.
    """
    row = dict(vec)
    used = {} if track else None
    for p in [k for k in row if k in pivrows]:
        c = row.pop(p, ZERO)
        if not c:
            continue
        if track:
            used[p] = c
        for k, v in pivrows[p].items():
            if k == p:
                continue
            nv = row.get(k, ZERO) - c * v
            if nv:
                row[k] = nv
            else:
                del row[k]
    return row, used


class Subspace:
    """Span of sparse rows held in canonical reduced row-echelon form.

    Each basis row has coefficient 1 at its pivot, pivots are pairwise
    distinct, and every pivot key is absent from all other rows; hence
    membership tests are deterministic and the residual of a vector is its
    unique representative modulo the span.
    """

    __slots__ = ("_pivrows", "pivots", "descending", "_combos")

    def __init__(self, pivrows, descending, combos=None):
        self._pivrows = pivrows
        self.pivots = sorted(pivrows, reverse=descending)
        self.descending = descending
        self._combos = combos

    @property
    def basis(self):
        """Rows ordered by pivot under the key order."""
        return [SparseVector(self._pivrows[p]) for p in self.pivots]

    @property
    def dim(self):
        return len(self.pivots)

    def contains(self, vec, with_combination=False):
        """Return ``(member, residual)``; residual is zero iff member.

        With ``with_combination`` also return the pivot-indexed coefficients
        expressing ``vec - residual`` in the echelon basis.
        """
        data = vec.to_dict() if isinstance(vec, SparseVector) else dict(vec)
        row, used = _residual(self._pivrows, data, track=with_combination)
        res = SparseVector._raw(row)
        if with_combination:
            return not row, res, used
        return not row, res

    def input_combination(self, pivot_coeffs):
        """Express a pivot-coefficient map in terms of the original input rows.

        Only available when the subspace was built with ``track=True``.
        """
        if self._combos is None:
            raise ValueError("subspace was built without combination tracking")
        out = {}
        for p, c in pivot_coeffs.items():
            for idx, v in self._combos[p].items():
                nv = out.get(idx, ZERO) + c * v
                if nv:
                    out[idx] = nv
                else:
                    del out[idx]
        return out

    def __eq__(self, other):
        if isinstance(other, Subspace):
            return self._pivrows == other._pivrows
        return NotImplemented

    def __repr__(self):
        return f"Subspace(dim={self.dim}, pivots={self.pivots!r})"


def row_reduce(rows, descending=False, track=False):
    """Canonical echelon form of the span of ``rows``.

    The key order is the natural order of the keys; with ``descending`` the
    pivot of each row is its largest key instead of its smallest.  Empty
    input yields the zero subspace.
    """
    raw = [r.to_dict() if isinstance(r, SparseVector) else dict(r) for r in rows]
    pivrows, combos = _echelonize(raw, descending, track=track)
    return Subspace(pivrows, descending, combos)


def subspace_sum(s, t):
    """Span of the union of two subspaces over one key universe."""
    assert s.descending == t.descending
    return row_reduce(s.basis + t.basis, descending=s.descending)


def subspace_intersection(s, t):
    """Exact intersection via elimination on doubled keys.

    Rows ``(v, v)`` for v in S and ``(w, 0)`` for w in T are reduced with the
    left block leading; surviving rows with zero left block carry S cap T in
    their right block.
    """
    assert s.descending == t.descending
    desc = s.descending
    side = 1 if desc else 0  # left block must dominate the key order
    rows = []
    for v in s.basis:
        rows.append({(side, k): c for k, c in v.items()} | {(1 - side, k): c for k, c in v.items()})
    for w in t.basis:
        rows.append({(side, k): c for k, c in w.items()})
    pivrows, _ = _echelonize(rows, desc)
    inter = []
    for p, row in pivrows.items():
        if p[0] != side:
            inter.append({k: c for (blk, k), c in row.items()})
    return row_reduce(inter, descending=desc)


def kernel_image(columns, ncols):
    """Null space and column space of a sparse matrix stored by columns.

    Rows ``(column_j, e_j)`` are eliminated with the value block leading;
    surviving rows with zero value block carry the kernel in their
    coordinate block, the others project onto the image.
    """
    rows = []
    for j in range(ncols):
        row = {(1, j): ONE}
        for k, v in columns.get(j, {}).items():
            v = Fraction(v)
            if v:
                row[(0, k)] = v
        rows.append(row)
    pivrows, _ = _echelonize(rows, descending=False)
    ker_rows, im_rows = [], []
    for p, row in pivrows.items():
        if p[0] == 1:
            ker_rows.append({k: c for (_, k), c in row.items()})
        else:
            im_rows.append({k: c for (blk, k), c in row.items() if blk == 0})
    return row_reduce(ker_rows), row_reduce(im_rows)


def quotient_basis(s, t):
    """Canonical coset representatives of S modulo T (requires T inside S)."""
    assert s.descending == t.descending
    for w in t.basis:
        ok, _ = s.contains(w)
        if not ok:
            raise QuotientNotContained("second subspace is not contained in the first")
    residuals = []
    for v in s.basis:
        _, res = t.contains(v)
        if res:
            residuals.append(res)
    return row_reduce(residuals, descending=s.descending).basis
