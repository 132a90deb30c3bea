"""Degree-truncated universal envelopes computed by exact elimination.

The envelope of a spec is the free algebra on symbols ``M_a``, ``H_a``
modulo the relation families

    r1: M_a M_b           = M_{a.b}
    r2: H_a H_b - H_b H_a = H_{{a,b}}
    r3: H_a M_b - M_b H_a = M_{{a,b}}
    r4: M_a H_b + M_b H_a = H_{a.b}
    r5: M_1 = 1            (unital sources only)

with subscripts extended linearly over the basis.  A ``TruncatedUEA`` holds
the degree-bounded slice of the two-sided ideal these generate, row-reduced
over the word basis, so membership of a polynomial in the slice is an exact
certificate that it vanishes in the full quotient.  Certificates are sound
but incomplete at a fixed bound: a nonzero residual means "not certified at
this degree", never "nonzero in the quotient".
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import DegreeOverflow, DegreeTooSmall, ValidationError
from .freealg import EMPTY_WORD, Generator, NcPoly, Word, render_poly
from .linalg import ONE, ZERO, Subspace, _echelonize, _residual
from .report import VerificationReport


class Relation:
    """A named generating relation."""

    __slots__ = ("name", "poly")

    def __init__(self, name, poly):
        self.name = name
        self.poly = poly

    def __repr__(self):
        return f"Relation({self.name})"


def _linear_letters(vec, offset):
    """Coordinates of a vector as single-letter terms (M when offset 0)."""
    return {(offset + k,): v for k, v in vec.items()}


def build_relations(spec):
    """All relation instances on basis pairs; identically zero ones dropped."""
    n = spec.dim
    rels = []
    labels = spec.labels

    def emit(name, terms):
        acc = {}
        for w, c in terms.items():
            nv = acc.get(w, ZERO) + c
            if nv:
                acc[w] = nv
            else:
                del acc[w]
        if acc:
            rels.append((name, acc))

    for i in range(n):
        for j in range(n):
            prod = spec.product.get((i, j), {})
            brk = spec.bracket.get((i, j), {})
            r1 = {(i, j): ONE}
            for k, v in prod.items():
                r1[(k,)] = r1.get((k,), ZERO) - v
            emit(f"r1[{labels[i]},{labels[j]}]", r1)
            r2 = {} if i == j else {(n + i, n + j): ONE, (n + j, n + i): -ONE}
            for k, v in brk.items():
                r2[(n + k,)] = r2.get((n + k,), ZERO) - v
            emit(f"r2[{labels[i]},{labels[j]}]", r2)
            r3 = {(n + i, j): ONE, (j, n + i): -ONE}
            for k, v in brk.items():
                r3[(k,)] = r3.get((k,), ZERO) - v
            emit(f"r3[{labels[i]},{labels[j]}]", r3)
            r4 = {}
            for w in ((i, n + j), (j, n + i)):
                r4[w] = r4.get(w, ZERO) + ONE
            for k, v in prod.items():
                r4[(n + k,)] = r4.get((n + k,), ZERO) - v
            emit(f"r4[{labels[i]},{labels[j]}]", r4)
    if spec.is_unital:
        r5 = {(k,): v for k, v in spec.unit.items()}
        r5[()] = r5.get((), ZERO) - ONE
        emit("r5", r5)
    out = []
    for name, acc in rels:
        out.append(Relation(name, NcPoly({_decode_word_static(w, n): c for w, c in acc.items()})))
    return out


def _decode_word_static(codes, n):
    return Word(tuple(Generator("M", c) if c < n else Generator("H", c - n) for c in codes))


class TruncatedUEA:
    """The degree-bounded slice of the enveloping quotient of one spec.

    ``opposite`` views the same space with reversed concatenation; the ideal
    data is shared because the opposite of the quotient is definitionally
    the same space with reversed multiplication.
    """

    def __init__(
        self, spec, degree_bound, pad_bound, relations, words_by_degree, windex, pivrows, combos, padding, opposite=False
    ):
        self.spec = spec
        self.degree_bound = degree_bound
        self.pad_bound = pad_bound
        self.relations = relations
        self.opposite = opposite
        self._words_by_degree = words_by_degree
        self._windex = windex
        self._wlist = [w for d in sorted(words_by_degree) for w in words_by_degree[d]]
        self._pivrows = pivrows
        self._combos = combos
        self._padding = padding
        self._reduce_cache = {}
        self._diff_cache = {}
        self._ideal_slice = None
        self.normal_words = [
            self._decode_word(self._wlist[idx]) for idx in range(len(self._wlist)) if idx not in pivrows
        ]

    # -- encoding ----------------------------------------------------------
    def _code(self, gen):
        return gen.index if gen.kind == "M" else self.spec.dim + gen.index

    def _decode_word(self, codes):
        n = self.spec.dim
        return _decode_word_static(codes, n)

    def _encode_poly(self, poly):
        out = {}
        for w, c in poly.terms.items():
            if w.degree > self.degree_bound:
                raise DegreeOverflow(f"word degree {w.degree} exceeds bound {self.degree_bound}")
            codes = tuple(self._code(g) for g in w.letters)
            for g in w.letters:
                if not (0 <= g.index < self.spec.dim):
                    raise ValidationError(f"generator index {g.index} out of range")
            out[codes] = out.get(codes, ZERO) + c
        return {w: c for w, c in out.items() if c}

    def _decode_poly(self, data):
        return NcPoly({self._decode_word(w): c for w, c in data.items()})

    # -- queries -----------------------------------------------------------
    @property
    def word_count(self):
        return len(self._wlist)

    @property
    def ideal_dim(self):
        return len(self._pivrows)

    @property
    def ideal_slice(self):
        """Word-keyed echelon form of the ideal slice (built on first use)."""
        if self._ideal_slice is None:
            pivrows = {}
            for p, row in self._pivrows.items():
                pivrows[self._decode_word(self._wlist[p])] = {
                    self._decode_word(self._wlist[k]): v for k, v in row.items()
                }
            self._ideal_slice = Subspace(pivrows, descending=True)
        return self._ideal_slice

    def render(self, poly):
        return render_poly(poly, self.spec.labels)

    def _reduce_encoded(self, data):
        acc = {}
        for codes, c in data.items():
            red = self._reduce_word(codes)
            for k, v in red.items():
                nv = acc.get(k, ZERO) + c * v
                if nv:
                    acc[k] = nv
                else:
                    del acc[k]
        return acc

    def _reduce_word(self, codes):
        cached = self._reduce_cache.get(codes)
        if cached is None:
            idx = self._windex[codes]
            row, _ = _residual(self._pivrows, {idx: ONE})
            cached = {self._wlist[k]: v for k, v in row.items()}
            self._reduce_cache[codes] = cached
        return cached

    def reduce(self, poly):
        """Unique representative supported on normal words; 0 iff certified."""
        return self._decode_poly(self._reduce_encoded(self._encode_poly(poly)))

    def is_certified_zero(self, poly):
        return not self._reduce_encoded(self._encode_poly(poly))

    def certificate(self, poly):
        """Residual plus the explicit padded-relation combination removed.

        Requires the truncation to have been built with witness tracking.
        Returns ``(residual, combination)`` where the combination lists
        ``(coefficient, relation, left_pad, right_pad)`` with pads as Words
        and ``poly = residual + sum coeff * left * relation * right``.
        """
        if self._combos is None:
            raise ValueError("truncation was built without witness tracking")
        data = self._encode_poly(poly)
        enc = {}
        for codes, c in data.items():
            enc[self._windex[codes]] = c
        row, used = _residual(self._pivrows, enc, track=True)
        combo = {}
        for p, c in used.items():
            for idx, v in self._combos[p].items():
                nv = combo.get(idx, ZERO) + c * v
                if nv:
                    combo[idx] = nv
                else:
                    del combo[idx]
        residual = self._decode_poly({self._wlist[k]: v for k, v in row.items()})
        witness = []
        for idx in sorted(combo):
            rel_idx, left, right = self._padding[idx]
            witness.append(
                (combo[idx], self.relations[rel_idx], self._decode_word(left), self._decode_word(right))
            )
        return residual, witness

    def multiply(self, p, q):
        """Concatenation product (reversed under the opposite flag), reduced."""
        if p.degree + q.degree > self.degree_bound:
            raise DegreeOverflow(
                f"product degree {p.degree + q.degree} exceeds bound {self.degree_bound}"
            )
        prod = q * p if self.opposite else p * q
        return self.reduce(prod)

    def opposite_view(self):
        """The same truncation with reversed multiplication."""
        return TruncatedUEA(
            self.spec,
            self.degree_bound,
            self.pad_bound,
            self.relations,
            self._words_by_degree,
            self._windex,
            self._pivrows,
            self._combos,
            self._padding,
            opposite=not self.opposite,
        )

    # -- derived differential ----------------------------------------------
    def _letter_diff(self, code):
        n = self.spec.dim
        idx = code if code < n else code - n
        off = 0 if code < n else n
        col = self.spec.diff.get(idx, {})
        return {(off + k,): v for k, v in col.items()}

    def _word_diff(self, codes):
        """Leibniz recursion over concatenation; D(1) is 0 (weighted) or
        -lambda*1 (modified, forced by the rule on 1*1)."""
        cached = self._diff_cache.get(codes)
        if cached is not None:
            return cached
        lam = self.spec.lam
        if not codes:
            out = {} if self.spec.variant == "weighted" else {(): -lam}
        else:
            head, last = codes[:-1], codes[-1:]
            dh = self._word_diff(head)
            dl = self._letter_diff(last[0])
            out = {}

            def bump(w, c):
                nv = out.get(w, ZERO) + c
                if nv:
                    out[w] = nv
                else:
                    del out[w]

            for w, c in dh.items():
                bump(w + last, c)
            for w, c in dl.items():
                bump(head + w, c)
            if lam:
                if self.spec.variant == "modified":
                    bump(codes, lam)
                else:
                    for w1, c1 in dh.items():
                        for w2, c2 in dl.items():
                            bump(w1 + w2, lam * c1 * c2)
        self._diff_cache[codes] = out
        return out

    def derived_diff_free(self, poly):
        """D extended to the free algebra, not reduced."""
        acc = {}
        for codes, c in self._encode_poly(poly).items():
            for w, v in self._word_diff(codes).items():
                nv = acc.get(w, ZERO) + c * v
                if nv:
                    acc[w] = nv
                else:
                    del acc[w]
        return self._decode_poly(acc)

    def derived_diff(self, poly):
        """D on the truncated quotient: generator images under d, extended
        by the variant's Leibniz rule, then reduced."""
        return self.reduce(self.derived_diff_free(poly))


def _enumerate_words(n_gens, bound):
    by_degree = {0: [()]}
    for d in range(1, bound + 1):
        by_degree[d] = list(itertools.product(range(n_gens), repeat=d))
    return by_degree


def build_truncated_uea(spec, degree_bound, pad_bound=None, track_witnesses=False):
    """Row-reduce the padded relation slice { w * r * w' : total degree <= pad }.

    The pivot of each row is its leading (largest) word in degree-lex order,
    so normal words are the minimal representatives.  ``pad_bound`` may
    exceed ``degree_bound``: padding deeper discovers low-degree ideal
    members whose expression needs cancellations above the slice (the
    relations are inhomogeneous), and the result is then restricted to rows
    led by words of degree <= degree_bound.  Restriction is sound: tails of
    echelon rows never exceed their pivot in degree-lex order.  The slice
    never contains a nonzero scalar for a presentation with 1 != 0; this is
    asserted because every certificate relies on it.
    """
    if degree_bound < 2:
        raise DegreeTooSmall("truncation degree must be at least 2")
    pad_bound = degree_bound if pad_bound is None else max(pad_bound, degree_bound)
    n = spec.dim
    gens = 2 * n
    relations = build_relations(spec)
    by_degree = _enumerate_words(gens, pad_bound)
    wlist = [w for d in sorted(by_degree) for w in by_degree[d]]
    windex = {w: i for i, w in enumerate(wlist)}
    n_keep = sum(len(by_degree[d]) for d in range(degree_bound + 1))

    encoded = []
    for rel in relations:
        terms = {}
        for w, c in rel.poly.terms.items():
            codes = tuple((g.index if g.kind == "M" else n + g.index) for g in w.letters)
            terms[codes] = c
        encoded.append(terms)

    rows = []
    padding = [] if track_witnesses else None
    for rel_idx, terms in enumerate(encoded):
        deg = max(len(w) for w in terms)
        for dl in range(0, pad_bound - deg + 1):
            for left in by_degree[dl]:
                for dr in range(0, pad_bound - deg - dl + 1):
                    for right in by_degree[dr]:
                        rows.append({windex[left + w + right]: c for w, c in terms.items()})
                        if track_witnesses:
                            padding.append((rel_idx, left, right))

    pivrows, combos = _echelonize(rows, descending=True, track=track_witnesses)
    if 0 in pivrows:
        raise ValidationError("ideal slice contains a nonzero scalar; the presentation collapses 1 to 0")
    if pad_bound > degree_bound:
        pivrows = {p: row for p, row in pivrows.items() if p < n_keep}
        kept = {d: by_degree[d] for d in range(degree_bound + 1)}
    else:
        kept = by_degree
    u = TruncatedUEA(spec, degree_bound, pad_bound, relations, kept, windex, pivrows, combos, padding)
    for rel in relations:
        if not u.is_certified_zero(rel.poly):
            raise ValidationError(f"generating relation {rel.name} fails to reduce to zero")
    if len(u.normal_words) + u.ideal_dim != u.word_count:
        raise ValidationError("normal word count does not complement the ideal slice")
    return u


def build_stable_uea(spec, degree_bound, max_extra=3, track_witnesses=False):
    """Deepen the padding until the degree-bounded slice stops changing.

    Returns ``(truncation, stable)``.  Certified membership only grows with
    the padding depth, so the first two consecutive depths with identical
    slices give the saturated answer for every word of degree <= the bound;
    a slice whose only normal word is 1 cannot shrink further and stops the
    search immediately (1 is never in the ideal).
    """
    prev = None
    u = None
    for extra in range(max_extra + 1):
        u = build_truncated_uea(spec, degree_bound, pad_bound=degree_bound + extra, track_witnesses=track_witnesses)
        if len(u.normal_words) == 1:
            return u, True
        if prev is not None and prev._pivrows == u._pivrows:
            return u, True
        prev = u
    return u, False


def check_D_preserves_ideal(u):
    """Certify reduce(D(r)) = 0 for every generating relation."""
    if u.degree_bound < 3:
        raise DegreeTooSmall("derivation check needs truncation degree >= 3")
    report = VerificationReport()
    if not u.spec.is_unital:
        report.note("unit relation r5 omitted: source algebra is non-unital")
    for rel in u.relations:
        image = u.derived_diff_free(rel.poly)
        residual = u.reduce(image)
        ok = residual.is_zero()
        witness = None
        if not ok:
            witness = {
                "relation": rel.name,
                "relation_poly": u.render(rel.poly),
                "image": u.render(image),
                "residual": u.render(residual),
            }
        report.add(f"D:{rel.name}", ok, witness)
    return report


def normal_words_upto(u, degree):
    """Normal words of degree at most ``degree`` (for stabilization tests)."""
    return [w for w in u.normal_words if w.degree <= degree]
