"""Generator-level isomorphism certification between enveloping truncations.

A candidate isomorphism is a generator assignment in each direction.  The
forward check substitutes the assignment into every source relation and
asks the target truncation to certify the image zero; the backward check
does the same for the target presentation inside the source; round trips
certify that both composites fix all generators.  Certificates are sound at
any truncation degree.  A nonzero residual is promoted to a disproof only
when the degree-2 slice of the reducing truncation is stable between the
working degree and the next one; otherwise it is reported as not certified.
"""

from __future__ import annotations

from .constructions import TENSOR_SIGN, opposite, tensor
from .enveloping import build_truncated_uea, normal_words_upto
from .errors import DegreeTooSmall, ValidationError
from .freealg import Generator, NcPoly, Word, render_poly
from .linalg import ONE, ZERO, format_scalar
from .report import VerificationReport

KINDS = ("opposite", "tensor", "op_tensor")


def _hom_eval(poly, letter_image, mul, one, domain_opposite):
    """Evaluate a substitution homomorphism on a polynomial.

    A stored word equals the reversed op-product of its letters, so maps
    out of an opposite-flagged algebra fold letter images in reverse.
    """
    acc = None
    for word, coeff in poly.sorted_terms():
        img = one
        letters = reversed(word.letters) if domain_opposite else word.letters
        for g in letters:
            img = mul(img, letter_image(g))
        img = _scale(img, coeff)
        acc = img if acc is None else _add(acc, img)
    return acc if acc is not None else {}


def _add(x, y):
    out = dict(x)
    for k, v in y.items():
        nv = out.get(k, ZERO) + v
        if nv:
            out[k] = nv
        else:
            del out[k]
    return out


def _scale(x, c):
    if not c:
        return {}
    return {k: c * v for k, v in x.items()}


class FreeContext:
    """Single free algebra carrying one truncation; elements are word dicts."""

    def __init__(self, uea):
        self.uea = uea
        self.one = {Word(): ONE}

    def mul(self, x, y):
        out = {}
        for wx, cx in x.items():
            for wy, cy in y.items():
                w = wy * wx if self.uea.opposite else wx * wy
                nv = out.get(w, ZERO) + cx * cy
                if nv:
                    out[w] = nv
                else:
                    del out[w]
        return out

    def reduce(self, elt):
        return self.uea.reduce(NcPoly(elt))

    def is_zero(self, elt):
        return self.reduce(elt).is_zero()

    def render(self, elt):
        return render_poly(NcPoly(elt), self.uea.spec.labels)

    def render_reduced(self, elt):
        return render_poly(self.reduce(elt), self.uea.spec.labels)


class PairContext:
    """Tensor of two truncations; elements map (word, word) pairs to scalars."""

    def __init__(self, ua, ub):
        self.ua = ua
        self.ub = ub
        self.one = {(Word(), Word()): ONE}

    def mul(self, x, y):
        out = {}
        for (ax, bx), cx in x.items():
            for (ay, by), cy in y.items():
                wa = ay * ax if self.ua.opposite else ax * ay
                wb = by * bx if self.ub.opposite else bx * by
                key = (wa, wb)
                nv = out.get(key, ZERO) + cx * cy
                if nv:
                    out[key] = nv
                else:
                    del out[key]
        return out

    def reduce(self, elt):
        out = {}
        for (wa, wb), c in elt.items():
            ra = self.ua.reduce(NcPoly({wa: ONE}))
            rb = self.ub.reduce(NcPoly({wb: ONE}))
            for xa, ca in ra.terms.items():
                for xb, cb in rb.terms.items():
                    key = (xa, xb)
                    nv = out.get(key, ZERO) + c * ca * cb
                    if nv:
                        out[key] = nv
                    else:
                        del out[key]
        return out

    def is_zero(self, elt):
        return not self.reduce(elt)

    def render(self, elt):
        if not elt:
            return "0"
        parts = []
        for (wa, wb), c in sorted(elt.items(), key=lambda kv: (kv[0][0]._key, kv[0][1]._key), reverse=True):
            ta = render_poly(NcPoly({wa: ONE}), self.ua.spec.labels)
            tb = render_poly(NcPoly({wb: ONE}), self.ub.spec.labels)
            parts.append(f"{format_scalar(c)}*({ta}){TENSOR_SIGN}({tb})")
        return " + ".join(parts)

    def render_reduced(self, elt):
        return self.render(self.reduce(elt))


def _gen_name(spec, gen):
    return f"{gen.kind}[{spec.labels[gen.index]}]"


def _linear_image(vec, kind, wrap):
    out = {}
    for k, v in vec.items():
        out = _add(out, _scale(wrap(Generator(kind, k)), v))
    return out


class _Stability:
    """Lazy degree-2 slice comparison between N and N+1 for one builder."""

    def __init__(self, label, build_now, build_next):
        self.label = label
        self._build_now = build_now
        self._build_next = build_next
        self._value = None

    def stable(self):
        if self._value is None:
            now = {w for w in normal_words_upto(self._build_now(), 2)}
            nxt = {w for w in normal_words_upto(self._build_next(), 2)}
            self._value = now == nxt
        return self._value


def check_generator_iso(kind, specs, degree, candidate=None):
    """Certify (or refute) a candidate generator isomorphism at one degree.

    kind "opposite":  envelope of the opposite algebra vs the opposite of
    the envelope, default assignment fixing every generator.  kind
    "tensor": envelope of a tensor product vs the tensor of envelopes,
    default forward M_{a(x)b} -> M_a(x)M_b, H_{a(x)b} -> M_a(x)H_b +
    H_a(x)M_b and backward a -> a(x)1, b -> 1(x)b (both factors must be
    unital).  kind "op_tensor" combines the two.  Failing residuals count
    as disproofs only under a stable degree-2 slice.
    """
    if kind not in KINDS:
        raise ValidationError(f"unknown isomorphism kind {kind!r}")
    if degree < 4:
        raise DegreeTooSmall("isomorphism certification needs degree >= 4")
    if kind == "opposite":
        return _check_opposite(specs[0], degree, candidate)
    if kind == "tensor":
        a, b = specs[0], specs[1]
        return _check_tensor(a, b, degree, candidate, op_second=False)
    a = specs[0]
    return _check_tensor(a, opposite(a), degree, candidate, op_second=True)


def _verdict(report, name, ctx, image, stability):
    residual = ctx.reduce(image) if isinstance(ctx, FreeContext) else ctx.reduce(image)
    zero = residual.is_zero() if isinstance(ctx, FreeContext) else not residual
    if zero:
        report.add(name, True)
        return
    rendered = (
        render_poly(residual, ctx.uea.spec.labels)
        if isinstance(ctx, FreeContext)
        else ctx.render(residual)
    )
    witness = {
        "error": "RelationNotKilled",
        "image": ctx.render(image),
        "residual": rendered,
    }
    if stability.stable():
        witness["disproof"] = True
        witness["stability"] = f"degree-2 slice stable at degrees {stability.label}"
    else:
        witness["disproof"] = False
        witness["stability"] = (
            f"degree-2 slice not stable at degrees {stability.label}; not certified, raise the degree"
        )
    report.add(name, False, witness)


def _check_opposite(spec, degree, candidate):
    a_op = opposite(spec)
    u_src = build_truncated_uea(a_op, degree)
    u_tgt_plain = build_truncated_uea(spec, degree)
    u_tgt = u_tgt_plain.opposite_view()
    src_ctx = FreeContext(u_src)
    tgt_ctx = FreeContext(u_tgt)
    report = VerificationReport()
    report.note("source: envelope of the opposite algebra; target: opposite of the envelope")

    fwd_map, bwd_map = {}, {}
    if candidate:
        fwd_map = dict(candidate.get("forward", {}))
        bwd_map = dict(candidate.get("backward", {}))

    def fwd(gen):
        poly = fwd_map.get((gen.kind, gen.index))
        if poly is None:
            return {Word((gen,)): ONE}
        return dict(poly.terms)

    def bwd(gen):
        poly = bwd_map.get((gen.kind, gen.index))
        if poly is None:
            return {Word((gen,)): ONE}
        return dict(poly.terms)

    tgt_stab = _Stability(
        f"{degree}/{degree + 1}",
        lambda: u_tgt_plain,
        lambda: build_truncated_uea(spec, degree + 1),
    )
    src_stab = _Stability(
        f"{degree}/{degree + 1}",
        lambda: u_src,
        lambda: build_truncated_uea(a_op, degree + 1),
    )

    for rel in u_src.relations:
        image = _hom_eval(rel.poly, fwd, tgt_ctx.mul, tgt_ctx.one, domain_opposite=False)
        _verdict(report, f"forward:{rel.name}", tgt_ctx, image, tgt_stab)
    for rel in u_tgt.relations:
        image = _hom_eval(rel.poly, bwd, src_ctx.mul, src_ctx.one, domain_opposite=True)
        _verdict(report, f"backward:{rel.name}", src_ctx, image, src_stab)

    gens = [Generator(k, i) for k in ("M", "H") for i in range(spec.dim)]
    for gen in gens:
        once = _hom_eval(NcPoly({Word((gen,)): ONE}), fwd, tgt_ctx.mul, tgt_ctx.one, False)
        back = _hom_eval(NcPoly(once), bwd, src_ctx.mul, src_ctx.one, True)
        diff = _add(back, {Word((gen,)): -ONE})
        _verdict(report, f"roundtrip:source:{_gen_name(spec, gen)}", src_ctx, diff, src_stab)
    for gen in gens:
        once = _hom_eval(NcPoly({Word((gen,)): ONE}), bwd, src_ctx.mul, src_ctx.one, True)
        fwd_again = _hom_eval(NcPoly(once), fwd, tgt_ctx.mul, tgt_ctx.one, False)
        diff = _add(fwd_again, {Word((gen,)): -ONE})
        _verdict(report, f"roundtrip:target:{_gen_name(spec, gen)}", tgt_ctx, diff, tgt_stab)
    return report


def _check_tensor(a, b, degree, candidate, op_second):
    if not a.is_unital or not b.is_unital:
        raise ValidationError("tensor isomorphism certification needs unital factors")
    src_alg = tensor(a, b)
    u_src = build_truncated_uea(src_alg, degree)
    ua = build_truncated_uea(a, degree)
    ub_plain = build_truncated_uea(b if not op_second else a, degree)
    ub = ub_plain.opposite_view() if op_second else ub_plain
    src_ctx = FreeContext(u_src)
    pair_ctx = PairContext(ua, ub)
    report = VerificationReport()
    nb = b.dim
    unflat = lambda idx: divmod(idx, nb)
    report.note("source: envelope of the tensor algebra; target: tensor of the envelopes")

    fwd_map = dict(candidate.get("forward", {})) if candidate else {}
    bwd_map = dict(candidate.get("backward", {})) if candidate else {}

    def fwd(gen):
        img = fwd_map.get((gen.kind, gen.index))
        if img is not None:
            return dict(img)
        i, j = unflat(gen.index)
        ma, mb = Word((Generator("M", i),)), Word((Generator("M", j),))
        ha, hb = Word((Generator("H", i),)), Word((Generator("H", j),))
        if gen.kind == "M":
            return {(ma, mb): ONE}
        return {(ma, hb): ONE, (ha, mb): ONE}

    # backward letter images: a -> a(x)1_B, b -> 1_A(x)b, linearly over units
    def bwd_a(gen):
        key = ("A", gen.kind, gen.index)
        img = bwd_map.get(key)
        if img is not None:
            return dict(img.terms)
        out = {}
        for j, vb in b.unit.items():
            w = Word((Generator(gen.kind, gen.index * nb + j),))
            out[w] = vb
        return out

    def bwd_b(gen):
        key = ("B", gen.kind, gen.index)
        img = bwd_map.get(key)
        if img is not None:
            return dict(img.terms)
        out = {}
        for i, va in a.unit.items():
            w = Word((Generator(gen.kind, i * nb + gen.index),))
            out[w] = va
        return out

    pair_stab = _Stability(
        f"{degree}/{degree + 1}",
        lambda: ua,
        lambda: build_truncated_uea(a, degree + 1),
    )
    pair_stab_b = _Stability(
        f"{degree}/{degree + 1}",
        lambda: ub_plain,
        lambda: build_truncated_uea(b if not op_second else a, degree + 1),
    )

    class _BothStable:
        def __init__(self, label):
            self.label = label

        def stable(self):
            return pair_stab.stable() and pair_stab_b.stable()

    both = _BothStable(f"{degree}/{degree + 1}")
    src_stab = _Stability(
        f"{degree}/{degree + 1}",
        lambda: u_src,
        lambda: build_truncated_uea(src_alg, degree + 1),
    )

    for rel in u_src.relations:
        image = _hom_eval(rel.poly, fwd, pair_ctx.mul, pair_ctx.one, domain_opposite=False)
        _verdict(report, f"forward:{rel.name}", pair_ctx, image, both)

    for rel in ua.relations:
        image = _hom_eval(rel.poly, bwd_a, src_ctx.mul, src_ctx.one, domain_opposite=ua.opposite)
        _verdict(report, f"backward:A:{rel.name}", src_ctx, image, src_stab)
    for rel in ub.relations:
        image = _hom_eval(rel.poly, bwd_b, src_ctx.mul, src_ctx.one, domain_opposite=ub.opposite)
        _verdict(report, f"backward:B:{rel.name}", src_ctx, image, src_stab)
    # cross commutation: images of the two factors must commute in the source
    gens_a = [Generator(k, i) for k in ("M", "H") for i in range(a.dim)]
    gens_b = [Generator(k, j) for k in ("M", "H") for j in range(b.dim)]
    for ga in gens_a:
        xa = bwd_a(ga)
        for gb in gens_b:
            xb = bwd_b(gb)
            comm = _add(src_ctx.mul(xa, xb), _scale(src_ctx.mul(xb, xa), -ONE))
            _verdict(
                report,
                f"backward:comm[{_gen_name(a, ga)},{_gen_name(b, gb)}]",
                src_ctx,
                comm,
                src_stab,
            )

    # round trips
    src_gens = [Generator(k, idx) for k in ("M", "H") for idx in range(src_alg.dim)]
    for gen in src_gens:
        once = _hom_eval(NcPoly({Word((gen,)): ONE}), fwd, pair_ctx.mul, pair_ctx.one, False)
        back = {}
        for (wa, wb), c in once.items():
            xa = _hom_eval(NcPoly({wa: ONE}), bwd_a, src_ctx.mul, src_ctx.one, ua.opposite)
            xb = _hom_eval(NcPoly({wb: ONE}), bwd_b, src_ctx.mul, src_ctx.one, ub.opposite)
            back = _add(back, _scale(src_ctx.mul(xa, xb), c))
        diff = _add(back, {Word((gen,)): -ONE})
        _verdict(report, f"roundtrip:source:{_gen_name(src_alg, gen)}", src_ctx, diff, src_stab)
    for side, gens, bwd_side, spec_side in (("A", gens_a, bwd_a, a), ("B", gens_b, bwd_b, b)):
        for gen in gens:
            back = bwd_side(gen)
            fwd_again = _hom_eval(NcPoly(back), fwd, pair_ctx.mul, pair_ctx.one, False)
            target_gen = (
                {(Word((gen,)), Word()): ONE} if side == "A" else {(Word(), Word((gen,))): ONE}
            )
            diff = _add(fwd_again, _scale(target_gen, -ONE))
            _verdict(report, f"roundtrip:target:{side}:{_gen_name(spec_side, gen)}", pair_ctx, diff, both)
    return report
