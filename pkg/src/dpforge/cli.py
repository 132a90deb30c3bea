"""Batch front end: file in, machine-readable report out, stable exit codes.

Exit 0 means every check passed or was certified, 1 means a check failed or
was not certified, 2 means the input or usage was invalid.  Reports are
deterministic: identical inputs produce byte-identical JSON.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from . import __version__
from .algebra import (
    AlgebraSpec,
    load_json,
    module_from_dict,
    morphism_from_dict,
    save_spec,
    spec_from_dict,
)
from .axioms import profile_for, verify_algebra, verify_module, verify_morphism
from .constructions import check_ideal, cohomology, opposite, quotient, tensor
from .enveloping import build_stable_uea, build_truncated_uea, check_D_preserves_ideal
from .errors import EngineError, NotAnIdeal, NotWellDefined, ParseError, ValidationError
from .freealg import parse_poly, parse_word, render_poly, NcPoly
from .isos import check_generator_iso
from .linalg import SparseVector, parse_scalar, row_reduce
from .ptriple import PTriple, check_ptriple, check_remark33
from .report import VerificationReport

SCHEMA = "dpforge-report/1"
DEFAULT_MAX_DEGREE = 6


def _max_degree():
    raw = os.environ.get("DPFORGE_MAX_DEGREE")
    if raw is None:
        return DEFAULT_MAX_DEGREE
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"DPFORGE_MAX_DEGREE must be an integer, got {raw!r}")


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return "sha256:" + h.hexdigest()


def parse_and_validate(path, algebra=None, domain=None, codomain=None):
    """Load and validate an algebra, morphism, or module file."""
    doc = load_json(path)
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    if "mdim" in doc:
        if algebra is None:
            raise ParseError(f"{path}: module files need --algebra pointing at their algebra spec")
        return module_from_dict(doc, algebra, where=str(path))
    if "matrix" in doc and "dim" not in doc:
        if domain is None or codomain is None:
            raise ParseError(f"{path}: morphism files need --domain and --codomain spec files")
        return morphism_from_dict(doc, domain, codomain, where=str(path))
    return spec_from_dict(doc, where=str(path))


def _load_spec(path):
    obj = parse_and_validate(path)
    if not isinstance(obj, AlgebraSpec):
        raise ParseError(f"{path}: expected an algebra spec file")
    return obj


def _override_lambda(spec, lam_text):
    lam = parse_scalar(lam_text)
    return AlgebraSpec(spec.name, spec.labels, lam, spec.variant, spec.product, spec.bracket, spec.diff, spec.unit)


def _load_subspace(path, spec):
    doc = load_json(path)
    vectors = doc.get("vectors")
    if not isinstance(vectors, list):
        raise ParseError(f"{path}: expected {{\"vectors\": [{{label: scalar}}]}}")
    index = spec.label_index()
    rows = []
    for entry in vectors:
        if not isinstance(entry, dict):
            raise ParseError(f"{path}: each vector must be an object")
        row = {}
        for lbl, text in entry.items():
            if lbl not in index:
                raise ParseError(f"{path}: unknown basis label {lbl!r}")
            row[index[lbl]] = parse_scalar(text)
        rows.append(SparseVector(row))
    return row_reduce(rows)


def _load_map_matrix(path, source, target):
    doc = load_json(path)
    matrix_doc = doc.get("matrix")
    if not isinstance(matrix_doc, dict):
        raise ParseError(f"{path}: expected an object with a \"matrix\" field")
    s_index, t_index = source.label_index(), target.label_index()
    matrix = {}
    for col_lbl, col in matrix_doc.items():
        if col_lbl not in s_index:
            raise ParseError(f"{path}: unknown source label {col_lbl!r}")
        cleaned = {}
        for row_lbl, text in col.items():
            if row_lbl not in t_index:
                raise ParseError(f"{path}: unknown target label {row_lbl!r}")
            cleaned[t_index[row_lbl]] = parse_scalar(text)
        matrix[s_index[col_lbl]] = cleaned
    return matrix


_GEN_KEY_ERR = "map keys look like M[label] or H[label], optionally prefixed A:/B: for backward tensor maps"


def _parse_gen_key(key, spec):
    from .freealg import _GEN_RE

    m = _GEN_RE.match(key)
    if not m:
        raise ParseError(f"bad generator key {key!r}; {_GEN_KEY_ERR}")
    kind, label = m.groups()
    index = spec.label_index()
    if label not in index:
        raise ParseError(f"unknown basis label {label!r} in map key {key!r}")
    return kind, index[label]


def _load_candidate(path, kind, src_spec, a_spec, b_spec):
    from .freealg import Word

    doc = load_json(path)
    candidate = {"forward": {}, "backward": {}}
    for direction in ("forward", "backward"):
        for key, value in (doc.get(direction) or {}).items():
            if kind == "opposite":
                gen = _parse_gen_key(key, src_spec)
                candidate[direction][gen] = parse_poly(value, src_spec.labels)
            elif direction == "forward":
                gen = _parse_gen_key(key, src_spec)
                if not isinstance(value, list):
                    raise ParseError(f"{path}: tensor forward values are [[coef, wordA, wordB], ...]")
                elt = {}
                for coef, wa, wb in value:
                    word_a = parse_word(wa, a_spec.label_index())
                    word_b = parse_word(wb, b_spec.label_index())
                    elt[(word_a, word_b)] = parse_scalar(coef)
                candidate[direction][gen] = elt
            else:
                side, _, gen_text = key.partition(":")
                if side not in ("A", "B") or not gen_text:
                    raise ParseError(f"{path}: backward keys are A:M[lbl] or B:H[lbl]")
                spec_side = a_spec if side == "A" else b_spec
                gk, gi = _parse_gen_key(gen_text, spec_side)
                candidate[direction][(side, gk, gi)] = parse_poly(value, src_spec.labels)
    return candidate


def _emit(doc, fmt, stream):
    if fmt == "json":
        stream.write(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=True))
        stream.write("\n")
        return
    status = doc.get("status", "?")
    stream.write(f"status: {status}\n")
    for key in sorted(doc):
        if key in ("status", "checks", "schema", "tool", "command", "inputs", "notes"):
            continue
        stream.write(f"{key}: {json.dumps(doc[key], sort_keys=True, ensure_ascii=True)}\n")
    for note in doc.get("notes", ()):
        stream.write(f"note: {note}\n")
    for check in doc.get("checks", ()):
        stream.write(f"  {check['status']:4s}  {check['check']}\n")
        if "witness" in check:
            stream.write(f"        witness: {json.dumps(check['witness'], sort_keys=True, ensure_ascii=True)}\n")
    if "error" in doc:
        stream.write(f"error: {doc['error']['type']}: {doc['error']['message']}\n")


def _base_doc(args, inputs):
    return {
        "schema": SCHEMA,
        "tool": {"name": "dpforge", "version": __version__},
        "command": list(args),
        "inputs": {path: _digest(path) for path in inputs},
    }


def _finish(doc, report=None, extra=None):
    if report is not None:
        body = report.to_dict()
        doc["checks"] = body["checks"]
        if "notes" in body:
            doc["notes"] = body["notes"]
        doc["status"] = body["status"]
    if extra:
        doc.update(extra)
    doc.setdefault("status", "pass")
    return doc


def _build_parser():
    parser = argparse.ArgumentParser(prog="dpforge", description=__doc__)
    parser.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("verify", help="verify axioms of a spec, morphism, or module file")
    p.add_argument("path")
    p.add_argument("--profile", choices=("paper", "strict"), default="paper")
    p.add_argument("--lambda", dest="lam", metavar="p/q")
    p.add_argument("--spot-checks", type=int, default=0)
    p.add_argument("--algebra", help="algebra spec file for module inputs")
    p.add_argument("--domain", help="domain spec file for morphism inputs")
    p.add_argument("--codomain", help="codomain spec file for morphism inputs")

    p = sub.add_parser("construct", help="run a closure construction and write the result")
    p.add_argument("what", choices=("opposite", "tensor", "quotient", "cohomology"))
    p.add_argument("paths", nargs="+", help="one spec file (two for tensor)")
    p.add_argument("--ideal", help="subspace file for quotient")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--profile", choices=("paper", "strict"), default="paper")

    p = sub.add_parser("uea", help="truncated enveloping algebra queries")
    p.add_argument("what", choices=("dim", "relations", "check-derivation", "remark33"))
    p.add_argument("path")
    p.add_argument("--degree", type=int, default=3)

    p = sub.add_parser("ptriple", help="check factoring data (B, f, g) for a source spec")
    p.add_argument("what", choices=("check",))
    p.add_argument("path")
    p.add_argument("--target", required=True)
    p.add_argument("--f", dest="f_path", required=True)
    p.add_argument("--g", dest="g_path", required=True)

    p = sub.add_parser("iso", help="generator-level isomorphism certification")
    p.add_argument("what", choices=("opposite", "tensor", "op-tensor"))
    p.add_argument("paths", nargs="+")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--map", dest="map_path")

    p = sub.add_parser("reduce", help="normal form of a polynomial in a truncation")
    p.add_argument("path")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--expr", required=True)
    return parser


def _cmd_verify(ns, doc):
    if ns.algebra:
        alg = _load_spec(ns.algebra)
        doc["inputs"][ns.algebra] = _digest(ns.algebra)
        mod = parse_and_validate(ns.path, algebra=alg)
        return _finish(doc, verify_module(mod), {"subject": "module", "name": mod.name})
    if ns.domain or ns.codomain:
        if not (ns.domain and ns.codomain):
            raise ParseError("morphism verification needs both --domain and --codomain")
        dom, cod = _load_spec(ns.domain), _load_spec(ns.codomain)
        doc["inputs"][ns.domain] = _digest(ns.domain)
        doc["inputs"][ns.codomain] = _digest(ns.codomain)
        mor = parse_and_validate(ns.path, domain=dom, codomain=cod)
        return _finish(doc, verify_morphism(mor), {"subject": "morphism"})
    spec = _load_spec(ns.path)
    if ns.lam is not None:
        spec = _override_lambda(spec, ns.lam)
    report = verify_algebra(spec, profile_for(spec, ns.profile), spot_checks=ns.spot_checks)
    return _finish(doc, report, {"subject": "algebra", "name": spec.name, "profile": ns.profile})


def _cmd_construct(ns, doc):
    report = VerificationReport()
    if ns.what == "tensor":
        if len(ns.paths) != 2:
            raise ParseError("construct tensor needs two spec files")
        a, b = _load_spec(ns.paths[0]), _load_spec(ns.paths[1])
        out = tensor(a, b)
    elif ns.what == "opposite":
        out = opposite(_load_spec(ns.paths[0]))
    elif ns.what == "quotient":
        spec = _load_spec(ns.paths[0])
        if not ns.ideal:
            raise ParseError("construct quotient needs --ideal")
        doc["inputs"][ns.ideal] = _digest(ns.ideal)
        ideal = _load_subspace(ns.ideal, spec)
        ok, ideal_report = check_ideal(spec, ideal)
        report.extend(ideal_report, prefix="ideal:")
        if not ok:
            return _finish(doc, report, {"construction": ns.what})
        out, _ = quotient(spec, ideal)
    else:
        spec = _load_spec(ns.paths[0])
        try:
            out, coho_report = cohomology(spec)
        except NotWellDefined as exc:
            report.add("well-defined", False, exc.witness or {"condition": exc.condition})
            return _finish(doc, report, {"construction": ns.what})
        report.extend(coho_report, prefix="cohomology:")
    verification = verify_algebra(out, profile_for(out, ns.profile))
    report.extend(verification, prefix="output:")
    save_spec(out, ns.output)
    return _finish(doc, report, {"construction": ns.what, "output": ns.output, "output_dim": out.dim})


def _cmd_uea(ns, doc):
    spec = _load_spec(ns.path)
    cap = _max_degree()
    if ns.degree > cap:
        raise ParseError(f"degree {ns.degree} exceeds DPFORGE_MAX_DEGREE={cap}")
    if ns.what == "relations":
        rels = build_truncated_uea(spec, 2).relations
        return _finish(
            doc,
            None,
            {"relations": {r.name: render_poly(r.poly, spec.labels) for r in rels}},
        )
    if ns.what == "dim":
        u, stable = build_stable_uea(spec, ns.degree)
        return _finish(
            doc,
            None,
            {
                "degree": ns.degree,
                "normal_words": len(u.normal_words),
                "stable": stable,
                "padding_degree": u.pad_bound,
                "words": [render_poly(NcPoly({w: 1}), spec.labels) for w in u.normal_words],
            },
        )
    u = build_truncated_uea(spec, ns.degree)
    if ns.what == "check-derivation":
        return _finish(doc, check_D_preserves_ideal(u), {"degree": ns.degree})
    return _finish(doc, check_remark33(u), {"degree": ns.degree})


def _cmd_ptriple(ns, doc):
    src = _load_spec(ns.path)
    tgt = _load_spec(ns.target)
    doc["inputs"][ns.target] = _digest(ns.target)
    doc["inputs"][ns.f_path] = _digest(ns.f_path)
    doc["inputs"][ns.g_path] = _digest(ns.g_path)
    f = _load_map_matrix(ns.f_path, src, tgt)
    g = _load_map_matrix(ns.g_path, src, tgt)
    triple = PTriple(src, tgt, f, g)
    return _finish(doc, check_ptriple(triple), {"source": src.name, "target": tgt.name})


def _cmd_iso(ns, doc):
    cap = _max_degree()
    if ns.degree > cap:
        raise ParseError(f"degree {ns.degree} exceeds DPFORGE_MAX_DEGREE={cap}")
    kind = ns.what.replace("-", "_")
    specs = tuple(_load_spec(p) for p in ns.paths)
    if kind == "tensor" and len(specs) != 2:
        raise ParseError("iso tensor needs two spec files")
    if kind in ("opposite", "op_tensor") and len(specs) != 1:
        raise ParseError(f"iso {ns.what} needs one spec file")
    candidate = None
    if ns.map_path:
        doc["inputs"][ns.map_path] = _digest(ns.map_path)
        a_spec = specs[0]
        b_spec = specs[1] if kind == "tensor" else specs[0]
        src_spec = specs[0] if kind == "opposite" else None
        if kind != "opposite":
            from .constructions import opposite as _op, tensor as _t

            src_spec = _t(a_spec, b_spec if kind == "tensor" else _op(a_spec))
        candidate = _load_candidate(ns.map_path, kind, src_spec, a_spec, b_spec)
    report = check_generator_iso(kind, specs, ns.degree, candidate)
    return _finish(doc, report, {"kind": ns.what, "degree": ns.degree})


def _cmd_reduce(ns, doc):
    spec = _load_spec(ns.path)
    cap = _max_degree()
    if ns.degree > cap:
        raise ParseError(f"degree {ns.degree} exceeds DPFORGE_MAX_DEGREE={cap}")
    u = build_truncated_uea(spec, ns.degree)
    poly = parse_poly(ns.expr, spec.labels)
    reduced = u.reduce(poly)
    # a reduction is a query: the command succeeds whatever the normal form is
    return _finish(
        doc,
        None,
        {
            "degree": ns.degree,
            "input": render_poly(poly, spec.labels),
            "normal_form": render_poly(reduced, spec.labels),
            "certified_zero": reduced.is_zero(),
        },
    )


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        inputs = []
        if getattr(ns, "path", None):
            inputs.append(ns.path)
        for p in getattr(ns, "paths", []) or []:
            inputs.append(p)
        doc = _base_doc(argv, inputs)
        handler = {
            "verify": _cmd_verify,
            "construct": _cmd_construct,
            "uea": _cmd_uea,
            "ptriple": _cmd_ptriple,
            "iso": _cmd_iso,
            "reduce": _cmd_reduce,
        }[ns.verb]
        doc = handler(ns, doc)
    except EngineError as exc:
        err_doc = {
            "schema": SCHEMA,
            "tool": {"name": "dpforge", "version": __version__},
            "command": argv,
            "status": "error",
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        _emit(err_doc, ns.format if hasattr(ns, "format") else "json", sys.stdout)
        return 2
    _emit(doc, ns.format, sys.stdout)
    return 0 if doc.get("status") == "pass" else 1


if __name__ == "__main__":
    raise SystemExit(main())
