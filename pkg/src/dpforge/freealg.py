"""Words and rational-coefficient polynomials in the free algebra on M/H symbols.

Generators come in two families, one multiplicative (``M``) and one Lie
(``H``), both indexed by basis positions of a finite-dimensional algebra.
The monomial order is degree-lexicographic with every M-generator preceding
every H-generator; it is a total order on words, so leading terms, normal
words and deterministic reports are all well defined.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .linalg import ZERO, ONE, format_scalar, parse_scalar


class Generator:
    """A single symbol ``M_i`` or ``H_i``; ordered M-before-H, then by index."""

    __slots__ = ("kind", "index", "_key")

    def __init__(self, kind, index):
        if kind not in ("M", "H"):
            raise ValueError(f"generator kind must be 'M' or 'H', got {kind!r}")
        self.kind = kind
        self.index = index
        self._key = (0 if kind == "M" else 1, index)

    def sort_key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, Generator) and self._key == other._key

    def __lt__(self, other):
        return self._key < other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"{self.kind}_{self.index}"


class Word:
    """A monomial: a finite sequence of generators; the empty word is 1."""

    __slots__ = ("letters", "_key", "_hash")

    def __init__(self, letters=()):
        self.letters = tuple(letters)
        self._key = (len(self.letters), tuple(g._key for g in self.letters))
        self._hash = hash(self._key)

    @property
    def degree(self):
        return len(self.letters)

    def __mul__(self, other):
        return Word(self.letters + other.letters)

    def reversed(self):
        return Word(self.letters[::-1])

    def __eq__(self, other):
        return isinstance(other, Word) and self._key == other._key

    def __lt__(self, other):
        # degree-lexicographic
        return self._key < other._key

    def __le__(self, other):
        return self._key <= other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.letters:
            return "1"
        return ".".join(map(repr, self.letters))


EMPTY_WORD = Word()


class NcPoly:
    """Formal rational linear combination of words; zero coefficients dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        items = terms.items() if hasattr(terms, "items") else terms
        t = {}
        for w, c in items:
            c = Fraction(c)
            if not c:
                continue
            nv = t.get(w, ZERO) + c
            if nv:
                t[w] = nv
            else:
                del t[w]
        self.terms = t

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({EMPTY_WORD: ONE})

    @classmethod
    def generator(cls, kind, index, coeff=ONE):
        return cls({Word((Generator(kind, index),)): coeff})

    def is_zero(self):
        return not self.terms

    @property
    def degree(self):
        """Max word length; 0 for the zero polynomial by convention."""
        if not self.terms:
            return 0
        return max(w.degree for w in self.terms)

    def __add__(self, other):
        t = dict(self.terms)
        for w, c in other.terms.items():
            nv = t.get(w, ZERO) + c
            if nv:
                t[w] = nv
            else:
                del t[w]
        p = object.__new__(NcPoly)
        p.terms = t
        return p

    def __sub__(self, other):
        t = dict(self.terms)
        for w, c in other.terms.items():
            nv = t.get(w, ZERO) - c
            if nv:
                t[w] = nv
            else:
                del t[w]
        p = object.__new__(NcPoly)
        p.terms = t
        return p

    def __neg__(self):
        p = object.__new__(NcPoly)
        p.terms = {w: -c for w, c in self.terms.items()}
        return p

    def scale(self, c):
        c = Fraction(c)
        p = object.__new__(NcPoly)
        p.terms = {} if not c else {w: c * v for w, v in self.terms.items()}
        return p

    def __mul__(self, other):
        """Concatenation product."""
        t = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 * w2
                nv = t.get(w, ZERO) + c1 * c2
                if nv:
                    t[w] = nv
                else:
                    del t[w]
        p = object.__new__(NcPoly)
        p.terms = t
        return p

    def __eq__(self, other):
        return isinstance(other, NcPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self, reverse=True):
        """Terms ordered by word; leading (largest) first by default."""
        return sorted(self.terms.items(), key=lambda wc: wc[0]._key, reverse=reverse)

    def __repr__(self):
        if not self.terms:
            return "NcPoly(0)"
        return "NcPoly(" + " + ".join(f"{format_scalar(c)}*{w!r}" for w, c in self.sorted_terms()) + ")"


def render_poly(poly, labels):
    """Canonical text form: terms ``coef*M[lbl].H[lbl]`` joined by `` + ``.

    Terms appear leading word first; coefficient 1 is omitted, -1 renders as
    a bare sign, and the empty word renders as the coefficient alone.
    """
    if poly.is_zero():
        return "0"
    parts = []
    for w, c in poly.sorted_terms():
        word = ".".join(f"{g.kind}[{labels[g.index]}]" for g in w.letters)
        if not w.letters:
            parts.append(format_scalar(c))
        elif c == 1:
            parts.append(word)
        elif c == -1:
            parts.append("-" + word)
        else:
            parts.append(f"{format_scalar(c)}*{word}")
    return " + ".join(parts)


_GEN_RE = re.compile(r"^([MH])\[([^\]]*)\]$")


def parse_word(text, label_index):
    """Parse ``M[lbl].H[lbl]`` (or ``1``) into a Word."""
    text = text.strip()
    if text == "1":
        return EMPTY_WORD
    letters = []
    for piece in text.split("."):
        m = _GEN_RE.match(piece.strip())
        if not m:
            raise ParseError(f"bad generator {piece!r}")
        kind, label = m.groups()
        if label not in label_index:
            raise ParseError(f"unknown basis label {label!r}")
        letters.append(Generator(kind, label_index[label]))
    return Word(letters)


def parse_poly(text, labels):
    """Inverse of :func:`render_poly`; accepts ``-`` separators as well."""
    label_index = {lbl: i for i, lbl in enumerate(labels)}
    text = text.strip()
    if not text:
        raise ParseError("empty polynomial expression")
    if text == "0":
        return NcPoly.zero()
    normalized = text.replace(" - ", " + -")
    terms = []
    for chunk in normalized.split(" + "):
        chunk = chunk.strip()
        if not chunk:
            raise ParseError(f"empty term in {text!r}")
        sign = ONE
        if chunk.startswith("-") and not chunk[1:].lstrip()[:1].isdigit():
            sign = -ONE
            chunk = chunk[1:].lstrip()
        if "*" in chunk:
            coef_text, word_text = chunk.split("*", 1)
            coef = sign * parse_scalar(coef_text)
            word = parse_word(word_text, label_index)
        elif chunk.startswith(("M[", "H[")):
            coef = sign
            word = parse_word(chunk, label_index)
        else:
            coef = sign * parse_scalar(chunk)
            word = EMPTY_WORD
        terms.append((word, coef))
    return NcPoly(terms)
