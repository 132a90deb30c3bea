from fractions import Fraction

import pytest

from dpforge.errors import ParseError
from dpforge.freealg import EMPTY_WORD, Generator, NcPoly, Word, parse_poly, render_poly

LABELS = ("h", "e", "f")


def W(*gens):
    return Word(tuple(Generator(k, i) for k, i in gens))


def test_generator_order_m_before_h():
    assert Generator("M", 2) < Generator("H", 0)
    assert Generator("M", 0) < Generator("M", 1)
    assert Generator("H", 1) < Generator("H", 2)
    with pytest.raises(ValueError):
        Generator("X", 0)


def test_word_deglex():
    assert EMPTY_WORD < W(("M", 0))
    assert W(("H", 2)) < W(("M", 0), ("M", 0))  # degree dominates
    assert W(("M", 0), ("H", 2)) < W(("M", 1), ("M", 0))  # then leftmost letter
    assert W(("M", 0)) * W(("H", 1)) == W(("M", 0), ("H", 1))
    assert W(("M", 0), ("H", 1)).reversed() == W(("H", 1), ("M", 0))


def test_ncpoly_arithmetic_and_degree():
    p = NcPoly.generator("M", 0) + NcPoly.generator("H", 1, Fraction(1, 2))
    q = NcPoly.generator("M", 0)
    assert (p - q).terms == {W(("H", 1)): Fraction(1, 2)}
    assert NcPoly.zero().degree == 0 and NcPoly.one().degree == 0
    assert (p * p).degree == 2
    assert p.scale(0).is_zero()
    assert (p * NcPoly.one()) == p == (NcPoly.one() * p)


def test_ncpoly_product_is_concatenation_not_commutative():
    a, b = NcPoly.generator("M", 0), NcPoly.generator("H", 0)
    assert a * b != b * a
    assert (a * b).terms == {W(("M", 0), ("H", 0)): Fraction(1)}


def test_render_leading_term_first():
    p = NcPoly({W(("M", 0)): Fraction(2), W(("M", 0), ("H", 1)): Fraction(-1), EMPTY_WORD: Fraction(1, 3)})
    assert render_poly(p, LABELS) == "-M[h].H[e] + 2*M[h] + 1/3"
    assert render_poly(NcPoly.zero(), LABELS) == "0"
    assert render_poly(NcPoly.one(), LABELS) == "1"


@pytest.mark.parametrize(
    "text",
    ["0", "1", "M[h]", "-M[e]", "3/2*M[h].H[e] + -1*H[f] + 2", "M[h].M[h].H[f]", "5 - H[e]"],
)
def test_parse_render_round_trip(text):
    p = parse_poly(text, LABELS)
    assert parse_poly(render_poly(p, LABELS), LABELS) == p


@pytest.mark.parametrize("bad", ["", "M[zz]", "M[h", "2*", "Q[h]", "M[h]..H[e]"])
def test_parse_rejects(bad):
    with pytest.raises(ParseError):
        parse_poly(bad, LABELS)
