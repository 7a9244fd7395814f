import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lyhall.terms import (
    Generators,
    LinComb,
    ParseError,
    UnknownGenerator,
    Word,
    bracket,
    compare_terms,
    compare_words,
    flatten,
    leaf,
    parse,
    parse_lincomb,
    size,
    star,
    to_text,
)

from _util import random_term

G2 = Generators(["a", "b"])
G3 = Generators(["a", "b", "c"])
a, b, c = G3.leaves


def P(text, gens=G3):
    return parse(text, gens)


# -- size ----------------------------------------------------------------------


def test_size_examples():
    assert size(a) == 1
    assert size(star(star(a, a), a)) == 3
    assert size(bracket(a, star(a, a), a)) == 4


def test_hash_consing_gives_identity():
    assert star(a, b) is star(a, b)
    assert P("[a,(b*a),c]") is bracket(a, star(b, a), c)
    assert leaf("a", 0) is a


# -- the term order ------------------------------------------------------------


def test_compare_examples():
    assert compare_terms(a, b) == -1
    assert compare_terms(P("[a,a,a]"), P("a*(a*a)")) == 1
    assert compare_terms(P("b*a"), P("a*b")) == 1
    assert compare_terms(P("b*a"), P("b*a")) == 0


def test_size_dominates_order():
    assert compare_terms(P("c"), P("a*a")) == -1
    assert compare_terms(P("(c*c)*c"), P("[a,a,a]*a")) == -1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_order_is_total_and_antisymmetric(seed):
    rng = random.Random(seed)
    x = random_term(rng, G3, rng.randint(1, 6))
    y = random_term(rng, G3, rng.randint(1, 6))
    cxy, cyx = compare_terms(x, y), compare_terms(y, x)
    assert cxy == -cyx
    assert (cxy == 0) == (x is y)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_order_is_transitive(seed):
    rng = random.Random(seed)
    x, y, z = (random_term(rng, G2, rng.randint(1, 5)) for _ in range(3))
    x, y, z = sorted([x, y, z], key=lambda t: t.key)
    assert compare_terms(x, y) <= 0 and compare_terms(y, z) <= 0
    assert compare_terms(x, z) <= 0


# -- flatten and words ---------------------------------------------------------


def test_flatten_letter():
    w = flatten(a)
    assert len(w) == 1 and w.letters == (a,)


def test_flatten_ternary_word():
    gens = Generators(["a", "l", "g", "e", "b", "r"])
    t = parse("[a,[l,g,e],[b,r,a]]", gens)
    assert "".join(x.name for x in flatten(t)) == "algebra"


def test_flatten_keeps_star_letters_atomic():
    t = P("[b*a, c, [a,a,b]]")
    assert flatten(t).letters == (P("b*a"), c, a, a, b)


def test_word_rejects_bracket_letter():
    with pytest.raises(ValueError):
        Word((P("[b,a,a]"),))


def test_compare_words_examples():
    assert compare_words(flatten(b), flatten(a)) == 1
    assert compare_words(Word((a, a)), flatten(b)) == 1
    assert compare_words(flatten(P("b*a")), flatten(b)) == 1
    assert compare_terms(P("b*a"), b) == 1


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000))
def test_flatten_length_law(seed):
    rng = random.Random(seed)
    t = random_term(rng, G3, rng.randint(1, 10))
    w = flatten(t)
    # letters are never brackets and their sizes add up to the size of t
    assert all(not x.is_bracket for x in w)
    assert sum(x.size for x in w) == t.size
    if t.is_bracket:
        assert len(w) == sum(len(flatten(s)) for s in t.args)
    else:
        assert len(w) == 1


# -- parser and printer --------------------------------------------------------


def test_parse_examples():
    assert P("[b,a,a]") is bracket(b, a, a)
    assert P("(b*a)*b") is star(star(b, a), b)
    assert P("b*a*b") is star(star(b, a), b)


@pytest.mark.parametrize("bad, offset", [("b**a", 2), ("[a,b]", 4), ("(a*b", 4), ("a b", 2), ("", 0)])
def test_parse_errors_report_offset(bad, offset):
    with pytest.raises(ParseError) as err:
        P(bad)
    assert err.value.offset == offset


def test_unknown_generator():
    with pytest.raises(UnknownGenerator):
        parse("a*z", G2)


def test_print_examples():
    assert to_text(P("[b*a, c, [a,a,b]]")) == "[(b*a),c,[a,a,b]]"
    assert to_text(P("a*(a*a)")) == "(a*(a*a))"


def test_parser_round_trip_random():
    rng = random.Random(2024)
    for _ in range(1000):
        t = random_term(rng, G3, rng.randint(1, 12))
        assert parse(to_text(t), G3) is t


def test_generators_validation():
    with pytest.raises(ValueError):
        Generators(["a", "a"])
    with pytest.raises(ValueError):
        Generators(["1x"])
    assert Generators.standard(3).names == ("a", "b", "c")
    assert [x.rank for x in Generators(["z", "y"]).leaves] == [0, 1]


# -- linear combinations -------------------------------------------------------


def test_lincomb_arithmetic():
    x, y = P("b*a"), P("[b,a,a]")
    s = LinComb.of(x, 2) - LinComb.of(y, Fraction(1, 2))
    assert s[x] == 2 and s[y] == Fraction(-1, 2)
    assert s - s == 0
    assert 3 * s == s + s + s
    assert (s * 0) == LinComb()
    assert not s.is_homogeneous()


def test_lincomb_text_is_largest_first():
    s = parse_lincomb("-3 a + ((b*a)*a) - 1/2 [b,a,a]", G2)
    assert s.to_text() == "-1/2 [b,a,a] + 1 ((b*a)*a) - 3 a"
    assert parse_lincomb(s.to_text(), G2) == s
    assert parse_lincomb("0", G2) == 0
