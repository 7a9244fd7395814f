import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lyhall.hall import enumerate_magma, is_basis_element, is_lts_hall
from lyhall.oracle import relation_instances, relation_span
from lyhall.rewrite import (
    DepthExceeded,
    FlattenCollision,
    Normalizer,
    lts_hall_rewrite,
    normalize,
    rewrite_bracket,
    rewrite_star,
)
from lyhall.terms import Generators, LinComb, bracket, parse, parse_lincomb, star

from _util import random_term

G2 = Generators(["a", "b"])
G3 = Generators(["a", "b", "c"])
a, b, c = G3.leaves


def P(text, gens=G3):
    return parse(text, gens)


def NF(x, gens=G3):
    if isinstance(x, str):
        x = parse_lincomb(x, gens)
    return normalize(x).value


# -- worked examples -----------------------------------------------------------


def test_normalize_examples():
    assert NF("a*a") == 0
    assert NF("a*b") == -LinComb.of(P("b*a"))
    assert NF("[b,a,a*a]") == 0
    assert NF("[a,b,c] + [b,c,a] + [c,a,b] + (a*b)*c + (b*c)*a + (c*a)*b") == 0


def test_rewrite_star_examples():
    assert rewrite_star(b, a) == LinComb.of(P("b*a"))
    assert rewrite_star(a, P("b*a")) == LinComb.of(P("(b*a)*a"), -1)
    assert rewrite_star(a, a) == 0


def test_rewrite_bracket_examples():
    assert rewrite_bracket(a, b, c) == LinComb.of(P("[b,a,c]"), -1)
    pulled = NF("c*[b,a,a] + [b,a,c]*a")
    assert rewrite_bracket(b, a, P("c*a")) == pulled
    reshuffled = NF("[c*a,b,c] - [b*a,c,c]")
    assert rewrite_bracket(P("c*b"), a, c) == reshuffled


def test_single_step_rules():
    assert Normalizer.step(a, b, c)[0] == "ANTISYM"
    assert Normalizer.step(b, a, P("c*a"))[0] == "LY5"
    assert Normalizer.step(P("c*b"), a, c)[0] == "LY4"
    assert Normalizer.step(c, b, a)[0] == "LY3"
    assert Normalizer.step(b, a, c) == (None, [])
    assert Normalizer.step(a, a, b)[0] == "LY2"


def test_flatten_collision_is_reported():
    # distinct terms with one flattened word can only come from non-basis input
    x, y = P("[b,a,[b,a,a]]"), P("[[b,a,b],a,a]")
    with pytest.raises(FlattenCollision):
        rewrite_star(x, y)


def test_lts_hall_rewrite_examples():
    assert lts_hall_rewrite(P("[a,b,a]")) == LinComb.of(P("[b,a,a]"), -1)
    assert lts_hall_rewrite(P("[b,a,a]")) == LinComb.of(P("[b,a,a]"))
    with pytest.raises(ValueError):
        lts_hall_rewrite(P("b*a"))


def test_lts_hall_rewrite_cyclic_case_is_sound():
    t = P("[c,b,a]")
    out = lts_hall_rewrite(t)
    assert any(s.is_star for s in out)
    assert all(is_lts_hall(s) for s in out)
    assert relation_span(G3, 3).contains(LinComb.of(t) - out)


@pytest.mark.parametrize("k, top", [(2, 5), (3, 4)])
def test_lts_hall_rewrite_exhaustive(k, top):
    for n in range(3, top + 1):
        span = relation_span(k, n)
        for t in enumerate_magma(k, n):
            if t.is_bracket:
                out = lts_hall_rewrite(t)
                assert all(is_lts_hall(s) for s in out)
                assert span.contains(LinComb.of(t) - out)


# -- soundness and projection ---------------------------------------------------


@pytest.mark.parametrize("k, top", [(2, 5), (3, 4)])
def test_soundness_and_projection_exhaustive(k, top):
    nz = Normalizer()
    for n in range(1, top + 1):
        span = relation_span(k, n)
        for t in enumerate_magma(k, n):
            out = nz.normalize(t).value
            assert all(is_basis_element(s) and s.size == n for s in out)
            assert span.contains(LinComb.of(t) - out)


def test_basis_elements_are_fixed_points():
    for n in range(1, 6):
        for t in enumerate_magma(G2, n):
            if is_basis_element(t):
                assert NF(LinComb.of(t)) == LinComb.of(t)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_idempotence(seed):
    rng = random.Random(seed)
    t = random_term(rng, G3, rng.randint(1, 6))
    once = NF(LinComb.of(t))
    assert NF(once) == once


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(-5, 5), st.integers(-5, 5))
def test_linearity(seed, p, q):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    x, y = random_term(rng, G2, n), random_term(rng, G2, n)
    lhs = NF(LinComb.of(x, p) + LinComb.of(y, q))
    assert lhs == NF(LinComb.of(x)) * p + NF(LinComb.of(y)) * q


def test_grading_is_preserved():
    rng = random.Random(11)
    for _ in range(100):
        t = random_term(rng, G3, rng.randint(1, 7))
        assert NF(LinComb.of(t)).degrees() <= {t.size}


def test_relation_instances_normalize_to_zero():
    for n in range(1, 6):
        mag = lambda s: enumerate_magma(G2, s).elements  # noqa: E731
        for rule, row in relation_instances(mag, n):
            assert NF(LinComb(row)) == 0, rule


def test_termination_up_to_size_six():
    nz = Normalizer()
    rng = random.Random(5)
    for _ in range(300):
        t = random_term(rng, G3, rng.randint(4, 6))
        out = nz.normalize(t).value
        assert all(is_basis_element(s) for s in out)


def test_certificate_counts_rules():
    nz = Normalizer()
    nf = nz.normalize(P("[c*b,a,c]"))
    assert nf.certificate == {"LY4": 1, "ANTISYM": 1}
    assert str(nf) == "1 [(c*a),b,c] - 1 [(b*a),c,c]"


def test_depth_guard():
    nz = Normalizer(depth_factor=0)
    with pytest.raises(DepthExceeded) as err:
        nz.normalize(P("[a,b,c]"))
    assert "[a,b,c]" in str(err.value)


def test_normalizer_is_thread_safe():
    from concurrent.futures import ThreadPoolExecutor

    rng = random.Random(8)
    terms = [random_term(rng, G2, 5) for _ in range(40)]
    expected = [Normalizer().normalize(t).value for t in terms]
    shared = Normalizer()
    with ThreadPoolExecutor(4) as pool:
        got = list(pool.map(lambda t: shared.normalize(t).value, terms))
    assert got == expected


def test_star_of_normal_forms():
    x, y = P("[b,a,a]"), P("(b*a)*a")
    assert NF(LinComb.of(star(y, x))) == -NF(LinComb.of(star(x, y)))
    assert NF(LinComb.of(bracket(x, x, a))) == 0
