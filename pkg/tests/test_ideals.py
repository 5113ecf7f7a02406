import random

import pytest
from hypothesis import given, settings, strategies as st

from unisemi.backends import Abelian, Free, Numerical
from unisemi.classes import Flavor
from unisemi.errors import UsageError
from unisemi.ideals import (constructible, empty, format_ideal, ideal_eq, ideal_meet, ideal_preimage,
                            ideal_shift, ideal_translate, ideal_union, independence_check,
                            parse_ideal, positive_preimage, principal, w_idempotent_eq, w_is_zero,
                            w_layer_relations, whole)
from unisemi.uis import eval_word, is_idempotent

import oracles

F2, A2, N23 = Free(2), Abelian(2), Numerical((2, 3))
a, b = (1,), (2,)


def test_translate_examples():
    assert format_ideal(N23, principal(N23, 2)) == "set{2}+ray(4)"
    assert ideal_translate(F2, a, principal(F2, b)) == principal(F2, (1, 2))
    for backend in [F2, A2, N23]:
        X = principal(backend, backend.generators[0][1])
        assert ideal_translate(backend, backend.unit, X) == X


def test_preimage_examples():
    # frozen from oracles.word_range(N23, "3* 2", ...): every x >= 2
    assert format_ideal(N23, ideal_preimage(N23, 3, principal(N23, 2))) == "set{}+ray(2)"
    assert ideal_preimage(F2, a, principal(F2, b)).is_empty
    assert ideal_preimage(F2, a, principal(F2, a)) == whole(F2)
    with pytest.raises(UsageError):
        ideal_preimage(N23, 1, whole(N23))


def test_meet_union_examples():
    U = ideal_union(N23, principal(N23, 2), principal(N23, 3))
    assert U == ideal_preimage(N23, 3, principal(N23, 2))
    assert ideal_meet(F2, principal(F2, a), principal(F2, b)).is_empty
    assert ideal_meet(A2, principal(A2, (1, 0)), principal(A2, (0, 1))) == principal(A2, (1, 1))
    assert format_ideal(F2, ideal_union(F2, principal(F2, b), principal(F2, a))) == "union{aS;bS}"


def test_constructible_examples():
    assert format_ideal(N23, constructible(N23, "3* 2")) == "set{}+ray(2)"
    assert format_ideal(F2, constructible(F2, "a")) == "aS"
    assert format_ideal(F2, constructible(F2, "a* b")) == "EMPTY"


def test_independence_examples():
    X = [principal(N23, 2), principal(N23, 3)]
    assert independence_check(N23, X, constructible(N23, "3* 2"))
    assert not independence_check(F2, [principal(F2, a), principal(F2, b)], whole(F2))
    Y = principal(A2, (2, 1))
    assert independence_check(A2, [Y], Y)


def test_w_examples():
    assert w_is_zero(F2, "a a* b b*")
    x = eval_word(F2, "a a* b b*", Flavor.STAR)
    assert is_idempotent(x) and x.cls.canon == {(), a, b}
    assert w_idempotent_eq(F2, "a a*", "a a*")
    assert w_idempotent_eq(N23, "2 2* 3 3*", "3 3* 2 2*")
    with pytest.raises(UsageError):
        w_idempotent_eq(F2, "a", "a a*")


def test_serialization():
    assert format_ideal(N23, whole(N23)) == "set{0}+ray(2)"
    assert format_ideal(A2, ideal_union(A2, principal(A2, (0, 2)), principal(A2, (1, 0)))) == "up{(0,2);(1,0)}"
    assert format_ideal(F2, whole(F2)) == "S"
    for backend in [F2, A2, N23]:
        for X in [empty(backend), whole(backend), principal(backend, backend.generators[-1][1])]:
            assert parse_ideal(backend, format_ideal(backend, X)) == X


def test_positive_preimage():
    assert format_ideal(N23, positive_preimage(N23, -1)) == "set{}+ray(3)"
    assert positive_preimage(F2, F2.parse("a b*")) == principal(F2, b)
    assert positive_preimage(F2, F2.parse("a* b")).is_empty
    assert positive_preimage(A2, (2, -1)) == principal(A2, (0, 1))


# -- soundness against brute-force sets -------------------------------------------------

# (window radius, radius of the source region); words of length <= 4 move a
# point by at most 4 letters / 4 in l1 / 12 in value
WINDOWS = {F2: (6, 10), A2: (12, 28), N23: (40, 52)}


def words(backend, max_len=4):
    toks = [n for n, _ in backend.generators]
    toks += [t + "*" for t in toks]
    return st.lists(st.sampled_from(toks), max_size=max_len).map(" ".join)


def box(backend, radius):
    if backend.kind == "abelian":
        return {q for q in backend.s_ball(2 * radius) if max(q) <= radius}
    return set(backend.s_ball(radius))


@pytest.mark.parametrize("backend", [F2, A2, N23], ids=str)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_calculus_matches_sets(backend, data):
    r, big = WINDOWS[backend]
    w1, w2 = data.draw(words(backend)), data.draw(words(backend))
    X, Y = constructible(backend, w1), constructible(backend, w2)
    window = box(backend, r)
    # constructible agrees with pushing S through the word pointwise
    assert {q for q in window if q in X} == oracles.word_range(backend, w1, big) & window
    s = data.draw(st.sampled_from([e for _, e in backend.generators]))
    want_t = {backend.mul(s, x) for x in box(backend, big) if x in X}
    assert {q for q in window if q in ideal_translate(backend, s, X)} == want_t & window
    want_p = {x for x in window if backend.mul(s, x) in X}
    assert {q for q in window if q in ideal_preimage(backend, s, X)} == want_p
    M, U = ideal_meet(backend, X, Y), ideal_union(backend, X, Y)
    assert {q for q in window if q in M} == {q for q in window if q in X and q in Y}
    assert {q for q in window if q in U} == {q for q in window if q in X or q in Y}
    # normal forms are canonical: equal as sets iff equal serializations
    same = {q for q in window if q in X} == {q for q in window if q in Y}
    assert same == ideal_eq(X, Y) == (format_ideal(backend, X) == format_ideal(backend, Y))


@pytest.mark.parametrize("backend", [F2, A2, N23], ids=str)
def test_layer_relations(backend):
    assert w_layer_relations(backend, random.Random(1), trials=100)["status"] == "pass"


@pytest.mark.parametrize("backend", [F2, A2, N23], ids=str)
def test_shift_matches_hull_image(backend):
    from unisemi.uis import enumerate_words, to_hull
    for w in enumerate_words(backend, 3):
        h = to_hull(backend, eval_word(backend, w, Flavor.STAR))
        assert h.image(backend) == constructible(backend, w)
        if not h.is_zero:
            assert ideal_shift(backend, backend.inv(h.offset), h.image(backend)) == h.domain
