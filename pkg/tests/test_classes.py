import itertools

import pytest
from hypothesis import given, settings, strategies as st

from unisemi.backends import Abelian, Free, Numerical
from unisemi.classes import (Flavor, canonize, check_congruence, class_eq, class_leq,
                             class_union, format_gset, parse_gset, reachable_sets, translate)
from unisemi.errors import ResourceError, UsageError

import oracles

F1, F2, A2, N23 = Free(1), Free(2), Abelian(2), Numerical((2, 3))
SF, STAR = Flavor.SF, Flavor.STAR
a, b = (1,), (2,)


def S(backend, text):
    return parse_gset(backend, text)


def test_canonize_examples():
    # g=a, then b, b: the midpoint a b is absorbed by {1, a, a b b}
    assert F2.parse("a b") in canonize(F2, S(F2, "{a; a b b}"), SF).canon
    for backend in [F1, F2, A2, N23]:
        gen = backend.generators[0][1]
        assert canonize(backend, {backend.inv(gen)}, STAR).canon == {backend.unit}
    # frozen from oracles.component: {0,1,3} and {0,3} are move-connected
    assert canonize(F1, S(F1, "{0; 1; 3}"), STAR).canon == S(F1, "{0; 3}")


def test_class_eq_examples():
    assert class_eq(F2, S(F2, "{a; a b; a b a}"), S(F2, "{a; a b a}"), SF)
    assert class_eq(F2, S(F2, "{a; a b}"), S(F2, "{a b}"), STAR)
    assert class_eq(F2, {()}, {()}, SF)


def test_class_leq_examples():
    g, x, y = (1,), (2,), (1,)
    A = canonize(F2, {g, F2.mul(g, x)}, SF)
    B = canonize(F2, {g, F2.mul(F2.mul(g, x), y)}, SF)
    assert class_leq(F2, A, B)
    assert class_leq(F2, canonize(F2, {a}, STAR), canonize(F2, {(1, 2)}, STAR))
    assert class_leq(F2, B, B)
    with pytest.raises(UsageError):
        class_leq(F2, A, canonize(F2, {a}, STAR))


def test_class_union_examples():
    U = class_union(F2, canonize(F2, {a}, STAR), canonize(F2, {b}, STAR))
    assert U.canon == {(), a, b}
    A = canonize(F2, {a}, STAR)
    assert class_union(F2, A, A) == A
    U = class_union(F1, canonize(F1, S(F1, "{0; 2}"), STAR), canonize(F1, S(F1, "{0; 3}"), STAR))
    assert U.canon == S(F1, "{0; 3}")


def test_translate_examples():
    assert translate(F2, a, canonize(F2, {b}, STAR)).canon == {(), (1, 2)}
    A = canonize(F2, {a, b}, SF)
    assert translate(F2, (), A) == A
    assert translate(F2, (-1,), canonize(F2, {a}, STAR)).canon == {()}


def test_format_parse():
    A = canonize(F2, S(F2, "{b*; a}"), SF)
    assert format_gset(F2, A.canon) == "{1; a; b*}"
    with pytest.raises(UsageError):
        parse_gset(F2, "a; b")


def test_closure_cap(monkeypatch):
    monkeypatch.setenv("UIS_MAX_ELEMENTS", "10")
    with pytest.raises(ResourceError):
        canonize(A2, {(3, 3)}, SF)


def test_flavor_parse():
    assert Flavor.parse("SF") is SF
    with pytest.raises(UsageError):
        Flavor.parse("both")


# -- properties --------------------------------------------------------------------------


def gsets(backend, radius=2, max_size=3):
    return st.frozensets(st.sampled_from(backend.ball(radius)), max_size=max_size)


@pytest.mark.parametrize("backend", [F1, F2, A2, N23], ids=str)
@pytest.mark.parametrize("flavor", [SF, STAR], ids=lambda f: f.value)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_canonical_forms(backend, flavor, data):
    A = data.draw(gsets(backend))
    B = data.draw(gsets(backend))
    C = canonize(backend, A, flavor)
    assert canonize(backend, C.canon, flavor) == C
    assert backend.unit in C.canon
    if flavor is SF:
        for g1, g2 in itertools.permutations(C.canon, 2):
            if backend.leq(g1, g2):
                assert backend.interval(g1, g2) <= C.canon
    else:
        for g in C.canon - {backend.unit}:
            assert not any(h != g and backend.leq(g, h) for h in C.canon)
    # stability under union and translation
    D = canonize(backend, C.canon | B, flavor)
    assert D == canonize(backend, set(A) | B, flavor)
    g = data.draw(st.sampled_from(backend.ball(2)))
    assert translate(backend, g, C) == translate(backend, g, canonize(backend, C.canon, flavor))
    # union is the meet of idempotents: [A] <= [A u B]
    assert class_leq(backend, C, class_union(backend, C, canonize(backend, B, flavor)))


@pytest.mark.parametrize("flavor", [SF, STAR], ids=lambda f: f.value)
def test_small_bfs_agrees(flavor):
    # independent BFS from the test oracles on free:1 inside the radius-4 ball
    ball = F1.ball(4)
    sets = [frozenset({()} | set(c)) for k in range(3) for c in itertools.combinations(F1.ball(2), k)]
    for A in sets:
        comp = oracles.component(F1, A, ball, flavor is SF)
        for B in sets:
            assert (B in comp) == class_eq(F1, A, B, flavor)
        assert comp == reachable_sets(F1, A, ball, flavor)


@pytest.mark.parametrize("backend", [F1, N23], ids=str)
@pytest.mark.parametrize("flavor", [SF, STAR], ids=lambda f: f.value)
def test_congruence_bfs_mode(backend, flavor):
    r = check_congruence(backend, flavor)
    assert r["mode"] == "bfs" and r["status"] == "pass"


def test_congruence_detects_a_wrong_canonizer(monkeypatch):
    import unisemi.classes as C
    real = C._max_antichain

    def broken(backend, A):
        # forget to drop non-maximal points
        return frozenset(A) if len(A) == 3 else real(backend, A)

    monkeypatch.setattr(C, "_max_antichain", broken)
    assert check_congruence(N23, STAR)["status"] == "fail"
