"""Constructible right ideals of S and the idempotent layer of Li's semigroup W.

Representations, all normalized so equality of ideals is equality of values:

* free monoids: a prefix antichain of words, X = union of wS.  Constructible
  ideals are empty or principal; longer antichains only arise from unions.
* N^k: the antichain of minimal points of an up-set (finite by Dickson's lemma).
* numerical semigroups: the members below a ray start r plus every integer
  from r on, with r as small as possible.

Translation aX = {ax : x in X} and preimage a^-1 X = {x in S : ax in X} both
follow left translation by a, so a^-1(aX) = X.
"""

import re
from dataclasses import dataclass

from .errors import UsageError
from .uis import Flavor, eval_word, parse_word


@dataclass(frozen=True)
class FreeIdeal:
    words: frozenset  # prefix antichain of positive words

    @property
    def is_empty(self):
        return not self.words

    def __contains__(self, q):
        return any(q[:len(w)] == w for w in self.words)


@dataclass(frozen=True)
class AbelianIdeal:
    points: frozenset  # minimal points

    @property
    def is_empty(self):
        return not self.points

    def __contains__(self, q):
        return any(all(x <= y for x, y in zip(p, q)) for p in self.points)


@dataclass(frozen=True)
class NumericalIdeal:
    below: frozenset  # members smaller than ``ray``
    ray: object       # int, or None for the empty ideal

    @property
    def is_empty(self):
        return self.ray is None

    def __contains__(self, q):
        return self.ray is not None and (q >= self.ray or q in self.below)


def _prefix_antichain(words):
    words = set(words)
    return FreeIdeal(frozenset(w for w in words
                               if not any(len(u) < len(w) and w[:len(u)] == u for u in words)))


def _min_antichain(points):
    points = set(points)
    return AbelianIdeal(frozenset(
        p for p in points
        if not any(q != p and all(x <= y for x, y in zip(q, p)) for q in points)))


def _numerical(backend, pred, bound):
    """Normal form of the ideal whose members up to ``bound`` are given by
    pred and which contains every integer above ``bound``."""
    r = bound + 1
    while r > 0 and pred(r - 1):
        r -= 1
    return NumericalIdeal(frozenset(x for x in range(r) if pred(x)), r)


def whole(backend):
    if backend.kind == "free":
        return FreeIdeal(frozenset([()]))
    if backend.kind == "abelian":
        return AbelianIdeal(frozenset([backend.unit]))
    return _numerical(backend, backend.is_positive, backend.conductor)


def empty(backend):
    if backend.kind == "free":
        return FreeIdeal(frozenset())
    if backend.kind == "abelian":
        return AbelianIdeal(frozenset())
    return NumericalIdeal(frozenset(), None)


def principal(backend, a):
    return ideal_translate(backend, a, whole(backend))


def _need_positive(backend, a):
    if not backend.is_positive(a):
        raise UsageError(f"{backend.format(a)} is not an element of S")


def ideal_translate(backend, a, X):
    """aX."""
    _need_positive(backend, a)
    return ideal_shift(backend, a, X)


def ideal_shift(backend, g, X):
    """gX for a group element g with gX inside S (e.g. a hull image)."""
    if X.is_empty:
        return X
    if backend.kind == "free":
        return _prefix_antichain(backend.mul(g, w) for w in X.words)
    if backend.kind == "abelian":
        return _min_antichain(backend.mul(g, p) for p in X.points)
    return _numerical(backend, lambda x: (x - g) in X and backend.is_positive(x), max(X.ray + g, 0))


def ideal_preimage(backend, a, X):
    """a^-1 X = {x in S : ax in X}."""
    _need_positive(backend, a)
    if X.is_empty:
        return X
    if backend.kind == "free":
        out = []
        for w in X.words:
            if a[:len(w)] == w:
                return whole(backend)
            if w[:len(a)] == a:
                out.append(w[len(a):])
        return _prefix_antichain(out)
    if backend.kind == "abelian":
        return _min_antichain(tuple(max(x - y, 0) for x, y in zip(p, a)) for p in X.points)
    bound = max(X.ray, backend.conductor)
    return _numerical(backend, lambda x: backend.is_positive(x) and (x + a) in X, bound)


def ideal_meet(backend, X, Y):
    if X.is_empty:
        return X
    if Y.is_empty:
        return Y
    if backend.kind == "free":
        out = []
        for w in X.words:
            for u in Y.words:
                if u[:len(w)] == w:
                    out.append(u)
                elif w[:len(u)] == u:
                    out.append(w)
        return _prefix_antichain(out)
    if backend.kind == "abelian":
        return _min_antichain(tuple(max(x, y) for x, y in zip(p, q))
                              for p in X.points for q in Y.points)
    return _numerical(backend, lambda x: x in X and x in Y, max(X.ray, Y.ray))


def ideal_union(backend, X, Y):
    """Exact union.  For free monoids the result may be a finite union of
    principal ideals, which lies outside the constructible family."""
    if X.is_empty:
        return Y
    if Y.is_empty:
        return X
    if backend.kind == "free":
        return _prefix_antichain(X.words | Y.words)
    if backend.kind == "abelian":
        return _min_antichain(X.points | Y.points)
    return _numerical(backend, lambda x: x in X or x in Y, max(X.ray, Y.ray))


def ideal_eq(X, Y):
    return X == Y


def positive_preimage(backend, h):
    """{y in S : hy in S} for an arbitrary group element h."""
    if backend.kind == "free":
        k = len(h)
        while k > 0 and h[k - 1] < 0:
            k -= 1
        if not backend.is_positive(h[:k]):
            return empty(backend)
        return FreeIdeal(frozenset([backend.inv(h[k:])]))
    if backend.kind == "abelian":
        return AbelianIdeal(frozenset([tuple(max(-x, 0) for x in h)]))
    bound = backend.conductor + abs(h)
    return _numerical(backend, lambda y: backend.is_positive(y) and backend.is_positive(y + h), bound)


def constructible(backend, word):
    """The ideal w(S): S pushed through the partial bijection of the word.

    Tokens are applied right to left, a plain token translating (aX) and a
    starred token pulling back (a^-1 X), so "3* 2" gives 3^-1(2+S).  For a
    word w this is the domain of w*, hence a constructible right ideal.
    """
    if isinstance(word, str):
        word = parse_word(word)
    X = whole(backend)
    for t in reversed(word):
        s = backend.token(t.name)
        X = ideal_preimage(backend, s, X) if t.star else ideal_translate(backend, s, X)
    return X


def independence_check(backend, ideals, target):
    """True iff the union of ``ideals`` is exactly ``target``."""
    U = empty(backend)
    for X in ideals:
        U = ideal_union(backend, U, X)
    return U == target


def w_is_zero(backend, word):
    """Zero in W: the partial bijection of the word has empty domain."""
    return constructible(backend, word).is_empty


def w_idempotent_eq(backend, w1, w2):
    """Idempotent monomials of W agree iff their ideals agree as sets."""
    for w in (w1, w2):
        if eval_word(backend, w, Flavor.STAR).g != backend.unit:
            raise UsageError(f"{w!r} is not an idempotent word")
    return constructible(backend, w1) == constructible(backend, w2)


def format_ideal(backend, X):
    if X.is_empty:
        return "EMPTY"
    if backend.kind == "free":
        def one(w):
            return "".join(chr(ord("a") + x - 1) for x in w) + "S"
        parts = sorted(X.words, key=backend.sort_key)
        if len(parts) == 1:
            return one(parts[0])
        return "union{" + ";".join(one(w) for w in parts) + "}"
    if backend.kind == "abelian":
        return "up{" + ";".join(backend.format(p) for p in sorted(X.points)) + "}"
    return "set{" + ",".join(str(x) for x in sorted(X.below)) + f"}}+ray({X.ray})"


def parse_ideal(backend, text):
    text = text.strip()
    if text == "EMPTY":
        return empty(backend)
    if backend.kind == "free":
        body = text[6:-1].split(";") if text.startswith("union{") else [text]
        words = []
        for part in body:
            part = part.strip()
            if not part.endswith("S"):
                raise UsageError(f"bad free ideal {text!r}")
            words.append(tuple(ord(c) - ord("a") + 1 for c in part[:-1]))
        return _prefix_antichain(words)
    if backend.kind == "abelian":
        m = re.fullmatch(r"up\{(.*)\}", text)
        if not m:
            raise UsageError(f"bad abelian ideal {text!r}")
        return _min_antichain(backend.parse(p) for p in m.group(1).split(";") if p.strip())
    m = re.fullmatch(r"set\{([^}]*)\}\+ray\((\d+)\)", text)
    if not m:
        raise UsageError(f"bad numerical ideal {text!r}")
    below = {int(x) for x in m.group(1).split(",") if x.strip()}
    r = int(m.group(2))
    return _numerical(backend, lambda x: x in below, r - 1) if r > 0 else whole(backend)


def w_layer_relations(backend, rng, trials=200, max_len=4):
    """e_{X n Y} = e_X e_Y and w_s e_X w_s* = e_{sX} at the level of ideals,
    for random idempotent monomials w w*."""
    from .uis import format_word, random_word, star_word
    names = [n for n, _ in backend.generators]
    for _ in range(trials):
        w1 = random_word(rng, backend, max_len)
        w2 = random_word(rng, backend, max_len)
        e1 = w1 + star_word(w1)
        e2 = w2 + star_word(w2)
        X, Y = constructible(backend, e1), constructible(backend, e2)
        if constructible(backend, e1 + e2) != ideal_meet(backend, X, Y):
            return {"status": "fail", "counterexample": [format_word(e1), format_word(e2)]}
        name = rng.choice(names)
        s = backend.token(name)
        conj = parse_word(name) + e1 + parse_word(name + "*")
        if constructible(backend, conj) != ideal_translate(backend, s, X):
            return {"status": "fail", "counterexample": [name, format_word(e1)]}
    return {"status": "pass", "trials": trials}
