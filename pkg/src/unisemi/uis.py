"""Elements of S^F and S* as pairs (g, [A]) with g in G and [A] a class of
finite subsets of G.

Multiplication is (g,[A])(h,[B]) = (gh, [A u gB]) and the inverse is
(g,[A])* = (g^-1, g^-1[A]).  The generator v_a is (a, [{1,a}]).  The flavor of
the class decides which semigroup the pair lives in.
"""

import random
from typing import NamedTuple

from .classes import ClassRep, Flavor, canonize, class_leq, format_gset, translate
from .config import max_elements
from .errors import ResourceError, UsageError


class UisElement(NamedTuple):
    g: object
    cls: ClassRep

    @property
    def flavor(self):
        return self.cls.flavor


class Token(NamedTuple):
    name: str
    star: bool = False

    def __str__(self):
        return self.name + ("*" if self.star else "")


Word = tuple  # tuple of Token


def parse_word(text):
    text = text.strip()
    if text in ("", "1"):
        return ()
    out = []
    for part in text.split():
        if part.endswith("*"):
            out.append(Token(part[:-1], True))
        else:
            out.append(Token(part, False))
    return tuple(out)


def format_word(word):
    return " ".join(str(t) for t in word) if word else "1"


def star_word(word):
    return tuple(Token(t.name, not t.star) for t in reversed(word))


def unit_element(backend, flavor):
    return UisElement(backend.unit, ClassRep(flavor, frozenset((backend.unit,))))


def v(backend, s, flavor):
    """The isometry v_s for an element s of S."""
    return UisElement(s, canonize(backend, (s,), flavor))


def _check(x, y):
    if x.cls.flavor is not y.cls.flavor:
        raise UsageError("cannot combine S^F and S* elements")


def uis_mul(backend, x, y):
    _check(x, y)
    g = x.g
    mul = backend.mul
    A = set(x.cls.canon)
    A.update(mul(g, b) for b in y.cls.canon)
    return UisElement(mul(g, y.g), canonize(backend, A, x.cls.flavor))


def uis_star(backend, x):
    gi = backend.inv(x.g)
    return UisElement(gi, translate(backend, gi, x.cls))


def uis_prod(backend, elems, flavor):
    out = unit_element(backend, flavor)
    for e in elems:
        out = uis_mul(backend, out, e)
    return out


def is_idempotent(x):
    # the unit of G is (), (0,...,0) or 0 depending on the backend
    return not any(x.g) if isinstance(x.g, tuple) else x.g == 0


def natural_leq(backend, x, y):
    """x <= y in the natural order, i.e. x = e y for an idempotent e."""
    _check(x, y)
    return x.g == y.g and class_leq(backend, y.cls, x.cls)


def sigma(x):
    return x.g


def is_valid(backend, x):
    """Membership of the pair in the model.

    The condition is [I_g] <= [A] for some reduced form of g: some
    alternating chain from 1 to g stays inside the closure (SF) or inside the
    down-closure (Star) of the class.  Points of the down-closure hang below
    the maximal elements, so for Star it suffices to link maximal elements
    that share a lower bound.
    """
    unit = backend.unit
    canon = x.cls.canon
    if x.cls.flavor is Flavor.SF:
        if x.g not in canon:
            return False
        seen = {unit}
        stack = [unit]
        leq = backend.leq
        while stack:
            a = stack.pop()
            for b in canon:
                if b not in seen and (leq(a, b) or leq(b, a)):
                    seen.add(b)
                    stack.append(b)
        return x.g in seen
    tops = [m for m in canon if backend.leq(x.g, m)]
    if not tops:
        return False
    seen = {unit}
    stack = [unit]
    while stack:
        a = stack.pop()
        for b in canon:
            if b not in seen and backend.common_lower_bound(a, b):
                seen.add(b)
                stack.append(b)
    return any(m in seen for m in tops)


def generator_element(backend, token, flavor):
    s = backend.token(token.name)
    x = v(backend, s, flavor)
    return uis_star(backend, x) if token.star else x


def eval_word(backend, word, flavor):
    if isinstance(word, str):
        word = parse_word(word)
    out = unit_element(backend, flavor)
    for t in word:
        out = uis_mul(backend, out, generator_element(backend, t, flavor))
    return out


def word_eq(backend, w1, w2, flavor):
    return eval_word(backend, w1, flavor) == eval_word(backend, w2, flavor)


def format_element(backend, x):
    return f"({backend.format(x.g)}; {format_gset(backend, x.cls.canon)})"


def generator_tokens(backend):
    out = []
    for name, _ in backend.generators:
        out.append(Token(name, False))
        out.append(Token(name, True))
    return out


def enumerate_words(backend, max_len):
    toks = generator_tokens(backend)
    words = [()]
    layer = [()]
    for _ in range(max_len):
        layer = [w + (t,) for w in layer for t in toks]
        words.extend(layer)
    return words


def enumerate_elements(backend, flavor, max_len, with_lengths=False):
    """All products of at most ``max_len`` generator tokens, deduplicated.

    Ordered by the length of the shortest word reaching the element, then by
    the text form.
    """
    cap = max_elements()
    gens = [generator_element(backend, t, flavor) for t in generator_tokens(backend)]
    start = unit_element(backend, flavor)
    seen = {start: 0}
    out = [start]
    layer = [start]
    for k in range(1, max_len + 1):
        new = set()
        for x in layer:
            for y in gens:
                z = uis_mul(backend, x, y)
                if z not in seen and z not in new:
                    new.add(z)
        if len(seen) + len(new) > cap:
            raise ResourceError(f"enumeration exceeds {cap} elements (UIS_MAX_ELEMENTS)")
        layer = sorted(new, key=lambda e: format_element(backend, e))
        for z in layer:
            seen[z] = k
        out.extend(layer)
    if with_lengths:
        return out, seen
    return out


def check_eunitary(backend, flavor, max_len):
    """sigma(x) = 1 forces x to be idempotent (tested as x*x == x)."""
    elems = enumerate_elements(backend, flavor, max_len)
    checked = 0
    for x in elems:
        if x.g == backend.unit:
            checked += 1
            if uis_mul(backend, x, x) != x:
                return {"status": "fail", "elements": len(elems), "checked": checked,
                        "counterexample": format_element(backend, x)}
    return {"status": "pass", "elements": len(elems), "checked": checked}


def random_word(rng, backend, max_len):
    toks = generator_tokens(backend)
    return tuple(rng.choice(toks) for _ in range(rng.randint(0, max_len)))


def check_axioms(backend, flavor, n_words=1000, max_len=8, seed=0):
    """Inverse semigroup axioms on random words.

    x x* x = x and x* x x* = x*, associativity on random triples, and that
    idempotents commute.
    """
    rng = random.Random(seed)
    xs = [eval_word(backend, random_word(rng, backend, max_len), flavor) for _ in range(n_words)]
    mul = lambda a, b: uis_mul(backend, a, b)
    for x in xs:
        xs_ = uis_star(backend, x)
        if mul(mul(x, xs_), x) != x or mul(mul(xs_, x), xs_) != xs_:
            return {"status": "fail", "counterexample": {"x": format_element(backend, x), "law": "x x* x = x"}}
        if not is_valid(backend, x):
            return {"status": "fail", "counterexample": {"x": format_element(backend, x), "law": "model membership"}}
    for _ in range(n_words):
        a, b, c = rng.choice(xs), rng.choice(xs), rng.choice(xs)
        if mul(mul(a, b), c) != mul(a, mul(b, c)):
            return {"status": "fail", "counterexample": {
                "law": "associativity", "x": format_element(backend, a),
                "y": format_element(backend, b), "z": format_element(backend, c)}}
    idems = [mul(x, uis_star(backend, x)) for x in xs] + [mul(uis_star(backend, x), x) for x in xs]
    for _ in range(n_words):
        e, f = rng.choice(idems), rng.choice(idems)
        if mul(e, f) != mul(f, e) or mul(e, e) != e:
            return {"status": "fail", "counterexample": {
                "law": "idempotents commute", "e": format_element(backend, e), "f": format_element(backend, f)}}
    return {"status": "pass", "words": n_words}


# -- the quotient onto the left inverse hull ------------------------------------


class HullElement(NamedTuple):
    """A partial bijection of S acting as q -> offset.q on ``domain``.

    The zero map has an empty domain and offset None.
    """

    domain: object
    offset: object

    @property
    def is_zero(self):
        return self.offset is None

    def image(self, backend):
        from .ideals import ideal_shift
        if self.is_zero:
            return self.domain
        return ideal_shift(backend, self.offset, self.domain)

    def __call__(self, backend, q):
        if self.is_zero or q not in self.domain:
            return None
        return backend.mul(self.offset, q)


def to_hull(backend, x):
    """The image of a Star element in I_l(S).

    With x = (g,[A]) the word behind x visits the points a^-1 g q for a in A
    while acting on q, so q lies in the domain exactly when a <= gq for every
    a in A.  The domain is the intersection of the ideals
    {q in S : a^-1 g q in S} over the canonical representative.
    """
    from .ideals import ideal_meet, positive_preimage, whole
    if x.cls.flavor is not Flavor.STAR:
        raise UsageError("to_hull expects an S* element")
    dom = whole(backend)
    ginv_a = backend.inv
    for a in x.cls.canon:
        dom = ideal_meet(backend, dom, positive_preimage(backend, backend.mul(ginv_a(a), x.g)))
        if dom.is_empty:
            return HullElement(dom, None)
    return HullElement(dom, x.g)


def hull_of_word(backend, word):
    """The same partial bijection computed from the word by ideal calculus:
    the domain of t1 ... tn is built token by token from the left."""
    from .ideals import ideal_preimage, ideal_translate, whole
    if isinstance(word, str):
        word = parse_word(word)
    dom = whole(backend)
    g = backend.unit
    for t in word:
        s = backend.token(t.name)
        if t.star:
            dom = ideal_translate(backend, s, dom)
            g = backend.mul(g, backend.inv(s))
        else:
            dom = ideal_preimage(backend, s, dom)
            g = backend.mul(g, s)
    if dom.is_empty:
        return HullElement(dom, None)
    return HullElement(dom, g)


def apply_word(backend, word, q):
    """Compose the left translations of the word on q directly, or None when
    some intermediate point leaves S."""
    if isinstance(word, str):
        word = parse_word(word)
    cur = q
    for t in reversed(word):
        s = backend.token(t.name)
        cur = backend.mul(backend.inv(s), cur) if t.star else backend.mul(s, cur)
        if not backend.is_positive(cur):
            return None
    return cur


def check_quotient_chain(backend, max_len=4, ball_radius=6):
    """Equality in S^F implies equality in S* implies equality in I_l(S), over
    all words up to ``max_len``; the hull maps agree pointwise with composed
    translations on the ball of S."""
    words = enumerate_words(backend, max_len)
    sf_groups = {}
    star_of = {}
    hull_of = {}
    ball = backend.s_ball(ball_radius)
    for w in words:
        xf = eval_word(backend, w, Flavor.SF)
        xs = eval_word(backend, w, Flavor.STAR)
        h = to_hull(backend, xs)
        sf_groups.setdefault(xf, []).append(w)
        star_of[w] = xs
        hull_of[w] = h
        if h != hull_of_word(backend, w):
            return {"status": "fail", "counterexample": {"word": format_word(w), "law": "model hull = word hull"}}
        for q in ball:
            want = apply_word(backend, w, q)
            if h(backend, q) != want:
                return {"status": "fail", "counterexample": {
                    "word": format_word(w), "point": backend.format(q), "law": "pointwise action"}}
    for ws in sf_groups.values():
        if len({star_of[w] for w in ws}) != 1:
            return {"status": "fail", "counterexample": {"words": [format_word(w) for w in ws],
                                                          "law": "SF equal => Star equal"}}
    star_groups = {}
    for w, xs in star_of.items():
        star_groups.setdefault(xs, []).append(w)
    for ws in star_groups.values():
        if len({hull_of[w] for w in ws}) != 1:
            return {"status": "fail", "counterexample": {"words": [format_word(w) for w in ws],
                                                          "law": "Star equal => hull equal"}}
    return {"status": "pass", "words": len(words), "sf_classes": len(sf_groups),
            "star_classes": len(star_groups), "hull_classes": len(set(hull_of.values()))}


def negative_first_word(backend, g):
    """A word v_{s}* v_{p} ... for g whose partial products run down first.

    For the abelian and numerical backends this is s^-1 p with the prefix
    chain {1, s^-1, g}; for free backends it is the reduced word.
    """
    if backend.kind == "free":
        out = []
        for x in g:
            out.append(Token(chr(ord("a") + abs(x) - 1), x < 0))
        return tuple(out)
    s, p = backend.left_quotient(g)
    return tuple(Token(n, True) for n in reversed(backend.word_for(s))) + \
        tuple(Token(n, False) for n in backend.word_for(p))


def rebuild(backend, x):
    """Recover an element from (sigma, canonical class) through words: the
    product of the projections s_m s_m* over the canonical points, times a word
    for sigma.  Used to check the model against the word side."""
    flavor = x.cls.flavor
    e = unit_element(backend, flavor)
    for m in sorted(x.cls.canon, key=backend.sort_key):
        s = eval_word(backend, negative_first_word(backend, m), flavor)
        e = uis_mul(backend, e, uis_mul(backend, s, uis_star(backend, s)))
    return uis_mul(backend, e, eval_word(backend, negative_first_word(backend, x.g), flavor))
