"""Ore condition, Exel's semigroup S(G) and its map onto S*, and the partial
actions of G on the idempotent classes.

S(G) is generated by t_g (g in G) subject to
    t_{g^-1} t_g t_h = t_{g^-1} t_{gh},   t_g t_h t_{h^-1} = t_{gh} t_{h^-1},   t_g t_1 = t_g.
The map onto S* sends t_{s^-1 p} to v_s* v_p.
"""

import itertools
import random

from .classes import Flavor, canonize, in_down_closure, translate
from .errors import DomainError, UsageError
from .uis import eval_word, negative_first_word, uis_mul, unit_element


def ore_check(backend, search_radius=3):
    """Whether Sp n Sq is nonempty for all p, q in S.

    Commutative backends are Ore outright (p+q is a common multiple).  For the
    others a bounded search over generator pairs looks for a common left
    multiple and returns the first pair that has none as a witness.
    """
    if backend.kind in ("abelian", "numerical") or (backend.kind == "free" and backend.n == 1):
        return {"ore": True, "method": "commutative", "witness": None}
    ball = backend.s_ball(search_radius)
    gens = [e for _, e in backend.generators]
    for p, q in itertools.combinations(gens, 2):
        left_p = {backend.mul(x, p) for x in ball}
        if not any(backend.mul(y, q) in left_p for y in ball):
            return {"ore": False, "method": "bounded search", "search_radius": search_radius,
                    "witness": [backend.format(p), backend.format(q)]}
    return {"ore": True, "method": "bounded search", "search_radius": search_radius, "witness": None}


def is_ore(backend):
    return backend.kind in ("abelian", "numerical") or backend.n == 1


# -- S(G) words ---------------------------------------------------------------------


def parse_sg_word(backend, text):
    """Whitespace separated tokens t(<element>) or t(<element>)*; the star
    means t_{g^-1}."""
    out = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        if not text.startswith("t(", i):
            raise UsageError(f"expected t(...) at position {i} in {text!r}")
        depth, j = 1, i + 2
        while j < n and depth:
            depth += {"(": 1, ")": -1}.get(text[j], 0)
            j += 1
        if depth:
            raise UsageError(f"unbalanced parentheses in {text!r}")
        g = backend.parse(text[i + 2:j - 1])
        if j < n and text[j] == "*":
            g = backend.inv(g)
            j += 1
        out.append(g)
        i = j
    return tuple(out)


def format_sg_word(backend, word):
    return " ".join(f"t({backend.format(g)})" for g in word)


def sg_reduce(backend, word, max_steps=10_000):
    """Apply the defining relations left to right wherever they shorten the
    word.  A bounded rewriter used as a test oracle, not a normal form."""
    w = list(word)
    unit = backend.unit
    for _ in range(max_steps):
        changed = False
        for i in range(len(w)):
            if i + 1 < len(w) and w[i + 1] == unit:
                del w[i + 1]
                changed = True
                break
            if i + 2 < len(w):
                g, x, h = w[i], w[i + 1], w[i + 2]
                if backend.mul(g, x) == unit:
                    # t_{g^-1} t_g t_h -> t_{g^-1} t_{gh}, here g^-1 = w[i]
                    w[i + 1:i + 3] = [backend.mul(x, h)]
                    changed = True
                    break
                if backend.mul(x, h) == unit:
                    # t_g t_h t_{h^-1} -> t_{gh} t_{h^-1}
                    w[i:i + 2] = [backend.mul(g, x)]
                    changed = True
                    break
        if not changed:
            break
    return tuple(w)


def t_image(backend, g, factorization=None):
    """The S* element for t_g.  With a factorization (s, p) of g = s^-1 p
    this is v_s* v_p; by default the factorization from left_quotient, or for
    free monoids on several letters the reduced word of g (experimental)."""
    if factorization is None:
        return eval_word(backend, negative_first_word(backend, g), Flavor.STAR)
    s, p = factorization
    word = [n + "*" for n in reversed(backend.word_for(s))] + backend.word_for(p)
    return eval_word(backend, " ".join(word), Flavor.STAR)


def sg_quotient(backend, word):
    if isinstance(word, str):
        word = parse_sg_word(backend, word)
    out = unit_element(backend, Flavor.STAR)
    for g in word:
        out = uis_mul(backend, out, t_image(backend, g))
    return out


def factorizations(backend, g, radius):
    """All (s, p) with s in the radius ball of S and g = s^-1 p."""
    out = []
    for s in backend.s_ball(radius):
        p = backend.mul(s, g)
        if backend.is_positive(p):
            out.append((s, p))
    return out


def check_sgq(backend, n_pairs=1000, max_len=3, radius=3, seed=0):
    """The map t_g -> S* respects the relations of S(G), sends t_s* t_s to the
    unit, does not depend on the factorization of g, and is constant along
    sg_reduce."""
    rng = random.Random(seed)
    ball = backend.ball(radius)
    unit = unit_element(backend, Flavor.STAR)
    cache = {}

    def T(g):
        if g not in cache:
            cache[g] = t_image(backend, g)
        return cache[g]

    def img(word):
        out = unit
        for g in word:
            out = uis_mul(backend, out, T(g))
        return out

    def fail(law, **kw):
        ce = {"law": law}
        ce.update({k: format_sg_word(backend, w) for k, w in kw.items()})
        return {"status": "fail", "counterexample": ce, "experimental": not is_ore(backend)}

    inv = backend.inv
    for _ in range(n_pairs):
        w1 = tuple(rng.choice(ball) for _ in range(rng.randint(1, max_len)))
        w2 = tuple(rng.choice(ball) for _ in range(rng.randint(1, max_len)))
        if img(w1 + w2) != uis_mul(backend, img(w1), img(w2)):
            return fail("homomorphism", w1=w1, w2=w2)
        if img(sg_reduce(backend, w1 + w2)) != img(w1 + w2):
            return fail("sg_reduce preserves the image", w=w1 + w2)
        g, h = rng.choice(ball), rng.choice(ball)
        gh = backend.mul(g, h)
        if img((inv(g), g, h)) != img((inv(g), gh)):
            return fail("t_{g^-1} t_g t_h = t_{g^-1} t_{gh}", lhs=(inv(g), g, h), rhs=(inv(g), gh))
        if img((g, h, inv(h))) != img((gh, inv(h))):
            return fail("t_g t_h t_{h^-1} = t_{gh} t_{h^-1}", lhs=(g, h, inv(h)), rhs=(gh, inv(h)))
        if img((g, backend.unit)) != T(g):
            return fail("t_g t_1 = t_g", lhs=(g, backend.unit))
    for s in backend.s_ball(radius):
        if img((inv(s), s)) != unit:
            return fail("t_s* t_s = 1", w=(inv(s), s))
    factor_checked = 0
    if is_ore(backend):
        for g in ball:
            for f in factorizations(backend, g, radius + 2):
                factor_checked += 1
                if t_image(backend, g, f) != T(g):
                    return {"status": "fail", "counterexample": {
                        "law": "factorization independence", "g": backend.format(g),
                        "s": backend.format(f[0]), "p": backend.format(f[1])}}
    if img(()) != unit or T(backend.unit) != unit:
        return fail("t_1 = 1", w=(backend.unit,))
    return {"status": "pass", "pairs": n_pairs, "factorizations": factor_checked,
            "experimental": not is_ore(backend)}


# -- partial actions of G ----------------------------------------------------------------


def partial_domain(backend, g, A, flavor=None):
    """[A] in the domain of alpha_g, i.e. in D_{g^-1}.

    On E (SF classes): g^-1 lies in the interval closure of A.
    On E' (Star classes): g^-1 lies in the down-closure A.S^-1.
    """
    return in_down_closure(backend, backend.inv(g), A)


def partial_apply(backend, g, A, flavor=None):
    if not partial_domain(backend, g, A):
        raise DomainError(f"class is outside the domain of alpha_{backend.format(g)}")
    return translate(backend, g, A)


def class_population(backend, flavor, radius, exhaustive_limit=1 << 12):
    """Classes with canonical set inside the radius ball: every subset when
    there are at most ``exhaustive_limit`` of them, otherwise the classes of
    sets with at most two points besides the unit."""
    unit = backend.unit
    ball = [g for g in backend.ball(radius) if g != unit]
    if 2 ** len(ball) <= exhaustive_limit:
        sizes = range(len(ball) + 1)
        mode = "exhaustive"
    else:
        sizes = range(3)
        mode = "small sets"
    out = set()
    for k in sizes:
        for c in itertools.combinations(ball, k):
            out.add(canonize(backend, c, flavor))
    inside = set(backend.ball(radius))
    return sorted((A for A in out if A.canon <= inside),
                  key=lambda A: sorted(backend.sort_key(x) for x in A.canon)), mode


def check_partial_axioms(backend, flavor, radius=3):
    """(1) alpha_1 is the identity on everything.
    (2) alpha_g maps D_{g^-1} n D_h onto D_g n D_gh: alpha_g is a bijection
        D_{g^-1} -> D_g with inverse alpha_{g^-1}, and for A in D_{g^-1}
        membership of A in D_h matches membership of alpha_g(A) in D_gh.
    (3) alpha_g alpha_h = alpha_gh on D_{h^-1} n D_{h^-1 g^-1}.
    """
    flavor = Flavor.parse(flavor) if isinstance(flavor, str) else flavor
    pop, mode = class_population(backend, flavor, radius)
    group = backend.ball(radius)
    unit = backend.unit
    mul, inv = backend.mul, backend.inv

    def dom(k, A):
        # A in D_k
        return in_down_closure(backend, k, A)

    def fail(axiom, **kw):
        ce = {"axiom": axiom}
        for k, val in kw.items():
            ce[k] = backend.format(val) if not hasattr(val, "canon") else \
                "{" + "; ".join(backend.format(x) for x in sorted(val.canon, key=backend.sort_key)) + "}"
        return {"status": "fail", "counterexample": ce, "classes": len(pop), "mode": mode}

    for A in pop:
        if not dom(unit, A) or translate(backend, unit, A) != A:
            return fail("alpha_1 = id", A=A)
    checks = 0
    for A in pop:
        in_A = {h for h in group if dom(h, A)}
        images = {}
        for g in group:
            if inv(g) not in in_A:
                continue
            B = translate(backend, g, A)
            images[g] = B
            if not dom(g, B) or translate(backend, inv(g), B) != A:
                return fail("alpha_g is a bijection D_g^-1 -> D_g", g=g, A=A)
            for h in group:
                checks += 1
                if (h in in_A) != dom(mul(g, h), B):
                    return fail("alpha_g(D_g^-1 n D_h) = D_g n D_gh", g=g, h=h, A=A)
        for h in group:
            if inv(h) not in in_A:
                continue
            C = images.get(h) or translate(backend, h, A)
            for g in group:
                gh = mul(g, h)
                if not dom(inv(gh), A):
                    continue
                checks += 1
                if not dom(inv(g), C) or translate(backend, g, C) != translate(backend, gh, A):
                    return fail("alpha_g alpha_h = alpha_gh", g=g, h=h, A=A)
    return {"status": "pass", "classes": len(pop), "group_elements": len(group), "checks": checks,
            "mode": mode}
