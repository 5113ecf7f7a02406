"""Exact arithmetic for a semigroup S sitting inside the group G it generates.

Three families are supported:

* ``free:N``      free monoid on N letters inside the free group,
* ``abelian:K``   the monoid N^K inside Z^K,
* ``numerical:g1,g2,...``  the numerical semigroup generated by the g_i inside Z.

Group elements are plain hashable values in a unique normal form (tuples of
signed letter indices, integer tuples, or ints), so equality of elements is
equality of representations.  A backend object carries the arithmetic; the
values themselves know nothing about which backend they belong to.
"""

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import NamedTuple

from .config import max_radius
from .errors import EmptyIntervalError, ResourceError, UsageError


class Block(NamedTuple):
    """One block of an alternating factorization: ``element`` lies in S and the
    block contributes ``element`` (positive) or its inverse (negative)."""

    positive: bool
    element: object


class Backend:
    kind = ""
    unit = None

    # -- group structure -------------------------------------------------

    def mul(self, g, h):
        raise NotImplementedError

    def inv(self, g):
        raise NotImplementedError

    def is_positive(self, g):
        raise NotImplementedError

    def size(self, g):
        raise NotImplementedError

    def prod(self, elems):
        out = self.unit
        for e in elems:
            out = self.mul(out, e)
        return out

    def leq(self, g, h):
        """g <= h iff g^-1 h lies in S."""
        return self.is_positive(self.mul(self.inv(g), h))

    def common_lower_bound(self, g, h):
        """Whether some x satisfies x <= g and x <= h, i.e. g^-1 h in S^-1 S."""
        raise NotImplementedError

    def interval(self, g1, g2):
        raise NotImplementedError

    def factor(self, g):
        raise NotImplementedError

    def recompose(self, blocks):
        return self.prod(b.element if b.positive else self.inv(b.element) for b in blocks)

    def prefix_set(self, g):
        out = {self.unit}
        acc = self.unit
        for b in self.factor(g):
            acc = self.mul(acc, b.element if b.positive else self.inv(b.element))
            out.add(acc)
        return frozenset(out)

    def left_quotient(self, g):
        """A pair (s, p) of elements of S with g = s^-1 p.

        Exists for every g exactly when S is left Ore in G; free monoids on two
        or more letters only admit it for g in S^-1 S.
        """
        raise NotImplementedError

    # -- finite windows ---------------------------------------------------

    def ball(self, radius):
        """All group elements of size <= radius, in sort order."""
        raise NotImplementedError

    def s_ball(self, radius):
        return [g for g in self.ball(radius) if self.is_positive(g)]

    # -- generators and text -----------------------------------------------

    @property
    def generators(self):
        """(name, element) pairs for the semigroup generators."""
        raise NotImplementedError

    def token(self, name):
        for n, e in self.generators:
            if n == name:
                return e
        raise UsageError(f"unknown generator {name!r} for {self.spec_string}")

    def word_for(self, s):
        """Generator names whose product is the S-element s."""
        raise NotImplementedError

    def format(self, g):
        raise NotImplementedError

    def parse(self, text):
        raise NotImplementedError

    def sort_key(self, g):
        return (self.size(g), g)

    @property
    def spec_string(self):
        raise NotImplementedError

    def __str__(self):
        return self.spec_string

    def _checked(self, g):
        # the cap is read from the environment once, when the backend is built
        if self.size(g) > self.radius_cap:
            raise ResourceError(
                f"element size {self.size(g)} exceeds radius cap {self.radius_cap} (UIS_MAX_RADIUS)")
        return g


def _letter(i):
    return chr(ord("a") + i - 1)


@dataclass(frozen=True)
class Free(Backend):
    """Free monoid on ``n`` letters; elements are freely reduced tuples of
    nonzero ints, +i for the i-th letter and -i for its inverse."""

    n: int
    kind = "free"
    unit = ()

    def __post_init__(self):
        if not 1 <= self.n <= 26:
            raise UsageError("free:N needs 1 <= N <= 26")
        object.__setattr__(self, "radius_cap", max_radius())

    @property
    def spec_string(self):
        return f"free:{self.n}"

    @property
    def generators(self):
        return [(_letter(i), (i,)) for i in range(1, self.n + 1)]

    def mul(self, g, h):
        out = list(g)
        for x in h:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return self._checked(tuple(out))

    def inv(self, g):
        return tuple(-x for x in reversed(g))

    def is_positive(self, g):
        return all(x > 0 for x in g)

    def size(self, g):
        return len(g)

    def leq(self, g, h):
        c = 0
        m = min(len(g), len(h))
        while c < m and g[c] == h[c]:
            c += 1
        return all(x < 0 for x in g[c:]) and all(x > 0 for x in h[c:])

    def common_lower_bound(self, g, h):
        w = self.mul(self.inv(g), h)
        seen_pos = False
        for x in w:
            if x > 0:
                seen_pos = True
            elif seen_pos:
                return False
        return True

    def interval(self, g1, g2):
        u = self.mul(self.inv(g1), g2)
        if not self.is_positive(u):
            raise EmptyIntervalError(f"{self.format(g1)} is not <= {self.format(g2)}")
        return frozenset(self.mul(g1, u[:i]) for i in range(len(u) + 1))

    def factor(self, g):
        blocks = []
        for positive, run in itertools.groupby(g, key=lambda x: x > 0):
            run = tuple(run)
            if positive:
                blocks.append(Block(True, run))
            else:
                blocks.append(Block(False, self.inv(run)))
        return blocks

    def left_quotient(self, g):
        k = 0
        while k < len(g) and g[k] < 0:
            k += 1
        if not self.is_positive(g[k:]):
            raise UsageError(f"{self.format(g)} is not of the form s^-1 p in {self.spec_string}")
        return self.inv(g[:k]), g[k:]

    def ball(self, radius):
        out = [()]
        layer = [()]
        letters = [i for i in range(1, self.n + 1)] + [-i for i in range(1, self.n + 1)]
        for _ in range(radius):
            layer = [w + (x,) for w in layer for x in letters if not (w and w[-1] == -x)]
            out.extend(layer)
        return sorted(out, key=self.sort_key)

    def s_ball(self, radius):
        out = []
        for k in range(radius + 1):
            out.extend(itertools.product(range(1, self.n + 1), repeat=k))
        return sorted(out, key=self.sort_key)

    def word_for(self, s):
        return [_letter(x) for x in s]

    def sort_key(self, g):
        # a < a* < b < b* < ...
        return (len(g), tuple(2 * abs(x) + (x < 0) for x in g))

    def format(self, g):
        if self.n == 1:
            return str(sum(g))
        if not g:
            return "1"
        return " ".join(_letter(abs(x)) + ("*" if x < 0 else "") for x in g)

    def parse(self, text):
        text = text.strip()
        if self.n == 1 and re.fullmatch(r"[+-]?\d+", text):
            k = int(text)
            return self._checked((1,) * k if k >= 0 else (-1,) * (-k))
        if text in ("", "1"):
            return ()
        out = ()
        for tok in text.split():
            star = tok.endswith("*")
            name = tok[:-1] if star else tok
            if len(name) != 1 or not "a" <= name <= _letter(self.n):
                raise UsageError(f"bad letter {tok!r} for {self.spec_string}")
            i = ord(name) - ord("a") + 1
            out = self.mul(out, (-i,) if star else (i,))
        return out


@dataclass(frozen=True)
class Abelian(Backend):
    """N^k inside Z^k; elements are integer tuples."""

    k: int
    kind = "abelian"

    def __post_init__(self):
        if not 1 <= self.k <= 26:
            raise UsageError("abelian:K needs 1 <= K <= 26")
        object.__setattr__(self, "radius_cap", max_radius())

    @property
    def unit(self):
        return (0,) * self.k

    @property
    def spec_string(self):
        return f"abelian:{self.k}"

    @property
    def generators(self):
        return [(_letter(i + 1), tuple(int(j == i) for j in range(self.k))) for i in range(self.k)]

    def mul(self, g, h):
        return self._checked(tuple(x + y for x, y in zip(g, h)))

    def inv(self, g):
        return tuple(-x for x in g)

    def is_positive(self, g):
        return all(x >= 0 for x in g)

    def size(self, g):
        return sum(abs(x) for x in g)

    def leq(self, g, h):
        return all(x <= y for x, y in zip(g, h))

    def common_lower_bound(self, g, h):
        return True

    def interval(self, g1, g2):
        if not self.leq(g1, g2):
            raise EmptyIntervalError(f"{self.format(g1)} is not <= {self.format(g2)}")
        return frozenset(itertools.product(*(range(x, y + 1) for x, y in zip(g1, g2))))

    def factor(self, g):
        # positive part first
        pos = tuple(max(x, 0) for x in g)
        neg = tuple(max(-x, 0) for x in g)
        blocks = []
        if any(pos):
            blocks.append(Block(True, pos))
        if any(neg):
            blocks.append(Block(False, neg))
        return blocks

    def left_quotient(self, g):
        return tuple(max(-x, 0) for x in g), tuple(max(x, 0) for x in g)

    def ball(self, radius):
        out = [v for v in itertools.product(range(-radius, radius + 1), repeat=self.k)
               if self.size(v) <= radius]
        return sorted(out, key=self.sort_key)

    def s_ball(self, radius):
        out = [v for v in itertools.product(range(radius + 1), repeat=self.k) if sum(v) <= radius]
        return sorted(out, key=self.sort_key)

    def word_for(self, s):
        return [_letter(i + 1) for i, c in enumerate(s) for _ in range(c)]

    def format(self, g):
        return "(" + ",".join(str(x) for x in g) + ")"

    def parse(self, text):
        text = text.strip()
        m = re.fullmatch(r"\(\s*([^()]*)\)", text)
        if not m:
            raise UsageError(f"expected a vector like (1,0), got {text!r}")
        try:
            parts = tuple(int(p) for p in m.group(1).split(","))
        except ValueError:
            raise UsageError(f"bad vector {text!r}") from None
        if len(parts) != self.k:
            raise UsageError(f"vector {text!r} does not have {self.k} coordinates")
        return self._checked(parts)


@dataclass(frozen=True)
class Numerical(Backend):
    """Numerical semigroup <gens> inside Z.

    Membership is a lookup in a table that covers everything below the
    conductor; at and above the conductor every integer is a member.
    """

    gens: tuple
    kind = "numerical"
    unit = 0
    _member: tuple = field(init=False, repr=False, compare=False)
    conductor: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        gens = tuple(sorted(set(int(g) for g in self.gens)))
        if not gens or gens[0] < 2:
            raise UsageError("numerical generators must be nonempty and each >= 2")
        if math.gcd(*gens) != 1:
            raise UsageError("numerical generators must have gcd 1")
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "radius_cap", max_radius())
        bound = gens[-1] ** 2
        member = [False] * (bound + 1)
        member[0] = True
        for x in range(1, bound + 1):
            member[x] = any(x >= g and member[x - g] for g in gens)
        # conductor: start of the first run of min(gens) consecutive members,
        # after which membership is monotone
        run = 0
        conductor = None
        for x in range(bound + 1):
            run = run + 1 if member[x] else 0
            if run == gens[0]:
                conductor = x - gens[0] + 1
                break
        if conductor is None:
            raise ResourceError("membership table did not stabilise below max(gens)^2")
        while conductor > 0 and member[conductor - 1]:
            conductor -= 1
        object.__setattr__(self, "_member", tuple(member[:conductor]))
        object.__setattr__(self, "conductor", conductor)

    @property
    def spec_string(self):
        return "numerical:" + ",".join(str(g) for g in self.gens)

    @property
    def generators(self):
        return [(str(g), g) for g in self.gens]

    def token(self, name):
        try:
            s = int(name)
        except ValueError:
            raise UsageError(f"unknown generator {name!r} for {self.spec_string}") from None
        if not self.is_positive(s):
            raise UsageError(f"{s} is not an element of {self.spec_string}")
        return s

    def mul(self, g, h):
        return self._checked(g + h)

    def inv(self, g):
        return -g

    def is_positive(self, g):
        if g < 0:
            return False
        return g >= self.conductor or self._member[g]

    def size(self, g):
        return abs(g)

    def leq(self, g, h):
        return self.is_positive(h - g)

    def common_lower_bound(self, g, h):
        return True

    def interval(self, g1, g2):
        if not self.leq(g1, g2):
            raise EmptyIntervalError(f"{g1} is not <= {g2}")
        return frozenset(m for m in range(g1, g2 + 1)
                         if self.is_positive(m - g1) and self.is_positive(g2 - m))

    def _split(self, g):
        # smallest s in S with g + s in S
        s = 0
        while not (self.is_positive(s) and self.is_positive(g + s)):
            s += 1
        return s, g + s

    def factor(self, g):
        # negative block first, with the smallest possible negative part
        if self.is_positive(g):
            return [Block(True, g)] if g else []
        if self.is_positive(-g):
            return [Block(False, -g)]
        s, p = self._split(g)
        return [Block(False, s), Block(True, p)]

    def left_quotient(self, g):
        return self._split(g)

    def ball(self, radius):
        return sorted(range(-radius, radius + 1), key=self.sort_key)

    def s_ball(self, radius):
        return [x for x in range(radius + 1) if self.is_positive(x)]

    def word_for(self, s):
        if not self.is_positive(s):
            raise UsageError(f"{s} is not in S")
        return [str(s)] if s else []

    def sort_key(self, g):
        return g

    def format(self, g):
        return str(g)

    def parse(self, text):
        try:
            return self._checked(int(text.strip()))
        except ValueError:
            raise UsageError(f"expected an integer, got {text!r}") from None


def parse_spec(text):
    """``free:N``, ``abelian:K`` or ``numerical:g1,g2,...``."""
    kind, _, arg = text.strip().partition(":")
    try:
        if kind == "free":
            return Free(int(arg))
        if kind == "abelian":
            return Abelian(int(arg))
        if kind == "numerical":
            return Numerical(tuple(int(x) for x in arg.split(",")))
    except ValueError:
        raise UsageError(f"bad backend spec {text!r}") from None
    raise UsageError(f"unknown backend family in {text!r}")


def check_no_units(backend, radius=4):
    """S and S^-1 meet only in the unit, checked over a ball."""
    for g in backend.ball(radius):
        if g != backend.unit and backend.is_positive(g) and backend.is_positive(backend.inv(g)):
            return g
    return None
