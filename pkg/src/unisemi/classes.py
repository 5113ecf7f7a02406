"""Finite subsets of G containing the unit, up to the two equivalences that
model the idempotents of S^F and S*.

A class is stored through a canonical representative:

* ``Flavor.SF``: the interval closure, i.e. the union of all intervals
  [g1, g2] with g1 <= g2 taken from the set.  Because <= is transitive one
  pass already gives a fixpoint, and the closure is the largest set in the
  class.
* ``Flavor.STAR``: the unit together with the maximal elements.  Two sets are
  equivalent exactly when their down-closures A.S^-1 agree, and a finite set
  with a given down-closure has a unique set of maximal elements.
"""

import enum
import itertools
from collections import deque
from typing import NamedTuple

from .config import max_elements
from .errors import ResourceError, UsageError


class Flavor(enum.Enum):
    SF = "sf"
    STAR = "star"

    @classmethod
    def parse(cls, text):
        try:
            return cls(str(text).lower())
        except ValueError:
            raise UsageError(f"flavor must be 'sf' or 'star', got {text!r}") from None


class ClassRep(NamedTuple):
    flavor: Flavor
    canon: frozenset


def canonize(backend, A, flavor):
    A = set(A)
    A.add(backend.unit)
    if flavor is Flavor.SF:
        return ClassRep(flavor, frozenset(_interval_closure(backend, A)))
    return ClassRep(flavor, _max_antichain(backend, A))


def _interval_closure(backend, A):
    cap = max_elements()
    out = set(A)
    elems = list(A)
    leq = backend.leq
    for g1, g2 in itertools.permutations(elems, 2):
        if leq(g1, g2):
            out |= backend.interval(g1, g2)
            if len(out) > cap:
                raise ResourceError(f"interval closure exceeds {cap} elements (UIS_MAX_ELEMENTS)")
    return out


def _max_antichain(backend, A):
    leq = backend.leq
    elems = list(A)
    keep = {backend.unit}
    for a in elems:
        if not any(b != a and leq(a, b) for b in elems):
            keep.add(a)
    return frozenset(keep)


def class_eq(backend, A, B, flavor):
    return canonize(backend, A, flavor) == canonize(backend, B, flavor)


def _same_flavor(A, B):
    if A.flavor is not B.flavor:
        raise UsageError(f"flavor mismatch: {A.flavor.value} vs {B.flavor.value}")


def class_leq(backend, A, B):
    """[A] <= [B]: A sits inside some representative of B."""
    _same_flavor(A, B)
    if A.flavor is Flavor.SF:
        return A.canon <= B.canon
    leq = backend.leq
    return all(any(leq(a, b) for b in B.canon) for a in A.canon)


def in_down_closure(backend, g, cls):
    """g in the down-closure canon.S^-1 (for SF: g in the closure itself)."""
    if cls.flavor is Flavor.SF:
        return g in cls.canon
    leq = backend.leq
    return any(leq(g, b) for b in cls.canon)


def class_union(backend, A, B):
    _same_flavor(A, B)
    return canonize(backend, A.canon | B.canon, A.flavor)


def translate(backend, g, A):
    """g[A] = [{1} u gA].  Not a group action: (gh)A and g(hA) differ in general."""
    mul = backend.mul
    return canonize(backend, [mul(g, a) for a in A.canon], A.flavor)


def format_gset(backend, A):
    return "{" + "; ".join(backend.format(g) for g in sorted(A, key=backend.sort_key)) + "}"


def parse_gset(backend, text):
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise UsageError(f"a set is written {{e1; e2; ...}}, got {text!r}")
    body = text[1:-1].strip()
    out = {backend.unit}
    if body:
        out.update(backend.parse(part) for part in body.split(";"))
    return frozenset(out)


# -- move oracle --------------------------------------------------------------
#
# The equivalences are generated by single-element moves: for SF an element
# may be added or removed when it lies between two other elements of the set,
# for Star when it lies below another element.  The helpers below decide these
# moves straight from the order relation and are used to cross-check canonize.


def move_legal(backend, A, x, flavor):
    """Whether x can be added to (or removed from) the set A u {x}."""
    if x == backend.unit:
        return x in A
    others = [a for a in A if a != x]
    leq = backend.leq
    if flavor is Flavor.SF:
        return any(leq(a, x) for a in others) and any(leq(x, b) for b in others)
    return any(leq(x, b) for b in others)


def reachable_sets(backend, start, universe, flavor, limit=None):
    """Breadth-first search over single moves inside ``universe``.

    Returns the set of reachable frozensets.  Only sensible for small
    universes; ``limit`` bounds the number of visited states.
    """
    universe = list(universe)
    start = frozenset(start) | {backend.unit}
    seen = {start}
    queue = deque([start])
    while queue:
        A = queue.popleft()
        for x in universe:
            if x == backend.unit:
                continue
            if x in A:
                B = A - {x}
            else:
                B = A | {x}
            if B in seen or not move_legal(backend, A | B, x, flavor):
                continue
            seen.add(B)
            if limit is not None and len(seen) > limit:
                raise ResourceError(f"move search exceeded {limit} states")
            queue.append(B)
    return seen


def check_congruence(backend, flavor, radius=3, max_size=4, move_radius=5, bfs_limit=1 << 14):
    report = _congruence(backend, flavor, radius, max_size, move_radius, bfs_limit)
    report["status"] = "fail" if "counterexample" in report else "pass"
    if "counterexample" in report:
        report["counterexample"] = _printable(backend, report["counterexample"])
    return report


def _printable(backend, ce):
    out = {}
    for k, val in ce.items():
        if isinstance(val, (set, frozenset)):
            out[k] = format_gset(backend, val)
        elif isinstance(val, ClassRep):
            out[k] = format_gset(backend, val.canon)
        else:
            out[k] = backend.format(val)
    return out


def _congruence(backend, flavor, radius, max_size, move_radius, bfs_limit):
    """Cross-check canonize against the move relation.

    Population: every set containing 1 with at most ``max_size`` elements in
    the radius ball.  When all subsets of the move ball fit under
    ``bfs_limit`` the full move graph is searched and its connected components
    are compared with canonical forms.  Otherwise two exact facts are checked
    that together give the same conclusion: every legal move from a population
    set (inside the move ball) preserves the canonical form, and every set is
    joined to the first set of its canonical class by an explicit chain of
    legal moves (add the target's points, then drop the surplus).

    Returns a dict report.
    """
    unit = backend.unit
    ball = [g for g in backend.ball(radius) if g != unit]
    big = [g for g in backend.ball(move_radius) if g != unit]
    population = [frozenset((unit,) + c)
                  for k in range(max_size) for c in itertools.combinations(ball, k)]
    canon = {A: canonize(backend, A, flavor) for A in population}
    report = {"sets": len(population), "classes": len(set(canon.values())), "mode": None}

    if 2 ** len(big) <= bfs_limit:
        report["mode"] = "bfs"
        comp = {}
        for A in population:
            if A in comp:
                continue
            reach = reachable_sets(backend, A, big, flavor)
            cid = len(set(comp.values()))
            for B in reach:
                if B in canon:
                    comp[B] = cid
            for B in reach:
                if canonize(backend, B, flavor) != canon[A]:
                    report["counterexample"] = {"from": A, "to": B}
                    return report
        # same component <=> same canonical form
        by_canon = {}
        for A in population:
            by_canon.setdefault(canon[A], set()).add(comp[A])
        bad = [c for c, comps in by_canon.items() if len(comps) > 1]
        if bad:
            report["counterexample"] = {"class_split_across_components": bad[0]}
        return report

    report["mode"] = "certificate"
    for A in population:
        if len(A) == max_size:
            continue
        # moves out of A with |A| < max_size land in the population or one
        # step beyond it; moves that remove a point are the reverse of an add
        for x in big:
            if x in A or not move_legal(backend, A, x, flavor):
                continue
            if canonize(backend, A | {x}, flavor) != canon[A]:
                report["counterexample"] = {"set": A, "move": x}
                return report
    for A in population:
        for x in big:
            if x in A and x != unit and move_legal(backend, A, x, flavor):
                if canonize(backend, A - {x}, flavor) != canon[A]:
                    report["counterexample"] = {"set": A, "remove": x}
                    return report
    first = {}
    for A in population:
        R = first.setdefault(canon[A], A)
        cur = set(A)
        for x in sorted(R - A, key=backend.sort_key):
            if not move_legal(backend, cur, x, flavor):
                report["counterexample"] = {"path_from": A, "to": R, "add": x}
                return report
            cur.add(x)
        for x in sorted(A - R, key=backend.sort_key):
            if not move_legal(backend, cur, x, flavor):
                report["counterexample"] = {"path_from": A, "to": R, "remove": x}
                return report
            cur.discard(x)
        assert cur == R
    return report
