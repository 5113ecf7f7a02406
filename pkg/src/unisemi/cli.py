"""unisemi command line.

    unisemi eval free:2 --flavor star "a a*"
    unisemi check all numerical:2,3

Check reports go to stdout as JSON lines with sorted keys; human summaries go
to stderr unless --json is given.  Exit status: 0 when every requested suite
passes, 1 on a failing suite, 2 on bad usage, 3 when a resource cap is hit.
"""

import argparse
import json
import sys
import time

from .backends import parse_spec
from .classes import Flavor, canonize, check_congruence, format_gset, parse_gset
from .errors import ResourceError, UisError, UsageError
from .ideals import constructible, format_ideal
from .ore_partial import check_partial_axioms, check_sgq, ore_check
from .regrep import (build_V, build_Vprime, check_cuntz, check_decompose, check_independence,
                     check_restriction, decompose, export_matrix_market)
from .uis import (check_axioms, check_eunitary, check_quotient_chain, eval_word, format_element,
                  word_eq)

ALL_SUITES = ["axioms", "eunitary", "restriction", "independence", "cuntz", "decompose", "ore",
              "sgq", "partial-action"]
EXTRA_SUITES = ["congruence", "quotient"]
FLAVORED = {"axioms", "eunitary", "decompose", "partial-action", "congruence"}


def _flavors(args):
    if args.flavor:
        return [Flavor.parse(args.flavor)]
    return [Flavor.SF, Flavor.STAR]


def _applicable(suite, backend):
    if suite == "cuntz":
        return backend.kind == "free" and backend.n >= 2
    if suite == "independence":
        return len(backend.generators) >= 2
    return True


def default_max_len(suite, backend):
    if suite == "axioms":
        return 8
    if suite == "restriction":
        return 12 if backend.kind == "numerical" else 4
    if suite == "independence":
        return 20 if backend.kind == "numerical" else 8
    if suite == "cuntz":
        return 5
    return 4


def default_radius(suite, backend, flavor):
    if suite == "partial-action":
        if backend.kind == "free" and backend.n >= 2:
            return 3 if flavor is Flavor.SF else 2
        return 3 if backend.kind == "abelian" else 4
    return 3


def run_suite(suite, backend, flavor, max_len, radius):
    if suite == "axioms":
        return check_axioms(backend, flavor, n_words=1000, max_len=max_len)
    if suite == "eunitary":
        return check_eunitary(backend, flavor, max_len)
    if suite == "restriction":
        return check_restriction(backend, max_len)
    if suite == "independence":
        return check_independence(backend, max_len=max_len)
    if suite == "cuntz":
        return check_cuntz(backend.n, max_len)
    if suite == "decompose":
        return check_decompose(flavor, backend, max_len=max_len)
    if suite == "ore":
        report = ore_check(backend)
        # the analytic answer must agree with the bounded search
        witness_pairs = _bounded_ore(backend, radius)
        report["search_agrees"] = report["ore"] == witness_pairs
        report["status"] = "pass" if report["search_agrees"] else "fail"
        if report["status"] == "fail":
            report["counterexample"] = {"analytic": report["ore"], "search": witness_pairs}
        return report
    if suite == "sgq":
        return check_sgq(backend)
    if suite == "partial-action":
        return check_partial_axioms(backend, flavor, radius)
    if suite == "congruence":
        return check_congruence(backend, flavor, radius=radius)
    if suite == "quotient":
        return check_quotient_chain(backend, max_len=max_len)
    raise UsageError(f"unknown suite {suite!r}")


def _bounded_ore(backend, radius):
    """Every pair of generators has a common left multiple in the radius ball."""
    ball = backend.s_ball(radius)
    gens = [e for _, e in backend.generators]
    for p in gens:
        for q in gens:
            left_p = {backend.mul(x, p) for x in ball}
            if not any(backend.mul(y, q) in left_p for y in ball):
                return False
    return True


def make_report(suite, backend, flavor, max_len, radius, timing=True):
    t0 = time.perf_counter()
    try:
        body = run_suite(suite, backend, flavor, max_len, radius)
    except ResourceError as exc:
        body = {"status": "error", "error": str(exc)}
    params = {}
    if suite in FLAVORED:
        params["flavor"] = flavor.value
    if suite == "partial-action" or suite in ("congruence", "ore"):
        params["radius"] = radius
    else:
        params["max_len"] = max_len
    report = {"suite": suite, "backend": backend.spec_string, "params": params}
    report.update(body)
    if timing:
        report["timing_ms"] = round((time.perf_counter() - t0) * 1000)
    return report


def cmd_check(args):
    backend = parse_spec(args.spec)
    if args.suite == "all":
        suites = [s for s in ALL_SUITES if _applicable(s, backend)]
    else:
        if args.suite not in ALL_SUITES + EXTRA_SUITES:
            raise UsageError(f"unknown suite {args.suite!r}")
        if not _applicable(args.suite, backend):
            raise UsageError(f"suite {args.suite} does not apply to {backend.spec_string}")
        suites = [args.suite]
    worst = 0
    for suite in suites:
        flavors = _flavors(args) if suite in FLAVORED else [None]
        for flavor in flavors:
            max_len = args.max_len if args.max_len is not None else default_max_len(suite, backend)
            radius = args.radius if args.radius is not None else default_radius(suite, backend, flavor)
            report = make_report(suite, backend, flavor, max_len, radius, timing=not args.no_timing)
            print(json.dumps(report, sort_keys=True), flush=True)
            if not args.json:
                tag = f" [{flavor.value}]" if flavor else ""
                print(f"{suite}{tag} {backend.spec_string}: {report['status']}", file=sys.stderr)
            if report["status"] == "error":
                worst = max(worst, 3)
            elif report["status"] != "pass":
                worst = max(worst, 1)
    return worst


def cmd_eval(args):
    backend = parse_spec(args.spec)
    x = eval_word(backend, args.word, Flavor.parse(args.flavor))
    print(format_element(backend, x))
    return 0


def cmd_eq(args):
    backend = parse_spec(args.spec)
    flavor = Flavor.parse(args.flavor)
    same = word_eq(backend, args.w1, args.w2, flavor)
    x, y = eval_word(backend, args.w1, flavor), eval_word(backend, args.w2, flavor)
    if args.json:
        print(json.dumps({"equal": same, "lhs": format_element(backend, x),
                          "rhs": format_element(backend, y)}, sort_keys=True))
    else:
        print("equal" if same else "not equal")
    return 0 if same else 1


def cmd_canon(args):
    backend = parse_spec(args.spec)
    A = canonize(backend, parse_gset(backend, args.set), Flavor.parse(args.flavor))
    print(format_gset(backend, A.canon))
    return 0


def cmd_ideal(args):
    backend = parse_spec(args.spec)
    print(format_ideal(backend, constructible(backend, args.word)))
    return 0


def cmd_rep(args):
    backend = parse_spec(args.spec)
    if args.flavor == "prime":
        rep = build_Vprime(backend, args.max_len)
    else:
        rep = build_V(Flavor.parse(args.flavor), backend, args.max_len)
    manifest = export_matrix_market(backend, rep, args.out)
    print(f"wrote {len(manifest['generators'])} matrices of size {len(manifest['labels'])} to {args.out}",
          file=sys.stderr)
    return 0


def cmd_decompose(args):
    backend = parse_spec(args.spec)
    report = decompose(Flavor.parse(args.flavor), backend, args.word, args.max_len)
    print(json.dumps(report, sort_keys=True))
    return 0 if report["status"] == "pass" else 1


def build_parser():
    p = argparse.ArgumentParser(prog="unisemi", description=__doc__.split("\n")[0])
    p.add_argument("--threads", type=int, default=1,
                   help="accepted for compatibility; all work runs in one thread")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, flavor_default="star"):
        sp.add_argument("spec", help="free:N, abelian:K or numerical:g1,g2,...")
        sp.add_argument("--flavor", default=flavor_default)

    sp = sub.add_parser("eval", help="normal form of a word")
    common(sp)
    sp.add_argument("word")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("eq", help="compare two words")
    common(sp)
    sp.add_argument("w1")
    sp.add_argument("w2")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_eq)

    sp = sub.add_parser("canon", help="canonical representative of a set class")
    common(sp)
    sp.add_argument("set", help='e.g. "{a; a b}"')
    sp.set_defaults(func=cmd_canon)

    sp = sub.add_parser("ideal", help="constructible right ideal of a word")
    sp.add_argument("spec")
    sp.add_argument("word")
    sp.set_defaults(func=cmd_ideal)

    sp = sub.add_parser("rep", help="export regular representation matrices")
    sp.add_argument("spec")
    sp.add_argument("--flavor", default="star", help="star, sf, or prime for ℓ²(S)")
    sp.add_argument("--max-len", type=int, default=4)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_rep)

    sp = sub.add_parser("decompose", help="check one summand of the regular representation")
    common(sp)
    sp.add_argument("word")
    sp.add_argument("--max-len", type=int, default=4)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("check", help="run check suites")
    sp.add_argument("suite", help="one of " + ", ".join(ALL_SUITES + EXTRA_SUITES) + " or all")
    common(sp, flavor_default=None)
    sp.add_argument("--max-len", type=int)
    sp.add_argument("--radius", type=int)
    sp.add_argument("--json", action="store_true", help="machine output only")
    sp.add_argument("--no-timing", action="store_true", help="omit timing_ms for byte-stable output")
    sp.set_defaults(func=cmd_check)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except UisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
