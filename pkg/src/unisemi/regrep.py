"""Truncated left regular representations as sparse 0/1 matrices.

ℓ²(S) uses the basis s_ball(max_len); ℓ²(S*) and ℓ²(S^F) use the elements
reachable by words of length <= max_len.  On an infinite space the operators
are partial isometries; after truncation an image may fall outside the basis,
so every identity is asserted only on columns whose whole trajectory stays
on interior labels (labels all of whose one-step images are in the basis).
There every check is exact integer arithmetic.
"""

import json
import os
from typing import NamedTuple

import numpy as np
import scipy.io
import scipy.sparse as sp

from .classes import Flavor, in_down_closure
from .errors import UsageError
from .ideals import constructible, independence_check, principal
from .uis import (enumerate_elements, eval_word, format_element, generator_element,
                  generator_tokens, parse_word, uis_mul, uis_star, v)


class Basis(NamedTuple):
    labels: list
    index: dict
    interior: list


class Representation(NamedTuple):
    basis: Basis
    ops: dict  # token text -> csr matrix


def _matrix(n, pairs):
    rows = [r for r, _ in pairs]
    cols = [c for _, c in pairs]
    return sp.csr_matrix((np.ones(len(pairs), dtype=np.int64), (rows, cols)), shape=(n, n))


def gated_product(backend, x, t, x_star=None):
    """V_x δ_t: the label xt when x*xt = t, else None."""
    if x_star is None:
        x_star = uis_star(backend, x)
    y = uis_mul(backend, x, t)
    return y if uis_mul(backend, x_star, y) == t else None


def build_V(flavor, backend, max_len):
    flavor = Flavor.parse(flavor) if isinstance(flavor, str) else flavor
    labels = enumerate_elements(backend, flavor, max_len)
    index = {x: i for i, x in enumerate(labels)}
    interior = [True] * len(labels)
    ops = {}
    for tok in generator_tokens(backend):
        s = generator_element(backend, tok, flavor)
        s_star = uis_star(backend, s)
        pairs = []
        for j, t in enumerate(labels):
            y = gated_product(backend, s, t, s_star)
            if y is None:
                continue
            i = index.get(y)
            if i is None:
                interior[j] = False
            else:
                pairs.append((i, j))
        ops[str(tok)] = _matrix(len(labels), pairs)
    return Representation(Basis(labels, index, interior), ops)


def build_Vprime(backend, max_len):
    """The representation of S* on ℓ²(S): v_p δ_q = δ_pq, v_p* δ_q = δ_r for q = pr."""
    labels = backend.s_ball(max_len)
    index = {q: i for i, q in enumerate(labels)}
    interior = [True] * len(labels)
    ops = {}
    for name, s in backend.generators:
        fwd, back = [], []
        si = backend.inv(s)
        for j, q in enumerate(labels):
            i = index.get(backend.mul(s, q))
            if i is None:
                interior[j] = False
            else:
                fwd.append((i, j))
            r = backend.mul(si, q)
            if backend.is_positive(r):
                back.append((index[r], j))
        ops[name] = _matrix(len(labels), fwd)
        ops[name + "*"] = _matrix(len(labels), back)
    return Representation(Basis(labels, index, interior), ops)


def element_operator(backend, rep, x):
    """Matrix of V_x for an arbitrary element, together with the columns where
    it is exact (the image, when there is one, lies in the basis)."""
    labels, index = rep.basis.labels, rep.basis.index
    x_star = uis_star(backend, x)
    pairs, exact = [], []
    for j, t in enumerate(labels):
        y = gated_product(backend, x, t, x_star)
        if y is None:
            exact.append(j)
        elif y in index:
            pairs.append((index[y], j))
            exact.append(j)
    return _matrix(len(labels), pairs), exact


def word_operator(rep, word):
    if isinstance(word, str):
        word = parse_word(word)
    n = len(rep.basis.labels)
    M = sp.identity(n, dtype=np.int64, format="csr")
    for t in word:
        M = M @ rep.ops[str(t)]
    return M.tocsr()


def _column_maps(rep):
    out = {}
    for name, M in rep.ops.items():
        C = M.tocsc()
        col = np.full(M.shape[1], -1, dtype=np.int64)
        for j in range(M.shape[1]):
            lo, hi = C.indptr[j], C.indptr[j + 1]
            if hi > lo:
                col[j] = C.indices[lo]
        out[name] = col
    return out


def path_interior(rep, word, maps=None):
    """Columns j such that every label visited by the word, starting at j,
    is interior.  On these columns the truncated product is exact."""
    if isinstance(word, str):
        word = parse_word(word)
    maps = maps or _column_maps(rep)
    interior = rep.basis.interior
    good = []
    for j in range(len(interior)):
        cur = j
        ok = True
        for t in reversed(word):
            if not interior[cur]:
                ok = False
                break
            cur = maps[str(t)][cur]
            if cur < 0:
                break
        if ok:
            good.append(j)
    return good


def _columns_equal(A, B, cols):
    D = (A - B).tocsc()[:, cols]
    return D.nnz == 0 or not D.count_nonzero()


def is_partial_isometry(M, cols):
    """M Mᵀ M = M on the given columns."""
    return _columns_equal(M @ M.T @ M, M, cols)


# -- exact rank ------------------------------------------------------------------


def bareiss_rank(rows):
    """Rank of an integer matrix by fraction-free elimination."""
    A = [list(map(int, r)) for r in rows]
    if not A:
        return 0
    m, n = len(A), len(A[0])
    rank = 0
    prev = 1
    for c in range(n):
        if rank == m:
            break
        p = next((r for r in range(rank, m) if A[r][c] != 0), None)
        if p is None:
            continue
        A[rank], A[p] = A[p], A[rank]
        piv = A[rank][c]
        for r in range(rank + 1, m):
            a = A[r][c]
            A[r] = [(piv * A[r][k] - a * A[rank][k]) // prev for k in range(n)]
        prev = piv
        rank += 1
    return rank


def _flatten(mats):
    """Rows of 0/1 entries over the union of the supports."""
    supports = []
    for M in mats:
        C = M.tocoo()
        supports.append({(int(i), int(j)): int(v) for i, j, v in zip(C.row, C.col, C.data) if v})
    keys = sorted(set().union(*supports))
    return [[s.get(k, 0) for k in keys] for s in supports]


# -- checks --------------------------------------------------------------------------


def check_restriction(backend, max_len):
    """V of S* maps the copy {δ_{v_s}} of ℓ²(S) into itself and agrees with V'."""
    rep = build_Vprime(backend, max_len)
    maps = _column_maps(rep)
    labels = rep.basis.labels
    embed = [v(backend, s, Flavor.STAR) for s in labels]
    checked = 0
    for tok in generator_tokens(backend):
        x = generator_element(backend, tok, Flavor.STAR)
        x_star = uis_star(backend, x)
        col = maps[str(tok)]
        for j, s in enumerate(labels):
            y = gated_product(backend, x, embed[j], x_star)
            if y is not None and not (backend.is_positive(y.g) and y == v(backend, y.g, Flavor.STAR)):
                return {"status": "fail", "counterexample": {
                    "token": str(tok), "label": backend.format(s), "image": format_element(backend, y),
                    "law": "subspace invariance"}}
            if not rep.basis.interior[j]:
                continue
            checked += 1
            want = None if col[j] < 0 else labels[col[j]]
            got = None if y is None else y.g
            if got != want:
                return {"status": "fail", "counterexample": {
                    "token": str(tok), "label": backend.format(s),
                    "V": None if got is None else backend.format(got),
                    "V'": None if want is None else backend.format(want)}}
    return {"status": "pass", "basis": len(labels), "checked_columns": checked}


def check_independence(backend, max_len=20, rank_len=5):
    """With generators a, b: aa* + bb* - aa*bb* = b*aa*b on ℓ²(S) exactly when
    aS u bS = b^-1(aS), while the four elements stay linearly independent in
    the regular representation of S*."""
    names = [n for n, _ in backend.generators]
    if len(names) < 2:
        raise UsageError("independence needs at least two generators")
    a, b = names[:2]
    words = [f"{a} {a}*", f"{b} {b}*", f"{a} {a}* {b} {b}*", f"{b}* {a} {a}* {b}"]
    rep = build_Vprime(backend, max_len)
    maps = _column_maps(rep)
    cols = sorted(set.intersection(*(set(path_interior(rep, w, maps)) for w in words)))
    M = [word_operator(rep, w) for w in words]
    holds = _columns_equal(M[0] + M[1] - M[2], M[3], cols)
    truth = independence_check(backend, [principal(backend, backend.token(a)),
                                         principal(backend, backend.token(b))],
                               constructible(backend, f"{b}* {a}"))

    srep = build_V(Flavor.STAR, backend, rank_len)
    elems = [eval_word(backend, w, Flavor.STAR) for w in words]
    mats, exact = [], None
    for x in elems:
        m, ex = element_operator(backend, srep, x)
        mats.append(m)
        exact = set(ex) if exact is None else exact & set(ex)
    exact = sorted(exact)
    rank = bareiss_rank(_flatten([m.tocsc()[:, exact] for m in mats]))
    report = {
        "words": words,
        "identity_holds": bool(holds),
        "ideal_union_equal": bool(truth),
        "columns": len(cols),
        "max_column": backend.format(rep.basis.labels[cols[-1]]) if cols else None,
        "rank": rank,
        "star_basis": len(srep.basis.labels),
    }
    report["status"] = "pass" if holds == truth and rank == 4 else "fail"
    if report["status"] == "fail":
        report["counterexample"] = {"identity_holds": bool(holds), "ideal_level": bool(truth), "rank": rank}
    return report


def check_cuntz(n, max_len=5):
    from .backends import Free
    if n < 2:
        raise UsageError("cuntz relations need n >= 2")
    backend = Free(n)
    rep = build_Vprime(backend, max_len)
    names = [name for name, _ in backend.generators]
    V = {name: rep.ops[name] for name in names}
    for x in names:
        for y in names:
            if x != y and (V[x].T @ V[y]).count_nonzero():
                return {"status": "fail", "counterexample": {"pair": [x, y], "law": "orthogonal ranges"}}
    size = len(rep.basis.labels)
    total = sum(V[x] @ V[x].T for x in names)
    defect = (sp.identity(size, dtype=np.int64, format="csr") - total).tocsc()
    cols = [j for j, ok in enumerate(rep.basis.interior) if ok]
    D = defect[:, cols].tocoo()
    entries = sorted((int(i), cols[int(j)], int(v)) for i, j, v in zip(D.row, D.col, D.data) if v)
    empty = rep.basis.index[()]
    defect_ok = entries == [(empty, empty, 1)]
    srep = build_V(Flavor.STAR, backend, 4)
    e = eval_word(backend, "a a* b b*", Flavor.STAR)
    E, _ = element_operator(backend, srep, e)
    nonzero = bool(E.count_nonzero())
    report = {"n": n, "basis": size, "defect_entries": len(entries), "idempotent_nonzero": nonzero}
    report["status"] = "pass" if defect_ok and nonzero else "fail"
    if not defect_ok:
        report["counterexample"] = {"law": "sum of range projections = 1 - e_empty", "entries": entries[:5]}
    elif not nonzero:
        report["counterexample"] = {"law": "a a* b b* nonzero in S*"}
    return report


# -- decomposition into summands on ℓ²(G) ------------------------------------------


def _source(backend, x):
    return uis_mul(backend, uis_star(backend, x), x)


def _carrier_member(backend, s, h):
    d = backend.mul(s.g, backend.inv(h))
    return in_down_closure(backend, d, s.cls)


def summand_gate(backend, s, t, h):
    """Whether π_s(t) δ_h is nonzero: the class of t* sits below the class of
    s translated by h σ(s)^-1."""
    shift = backend.mul(h, backend.inv(s.g))
    t_star = uis_star(backend, t)
    target = [backend.mul(shift, c) for c in s.cls.canon]
    if s.cls.flavor is Flavor.SF:
        return t_star.cls.canon <= set(target)
    leq = backend.leq
    return all(any(leq(a, b) for b in target) for a in t_star.cls.canon)


def decompose(flavor, backend, s, max_len, rep=None, t_len=2):
    flavor = Flavor.parse(flavor) if isinstance(flavor, str) else flavor
    if isinstance(s, str):
        s = eval_word(backend, s, flavor)
    rep = rep or build_V(flavor, backend, max_len)
    index = rep.basis.index
    if s not in index:
        raise UsageError(f"{format_element(backend, s)} is not in the truncation at max_len {max_len}")
    key = _source(backend, s)
    members = [x for x in rep.basis.labels if _source(backend, x) == key]
    report = {"s": format_element(backend, s), "class_size": len(members)}
    sig = {}
    for x in members:
        if x.g in sig:
            report.update(status="fail", counterexample={
                "law": "sigma injective on the class",
                "x": format_element(backend, x), "y": format_element(backend, sig[x.g])})
            return report
        sig[x.g] = x
        if not _carrier_member(backend, s, x.g):
            report.update(status="fail", counterexample={
                "law": "sigma lands in the carrier", "x": format_element(backend, x)})
            return report
    tests = [generator_element(backend, t, flavor) for t in generator_tokens(backend)]
    extra = enumerate_elements(backend, flavor, t_len)
    tests += [t for t in extra if t not in tests]
    maps = _column_maps(rep)
    checked = 0
    for x in members:
        j = index[x]
        if not rep.basis.interior[j]:
            continue
        for k, t in enumerate(tests):
            y = gated_product(backend, t, x)
            pi = backend.mul(t.g, x.g) if summand_gate(backend, s, t, x.g) else None
            got = None if y is None else y.g
            if got != pi or (y is not None and _source(backend, y) != key):
                report.update(status="fail", counterexample={
                    "law": "intertwiner", "t": format_element(backend, t), "x": format_element(backend, x),
                    "V": None if y is None else format_element(backend, y),
                    "pi": None if pi is None else backend.format(pi)})
                return report
            if k < len(maps):
                # generator columns of the stored matrices agree with the model
                row = maps[str(generator_tokens(backend)[k])][j]
                if (row >= 0) != (y is not None) or (row >= 0 and rep.basis.labels[row] != y):
                    report.update(status="fail", counterexample={
                        "law": "matrix column", "t": format_element(backend, t),
                        "x": format_element(backend, x)})
                    return report
            checked += 1
    report.update(status="pass", checked=checked)
    return report


def unit_summand_matches_Vprime(backend, max_len):
    """π_1 on the carrier S agrees with V' on interior columns of ℓ²(S)."""
    unit = eval_word(backend, "", Flavor.STAR)
    rep = build_Vprime(backend, max_len)
    maps = _column_maps(rep)
    labels = rep.basis.labels
    for tok in generator_tokens(backend):
        t = generator_element(backend, tok, Flavor.STAR)
        col = maps[str(tok)]
        for j, q in enumerate(labels):
            if not rep.basis.interior[j]:
                continue
            got = backend.mul(t.g, q) if summand_gate(backend, unit, t, q) else None
            want = None if col[j] < 0 else labels[col[j]]
            if got != want:
                return {"status": "fail", "counterexample": {"token": str(tok), "q": backend.format(q)}}
    return {"status": "pass", "basis": len(labels)}


def check_decompose(flavor, backend, max_len=4, s_len=3):
    flavor = Flavor.parse(flavor) if isinstance(flavor, str) else flavor
    rep = build_V(flavor, backend, max_len)
    labels, lengths = enumerate_elements(backend, flavor, max_len, with_lengths=True)
    classes = {}
    for x in labels:
        classes.setdefault(_source(backend, x), []).append(x)
    if sum(len(c) for c in classes.values()) != len(labels) or len(set(labels)) != len(labels):
        return {"status": "fail", "counterexample": {"law": "classes partition the basis"}}
    done = set()
    summands = 0
    for x in labels:
        if lengths[x] > s_len:
            continue
        k = _source(backend, x)
        if k in done:
            continue
        done.add(k)
        r = decompose(flavor, backend, x, max_len, rep=rep)
        summands += 1
        if r["status"] != "pass":
            return {"status": "fail", "counterexample": r["counterexample"], "s": r["s"]}
    report = {"status": "pass", "basis": len(labels), "classes": len(classes), "summands_checked": summands}
    if flavor is Flavor.STAR:
        u = unit_summand_matches_Vprime(backend, max_len + 4)
        report["unit_summand"] = u["status"]
        if u["status"] != "pass":
            report.update(status="fail", counterexample=u["counterexample"])
    return report


# -- export ------------------------------------------------------------------------------


def export_matrix_market(backend, rep, out_dir, label_format=None):
    """One .mtx file per generator plus manifest.json."""
    os.makedirs(out_dir, exist_ok=True)
    if label_format is None:
        first = rep.basis.labels[0] if rep.basis.labels else None
        label_format = (lambda x: format_element(backend, x)) if hasattr(first, "cls") else backend.format
    files = []
    for name in sorted(rep.ops):
        fname = name.replace("*", "_star") + ".mtx"
        scipy.io.mmwrite(os.path.join(out_dir, fname), rep.ops[name].tocoo(), field="integer")
        files.append({"generator": name, "file": fname})
    manifest = {
        "backend": backend.spec_string,
        "labels": [label_format(x) for x in rep.basis.labels],
        "interior": [bool(b) for b in rep.basis.interior],
        "generators": files,
    }
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
    return manifest
