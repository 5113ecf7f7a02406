import json

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from unisemi import regrep
from unisemi.backends import Abelian, Free, Numerical
from unisemi.classes import Flavor
from unisemi.errors import UsageError
from unisemi.regrep import (bareiss_rank, build_V, build_Vprime, check_cuntz, check_decompose,
                            check_independence, check_restriction, decompose, element_operator,
                            export_matrix_market, is_partial_isometry, path_interior,
                            summand_gate, word_operator)
from unisemi.uis import eval_word, is_idempotent, uis_mul, uis_star, v

import oracles

F1, F2, A2, N23 = Free(1), Free(2), Abelian(2), Numerical((2, 3))
SF, STAR = Flavor.SF, Flavor.STAR


def column(rep, M, label):
    col = M.tocsc()[:, rep.basis.index[label]]
    return [rep.basis.labels[i] for i in col.nonzero()[0]]


def test_V_examples():
    rep = build_V(STAR, F1, 2)
    unit = eval_word(F1, "", STAR)
    assert column(rep, rep.ops["a"], unit) == [v(F1, (1,), STAR)]
    rep2 = build_V(STAR, F2, 2)
    assert column(rep2, rep2.ops["a*"], v(F2, (2,), STAR)) == []
    # V(a)ᵀ = V(a*) on interior columns
    M, Ms = rep2.ops["a"], rep2.ops["a*"]
    cols = [j for j, ok in enumerate(rep2.basis.interior) if ok]
    assert (M.T - Ms).tocsc()[:, cols].count_nonzero() == 0


def test_Vprime_examples():
    rep = build_Vprime(N23, 12)
    assert column(rep, rep.ops["2"], 0) == [2]
    # frozen from oracles.act: 3 - 2 = 1 is not in S
    assert oracles.act(N23, "2*", 3) is None
    assert column(rep, rep.ops["2*"], 3) == []
    P = (rep.ops["3*"] @ rep.ops["3"]).tocsc()
    cols = [j for j, ok in enumerate(rep.basis.interior) if ok]
    I = sp.identity(len(rep.basis.labels), dtype=np.int64, format="csc")
    assert (P - I)[:, cols].count_nonzero() == 0


def test_restriction_examples():
    assert check_restriction(F2, 4)["status"] == "pass"
    assert check_restriction(N23, 12)["status"] == "pass"
    r = check_restriction(F2, 0)
    assert r["status"] == "pass" and r["checked_columns"] == 0


def test_independence_example():
    r = check_independence(N23, max_len=20, rank_len=5)
    assert r["status"] == "pass"
    assert r["identity_holds"] and r["ideal_union_equal"]
    # frozen: the deepest column all four words keep inside the ball
    assert (r["columns"], r["max_column"], r["rank"]) == (14, "14", 4)


def test_independence_on_free_monoid():
    # aS u bS != b^-1(aS) = EMPTY, and the operators disagree accordingly
    r = check_independence(F2, max_len=6, rank_len=4)
    assert r["status"] == "pass" and not r["identity_holds"] and not r["ideal_union_equal"]


def test_cuntz_examples():
    r = check_cuntz(2)
    assert r["status"] == "pass" and r["defect_entries"] == 1 and r["idempotent_nonzero"]
    assert check_cuntz(3, max_len=4)["status"] == "pass"
    with pytest.raises(UsageError):
        check_cuntz(1)


def test_decompose_examples():
    r = decompose(STAR, F1, "a a*", 4)
    assert r["status"] == "pass" and r["class_size"] >= 1
    assert check_decompose(STAR, N23, max_len=4)["unit_summand"] == "pass"
    with pytest.raises(UsageError):
        decompose(STAR, F2, "a a a a a", 2)


def test_summand_gate_examples():
    unit = eval_word(F2, "", STAR)
    a_star = eval_word(F2, "a*", STAR)
    # π_1(a*) δ_b = 0 because b is not above a
    assert not summand_gate(F2, unit, a_star, (2,))
    assert summand_gate(F2, unit, a_star, (1, 2))
    assert summand_gate(F2, unit, eval_word(F2, "a", STAR), ())


@pytest.mark.parametrize("flavor", [SF, STAR], ids=lambda f: f.value)
@pytest.mark.parametrize("backend", [F1, A2, N23], ids=str)
def test_check_decompose(backend, flavor):
    assert check_decompose(flavor, backend, max_len=3, s_len=2)["status"] == "pass"


def test_decompose_detects_a_wrong_gate(monkeypatch):
    monkeypatch.setattr(regrep, "summand_gate", lambda b, s, t, h: True)
    assert check_decompose(STAR, F1, max_len=3, s_len=2)["status"] == "fail"


def test_bareiss_rank():
    assert bareiss_rank([]) == 0
    assert bareiss_rank([[1, 2], [2, 4]]) == 1
    assert bareiss_rank([[0, 1, 1], [1, 0, 1], [1, 1, 0]]) == 3
    assert bareiss_rank([[1, 1, 0], [0, 1, 1], [1, 2, 1]]) == 2
    rng = np.random.default_rng(0)
    for _ in range(20):
        A = rng.integers(-3, 4, size=(4, 6))
        assert bareiss_rank(A.tolist()) == np.linalg.matrix_rank(A)


def test_export(tmp_path):
    rep = build_V(STAR, F1, 2)
    manifest = export_matrix_market(F1, rep, tmp_path)
    assert (tmp_path / "a_star.mtx").read_text().startswith("%%MatrixMarket matrix coordinate integer")
    on_disk = json.loads((tmp_path / "manifest.json").read_text())
    assert on_disk == manifest and on_disk["backend"] == "free:1"
    assert len(on_disk["labels"]) == len(rep.basis.labels)


# -- properties -------------------------------------------------------------------------


def words(backend, max_len=3):
    toks = [n for n, _ in backend.generators]
    toks += [t + "*" for t in toks]
    return st.lists(st.sampled_from(toks), max_size=max_len).map(" ".join)


REPS = {}


def rep_for(backend, flavor):
    key = (str(backend), flavor)
    if key not in REPS:
        REPS[key] = build_V(flavor, backend, 4)
    return REPS[key]


@pytest.mark.parametrize("flavor", [SF, STAR], ids=lambda f: f.value)
@pytest.mark.parametrize("backend", [F2, A2, N23], ids=str)
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_operators_are_partial_isometries(backend, flavor, data):
    rep = rep_for(backend, flavor)
    w1, w2 = data.draw(words(backend)), data.draw(words(backend))
    x = eval_word(backend, w1, flavor)
    M, exact = element_operator(backend, rep, x)
    # the product of generator matrices agrees with V_x where both are exact
    cols = sorted(set(exact) & set(path_interior(rep, w1)))
    W = word_operator(rep, w1)
    assert (W - M).tocsc()[:, cols].count_nonzero() == 0
    # each column has at most one entry, and M Mᵀ M = M
    assert M.getnnz(axis=0).max(initial=0) <= 1
    assert is_partial_isometry(M, exact)
    # idempotents act diagonally and commute
    e = uis_mul(backend, x, uis_star(backend, x))
    y = eval_word(backend, w2, flavor)
    f = uis_mul(backend, uis_star(backend, y), y)
    assert is_idempotent(e) and is_idempotent(f)
    E, _ = element_operator(backend, rep, e)
    Fm, _ = element_operator(backend, rep, f)
    assert (E - sp.diags(E.diagonal())).count_nonzero() == 0
    assert (E @ Fm - Fm @ E).count_nonzero() == 0
