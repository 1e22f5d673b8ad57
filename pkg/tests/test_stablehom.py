import json

import pytest

from singcat import gralg
from singcat.gralg import kind_from_label
from singcat.invpoly import InvertiblePolynomial, case_matrix, grading_data
from singcat.mf import mf_for_kind, shift, twist
from singcat.oracle import one_variable_table
from singcat.stablehom import (
    WindowAuditError,
    brackets,
    class_rank,
    compose_path,
    graded_component,
    morphism_basis,
    morphism_is_zero,
    stable_hom,
)


def _obj(w, g, label, tw, s):
    return shift(twist(mf_for_kind(kind_from_label(label, w.n), w, g), g.element(tw)), s)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_one_variable_closed_form(p):
    w = InvertiblePolynomial([[p]])
    g = grading_data(w)
    k = mf_for_kind(gralg.point(1), w)
    t = stable_hom(k, k)
    got = {(l.coords[0], e): d for l, e, d in t.support()}
    want = {key: d for key, d in one_variable_table(p, periods=1).items()}
    assert got == want
    # shifts by multiples of w over three periods
    for j in range(3):
        assert graded_component(t, g.element((-j * p,)), 2 * j) == 1
        assert graded_component(t, g.element((-j * p - 1,)), 2 * j + 1) == 1
        assert graded_component(t, g.element((-j * p + 1,)), 2 * j) == 0


def test_two_chain_k_to_m_y():
    w = InvertiblePolynomial(case_matrix("2-chain", (3, 4)))
    g = grading_data(w)
    t = stable_hom(mf_for_kind(gralg.point(2), w), mf_for_kind(kind_from_label("M_y", 2), w))
    even = {l for l, e, d in t.support() if e == 0}
    odd = {l for l, e, d in t.support() if e == 1}
    assert even == {g.w - g.element((1, 1))}
    assert odd == {g.element((0, -1))}


def test_three_loop_m_xyz_to_k():
    w = InvertiblePolynomial(case_matrix("3-loop", (2, 2, 2)))
    g = grading_data(w)
    t = stable_hom(mf_for_kind(kind_from_label("M_xyz", 3), w), mf_for_kind(gralg.point(3), w))
    even = {l.canonical(): d for l, e, d in t.support() if e == 0}
    assert even == {g.zero().canonical(): 1, (g.w - g.element((1, 1, 1))).canonical(): 2}
    odd = sorted(d for l, e, d in t.support() if e == 1)
    assert odd == [1, 1, 1]


def test_endomorphisms_of_k_in_degree_zero():
    for case in ("2-loop", "3-chain"):
        w = InvertiblePolynomial(case_matrix(case, (2,) * int(case[0])))
        g = grading_data(w)
        k = mf_for_kind(gralg.point(w.n), w)
        t = stable_hom(k, k)
        assert graded_component(t, g.zero(), 0) == 1
        assert brackets(t, g.zero()) == {0: 1}


def test_below_window_is_zero_and_above_raises():
    w = InvertiblePolynomial([[3]])
    g = grading_data(w)
    k = mf_for_kind(gralg.point(1), w)
    t = stable_hom(k, k)
    assert graded_component(t, g.element((-1000,)), 0) == 0
    with pytest.raises(WindowAuditError):
        graded_component(t, g.element((1000,)), 0)


def test_audit_failure_is_reported(monkeypatch, no_cache):
    import singcat.stablehom as sh

    w = InvertiblePolynomial(case_matrix("2-loop", (3, 4)))
    k = mf_for_kind(gralg.point(2), w)
    monkeypatch.setattr(sh, "_top_shells", lambda *a: [1])
    with pytest.raises(WindowAuditError):
        stable_hom(k, k, retries=1)


def test_negative_margin_rejected():
    w = InvertiblePolynomial([[3]])
    k = mf_for_kind(gralg.point(1), w)
    with pytest.raises(ValueError):
        stable_hom(k, k, margin=-1)


def test_margin_does_not_change_table(no_cache):
    w = InvertiblePolynomial(case_matrix("2-loop", (3, 4)))
    k = mf_for_kind(gralg.point(2), w)
    y = mf_for_kind(kind_from_label("M_xy", 2), w)
    a = stable_hom(k, y, margin=0)
    b = stable_hom(k, y, margin=40)
    assert a.entries == b.entries


def test_cache_round_trip(tmp_path, monkeypatch):
    monkeypatch.setenv("SINGCAT_CACHE_DIR", str(tmp_path))
    w = InvertiblePolynomial(case_matrix("2-chain", (3, 4)))
    x = mf_for_kind(kind_from_label("M_y", 2), w)
    a = stable_hom(x, x)
    assert any(tmp_path.iterdir())
    b = stable_hom(x, x)
    assert a.entries == b.entries and a.window == b.window


def test_table_exports():
    w = InvertiblePolynomial(case_matrix("2-chain", (2, 2)))
    t = stable_hom(mf_for_kind(gralg.point(2), w), mf_for_kind(kind_from_label("M_y", 2), w))
    assert t.to_tsv().splitlines()[0] == "l\tparity\tdim"
    data = json.loads(json.dumps(t.to_json()))
    assert sum(r["dim"] for r in data["support"]) == t.total_dim() == 2


def test_triple_composition_in_split_case():
    w = InvertiblePolynomial(case_matrix("3-split-a", (2, 2, 2)))
    g = grading_data(w)
    path = [
        _obj(w, g, "k", (0, 0, 0), 0),
        _obj(w, g, "k", (-1, 0, 0), 1),
        _obj(w, g, "k", (-1, -1, 0), 2),
        _obj(w, g, "k", (-1, -1, -1), 3),
    ]
    f = compose_path(path)
    assert not morphism_is_zero(f)
    assert class_rank([f]) == 1


def loop_compositions():
    w = InvertiblePolynomial(case_matrix("3-loop", (2, 2, 2)))
    g = grading_data(w)
    a = _obj(w, g, "M_xyz", (1, 1, 1), 0)
    d = _obj(w, g, "k", (0, 0, 0), 2)
    fs = [
        compose_path([a, _obj(w, g, "M_z", (0, 1, 0), 1), _obj(w, g, "M_y", (0, 0, 0), 2), d]),
        compose_path([a, _obj(w, g, "M_y", (1, 0, 0), 1), _obj(w, g, "M_x", (0, 0, 0), 2), d]),
        compose_path([a, _obj(w, g, "M_x", (0, 0, 1), 1), _obj(w, g, "M_z", (0, 0, 0), 2), d]),
    ]
    return fs, len(morphism_basis(a, d))


def test_loop_triple_compositions_span_and_relation():
    fs, target_dim = loop_compositions()
    assert target_dim == 2
    assert [class_rank([f]) for f in fs] == [1, 1, 1]
    assert class_rank(fs) == 2
    assert all(class_rank([fs[i], fs[j]]) == 2 for i, j in ((0, 1), (0, 2), (1, 2)))


def test_compose_path_needs_one_dimensional_steps():
    w = InvertiblePolynomial(case_matrix("3-loop", (2, 2, 2)))
    g = grading_data(w)
    a = _obj(w, g, "M_xyz", (1, 1, 1), 0)
    d = _obj(w, g, "k", (0, 0, 0), 2)
    with pytest.raises(ValueError):
        compose_path([a, d])
