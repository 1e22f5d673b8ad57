import pytest

from singcat import gralg
from singcat.gralg import GradedPolyRing, MonomialQuotientModule, kind_from_label
from singcat.invpoly import InvertiblePolynomial, case_matrix, grading_data
from singcat.mf import (
    MFError,
    check_resolution,
    cone,
    identity_morphism,
    mf_for_kind,
    shift,
    twist,
    unroll,
    validate,
    zero_mf,
)
from singcat.stablehom import is_zero_object, stable_hom

KINDS = {
    "1-chain": ["k"],
    "2-split": ["k"],
    "2-chain": ["k", "M_y"],
    "2-loop": ["k", "M_x", "M_y", "M_xy"],
    "3-split-a": ["k"],
    "3-split-b": ["k", "M_y"],
    "3-split-c": ["k", "M_x", "M_y", "M_xy"],
    "3-chain": ["k", "M_y", "M_z"],
    "3-loop": ["k", "M_x", "M_y", "M_z", "M_xyz"],
}


def _exps(case):
    return (3,) * int(case[0])


@pytest.mark.parametrize("case", sorted(KINDS))
def test_templates_validate(case):
    w = InvertiblePolynomial(case_matrix(case, _exps(case)))
    for lab in KINDS[case]:
        x = mf_for_kind(kind_from_label(lab, w.n), w)
        assert validate(x)["valid"]


@pytest.mark.parametrize("case", ["2-chain", "2-loop", "3-chain", "3-loop"])
def test_resolutions_resolve_the_module(case):
    w = InvertiblePolynomial(case_matrix(case, (2,) * int(case[0])))
    g = grading_data(w)
    ring = GradedPolyRing(g)
    for lab in KINDS[case]:
        kind = kind_from_label(lab, w.n)
        res = check_resolution(mf_for_kind(kind, w, g), MonomialQuotientModule(ring, kind))
        assert res["ok"], (lab, res["failures"])


def test_one_variable_factorization():
    w = InvertiblePolynomial([[4]])
    x = mf_for_kind(gralg.point(1), w)
    assert x.d1 == [[{(1,): 1}]] and x.d0 == [[{(3,): 1}]]


def test_named_factorizations():
    w = InvertiblePolynomial(case_matrix("2-chain", (3, 2)))
    x = mf_for_kind(kind_from_label("M_y", 2), w)
    assert x.d1 == [[{(1, 0): 1}]] and x.d0 == [[{(2, 0): 1, (0, 2): 1}]]
    w = InvertiblePolynomial(case_matrix("2-loop", (3, 2)))
    x = mf_for_kind(kind_from_label("M_xy", 2), w)
    assert x.d1 == [[{(1, 1): 1}]] and x.d0 == [[{(2, 0): 1, (0, 1): 1}]]


def test_three_loop_union_template_rank():
    w = InvertiblePolynomial(case_matrix("3-loop", (2, 3, 4)))
    x = mf_for_kind(kind_from_label("M_xyz", 3), w)
    assert x.rank == (4, 4)
    validate(x)


def test_validate_rejects_broken_factorization():
    w = InvertiblePolynomial([[3]])
    x = mf_for_kind(gralg.point(1), w)
    x.d_even_to_odd = [[{(1,): 1}]]
    with pytest.raises(MFError):
        validate(x)


def test_unroll_lengths_and_drift():
    w = InvertiblePolynomial([[3]])
    g = grading_data(w)
    x = mf_for_kind(gralg.point(1), w)
    assert unroll(x, 0).terms == []
    c = unroll(x, 5)
    assert len(c.terms) == 5 and len(c.maps) == 4
    assert c.maps[0] == x.d1 and c.maps[1] == x.d0
    # two steps further along the summands are twisted by -w
    assert [a + g.w for a in c.terms[0]] == list(c.terms[2])


def test_double_shift_is_twist_by_w():
    w = InvertiblePolynomial([[3]])
    g = grading_data(w)
    k = mf_for_kind(gralg.point(1), w)
    a = stable_hom(k, shift(k, 2), use_cache=False)
    b = stable_hom(k, twist(k, g.w), use_cache=False)
    assert a.entries == b.entries


def test_shift_is_invertible():
    w = InvertiblePolynomial(case_matrix("2-loop", (2, 3)))
    x = mf_for_kind(kind_from_label("M_xy", 2), w)
    y = shift(shift(x, 3), -3)
    assert y.d1 == x.d1 and y.d0 == x.d0 and y.twists_even == x.twists_even


def test_cone_of_identity_is_zero():
    w = InvertiblePolynomial(case_matrix("2-chain", (2, 3)))
    x = mf_for_kind(gralg.point(2), w)
    c = cone(identity_morphism(x))
    validate(c)
    assert is_zero_object(c)


def test_free_module_is_zero_object():
    g = grading_data(InvertiblePolynomial([[3]]))
    assert is_zero_object(zero_mf(g))
