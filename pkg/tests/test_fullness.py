import pytest

from singcat import gralg
from singcat.collections import build_collection
from singcat.fullness import (
    GenerationState,
    certify_fullness,
    goal_state,
    probe_rule,
    register_rules,
    saturate,
    seed_from_collection,
)
from singcat.invpoly import InvertiblePolynomial, case_matrix, grading_data

MINIMAL = [
    ("1-chain", (2,)),
    ("2-split", (2, 2)),
    ("2-chain", (2, 2)),
    ("2-loop", (2, 2)),
    ("3-split-a", (2, 2, 2)),
    ("3-split-b", (2, 2, 2)),
    ("3-split-c", (2, 2, 2)),
    ("3-chain", (2, 2, 2)),
    ("3-loop", (2, 2, 2)),
]


@pytest.mark.parametrize("case,exps", MINIMAL + [("2-chain", (3, 2)), ("2-loop", (3, 4)), ("3-chain", (3, 2, 2))])
def test_collections_are_full(case, exps):
    cert = certify_fullness(build_collection(case, exps))
    assert cert.full and cert.reached == cert.goal and not cert.missing
    assert cert.goal == grading_data(InvertiblePolynomial(case_matrix(case, exps))).reduced_group.order()


@pytest.mark.parametrize("exps", [(2, 2), (3, 3)])
def test_deleting_an_m_y_object_breaks_fullness(exps):
    c = build_collection("2-chain", exps)
    idx = [i for i, o in enumerate(c.objects) if o.kind.name == "M_y"]
    assert idx
    for i in idx:
        c2 = build_collection("2-chain", exps)
        del c2.objects[i]
        assert not certify_fullness(c2).full


def test_deleting_the_m_y_row_breaks_fullness():
    c = build_collection("2-chain", (3, 2))
    c.objects = [o for o in c.objects if o.kind.name != "M_y"]
    cert = certify_fullness(c)
    assert not cert.full and cert.missing


@pytest.mark.parametrize("case,exps", [("2-loop", (2, 2)), ("2-chain", (3, 2)), ("3-chain", (2, 2, 2))])
def test_every_rule_is_exact_on_probe_degrees(case, exps):
    c = build_collection(case, exps)
    rs = register_rules(c.poly, [o.kind.ideal for o in c.objects])
    assert rs.rules
    assert all(probe_rule(rs, r) for r in rs.rules)


def test_saturation_ignores_rule_order():
    c = build_collection("2-loop", (3, 4))
    rs = register_rules(c.poly, [o.kind.ideal for o in c.objects])
    seed = seed_from_collection(c)
    base = saturate(seed, rs).items
    for s in (1, 2, 3):
        assert saturate(seed, rs, shuffle=s).items == base


def test_trivial_seeds():
    c = build_collection("2-loop", (2, 2))
    rs = register_rules(c.poly, [o.kind.ideal for o in c.objects])
    assert saturate(GenerationState(), rs).items == set()
    goal = goal_state(rs)
    out = saturate(goal, rs)
    assert out.items == goal.items and out.trace == []


def test_one_copy_of_k_generates_all_classes_in_split_case():
    w = InvertiblePolynomial(case_matrix("2-split", (2, 2)))
    g = grading_data(w)
    rs = register_rules(w)
    kpt = gralg.point(2).ideal
    seed = GenerationState({(kpt, g.reduced_group.zero().canonical())})
    out = saturate(seed, rs)
    classes = {cl.canonical() for cl in g.reduced_elements()}
    assert len(classes) == 4
    assert {c for i, c in out.items if i == kpt} == classes


def test_split_truncations_are_perfect():
    w = InvertiblePolynomial(case_matrix("2-split", (3, 4)))
    rs = register_rules(w)
    assert ((3, 0), (0, 1)) in rs.perfect  # k[x]/(x^3)
    assert ((1, 0), (0, 4)) in rs.perfect  # k[y]/(y^4)
    assert gralg.point(2).ideal not in rs.perfect
    one = register_rules(InvertiblePolynomial([[3]]))
    assert ((3,),) in one.perfect and ((1,),) not in one.perfect
    assert [r.tag for r in one.rules].count("ladder") >= 1


def test_loop_sequence_through_the_union_of_axes():
    w = InvertiblePolynomial(case_matrix("2-loop", (3, 4)))
    rs = register_rules(w, [gralg.kind_from_label("M_xy", 2).ideal])
    names = {(rs.name(r.sub), rs.name(r.mid), rs.name(r.quot), r.monomial) for r in rs.rules}
    assert ("M_x", "M_xy", "M_y", (1, 0)) in names


def test_chain_trace_uses_m_y():
    cert = certify_fullness(build_collection("2-chain", (3, 2)))
    steps = [t for t in cert.trace if t["produced"]["kind"] == "k" and "M_y" in t["sequence"]]
    assert steps


def test_certificate_json():
    cert = certify_fullness(build_collection("2-split", (2, 3)))
    data = cert.to_json()
    assert data["schema"] == "singcat.fullness/1"
    assert data["full"] and data["goal_classes"] == 6 and data["steps"] == len(data["trace"])
