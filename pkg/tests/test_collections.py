import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singcat import gralg
from singcat.blocks import antidiagonal_blocks
from singcat.collections import (
    ExceptionalCollection,
    build_collection,
    conjectural_collection,
    expected_count,
    order_key,
    place,
    slice_of,
    thom_sebastiani,
    unplace,
)
from singcat.invpoly import InvertiblePolynomial, milnor_number, transpose
from singcat.oracle import conjecture_counts, lattice_layers

CASES = ["1-chain", "2-split", "2-chain", "2-loop", "3-split-a", "3-split-b", "3-split-c", "3-chain", "3-loop"]


def _key(o):
    return (o.kind.name, o.twist, o.homshift, o.position)


@given(st.sampled_from(CASES + ["3-chain-nonstrong"]), st.lists(st.integers(2, 5), min_size=3, max_size=3))
@settings(max_examples=60, deadline=None)
def test_counts_match_formula_and_dual_milnor_number(case, exps):
    exps = exps[: int(case[0])]
    c = build_collection(case, exps)
    assert len(c) == expected_count(case, exps) == milnor_number(transpose(c.poly))
    assert len({o.position for o in c.objects}) == len(c)


@given(st.sampled_from(CASES), st.lists(st.integers(2, 4), min_size=3, max_size=3))
@settings(max_examples=40, deadline=None)
def test_placement_round_trip_and_order(case, exps):
    exps = exps[: int(case[0])]
    c = build_collection(case, exps)
    n = c.n
    for o in c.objects:
        assert unplace(o, n) == o.position
        assert place(o.kind, o.position, n) == o
        if o.kind.name == "k":
            assert o.homshift == sum(o.position) and o.twist == tuple(-a for a in o.position)
    keys = [order_key(o.position) for o in c.objects]
    assert keys == sorted(keys)
    assert all(a.source < a.target for a in c.expected)


def test_unplace_rejects_inconsistent_object():
    c = build_collection("2-loop", (2, 2))
    o = c.objects[0]
    bad = type(o)(o.kind, o.twist, o.homshift + 1, o.position)
    with pytest.raises(ValueError):
        unplace(bad, 2)


def test_two_loop_4_4_contents():
    c = build_collection("2-loop", (4, 4))
    assert len(c) == 16
    assert c.kind_counts() == {"k": 9, "M_y": 3, "M_x": 3, "M_xy": 1}
    extra = [o for o in c.objects if o.kind.name == "M_xy"]
    assert [o.label(2) for o in extra] == ["M_xy(x+y)[-1]"]


def test_three_loop_minimal_has_pqr_objects():
    assert len(build_collection("3-loop", (2, 2, 2))) == 8


def test_three_loop_two_dimensional_arrow_expected():
    c = build_collection("3-loop", (2, 2, 2))
    big = [a for a in c.expected if a.dim == 2]
    assert len(big) == 1
    assert c.objects[big[0].source].kind.name == "M_xyz"
    assert c.objects[big[0].target].label(3) == "k(0)[0]"


def test_exclusions_inside_faces():
    c = build_collection("2-chain", (4, 3))
    for a in c.expected:
        s, t = c.objects[a.source], c.objects[a.target]
        if s.kind.name == t.kind.name == "M_y":
            assert a.direction != (1, 0)
    c = build_collection("3-split-c", (3, 3, 3))
    face = {"M_x", "M_xy"}
    for a in c.expected:
        s, t = c.objects[a.source], c.objects[a.target]
        if s.kind.name in face and t.kind.name in face:
            assert a.direction[:2] != (0, 1)


def test_single_object_has_no_arrows():
    c = build_collection("1-chain", (2,))
    assert len(c) == 1 and c.expected == []


def test_thom_sebastiani_of_two_one_variable_collections():
    c = thom_sebastiani(build_collection("1-chain", (3,)), build_collection("1-chain", (4,)), "2-split")
    ref = build_collection("2-split", (3, 4))
    assert len(c) == 6
    assert [_key(o) for o in c.objects] == [_key(o) for o in ref.objects]
    assert c.poly == ref.poly


def test_thom_sebastiani_slices():
    two = build_collection("2-chain", (3, 2))
    c = thom_sebastiani(two, build_collection("1-chain", (4,)), "3-split-b")
    ref = build_collection("3-split-b", (3, 2, 4))
    assert sorted(map(_key, c.objects)) == sorted(map(_key, ref.objects))
    for k in range(3):
        sl = slice_of(ref, 2, k)
        want = sorted((o.kind.name, o.twist + (-k,), o.homshift + k, o.position + (k,)) for o in two.objects)
        assert sorted(map(_key, sl)) == want


@pytest.mark.parametrize("exps", [(2, 2, 2, 2), (3, 2, 2, 2), (2, 3, 2, 3)])
@pytest.mark.parametrize("kind", ["chain", "loop"])
def test_conjectural_counts(kind, exps):
    c = conjectural_collection(4, kind, exps)
    assert c.kind_counts() == {k: v for k, v in conjecture_counts(kind, exps).items() if v}
    assert len(c) == expected_count(f"4-{kind}", exps) == milnor_number(transpose(c.poly))


def test_four_chain_multiplicities_at_twos():
    c = conjectural_collection(4, "chain", (2, 2, 2, 2))
    assert c.kind_counts() == {"k": 1, "M_y": 2, "M_z": 2, "M_t": 2, "M_[yt]": 4}


def test_conjectural_input_errors():
    with pytest.raises(ValueError):
        conjectural_collection(3, "chain", (2, 2, 2))
    with pytest.raises(ValueError):
        conjectural_collection(4, "spiral", (2, 2, 2, 2))


def test_layers_match_lattice_count():
    c = build_collection("3-loop", (2, 2, 2))
    assert antidiagonal_blocks(c).sizes() == lattice_layers([o.position for o in c.objects]) == [1, 3, 3, 1]


def test_json_export():
    c = build_collection("2-loop", (2, 2))
    data = json.loads(json.dumps(c.to_json()))
    assert data["schema"] == "singcat.collection/1"
    assert [o["label"] for o in data["objects"]] == ["M_xy(x+y)[-1]", "M_y(0)[0]", "M_x(0)[0]", "k(0)[0]"]
    assert len(data["expected_arrows"]) == 3


def test_dot_export():
    c = build_collection("2-chain", (2, 2))
    dot = c.to_dot()
    assert dot.startswith("digraph collection {") and dot.count("->") == len(c.expected)
    empty = ExceptionalCollection("empty", (), InvertiblePolynomial([[2]]), [])
    assert empty.to_dot() == "digraph collection {\n  rankdir=LR;\n}\n"


def test_unknown_case():
    with pytest.raises(ValueError):
        build_collection("5-spiral", (2, 2))
    assert gralg.point(2).name == "k"
