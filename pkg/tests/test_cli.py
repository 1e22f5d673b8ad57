import json
import subprocess
import sys

import pytest

from singcat import cli
from tablecells import GOLDEN


def run(argv, capsys):
    code = cli.run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_three_loop_lists_two_dimensional_arrow(capsys):
    code, out, err = run(["verify", "--case", "3-loop", "--exponents", "2,2,2"], capsys)
    assert code == 0
    data = json.loads(out)
    big = [a for a in data["arrows"] if a["ext"] == {"0": 2}]
    assert [(a["source_label"], a["target_label"]) for a in big] == [("M_xyz(x+y+z)[-2]", "k(0)[0]")]


def test_verify_nonstrong_fails_with_witness(capsys):
    code, out, err = run(["verify", "--case", "3-chain-nonstrong", "--exponents", "3,2,2"], capsys)
    assert code == 1
    data = json.loads(out)
    assert data["violations"] == [
        {"type": "bracket", "source": "M_z(-x+y)[0]", "target": "M_y(x)[-1]", "bracket": 1, "dim": 1}
    ]
    assert "strong=False" in err


def test_blocks_trace(capsys):
    code, out, err = run(["blocks", "--case", "2-loop", "--exponents", "4,4"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["summary"] == "7 -> 6 -> 5 -> 4 -> 3 (7->4, 6->3, 5->2, 4->1)"
    assert len(data["final_blocks"]) == 3


def test_blocks_dot_has_both_quivers(capsys):
    code, out, err = run(["blocks", "--case", "2-loop", "--exponents", "4,4", "--format", "dot"], capsys)
    assert code == 0
    assert "digraph before {" in out and "digraph after {" in out and "style=dashed" in out


def test_homs_golden_tsv(capsys):
    parts = []
    for s in ("k", "M_y"):
        for t in ("k", "M_y"):
            code, out, _ = run(["homs", "--case", "2-chain", "--exponents", "3,4", "--source", s, "--target", t], capsys)
            assert code == 0
            parts.append(f"# {s} -> {t}\n{out}")
    assert "".join(parts) == (GOLDEN / "homs_2chain_3_4.tsv").read_text()


def test_fullness_and_collection(capsys, tmp_path):
    code, out, err = run(["fullness", "--case", "2-chain", "--exponents", "3,2"], capsys)
    assert code == 0 and json.loads(out)["full"]
    dest = tmp_path / "c.json"
    code, out, err = run(["collection", "--case", "2-loop", "--exponents", "2,2", "--out", str(dest)], capsys)
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["schema"] == "singcat.collection/1"
    code, out, err = run(["collection", "--case", "2-loop", "--exponents", "2,2", "--format", "dot"], capsys)
    assert out.startswith("digraph collection {")


def test_polynomial_inputs(capsys, tmp_path):
    code, out, _ = run(["classify", "--poly", "x^3*y + y^4"], capsys)
    assert code == 0 and json.loads(out)["case"] == "2-chain"
    f = tmp_path / "w.json"
    f.write_text(json.dumps({"n": 2, "monomials": [[2, 1], [1, 3]]}))
    code, out, _ = run(["group", "--poly", str(f)], capsys)
    data = json.loads(out)
    assert code == 0 and data["reduced_order"] == 5 and data["free_rank"] == 1
    code, out, _ = run(["collection", "--poly", '{"case": "2-loop", "exponents": [2, 2]}'], capsys)
    assert code == 0 and len(json.loads(out)["objects"]) == 4


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--case", "9-spiral", "--exponents", "2"],
        ["verify", "--case", "2-loop", "--exponents", "2"],
        ["verify", "--case", "2-loop", "--exponents", "2,a"],
        ["verify", "--case", "2-loop", "--exponents", "1,2"],
        ["classify", "--poly", "{not json"],
        ["classify", "--poly", "x^2 + q^3"],
        ["homs", "--case", "2-loop", "--exponents", "2,2", "--source", "M_q", "--target", "k"],
        ["homs", "--case", "2-loop", "--exponents", "2,2", "--source", "k", "--target", "k", "--format", "dot"],
        ["homs", "--case", "2-loop", "--exponents", "2,2", "--source", "k", "--target", "k", "--window-margin", "-1"],
        ["collection"],
        ["conjecture", "--type", "chain", "--exponents", "2,2,2"],
        ["frobnicate"],
    ],
)
def test_input_errors_exit_2(argv, capsys):
    code, _, _ = run(argv, capsys)
    assert code == 2


def test_audit_failure_exit_3(monkeypatch, capsys):
    import singcat.stablehom as sh

    def boom(*a, **k):
        raise sh.WindowAuditError("nonzero cohomology at the window top")

    monkeypatch.setattr(sh, "stable_hom", boom)
    code, _, err = run(["homs", "--case", "2-loop", "--exponents", "2,2", "--source", "k", "--target", "k"], capsys)
    assert code == 3 and "window audit" in err


def test_conjecture_and_oracle(capsys):
    code, out, _ = run(["conjecture", "--type", "loop", "--exponents", "2,2,2,2"], capsys)
    data = json.loads(out)
    assert code == 0 and data["count"] == data["formula_count"] == data["milnor_number_of_transpose"] == 16
    code, out, _ = run(["oracle", "group-order", "--case", "3-loop", "--exponents", "2,2,2"], capsys)
    assert json.loads(out) == {"determinant": 9, "walk": 9}
    code, out, _ = run(["oracle", "milnor", "--poly", "x^3 + y^3"], capsys)
    assert json.loads(out)["jacobian_dimension"] == 4
    code, out, _ = run(["oracle", "one-variable", "--exponents", "3"], capsys)
    assert {(r["l"], r["parity"]) for r in json.loads(out)} == {(0, 0), (-1, 1), (-3, 0), (-4, 1), (-6, 0), (-7, 1)}
    code, out, _ = run(["oracle", "layers", "--case", "2-loop", "--exponents", "4,4"], capsys)
    assert json.loads(out) == [1, 2, 3, 4, 3, 2, 1]
    code, out, _ = run(["oracle", "conjecture-counts", "--exponents", "2,2,2,2"], capsys)
    assert sum(json.loads(out)["chain"].values()) == 11


def test_outputs_are_deterministic(capsys, no_cache):
    argv = ["verify", "--case", "2-loop", "--exponents", "3,4", "--format", "tsv"]
    a = run(argv, capsys)[1]
    b = run(argv + ["--jobs", "2"], capsys)[1]
    assert a == b


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "singcat", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("singcat ")
