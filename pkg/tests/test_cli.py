import json
import subprocess
import sys

import pytest

from conftest import eleven_tree, path, star
from quantree.charpoly import compute_ratio
from quantree.cli import main
from quantree.tree import RootedTree, canonical_code


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_tree(tmp_path, t, name="t.json"):
    f = tmp_path / name
    f.write_text(json.dumps(t.to_json()))
    return str(f)


def test_forward_p3_center(tmp_path, capsys):
    code, out, _ = run(capsys, "forward", "--tree", write_tree(tmp_path, path(3, 1)))
    js = json.loads(out)
    assert code == 0
    assert js["psi"]["text"] == "-2z^3+2z"
    assert (js["ratio_num"]["text"], js["ratio_den"]["text"]) == ("-2z^2+2", "z")


def test_forward_p2(tmp_path, capsys):
    _, out, _ = run(capsys, "forward", "--tree", write_tree(tmp_path, path(2)))
    assert json.loads(out)["psi"]["text"] == "z^2-1"


@pytest.mark.parametrize("payload", ["{oops", '{"p": 3, "root": 0, "edges": [[0, 1]]}', "[]"])
def test_forward_malformed(tmp_path, capsys, payload):
    f = tmp_path / "bad.json"
    f.write_text(payload)
    code, out, err = run(capsys, "forward", "--tree", str(f))
    assert code == 2 and out == "" and "error" in err


def test_missing_file(capsys):
    code, _, _ = run(capsys, "forward", "--tree", "/nonexistent/tree.json")
    assert code == 2


def test_invert_poly_eleven(capsys):
    code, out, _ = run(capsys, "invert-poly", "--num", "-108z^6+258z^4-202z^2+52",
                       "--den", "36z^5-58z^3+23z", "--d0", "3", "--pmax", "12")
    js = json.loads(out)
    assert code == 0 and js["count"] == 1
    tree = RootedTree.from_json(js["results"][0]["tree"])
    assert tree.p == 11 and canonical_code(tree) == canonical_code(eleven_tree())


def test_invert_poly_minus_203_variant_is_empty(capsys):
    code, out, _ = run(capsys, "invert-poly", "--num", "-108z^6+258z^4-203z^2+52",
                       "--den", "36z^5-58z^3+23z", "--d0", "3", "--pmax", "12")
    assert code == 0 and json.loads(out)["count"] == 0


def test_invert_poly_json_coefficients_and_trace(capsys):
    code, out, err = run(capsys, "invert-poly", "--num", "[2, 0, -2]", "--den", "[0, 1]", "--pmax", "5", "--trace")
    js = json.loads(out)
    assert code == 0 and js["d0"] == 2
    assert [r["code"] for r in js["results"]] == [canonical_code(path(3, 1))]
    assert "-2z + 2/z" in err


def test_invert_poly_all_roots_dedupes(capsys):
    # P3 at the center and P3 at an end differ as rooted shapes only
    _, out, _ = run(capsys, "invert-poly", "--num", "[2, 0, -2]", "--den", "[0, 1]", "--pmax", "6", "--all-roots")
    codes = [r["code"] for r in json.loads(out)["results"]]
    assert len(codes) == len(set(codes))


def test_invert_poly_exit_codes(capsys):
    assert run(capsys, "invert-poly", "--num", "[3,0,-3]", "--den", "[0,1]", "--d0", "2", "--pmax", "6")[0] == 3
    assert run(capsys, "invert-poly", "--num", "3z^^2", "--den", "z", "--pmax", "6")[0] == 2
    assert run(capsys, "invert-poly", "--num", "z", "--den", "0", "--pmax", "6")[0] == 2
    assert run(capsys, "invert-poly", "--num", "z^2+1", "--den", "z", "--pmax", "6")[0] == 3


def test_spectra_p2(tmp_path, capsys):
    code, out, _ = run(capsys, "spectra", "--tree", write_tree(tmp_path, path(2)), "--problem", "neumann", "--periods", "2")
    js = json.loads(out)
    assert code == 0 and sum(e["multiplicity"] for e in js["eigenvalues"]) == 5


def test_invert_spectra_star(tmp_path, capsys):
    t = write_tree(tmp_path, star(3))
    for problem in ("neumann", "dirichlet"):
        _, out, _ = run(capsys, "spectra", "--tree", t, "--problem", problem)
        (tmp_path / f"{problem}.json").write_text(out)
    code, out, _ = run(capsys, "invert-spectra", "--neumann", str(tmp_path / "neumann.json"),
                       "--dirichlet", str(tmp_path / "dirichlet.json"), "--d0", "3")
    js = json.loads(out)
    assert code == 0 and [r["code"] for r in js["results"]] == [canonical_code(star(3))]
    code, out, _ = run(capsys, "invert-spectra", "--neumann", str(tmp_path / "neumann.json"),
                       "--dirichlet", str(tmp_path / "neumann.json"), "--d0", "3")
    assert code == 3


def test_snowflake_invert(capsys):
    from quantree.tree import make_snowflake
    R = compute_ratio(make_snowflake([2, 2, 5]))
    code, out, _ = run(capsys, "snowflake-invert", "--num", R.num.to_string(), "--den", R.den.to_string())
    assert code == 0 and json.loads(out)["arms"] == [2, 2, 5]
    R = compute_ratio(eleven_tree())
    code, _, err = run(capsys, "snowflake-invert", "--num", R.num.to_string(), "--den", R.den.to_string())
    assert code == 3 and "not a snowflake" in err


def test_census(capsys):
    code, out, _ = run(capsys, "census", "--pmax", "4")
    js = json.loads(out)
    assert code == 0 and js["total_collisions"] == 0
    assert [lv["classes"] for lv in js["levels"]] == [1, 1, 1, 2]
    assert run(capsys, "census", "--pmax", "11")[0] == 4


def test_census_two_spectra(capsys):
    _, out, _ = run(capsys, "census", "--pmax", "9", "--pmin", "9", "--two-spectra")
    level = json.loads(out)["levels"][0]
    assert len(level["collisions"]) >= 1
    assert level["two_spectra_collisions"] == []


def test_enumerate_and_bound(capsys):
    _, out, _ = run(capsys, "enumerate", "--p", "7", "--mode", "free")
    assert json.loads(out)["count"] == 11
    _, out, _ = run(capsys, "enumerate", "--p", "5", "--mode", "rooted")
    assert json.loads(out)["count"] == 9
    assert run(capsys, "enumerate", "--p", "13")[0] == 4


def test_random_is_seeded(capsys):
    a = run(capsys, "random", "--p", "9", "--count", "3", "--seed", "7")[1]
    b = run(capsys, "random", "--p", "9", "--count", "3", "--seed", "7")[1]
    assert a == b and len(json.loads(a)) == 3


def test_dot_export(tmp_path, capsys):
    _, out, _ = run(capsys, "dot-export", "--tree", write_tree(tmp_path, path(3, 1)))
    assert "doublecircle" in out and out.count("--") == 2


def test_output_file(tmp_path, capsys):
    dest = tmp_path / "out.json"
    code, out, _ = run(capsys, "-o", str(dest), "forward", "--tree", write_tree(tmp_path, star(3)))
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["psi"]["text"] == "3z^4-3z^2"


def test_deterministic_output(tmp_path, capsys):
    t = write_tree(tmp_path, eleven_tree())
    argsets = [
        ["forward", "--tree", t],
        ["invert-poly", "--num", "[2,0,-2]", "--den", "[0,1]", "--pmax", "7"],
        ["census", "--pmax", "9", "--pmin", "8"],
    ]
    for argv in argsets:
        first = run(capsys, *argv)[1]
        assert run(capsys, *argv)[1] == first


def test_forward_then_invert_round_trip(tmp_path, capsys, example_trees):
    for name, t in example_trees.items():
        _, out, _ = run(capsys, "forward", "--tree", write_tree(tmp_path, t, f"{name}.json"))
        js = json.loads(out)
        code, out, _ = run(capsys, "invert-poly", "--num", js["ratio_num"]["text"], "--den", js["ratio_den"]["text"],
                           "--pmax", str(t.p))
        assert code == 0
        assert canonical_code(t) in {r["code"] for r in json.loads(out)["results"]}, name


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "quantree", "forward", "--tree", str(tmp_path / "nope.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    assert proc.stderr.startswith("quantree: error:")
