import io
import json

import pytest

from affine_orbits.affperm import AffinePermutation
from affine_orbits.cli import main
from affine_orbits.linalg import SeriesMatrix
from affine_orbits.orbits_sp import build_gw_Sp, w_J

GOLDEN_O = "(2 4) ; 4,-2,-5,-2,3"
GOLDEN_SP = "(1 2)(3 4)(5 6) ; 1,1,-3,-3,2,2"


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    lines = [json.loads(x) for x in out.splitlines() if x.strip()]
    return code, lines, err


def rep(capsys, group, w, *extra):
    code, lines, _ = run(capsys, "rep", "--group", group, "--w", w, *extra)
    assert code == 0 and len(lines) == 1
    return lines[0]


def test_rep_sp_golden(capsys):
    w = AffinePermutation.parse(GOLDEN_SP)
    out = rep(capsys, "Sp", GOLDEN_SP)
    assert out["w"] == str(w)
    assert SeriesMatrix.from_json(out["g"]) == build_gw_Sp(w)


def test_verify_accepts_representative_and_rejects_tampering(capsys, tmp_path, monkeypatch):
    g = rep(capsys, "O", GOLDEN_O)["g"]
    path = tmp_path / "g.json"
    path.write_text(json.dumps(g))
    code, lines, _ = run(capsys, "verify", "--group", "O", "--w", GOLDEN_O, "--g", str(path))
    assert code == 0 and lines[0]["verified"]
    other = tmp_path / "h.json"
    other.write_text(json.dumps(rep(capsys, "O", "(2 4) ; 2,-2,-3,-2,1")["g"]))
    code, lines, _ = run(capsys, "verify", "--group", "O", "--w", GOLDEN_O, "--g", str(other))
    assert code == 2 and not lines[0]["verified"]


def test_verify_sp_and_so(capsys, tmp_path):
    for group, w, extra in (("Sp", GOLDEN_SP, ()),
                            ("SO", "(1 2)(3 4) ; 2,2,-2,-2", ("--sign", "-"))):
        path = tmp_path / f"{group}.json"
        path.write_text(json.dumps(rep(capsys, group, w, *extra)["g"]))
        code, lines, _ = run(capsys, "verify", "--group", group, "--w", w, *extra,
                             "--g", str(path))
        assert code == 0 and lines[0]["verified"]


def test_classify_o_golden_from_g(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(rep(capsys, "O", GOLDEN_O)["g"]))
    code, lines, err = run(capsys, "classify", "--group", "O", "--from-g", str(path))
    assert code == 0
    assert lines[0]["w"] == rep(capsys, "O", GOLDEN_O)["w"]
    assert lines[0]["verified"] and "1/1 verified" in err


def test_classify_sp_identity_gives_wj(capsys, tmp_path):
    one = [["1" if i == j else "0" for j in range(4)] for i in range(4)]
    path = tmp_path / "one.json"
    path.write_text(json.dumps(one))
    code, lines, _ = run(capsys, "classify", "--group", "Sp", "--from-g", str(path),
                         "--backend", "exact")
    assert code == 0
    assert lines[0]["w"] == str(AffinePermutation(w_J(2), (0,) * 4))


def test_classify_so_minus_sign(capsys, tmp_path):
    w = "(1 2)(3 4) ; 2,2,-2,-2"
    path = tmp_path / "g.json"
    path.write_text(json.dumps(rep(capsys, "SO", w, "--sign", "-")["g"]))
    code, lines, _ = run(capsys, "classify", "--group", "SO", "--from-g", str(path))
    assert code == 0 and lines[0]["sign"] == "-"


@pytest.mark.parametrize("group,n", [("O", 3), ("SO", 4), ("Sp", 4)])
def test_random_then_classify(capsys, monkeypatch, group, n):
    code, lines, _ = run(capsys, "random", "--group", group, "--n", str(n), "--count", "10",
                         "--seed", "7")
    assert code == 0 and len(lines) == 10
    stream = "\n".join(json.dumps(x) for x in lines)
    code, out, err = run(capsys, "classify", "--group", group, "--from-g", "-",
                         stdin=stream, monkeypatch=monkeypatch)
    assert code == 0, err
    assert all(x["verified"] and x["matches_expected"] for x in out)
    assert "10/10 match" in err


def test_random_is_deterministic(capsys):
    a = run(capsys, "random", "--group", "SO", "--n", "3", "--count", "3", "--seed", "5")[1]
    b = run(capsys, "random", "--group", "SO", "--n", "3", "--count", "3", "--seed", "5")[1]
    c = run(capsys, "random", "--group", "SO", "--n", "3", "--count", "3", "--seed", "6")[1]
    assert a == b and a != c


@pytest.mark.parametrize("name,n,count", [("eSymAPM", 2, 8), ("SkewAPM", 2, 3)])
def test_enum_counts(capsys, name, n, count):
    code, lines, _ = run(capsys, "enum", "--set", name, "--n", str(n), "--count-only")
    assert code == 0 and lines[-1]["count"] == count
    code, lines, _ = run(capsys, "enum", "--set", name, "--n", str(n))
    assert len(lines) == count


@pytest.mark.parametrize("argv", [
    ["rep", "--group", "O", "--w", "(1 2 ; 1"],
    ["rep", "--group", "O", "--w", "(1 2) ; 1,0"],
    ["rep", "--group", "SO", "--w", "(1 2) ; 0,0"],
    ["rep", "--group", "Sp", "--w", "(1 2) ; 0,0", "--sign", "+"],
    ["random", "--group", "Sp", "--n", "3"],
    ["enum", "--set", "SkewAPM", "--n", "3"],
    ["frobnicate"],
    ["classify", "--group", "O", "--prec", "2", "--in", "x"],
])
def test_usage_errors_exit_one(capsys, argv):
    with pytest.raises(SystemExit) as info:
        raise SystemExit(main(argv))
    assert info.value.code == 1


def test_classify_rejects_odd_determinant_h(capsys, tmp_path):
    path = tmp_path / "h.json"
    path.write_text(json.dumps([["t", "0"], ["0", "1"]]))
    code, lines, _ = run(capsys, "classify", "--group", "O", "--in", str(path))
    assert code == 1 and "DetNotSquare" in lines[0]["error"]
