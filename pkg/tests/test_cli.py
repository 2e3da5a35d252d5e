import json
import subprocess
import sys

import pytest

from omfiber.cli import main

HEXAGON = "arr 2 3\n1 0\n0 1\n1 -1\n"
B2 = "arr 2 2\n1 0\n0 1\n"
B3 = "arr 3 3\n1 0 0\n0 1 0\n0 0 1\n"
ONE = "arr 1 1\n1\n"


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None), out


def test_validate_rank_one(capsys, write):
    code, rep, _ = run(capsys, "validate", write("r1.om", "om 1\n0\n+\n-\n"))
    assert code == 0 and rep["ok"] and rep["rank"] == 1


def test_validate_hexagon_covector_file(capsys, write, tmp_path):
    arr = write("a.arr", HEXAGON)
    om_path = str(tmp_path / "a.om")
    code, rep, _ = run(capsys, "covectors", arr, "--emit", om_path)
    assert code == 0 and len(rep["topes"]) == 6
    code, rep, _ = run(capsys, "validate", om_path)
    assert code == 0 and rep["n_topes"] == 6 and rep["violation"] is None


def test_validate_corrupted(capsys, write):
    code, rep, _ = run(capsys, "validate", write("bad.om", "om 2\n00\n++\n+-\n-+\n--\n"))
    assert code == 1
    assert rep["ok"] is False and rep["violation"]["axiom"] == 4


@pytest.mark.parametrize("text, betti", [(HEXAGON, [1, 4]), (ONE, [1]), (B3, [1, 2, 1])])
def test_milnor(capsys, write, text, betti):
    code, rep, _ = run(capsys, "milnor", write("in.arr", text))
    assert code == 0
    assert rep["betti"] == betti and rep["torsion"] == []
    assert rep["euler_identity_ok"] is True
    assert set(rep) == {"n", "fiber_cells", "betti", "torsion", "euler", "chi_projective", "euler_identity_ok"}


def test_milnor_from_covector_file(capsys, write):
    code, rep, _ = run(capsys, "milnor", write("r1.om", "om 1\n0\n+\n-\n"))
    assert code == 0 and rep["betti"] == [1]


@pytest.mark.parametrize("text", [HEXAGON, B2, ONE])
def test_check_passes(capsys, write, text):
    code, rep, _ = run(capsys, "check", write("in.arr", text))
    assert code == 0 and rep["ok"]
    assert all(rep["checks"].values())


def test_info_and_summaries(capsys, write):
    path = write("a.arr", HEXAGON)
    assert run(capsys, "info", path)[1]["os_betti"] == [1, 3, 2]
    assert run(capsys, "salvetti", path)[1]["f_vector"] == [6, 12, 6]
    assert run(capsys, "rksd", path)[1]["f_vector"] == [6, 24, 18]
    code, rep, _ = run(capsys, "subdivide", path, "--base", "+-+", "--check")
    assert code == 0 and rep["base"] == "+-+" and rep["check"]["ok"]
    assert run(capsys, "subdivide", path, "--base", "2")[1]["base"] == "+-+"


def test_usage_and_parse_errors(capsys, write):
    assert main([]) == 2
    assert main(["milnor", write("bad.arr", "arr 2 1\n1\n")]) == 2
    assert main(["subdivide", write("a.arr", HEXAGON), "--base", "+++0"]) == 2
    assert main(["milnor", "/nonexistent/file"]) == 2
    assert main(["--threads", "0", "info", write("b.arr", HEXAGON)]) == 2
    capsys.readouterr()


def test_invalid_om_exits_one(capsys, write):
    code, rep, _ = run(capsys, "milnor", write("bad.om", "om 2\n00\n++\n--\n"))
    assert code == 1 and rep["ok"] is False


def test_export_and_homology_round_trip(capsys, write, tmp_path):
    path = write("a.arr", HEXAGON)
    facets = str(tmp_path / "s.facets")
    poset = str(tmp_path / "s.poset")
    assert main(["export", path, "--complex", "salvetti", "--facets", "--to", facets]) == 0
    assert main(["export", path, "--complex", "salvetti", "--to", poset]) == 0
    capsys.readouterr()
    h1 = run(capsys, "homology", facets)[1]
    h2 = run(capsys, "homology", poset)[1]
    assert h1 == h2 == {"betti": [1, 3, 2], "torsion": [], "euler": 0}
    fiber = str(tmp_path / "f.poset")
    assert main(["export", path, "--complex", "fiber", "--to", fiber]) == 0
    capsys.readouterr()
    assert run(capsys, "homology", fiber)[1]["betti"] == [1, 4]


def test_export_matching(capsys, write, tmp_path):
    path = write("a.arr", HEXAGON)
    out = tmp_path / "m.txt"
    code, rep, _ = run(capsys, "export", path, "--complex", "matching", "--pair", "MM<ZM", "--to", str(out))
    assert code == 0 and rep["acyclic"] and rep["closed_form_ok"]
    lines = out.read_text().splitlines()
    assert sum(x.startswith("match") for x in lines) == rep["pairs"]
    assert sum(x.startswith("crit") for x in lines) == rep["critical"]


def test_output_is_deterministic(capsys, write, monkeypatch):
    path = write("a.arr", B3)
    outs = set()
    for threads in ("1", "3"):
        monkeypatch.setenv("OMFIBER_THREADS", threads)
        for _ in range(2):
            outs.add(run(capsys, "check", path)[2])
    outs.add(run(capsys, "--threads", "4", "check", path)[2])
    assert len(outs) == 1


def test_module_entry_point(write):
    path = write("a.arr", HEXAGON)
    res = subprocess.run([sys.executable, "-m", "omfiber", "milnor", path], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["betti"] == [1, 4]
