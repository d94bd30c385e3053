import io
import json
import subprocess
import sys

import pytest

from kleinsig.cli import main
from kleinsig.diagram import parse


@pytest.fixture(autouse=True)
def _plain(monkeypatch):
    monkeypatch.setenv("KLEINSIG_COLOR", "never")


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path, capsys):
    paths = {}
    for name, argv in {"t2": ["theta-n", "2"], "t3": ["theta-n", "3"],
                       "triv": ["basic", "trivial_theta"], "tet": ["tetrahedron"]}.items():
        p = tmp_path / f"{name}.ksg"
        s = tmp_path / f"{name}.script"
        extra = ["--script", str(s)] if name in ("t2", "t3") else []
        assert main(["gen", *argv, "-o", str(p), *extra]) == 0
        paths[name] = str(p)
        paths[name + "_script"] = str(s)
    capsys.readouterr()
    return paths


def test_gen_piped_into_sweep(capsys, monkeypatch):
    code, text, _ = run(capsys, "gen", "theta-n", "2")
    assert code == 0
    code, out, _ = run(capsys, "invariants", "--sweep", stdin=text, monkeypatch=monkeypatch)
    assert code == 0
    rows = [l for l in out.splitlines() if l.startswith("rb:")]
    assert len(rows) == 8
    assert all(l.split()[6] in ("12", "-12") for l in rows)


def test_bound_theta3(capsys, files):
    code, out, _ = run(capsys, "bound", "theta", files["t3"])
    assert code == 0
    assert out.splitlines()[0] == "u_Y ≥ 4.5, u ≥ 5"


def test_invalid_file_exits_1(capsys, tmp_path):
    bad = tmp_path / "bad.ksg"
    bad.write_text("vertex 1: 1 2 3\nvertex 2: 1 3 2\ncolor 1=r 2=b 3=b\n")
    code, out, err = run(capsys, "invariants", str(bad))
    assert code == 1
    assert "bad.ksg: line 1" in err and "three distinct colors" in err
    assert out == ""


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "validate", str(tmp_path / "nope.ksg"))
    assert code == 1 and "nope.ksg" in err


def test_validate(capsys, files):
    code, out, _ = run(capsys, "validate", files["tet"])
    assert code == 0 and "4 vertices" in out


def test_json_is_deterministic_and_versioned(capsys, files):
    first = run(capsys, "invariants", "--json", files["t2"])[1]
    second = run(capsys, "invariants", "--json", files["t2"])[1]
    assert first == second
    data = json.loads(first)
    assert data["schema"] == 1
    assert abs(data["sigma"]) == 12
    assert set(data["constituents"]) == {"rb", "bg", "rg"}


def test_json_rationals(capsys, files):
    data = json.loads(run(capsys, "bound", "theta", "--json", files["t3"])[1])
    assert data["uY_lower"] == {"num": 9, "den": 2}
    assert data["u_lower"] == 5


def test_gordian(capsys, files):
    code, out, _ = run(capsys, "bound", "gordian", files["t3"], files["t2"])
    assert (code, out.strip()) == (0, "d_Y ≥ 1.5")
    code, _, err = run(capsys, "bound", "gordian", files["t2"], files["tet"])
    assert code == 1 and "share V" in err


def test_chain_sharp(capsys, files):
    code, out, _ = run(capsys, "chain", files["t2"], files["triv"], "--script", files["t2_script"])
    assert code == 0
    assert "d_Y ≥ 3, cost 3, gap 0" in out


def test_chain_violation_exits_2(capsys, files, tmp_path):
    short = tmp_path / "short.script"
    short.write_text("same r e0 e0\n")
    code, _, err = run(capsys, "chain", files["t2"], files["triv"], "--script", str(short))
    assert code == 2
    assert "chain violation" in err


def test_chain_json(capsys, files):
    code, out, _ = run(capsys, "chain", "--json", files["t3"], files["triv"],
                       "--script", files["t3_script"])
    data = json.loads(out)
    assert code == 0
    assert data["cost"] == {"num": 9, "den": 2} and data["gap"] == {"num": 0, "den": 1}


def test_foam_ledger(capsys, files):
    code, out, _ = run(capsys, "foam", "ledger", files["t2"], "--script", files["t2_script"])
    assert code == 0
    lines = dict(l.rsplit(None, 1) for l in out.splitlines()[2:])
    assert lines["chi_orb"] == "-4" and lines["cost"] == "3"
    data = json.loads(run(capsys, "foam", "ledger", "--json", files["t3"],
                          "--script", files["t3_script"])[1])
    assert data["chi_orb"] == {"num": -11, "den": 2}


def test_bad_script_reports_line(capsys, files, tmp_path):
    bad = tmp_path / "bad.script"
    bad.write_text("same r e0 e0\nmixed r r e0 e0\n")
    code, _, err = run(capsys, "foam", "ledger", files["t2"], "--script", str(bad))
    assert code == 1 and "line 2" in err


def test_transforms_emit_valid_files(capsys, files):
    for argv in (["mirror", files["t2"]], ["reverse", files["t2"], "--orient", "rb:c0=-"],
                 ["sum3", files["t2"], "1", files["triv"], "1"],
                 ["sum2", files["triv"], "e0", files["triv"], "e0"]):
        code, out, err = run(capsys, "transform", *argv)
        assert code == 0, err
        d = parse(out)
        assert d.orient is not None


def test_mirror_negates_signature_via_cli(capsys, files, tmp_path, monkeypatch):
    out = run(capsys, "transform", "mirror", files["t2"])[1]
    data = json.loads(run(capsys, "invariants", "--json", stdin=out, monkeypatch=monkeypatch)[1])
    base = json.loads(run(capsys, "invariants", "--json", files["t2"])[1])
    assert data["sigma"] == -base["sigma"]


def test_orient_flag_and_file_orient_line(capsys, files, tmp_path):
    p = tmp_path / "or.ksg"
    p.write_text(open(files["tet"]).read() + "orient rb:c0=- bg:c0=+ rg:c0=+\n")
    a = json.loads(run(capsys, "invariants", "--json", str(p))[1])
    b = json.loads(run(capsys, "invariants", "--json", files["tet"],
                       "--orient", "rb:c0=- bg:c0=+ rg:c0=+")[1])
    assert a == b
    code, _, err = run(capsys, "invariants", files["tet"], "--orient", "rb:c5=+")
    assert code == 1 and "no component" in err


def test_usage_errors(capsys):
    code, _, err = run(capsys, "bound", "sideways", "x")
    assert code == 1 and "usage: kleinsig bound" in err
    assert run(capsys)[0] == 1
    code, _, err = run(capsys, "gen", "theta-n")
    assert code == 1 and "missing parameters" in err
    code, _, err = run(capsys, "transform", "sum3", "a")
    assert code == 1


def test_color_modes(capsys, files, monkeypatch):
    monkeypatch.setenv("KLEINSIG_COLOR", "always")
    assert "\033[" in run(capsys, "invariants", files["triv"])[1]
    monkeypatch.setenv("KLEINSIG_COLOR", "never")
    assert "\033[" not in run(capsys, "invariants", files["triv"])[1]


def test_corpus_check(capsys):
    code, out, _ = run(capsys, "corpus", "check", "--json")
    data = json.loads(out)
    assert code == 0
    assert len(data["results"]) == 9
    assert all(r["passed"] for r in data["results"])


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "kleinsig", "gen", "kinoshita", "1", "1", "1"],
                          capture_output=True, text=True, check=True)
    assert parse(proc.stdout).vertex_count == 2
