import json

import pytest

from qiforge.cli import main


def run(tmp_path, *args):
    return main(["--out", str(tmp_path), *args])


def test_ball_command(tmp_path):
    assert run(tmp_path, "ball", "BS(1,2)", "2") == 0
    files = sorted(p.name for p in tmp_path.iterdir())
    assert "resolved_config.json" in files
    csvs = [p for p in tmp_path.iterdir() if p.suffix == ".csv"]
    assert len(csvs) == 1 and len(csvs[0].read_text().splitlines()) == 18


def test_outputs_are_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["--out", str(d), "folner", "BS(1,2)", "4"]) == 0
        assert main(["--out", str(d), "qi-audit", "floor:2", "30"]) == 0
    for p in a.iterdir():
        if p.name != "resolved_config.json":
            assert p.read_bytes() == (b / p.name).read_bytes()


def test_folner_free_group(tmp_path, capsys):
    assert run(tmp_path, "folner", "F_2", "3") == 0
    assert len(capsys.readouterr().out.splitlines()) == 3


def test_uf_test_verdicts(tmp_path, capsys):
    assert run(tmp_path, "uf-test", "index:2", "Z", "100") == 0
    assert "evidence-nonzero" in capsys.readouterr().out
    assert run(tmp_path, "uf-test", "pairs-boundary:2", "Z", "60") == 0
    assert "evidence-zero" in capsys.readouterr().out


def test_inconclusive_exit_code(tmp_path, capsys):
    # ratios of [Z]-[2Z] on [-i, i] are i/2 or (i+1)/2: below 10 up to i=10
    assert run(tmp_path, "uf-test", "index:2", "Z", "10") == 2


def test_qi_audit_report(tmp_path, capsys):
    assert run(tmp_path, "qi-audit", "floor:2", "20", "--K", "2", "--C", "0") == 0
    data = json.loads((tmp_path / "qi_audit.json").read_text())
    assert data["pass"] is False and data["worst_pair"] == [[0], [1]]


def test_rstar_command(tmp_path, capsys):
    assert run(tmp_path, "rstar", "incl:2Z:Z", "--L", "20,40,80") == 0
    lines = (tmp_path / "rstar.csv").read_text().splitlines()
    assert lines[1:] == ["20,10,0.500000,linear", "40,20,0.500000,linear", "80,40,0.500000,linear"]


def test_reproduce(tmp_path, capsys):
    assert run(tmp_path, "reproduce", "sec4-extend") == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 3 and "FAIL" not in out


def _error(capsys):
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1
    return json.loads(err[0])


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"radius": 10, "bogus": 1}))
    assert main(["--config", str(cfg), "--out", str(tmp_path), "ball", "Z", "2"]) == 1
    err = _error(capsys)
    assert err["error"] == "parse" and "bogus" in err["reason"]


def test_config_is_resolved(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"L_list": [10, 20, 30]}))
    assert main(["--config", str(cfg), "--out", str(tmp_path), "--budget", "5000", "rstar", "id:Z"]) == 0
    resolved = json.loads((tmp_path / "resolved_config.json").read_text())
    assert resolved["L_list"] == [10, 20, 30] and resolved["budget"] == 5000


def test_budget_env_override(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("QIFORGE_BUDGET", "10")
    assert run(tmp_path, "ball", "Z^2", "5") == 1
    assert _error(capsys)["error"] == "budget"


@pytest.mark.parametrize("args", [["ball", "Q", "2"], ["qi-audit", "floor:x", "5"], ["uf-test", "nope", "Z"]])
def test_bad_specs(tmp_path, capsys, args):
    assert run(tmp_path, *args) == 1
    assert _error(capsys)["error"] == "parse"


def test_usage_error(tmp_path):
    assert main(["--out", str(tmp_path), "frobnicate"]) == 1
