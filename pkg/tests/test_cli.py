import json
import subprocess
import sys
from pathlib import Path

import pytest

from valmult.cli import run_cli

CONFIGS = Path(__file__).resolve().parents[1] / "docs" / "configs"


def run(argv, capsys):
    code = run_cli(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ideal_command(capsys):
    code, out, _ = run(["ideal", "--weights", "1,pi", "--m", "4"], capsys)
    assert code == 0 and out.strip() == "x^4, x*y, y^2"


def test_ideal_command_arc_and_json(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"family": {"type": "arc"}, "m": 3}))
    out_path = tmp_path / "out.json"
    code, out, _ = run(["ideal", "--config", str(cfg), "--out", str(out_path)], capsys)
    assert code == 0
    assert json.loads(out_path.read_text())["length"] == 3


def test_multiplier_command(capsys):
    code, out, _ = run(["multiplier", "--ideal", "x^2, y^3", "--c", "1"], capsys)
    assert code == 0 and out.strip() == "x, y"


def test_asymptotic_command(tmp_path, capsys):
    out_path = tmp_path / "a.json"
    code, out, _ = run(["asymptotic", "--weights", "1,pi", "--m", "4", "--out", str(out_path)], capsys)
    data = json.loads(out_path.read_text())
    assert code == 0 and data["agrees_with_closed_form"] and data["certified"]
    assert data["j_m"] == [[0, 0]]


def test_verify_theorem_a_config(tmp_path, capsys):
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    code, out, _ = run(["verify", "theorem-a", "--config", str(CONFIGS / "w1pi.json"), "--out", str(out1)], capsys)
    assert code == 0
    assert out.strip().splitlines()[-1] == "# theorem-a: 150 pass, 0 fail, 0 skipped"
    run(["verify", "theorem-a", "--config", str(CONFIGS / "w1pi.json"), "--out", str(out2)], capsys)
    assert out1.read_bytes() == out2.read_bytes()


def test_volume_arc_config(tmp_path, capsys):
    out_path = tmp_path / "v.json"
    code, out, _ = run(["volume", "--config", str(CONFIGS / "arc.json"), "--out", str(out_path)], capsys)
    assert code == 0
    assert json.loads(out_path.read_text())["summary"]["exact"]["exact"] == "0"
    assert '"exact": "0"' in out.splitlines()[-1]


@pytest.mark.parametrize("suite,config", [("minkowski", "minkowski.json"), ("rees", "rees.json"), ("arc", "arc.json")])
def test_verify_suites_pass(suite, config, capsys):
    code, out, _ = run(["verify", suite, "--config", str(CONFIGS / config)], capsys)
    assert code == 0, out


def test_verify_izumi_and_delta_flags(capsys):
    assert run(["verify", "izumi", "--weights", "1,pi", "--trials", "100", "--seed", "3"], capsys)[0] == 0
    assert run(["verify", "delta", "--weights", "3,2", "--m-max", "12"], capsys)[0] == 0


def test_zariski_exits_one(tmp_path, capsys):
    tsv = tmp_path / "z.tsv"
    cfg = json.loads((CONFIGS / "zariski.json").read_text())
    cfg["output"] = {"tsv": str(tsv)}
    cfg["count_depth"] = 1
    p = tmp_path / "z.json"
    p.write_text(json.dumps(cfg))
    code, out, _ = run(["zariski", "--config", str(p)], capsys)
    assert code == 1
    assert tsv.read_text().strip() == out.strip()


def test_izumi_and_rees_commands(capsys):
    code, out, _ = run(["izumi", "--weights", "1,pi"], capsys)
    assert code == 0 and out.split() == ["p", "5", "C", "9"]
    code, out, _ = run(["rees", "--ideal", "x^2, y^3"], capsys)
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["ideal", "--weights", "1,pi"],
    ["ideal", "--weights", "1,0", "--m", "2"],
    ["multiplier", "--ideal", "x^2, y", "--c", "pi"],
    ["verify", "minkowski"],
    ["izumi", "--weights", "1/2,1"],
])
def test_usage_errors_exit_two(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and err


def test_unknown_config_key_exits_two(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"valuation": {"type": "monomial", "weights": [1, 1]}, "colour": "red"}))
    code, _, err = run(["verify", "theorem-a", "--config", str(p)], capsys)
    assert code == 2 and "invalid config" in err


def test_depth_flag_limits_refinement(capsys):
    # 4 vs 1 + pi is decided at shallow depth; a cap of 0 cannot decide it
    assert run(["ideal", "--weights", "1,pi", "--m", "4", "--depth", "40"], capsys)[0] == 0
    assert run(["asymptotic", "--weights", "1,pi", "--m", "4", "--depth", "0"], capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "valmult", "izumi", "--weights", "1,1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.split() == ["p", "2", "C", "3"]
