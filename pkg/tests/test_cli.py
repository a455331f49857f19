"""cli: subcommands, exit codes, config precedence, determinism."""
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from fwt.cli import main

GOLDEN = (Path(__file__).resolve().parents[1] / "src" / "fwt" / "data" / "eq40.txt").read_text(encoding="utf-8")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------- transform

def test_transform_em_matches_golden(capsys):
    code, out, _ = run(capsys, "transform", "--case", "em", "--policy", "nonrel:3")
    assert code == 0 and out == GOLDEN


def test_transform_classic_method(capsys):
    code, out, _ = run(capsys, "transform", "--case", "em", "--policy", "nonrel:3", "--method", "classic")
    assert code == 0 and out == GOLDEN


def test_transform_free_exact(capsys):
    code, out, _ = run(capsys, "transform", "--case", "free")
    assert code == 0 and out.strip() == "beta*sqrt(m^2 + pi_1^2 + pi_2^2 + pi_3^2)"


def test_transform_json_report(capsys, tmp_path):
    rep = tmp_path / "report.json"
    code, out, _ = run(capsys, "transform", "--case", "free", "--format", "json", "--report", str(rep))
    d = json.loads(out)
    assert code == 0 and "seconds" not in d and json.loads(rep.read_text()) == d


def test_transform_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("[hamiltonian]\nbeta*m + e*Phi\n"))
    code, out, _ = run(capsys, "transform", "--input", "-", "--policy", "nonrel:1")
    assert code == 0 and out.strip() == "m*beta + e*Phi"


def test_transform_output_file(capsys, tmp_path):
    dest = tmp_path / "h.tex"
    code, out, _ = run(capsys, "transform", "--case", "free", "--format", "latex", "--out", str(dest))
    assert code == 0 and out == "" and "\\sqrt{" in dest.read_text()


def test_transform_deterministic(capsys):
    outs = {run(capsys, "transform", "--case", "em", "--policy", "nonrel:3", "--format", "json")[1]
            for _ in range(2)}
    assert len(outs) == 1


# ---------------------------------------------------------------- exit codes

def test_exit_parse_error(capsys, tmp_path):
    src = tmp_path / "bad.fwh"
    src.write_text("[hamiltonian]\nbeta*m +\n")
    code, _, err = run(capsys, "transform", "--input", str(src))
    assert code == 2 and "parse error" in err


def test_exit_series_not_requested(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("[hamiltonian]\nbeta*m + alpha.pi + e*Phi\n"))
    code, _, err = run(capsys, "transform", "--input", "-")
    assert code == 3 and "series" in err


def test_exit_verify_failure(capsys):
    code, out, _ = run(capsys, "verify", "--case", "free", "--grid", "3", "--tol", "1e-30")
    assert code == 4 and json.loads(out)


def test_exit_step_rejected(capsys):
    code, _, err = run(capsys, "simulate", "--B", "0,0,5", "--xi0", "1,0,0", "--dt", "1", "--t-end", "20",
                       "--tol", "1e-12", "--summary", "-")
    assert code == 5 and "step rejected" in err


def test_exit_usage(capsys):
    with pytest.raises(SystemExit) as ei:
        main(["transform", "--format", "pdf"])
    assert ei.value.code == 1
    code, _, _ = run(capsys, "transform", "--input", "/nonexistent/file.fwh")
    assert code == 1


# ---------------------------------------------------------------- verify, simulate, render

def test_verify_case_and_identities(capsys):
    code, out, _ = run(capsys, "verify", "--case", "d", "--grid", "3", "--identities", "--trials", "20")
    assert code == 0
    d = json.loads(out)
    assert "seconds" not in out and d


def test_verify_pinned_point(capsys):
    code, out, _ = run(capsys, "verify", "--case", "free", "--p", "0,0,0")
    assert code == 0 and json.loads(out)


def test_simulate_csv_and_summary(capsys):
    code, out, err = run(capsys, "simulate", "--B", "0,0,0.01", "--xi0", "1,0,0", "--dt", "0.5",
                         "--t-end", "2")
    assert code == 0
    assert out.splitlines()[0].startswith("t,x,y,z") and len(out.splitlines()) == 6
    assert "precession_frequency" in err and "kernel" not in err


def test_simulate_gradient_field(capsys):
    code, out, _ = run(capsys, "simulate", "--E", "0.01,0,0", "--dE", "0.01,0,0,0,0,0,0,0,-0.01",
                       "--dt", "0.1", "--t-end", "0.3", "--format", "json")
    assert code == 0 and json.loads(out)


def test_render_golden(capsys):
    code, out, _ = run(capsys, "render", "--golden", "eq40")
    assert code == 0 and out == GOLDEN
    code, out, _ = run(capsys, "render", "--golden", "eq39", "--format", "latex", "--lhs", "H_{39}")
    assert code == 0 and "H_{39}" in out


# ---------------------------------------------------------------- config and color

def test_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "fw.ini"
    cfg.write_text("[simulate]\ndt = 0.5\nt-end = 1\nformat = json\n")
    code, out, _ = run(capsys, "simulate", "--config", str(cfg), "--summary", "-")
    assert code == 0 and json.loads(out)  # format and step size come from the file
    code, out2, _ = run(capsys, "simulate", "--config", str(cfg), "--dt", "0.25", "--summary", "-")
    assert code == 0 and out2 != out  # the flag wins over the file


def test_config_errors(capsys, tmp_path):
    cfg = tmp_path / "fw.ini"
    cfg.write_text("[simulate]\nwarp = 9\n")
    assert run(capsys, "simulate", "--config", str(cfg))[0] == 1
    cfg.write_text("[nonsense]\nx = 1\n")
    assert run(capsys, "simulate", "--config", str(cfg))[0] == 2


@pytest.mark.parametrize("flag, colored", [("1", True), ("0", False)])
def test_fw_color(capsys, monkeypatch, flag, colored):
    monkeypatch.setenv("FW_COLOR", flag)
    code, out, _ = run(capsys, "transform", "--case", "free")
    assert code == 0 and ("\x1b[" in out) is colored


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "fwt.cli", "render", "--golden", "eq40"],
                       capture_output=True, text=True, env={"FW_COLOR": "0", "PATH": ""})
    assert r.returncode == 0 and r.stdout == GOLDEN
