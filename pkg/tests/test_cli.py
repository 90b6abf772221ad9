import json
import subprocess
import sys

import pytest

from gepkit.cli import COMMANDS, main, run


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_degree(capsys):
    assert call(capsys, "degree", "--expr", "t1*exp(2)+t1") == (0, "3\n", "")


def test_decompose_verified(capsys):
    code, out, _ = call(capsys, "decompose", "--n", "2", "--expr", "exp(2)", "--verify")
    obj = json.loads(out)
    assert code == 0 and obj["order"] == 1 and obj["verified"]["ok"] is True


def test_rank(capsys):
    assert call(capsys, "rank", "--expr", "t1^2", "--box", "0..3")[:2] == (0, "rank 3\n")


def test_spectrum_and_deltas(capsys):
    assert call(capsys, "spectrum", "--expr", "t1 + exp(2)")[1] == "{exp(1); exp(2)}\n"
    assert call(capsys, "delta", "--expr", "t1^2", "--step", "1")[1] == "2*t1 + 1\n"
    assert call(capsys, "mdelta", "--expr", "t1*exp(2)", "--lambda", "2", "--step", "1")[1] == "2*exp(2)\n"


def test_annihilate(capsys):
    code, out, _ = call(capsys, "annihilate", "--expr", "t1*exp(2)+t1^2", "--step", "1", "--step", "2")
    assert code == 0 and out.strip().endswith("->  0")


def test_verify_round_trip(capsys, tmp_path):
    wfile = tmp_path / "w.json"
    code, out, _ = call(capsys, "decompose", "--n", "3", "--expr", "t1^2")
    wfile.write_text(out)
    assert call(capsys, "verify", "--expr", "t1^2", "--witness", str(wfile))[:2] == (0, "ok order=3\n")
    code, out, _ = call(capsys, "verify", "--expr", "t1^2 + 1", "--witness", str(wfile))
    assert code == 1 and json.loads(out)["ok"] is False


def test_sample_then_reconstruct(capsys, tmp_path):
    csv_file = tmp_path / "g.csv"
    code, out, _ = call(capsys, "sample", "--expr", "t1*exp(2) + 1", "--box", "0..11")
    csv_file.write_text(out)
    assert call(capsys, "reconstruct", "--csv", str(csv_file))[:2] == (0, "1 + t1*exp(2)\n")


def test_refute_and_bounds(capsys):
    code, out, _ = call(capsys, "refute2", "--expr", "t1^2+t2^2", "--n", "3")
    assert out.startswith("refuted") and "[4]" in out
    code, out, _ = call(capsys, "bounds", "--expr", "t1^2", "--n", "2", "--box", "0..3")
    assert out == "3 <= order <= 3  [EXACT]\n"


def test_json_report_fields(capsys):
    code, out, _ = call(capsys, "rank", "--json", "--expr", "exp(2)", "--box", "0..4", "--seed", "5")
    rep = json.loads(out)
    assert set(rep) == {"command", "argv", "input_digest", "seed", "status", "flags", "result"}
    assert rep["seed"] == 5 and rep["flags"] == ["EXACT"] and rep["result"]["rank"] == 1


def test_heuristic_flag_in_report(capsys):
    code, out, _ = call(capsys, "bounds", "--json", "--expr", "t1", "--n", "3", "--box", "0..1", "--kmax", "2")
    assert json.loads(out)["flags"] == ["HEURISTIC"]


def test_reports_are_deterministic():
    argv = ["--json", "--expr", "t1", "--n", "3", "--box", "0..1", "--seed", "2"]
    assert run("bounds", argv) == run("bounds", argv)


def test_out_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    call(capsys, "degree", "--expr", "exp(3)", "--out", str(target))
    assert json.loads(target.read_text())["result"]["degree"] == 1


def test_timing_goes_to_stderr(capsys):
    code, out, err = call(capsys, "degree", "--expr", "t1", "--timing")
    assert out == "1\n" and err.startswith("elapsed")


@pytest.mark.parametrize(
    "argv",
    [
        ["degree", "--expr", "exp(0)"],
        ["degree"],
        ["decompose", "--expr", "t1^2", "--n", "2"],
        ["reconstruct", "--csv", "/nonexistent.csv"],
        ["nosuchcommand"],
    ],
)
def test_errors_exit_2(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 2 and out == "" and "error" in err


def test_every_documented_command_exists():
    for name in ("degree", "spectrum", "delta", "mdelta", "annihilate", "decompose", "verify",
                 "rank", "bounds", "refute2", "reconstruct", "selftest"):
        assert name in COMMANDS


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gepkit", "degree", "--expr", "t1^2*exp(2) + t1"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "4\n"
