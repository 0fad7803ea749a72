import io
import json
import sys

import pytest

from iqsieve.cli import main


def run_cli(argv):
    buf = io.StringIO()
    old = sys.stdout
    sys.stdout = buf
    try:
        code = main(argv)
    finally:
        sys.stdout = old
    return code, buf.getvalue()


def test_sieve_rank_one_row():
    code, out = run_cli(["sieve", "--d", "-1", "--family", "power", "--k", "2",
                         "--q", "1", "--n", "4"])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "d,family,k,Q,N,F,M,lambda_max,rhs,ratio,iterations,seed"
    row = lines[1].split(",")
    assert row[:7] == ["-1", "power", "2", "1", "4", "4", "13"]
    assert float(row[7]) == pytest.approx(52.0, rel=1e-9)


def test_bounds_square_example():
    code, out = run_cli(["bounds", "--theorem", "square", "--q", "4", "--n", "16",
                         "--epsilon", "0"])
    assert code == 0
    assert out.strip().split("\n")[1].endswith(",144")


def test_sieve_json_format():
    code, out = run_cli(["sieve", "--d", "-1", "--family", "all", "--q", "1,2",
                         "--n", "4", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert len(payload) == 2
    assert payload[0]["Q"] == 1 and payload[1]["Q"] == 2
    assert payload[0]["family"] == "all"


def test_rerun_byte_identical():
    argv = ["sieve", "--d", "-3", "--family", "square", "--q", "1,2", "--n", "4,9",
            "--seed", "7"]
    code1, out1 = run_cli(argv)
    code2, out2 = run_cli(argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_out_file(tmp_path):
    path = tmp_path / "rows.csv"
    code, out = run_cli(["sieve", "--d", "-1", "--family", "all", "--q", "1",
                         "--n", "2", "--out", str(path)])
    assert code == 0
    assert out == ""
    assert path.read_text().startswith("d,family,")


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("d=-1\nfamily=all\nq=1\nn=2\nseed=3\n# comment\n")
    code1, out1 = run_cli(["sieve", "--config", str(cfg)])
    assert code1 == 0
    assert ",all," in out1.split("\n")[1]
    code2, out2 = run_cli(["sieve", "--config", str(cfg), "--q", "2"])
    assert code2 == 0
    assert out2.split("\n")[1].split(",")[3] == "2"


def test_usage_errors():
    code, _ = run_cli(["sieve", "--d", "-1", "--q", "abc", "--n", "4"])
    assert code == 2
    code, _ = run_cli(["nonsense"])
    assert code == 2
    code, _ = run_cli(["sieve", "--d", "-4", "--q", "1", "--n", "1"])
    assert code == 2  # non-squarefree d
    code, _ = run_cli(["theorem2", "--d", "-1", "--s-file", "/nonexistent",
                       "--bigq", "4", "--n", "16"])
    assert code == 2


def test_prime_precondition_error():
    code, _ = run_cli(["sieve", "--d", "-1", "--family", "prime", "--q", "8",
                       "--n", "4"])
    assert code == 2  # Q < 16 rejected by the prime bound


def test_theorem2_and_theorem3_commands(tmp_path):
    s_file = tmp_path / "moduli.txt"
    s_file.write_text("# squares of the units\n1 0\n-1 0\n1 0\n")
    code, out = run_cli(["theorem2", "--d", "-1", "--s-file", str(s_file),
                         "--bigq", "1", "--n", "16", "--z-samples", "4"])
    assert code == 0
    lines = out.strip().split("\n")
    row = lines[1].split(",")
    assert row[1] == "custom" and row[5] == "3"  # F: three unit moduli rows
    code3, out3 = run_cli(["theorem3", "--d", "-1", "--s-file", str(s_file),
                           "--bigq", "1", "--n", "16"])
    assert code3 == 0
    assert out3.startswith("d,Q,N,X\n")
    x_val = float(out3.strip().split("\n")[1].split(",")[3])
    assert 0.0 < x_val <= 3.0  # three points coverable at once, denominator >= 1


def test_verify_suites_exit_zero():
    for suite in ("ring", "character", "residue"):
        code, out = run_cli(["verify", suite, "--d", "-1"])
        assert code == 0, out
        assert "FAIL" not in out
    code, out = run_cli(["verify", "ring", "--d", "-11", "--seed", "5"])
    assert code == 0


def test_verify_rerun_identical():
    code1, out1 = run_cli(["verify", "character", "--d", "-3", "--seed", "2"])
    code2, out2 = run_cli(["verify", "character", "--d", "-3", "--seed", "2"])
    assert code1 == code2 == 0
    assert out1 == out2


def test_thread_cap_does_not_change_output(monkeypatch):
    argv = ["sieve", "--d", "-1", "--family", "all", "--q", "1,2,4", "--n", "4,9",
            "--seed", "6"]
    monkeypatch.setenv("IQSIEVE_THREADS", "1")
    _, out1 = run_cli(argv)
    monkeypatch.setenv("IQSIEVE_THREADS", "4")
    _, out4 = run_cli(argv)
    assert out1 == out4
    monkeypatch.setenv("IQSIEVE_THREADS", "zero")
    code, _ = run_cli(argv)
    assert code == 2
    monkeypatch.setenv("IQSIEVE_THREADS", "-2")
    code, _ = run_cli(argv)
    assert code == 2
