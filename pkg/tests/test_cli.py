import json

import pytest

from hdcoop import analysis
from hdcoop.cli import EXIT_CONTRACT, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_ldm_sum_outputs(capsys):
    code, out, _ = run(capsys, "ldm-sum", "2", "4", "8")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "24/5 (δ*=1/2)"
    assert run(capsys, "ldm-sum", "2", "2", "5")[1].splitlines()[0] == "2 (δ*: any)"
    assert run(capsys, "ldm-sum", "0", "0", "0")[1].startswith("0")


def test_ldm_cog_output(capsys):
    code, out, _ = run(capsys, "ldm-cog", "2", "3", "5", "2", "6")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "2 (δ*=1/2)"
    assert "listening time δ0: 1/2" in out


def test_gauss_sum_region_one(capsys):
    code, out, _ = run(capsys, "gauss-sum", "1e4", "1e2", "1e3")
    assert code == EXIT_OK
    assert "note: --theta not given, using 0" in out
    assert "cooperation: off" in out
    margins = [float(l.split(":")[1]) for l in out.splitlines() if l.startswith("  ")]
    assert len(margins) == 5 and min(margins) >= 0


def test_cog_small_backoff(capsys):
    _, out, _ = run(capsys, "cog", "1e4", "1e4", "1e2", "1e2", "1e6", "--r0", "5")
    assert "lower: not asserted (R0<7)" in out


def test_cog_json_schema(capsys):
    code, out, _ = run(capsys, "cog", "1e4", "1e4", "1e2", "1e2", "1e6", "--r0", "8", "--theta", "0", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["schema_version"] == 1 and doc["command"] == "cog"
    row = dict(zip(doc["columns"], doc["rows"][0]))
    assert min(row["c_bar_lt_ldm_plus_gap"], row["lower_le_c_bar"], row["c_bar_minus_gap_le_lower"]) >= 0


def test_codec_sim_reaches_capacity(capsys):
    code, out, _ = run(capsys, "codec-sim", "2", "4", "8", "--delta", "1/2", "--blocks", "64", "--trials", "10", "--seed", "3")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "seed: 3"
    assert "with deficit restored: 24/5" in lines
    assert "decode errors: 0 over 10 trials" in lines


def test_codec_sim_trace_file(capsys, tmp_path):
    trace = tmp_path / "trace.txt"
    code, _, _ = run(capsys, "codec-sim", "3", "1", "0", "--blocks", "1", "--trials", "4", "--trace", str(trace))
    assert code == EXIT_OK
    assert trace.read_text().splitlines()


def test_codec_sim_bad_arity_is_a_usage_error(capsys):
    code, _, err = run(capsys, "codec-sim", "1", "2")
    assert code == EXIT_USAGE and "error" in err


def test_fm_check(capsys):
    code, out, _ = run(capsys, "fm-check", "--max", "2")
    assert code == EXIT_OK
    assert out.startswith("all closed-form identities hold (")


def test_fm_check_projection_method(capsys):
    code, out, _ = run(capsys, "fm-check", "--max", "2", "--method", "fm")
    assert code == EXIT_OK and "hold" in out


def test_gdof_csv(capsys, tmp_path):
    spec = tmp_path / "sweep.txt"
    spec.write_text("alpha = 0, 1/2, 2\nbeta = 0, inf\n")
    code, out, _ = run(capsys, "gdof", "sum", str(spec))
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "alpha,beta,d"
    assert lines[1] == "0,0,2"
    assert len(lines) == 7


def test_gdof_cog_rejects_multiple_fixed_values(capsys, tmp_path):
    spec = tmp_path / "sweep.txt"
    spec.write_text("n2 = 1, 2\n")
    code, _, _ = run(capsys, "gdof", "cog", str(spec))
    assert code == EXIT_USAGE


def test_gdof_alignment_flag(capsys, tmp_path):
    spec = tmp_path / "sweep.txt"
    spec.write_text("alpha = 1\nbeta = inf\n")
    assert run(capsys, "gdof", "sum", str(spec), "--aligned")[1].splitlines()[1] == "1,inf,1"
    # without the flag the curve is the non-aligned one
    assert run(capsys, "gdof", "sum", str(spec))[1].splitlines()[1] == "1,inf,2"


def _grid(tmp_path):
    g = tmp_path / "one.grid"
    g.write_text("kind = sym\nsnr = 1e4\ninr = 1e2\ncnr = 1e6\ntheta = 0\n")
    return str(g)


def test_verify_gaps_small_grid(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify-gaps", _grid(tmp_path), "--out", str(out_file), "--format", "json")
    assert code == EXIT_OK
    assert "violations: none" in out
    doc = json.loads(out_file.read_text())
    assert doc["schema_version"] == 1 and len(doc["rows"]) == 1


def test_strict_flag_turns_violations_into_failure(capsys, tmp_path, monkeypatch):
    broken = analysis.GapConstants(sum_lower=1.0)
    real = analysis.verify_gaps
    monkeypatch.setattr("hdcoop.cli.verify_gaps", lambda g, **kw: real(g, gaps=broken, **kw))
    grid = _grid(tmp_path)
    code, out, _ = run(capsys, "verify-gaps", grid)
    assert code == EXIT_OK and "violations: 1" in out
    assert run(capsys, "verify-gaps", grid, "--strict")[0] == EXIT_CONTRACT


def test_identical_runs_are_byte_identical(capsys):
    a = run(capsys, "gauss-sum", "1e2", "1e5", "1e8", "--theta", "0.5", "--format", "csv")
    b = run(capsys, "gauss-sum", "1e2", "1e5", "1e8", "--theta", "0.5", "--format", "csv")
    assert a == b
    assert a[1].splitlines()[0].startswith("snr,")


def test_argument_validation(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["ldm-sum", "1", "-2", "0"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit):
        main(["gauss-sum", "0", "1", "1"])
    capsys.readouterr()
