import csv
import io
import math

import pytest

from mziqfi.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    return header, [dict(zip(header, map(float, r))) for r in body]


def test_fig2_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--alpha-sq", "1e6", "--db", "12.5", "--theta", "-0.2..0.2",
                       "--points", "801", "--columns", "n_precision,sql")
    assert code == 0
    header, rows = table(out)
    assert header == ["theta", "n_precision", "n_precision_norm", "sql", "sql_norm"]
    assert len(rows) == 801
    assert 14.0 <= max(r["n_precision_norm"] for r in rows) <= 15.5
    assert rows[400]["theta"] == 0 and rows[400]["n_precision"] == 0


def test_fig3_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--alpha-sq", "1e3", "--db", "12.5", "--theta-range", "-0.2..0.2",
                       "--points", "401", "--columns", "n_precision,qfi,sql")
    assert code == 0
    _, rows = table(out)
    assert all(r["qfi_norm"] >= r["n_precision_norm"] - 1e-9 for r in rows)
    e2r = 10 ** 1.25
    assert max(r["qfi_norm"] for r in rows if abs(r["theta"]) < 0.01) > e2r


def test_sweep_output_is_bit_stable(capsys, tmp_path):
    args = ["sweep", "--alpha-sq", "1e3", "--r", "0.7", "--theta", "0..3", "--points", "50",
            "--columns", "n_precision,qfi,qfi_pure_limit,lambda,r_out"]
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args, "--jobs", "4")
    path = tmp_path / "out.csv"
    run(capsys, *args, "--output", str(path))
    assert first == second == path.read_bytes().decode()
    assert "\r" not in first
    for value in first.splitlines()[2].split(","):
        assert value == format(float(value), ".17g")


def test_sweep_pure_limit_column(capsys):
    _, out, _ = run(capsys, "sweep", "--alpha-sq", "100", "--r", "1", "--theta", "-1..1", "--points", "3",
                    "--columns", "qfi,qfi_pure_limit")
    _, rows = table(out)
    assert rows[1]["qfi"] == pytest.approx(100 * math.e**2)
    assert rows[1]["qfi_pure_limit"] == pytest.approx(100 * math.e**2 + math.sinh(1) ** 2)
    assert rows[0]["qfi"] == rows[0]["qfi_pure_limit"]


def test_sweep_degrees(capsys):
    _, out, _ = run(capsys, "sweep", "--alpha-sq", "10", "--r", "0", "--theta", "0..90", "--points", "2",
                    "--columns", "sql", "--degrees")
    _, rows = table(out)
    assert rows[1]["theta"] == pytest.approx(math.pi / 2)
    assert rows[1]["sql_norm"] == pytest.approx(0.5)


def test_sweep_oracle_columns(capsys):
    code, out, err = run(capsys, "sweep", "--alpha-sq", "1.44", "--r", "0.5", "--theta", "0.4..0.8",
                         "--points", "2", "--columns", "qfi,qfi_oracle,cfi_oracle", "--cutoff", "40")
    assert code == 0 and err == ""
    header, rows = table(out)
    assert header[-1] == "tail_mass"
    for r in rows:
        assert r["qfi_oracle"] == pytest.approx(r["qfi"], rel=1e-3)
        assert r["cfi_oracle"] <= r["qfi_oracle"]


def test_sweep_truncation_note(capsys):
    code, _, err = run(capsys, "sweep", "--alpha-sq", "2", "--r", "0.5", "--theta", "0.1..1", "--points", "2",
                       "--columns", "qfi_oracle", "--cutoff", "10")
    assert code == 0 and "tail mass" in err


@pytest.mark.parametrize("argv", [
    ["sweep", "--alpha-sq", "0", "--r", "1", "--theta", "0..1"],
    ["sweep", "--alpha-sq", "1", "--r", "1", "--theta", "1..0"],
    ["sweep", "--alpha-sq", "1", "--r", "1", "--theta", "0..1", "--columns", "bogus"],
    ["sweep", "--alpha-sq", "1", "--r", "1", "--theta", "0..1", "--columns", "qfi_oracle"],
    ["sweep", "--alpha-sq", "1", "--r", "1", "--theta", "0..1", "--points", "1"],
    ["sweep", "--alpha-sq", "1", "--r", "1", "--theta", "nonsense"],
    ["point", "--r", "1", "--theta", "0"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert len(err.strip().splitlines()) == 1


def test_argparse_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--alpha-sq", "1", "--theta", "0..1"])
    assert exc.value.code == 2


def report(out):
    return dict(line.split(": ", 1) for line in out.strip().splitlines())


def test_point_black_fringe(capsys):
    code, out, _ = run(capsys, "point", "--alpha-sq", "100", "--r", "1", "--theta", "0")
    rep = report(out)
    assert code == 0 and rep["regime"] == "PurePoint"
    assert float(rep["Q0"]) == pytest.approx(100 * math.e**2, rel=1e-14)
    assert float(rep["Q0+"]) == pytest.approx(100 * math.e**2 + math.sinh(1) ** 2, rel=1e-14)


def test_point_without_squeezing(capsys):
    _, out, _ = run(capsys, "point", "--r", "0", "--alpha-sq", "100", "--theta", "1.0")
    assert float(report(out)["Q_theta_theta"]) == pytest.approx(100 * math.cos(0.5) ** 2, rel=1e-14)


def test_point_white_fringe(capsys):
    _, out, _ = run(capsys, "point", "--alpha-sq", "100", "--r", "1", "--theta", "3.14159265358979")
    rep = report(out)
    assert rep["regime"] == "PurePoint"
    assert float(rep["r_out"]) == pytest.approx(0, abs=1e-12)


def test_certify_passes_at_desk_scale(capsys):
    code, out, _ = run(capsys, "certify", "--alpha-im", "-1.2", "--r", "0.5", "--cutoff", "40")
    assert code == 0
    assert "FAIL" not in out and "desk-scale" in out


def test_certify_fails_with_bad_cutoff(capsys):
    code, out, _ = run(capsys, "certify", "--alpha-im", "-1.2", "--r", "0.8", "--cutoff", "12")
    assert code == 1
    assert any("tail_mass" in line and "FAIL" in line for line in out.splitlines())


def test_certify_vacuum(capsys):
    code, out, _ = run(capsys, "certify", "--alpha-im", "0", "--r", "0", "--cutoff", "4")
    assert code == 0


def test_certify_custom_grid(capsys):
    code, out, _ = run(capsys, "certify", "--alpha-im", "-1", "--r", "0.3", "--cutoff", "40",
                       "--theta", "45,90", "--degrees", "--phi", "0.3")
    assert code == 0 and " 0.7854 " in out
