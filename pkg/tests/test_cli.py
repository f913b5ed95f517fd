import io
import subprocess
import sys

import numpy as np
import pytest

from qcorr import cli
from qcorr.records import read_csv


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    return read_csv(io.StringIO(text))


# --- compute ---------------------------------------------------------------------
@pytest.mark.parametrize(
    "spec,mn,gd",
    [("bell:phi+", 0.5, 0.5), ("pure:0", 0.0, 0.0), ("werner:0.6", 0.18, 0.18), ("vp:0.25", 0.28125, 0.203125)],
)
def test_compute_values(capsys, spec, mn, gd):
    code, out, _ = run(["compute", "--state", spec], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[-2] == "min,gd,min_oracle,gd_oracle,branch"
    vals = lines[-1].split(",")
    assert float(vals[0]) == pytest.approx(mn, abs=1e-12)
    assert float(vals[1]) == pytest.approx(gd, abs=1e-12)
    assert float(vals[2]) == pytest.approx(mn, abs=1e-9)
    assert float(vals[3]) == pytest.approx(gd, abs=1e-9)


def test_compute_literal_complex(capsys):
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[3, 3] = rho[0, 3] = rho[3, 0] = 0.5
    text = " ".join(f"{v.real}+{v.imag}j" for v in rho.reshape(-1))
    code, out, _ = run(["compute", "--state", text], capsys)
    assert code == 0 and out.splitlines()[-1].startswith("0.5,0.5")


def test_compute_literal_reals_and_file(capsys, tmp_path):
    vals = []
    for v in (np.eye(4) / 4).reshape(-1):
        vals += [v, 0.0]
    f = tmp_path / "rho.txt"
    f.write_text(",".join(map(str, vals)))
    code, out, _ = run(["compute", "--state", f"@{f}"], capsys)
    assert code == 0 and out.splitlines()[-1].startswith("0,0")


@pytest.mark.parametrize(
    "spec", ["pure:x", "pure:1.5", "bell:phi0", "nonsense", "1 2 3", f"@/nonexistent/file"]
)
def test_compute_parse_errors(capsys, spec):
    code, _, err = run(["compute", "--state", spec], capsys)
    assert code == 2 and "error" in err


def test_compute_invalid_matrix_reports_eigenvalue(capsys):
    code, _, err = run(["compute", "--state", "1 0 0 0 0 0.2 0 0 0 0 -0.2 0 0 0 0 0"], capsys)
    assert code == 3
    assert "eigenvalue -0.2" in err


def test_compute_non_hermitian(capsys):
    code, _, err = run(["compute", "--state", "0.25 1 0 0 0 0.25 0 0 0 0 0.25 0 0 0 0 0.25"], capsys)
    assert code == 3 and "Hermitian" in err


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as info:
        cli.main([])
    assert info.value.code == 2


# --- evolve -----------------------------------------------------------------------
def test_evolve_dephasing_half_alpha_floor(capsys):
    code, out, _ = run(["evolve", "--state", "pure:0.5", "--channel", "deph:sched", "--rate", "1", "--tmax", "8", "--steps", "400"], capsys)
    assert code == 0
    header, rows = csv_rows(out)
    assert len(rows) == 400
    assert rows[-1][3] == pytest.approx(0.25, abs=1e-6) and rows[-1][3] > 0.25


def test_evolve_depolarizing_residuals(capsys):
    code, out, _ = run(["evolve", "--state", "pure:0.3", "--channel", "depol:sched"], capsys)
    _, rows = csv_rows(out)
    assert code == 0 and all(r[7] <= 1e-9 and r[8] <= 1e-9 for r in rows)


def test_evolve_zero_steps(capsys):
    code, out, _ = run(["evolve", "--state", "pure:0.3", "--channel", "depol:sched", "--steps", "0"], capsys)
    assert code == 0
    assert out == "t,gamma,alpha,min_engine,gd_engine,min_pred,gd_pred,res_min,res_gd\n"


def test_evolve_constant_gamma_and_combined(capsys):
    code, out, _ = run(["evolve", "--state", "bell:phi+", "--channel", "gad:0.3:0.5", "--steps", "3"], capsys)
    _, rows = csv_rows(out)
    assert code == 0 and {r[1] for r in rows} == {0.3}
    code, out, _ = run(["evolve", "--state", "pure:0.4", "--channel", "deph+gad:sched:0.5", "--steps", "5"], capsys)
    assert code == 0


@pytest.mark.parametrize("chan", ["foo:sched", "depol", "depol:sched:1", "gad:sched:2", "deph:abc"])
def test_evolve_bad_channel(capsys, chan):
    code, _, _ = run(["evolve", "--state", "pure:0.3", "--channel", chan], capsys)
    assert code == 2


@pytest.mark.parametrize("flags", [["--rate", "0"], ["--tmax", "-1"], ["--steps", "-2"]])
def test_evolve_bad_numbers(capsys, flags):
    code, _, _ = run(["evolve", "--state", "pure:0.3", "--channel", "deph:sched", *flags], capsys)
    assert code == 2


def test_evolve_unwritable(capsys, tmp_path):
    code, _, err = run(["evolve", "--state", "pure:0.3", "--channel", "deph:sched", "--out", str(tmp_path / "no" / "x.csv")], capsys)
    assert code == 4 and "cannot write" in err
    code, _, _ = run(["evolve", "--state", "pure:0.3", "--channel", "deph:sched", "--out", str(tmp_path)], capsys)
    assert code == 4


def test_evolve_deterministic_bytes(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert cli.main(["evolve", "--state", "vp:0.25", "--channel", "gad:sched:0.67", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


# --- sweep ------------------------------------------------------------------------
def test_sweep_f1_alpha_one_row_is_zero(capsys):
    code, out, _ = run(["sweep", "--figure", "F1", "--n-alpha", "11", "--steps", "30"], capsys)
    _, rows = csv_rows(out)
    assert code == 0
    assert all(abs(r[3]) <= 1e-15 for r in rows if r[2] == 1.0)


def test_sweep_f2_boundary(capsys):
    code, out, _ = run(["sweep", "--figure", "F2", "--n-alpha", "11", "--steps", "30", "--tmax", "30"], capsys)
    _, rows = csv_rows(out)
    last = [r for r in rows if r[2] == 0.5][-1]
    assert last[3] == pytest.approx(0.25, abs=1e-9) and last[4] == pytest.approx(0.0, abs=1e-9)


def test_sweep_multi_series_files(tmp_path, capsys):
    out = tmp_path / "f7.csv"
    code, _, _ = run(["sweep", "--figure", "F7", "--out", str(out), "--steps", "200"], capsys)
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["f7_ad.csv", "f7_deph.csv", "f7_depol.csv"]
    _, rows = csv_rows((tmp_path / "f7_ad.csv").read_text())
    gaps = [r[3] - r[4] for r in rows]
    assert min(abs(g) for g in gaps) < 1e-6  # MIN and GD meet under damping


def test_sweep_multi_series_needs_out(capsys):
    code, _, _ = run(["sweep", "--figure", "F4"], capsys)
    assert code == 2


def test_sweep_unknown_figure(capsys):
    code, _, _ = run(["sweep", "--figure", "F9"], capsys)
    assert code == 2


# --- nonmarkov --------------------------------------------------------------------
def test_nonmarkov_f10_first_rows(capsys):
    code, out, _ = run(["nonmarkov", "--figure", "F10", "--n-alpha", "11", "--steps", "50"], capsys)
    header, rows = csv_rows(out)
    assert code == 0 and header[1] == "p_abs"
    for r in rows:
        if r[0] == 0.0:
            a = r[2]
            assert r[3] == pytest.approx(0.5 if a == 0.5 else 2 * a * (1 - a), abs=1e-12)


def test_nonmarkov_f9_non_monotone(capsys):
    code, out, _ = run(["nonmarkov", "--figure", "F9", "--n-alpha", "3"], capsys)
    _, rows = csv_rows(out)
    m = np.array([r[3] for r in rows if r[2] == 0.5])
    d = np.diff(m)
    assert code == 0 and np.any((d[:-1] < 0) & (d[1:] > 0))


def test_nonmarkov_custom_markovian_limit(capsys):
    code, out, _ = run(["nonmarkov", "--kind", "dephasing", "--lam", "20", "--delta", "0", "--n-alpha", "3", "--steps", "100", "--tmax", "4"], capsys)
    _, rows = csv_rows(out)
    pabs = np.array([r[1] for r in rows if r[2] == 0.0])
    t = np.linspace(0, 4, 100)
    assert code == 0
    assert np.all(np.diff(pabs) < 0)
    np.testing.assert_allclose(pabs, np.exp(-0.5 * t), atol=0.03)


@pytest.mark.parametrize("flags", [[], ["--figure", "F1"], ["--kind", "dephasing", "--lam", "-1"]])
def test_nonmarkov_bad_args(capsys, flags):
    code, _, _ = run(["nonmarkov", *flags], capsys)
    assert code == 2


# --- validate ---------------------------------------------------------------------
def test_validate_small_run_passes(capsys):
    code, out, _ = run(["validate", "--n", "200", "--n-oracle", "10", "--n-lu", "20"], capsys)
    assert code == 0
    assert "overall: PASS" in out
    assert "combined_pure_elements" in out and "DISCREPANT" in out
    assert "depolarizing_printed_kraus_cptp  DISCREPANT" in out


def test_validate_byte_identical(capsys):
    argv = ["validate", "--n", "1", "--n-oracle", "3", "--n-lu", "3", "--seed", "7"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b


def test_validate_thread_count_does_not_change_report(capsys, monkeypatch):
    argv = ["validate", "--n", "5", "--n-oracle", "8", "--n-lu", "3"]
    monkeypatch.setenv("QCORR_THREADS", "1")
    _, a, _ = run(argv, capsys)
    monkeypatch.setenv("QCORR_THREADS", "4")
    _, b, _ = run(argv, capsys)
    assert a == b


def test_validate_bad_thread_env(capsys, monkeypatch):
    monkeypatch.setenv("QCORR_THREADS", "many")
    code, _, _ = run(["validate", "--n", "1"], capsys)
    assert code == 2


def test_validate_bad_n(capsys):
    code, _, _ = run(["validate", "--n", "0"], capsys)
    assert code == 2


def test_validate_failure_exit_code(capsys, monkeypatch):
    from qcorr import validation

    monkeypatch.setattr(validation, "suite_cptp", lambda: validation.SuiteResult("forced", False, "x"))
    code, out, _ = run(["validate", "--n", "1", "--n-oracle", "1", "--n-lu", "1"], capsys)
    assert code == 1 and "overall: FAIL" in out


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "qcorr.cli", "compute", "--state", "bell:psi+"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "0.5" in out.stdout
