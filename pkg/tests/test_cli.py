"""Command-line surface: exit codes, file outputs, and stdout contracts."""

import numpy as np
import pytest

import jamlab.io as iqio
from jamlab import cli, impair, modem
from jamlab.curves import find_crossing


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- schedule -------------------------------------------------------------------

def test_schedule_full_period(capsys):
    code, out, _ = run(capsys, "schedule", "--slots", "33")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "slot_index,noise_level,amplitude,slot_minutes"
    assert len(lines) == 34
    levels = [int(line.split(",")[1]) for line in lines[1:]]
    assert sorted(levels) == list(range(33))
    assert levels[1] == 7


def test_schedule_single_slot(capsys):
    code, out, _ = run(capsys, "schedule", "--slots", "1")
    assert code == 0
    assert out.strip().splitlines()[1] == "0,0,0,15"


def test_schedule_negative_slots_usage_error(capsys):
    code, _, err = run(capsys, "schedule", "--slots", "-1")
    assert code == 1
    assert "usage error" in err


# --- decoder sweep -----------------------------------------------------------------

def test_decoder_sweep_writes_csvs_and_analytic_crossing(capsys, tmp_path):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(
        capsys, "decoder-sweep",
        "--ratio-db-start", "-10", "--ratio-db-stop", "5", "--ratio-db-step", "0.5",
        "--trials", "100", "--seed", "3", "--out", str(out),
    )
    assert code == 0
    assert out.exists()
    analytic = tmp_path / "sweep.analytic.csv"
    assert analytic.exists()
    header, rows = iqio.read_csv(analytic)
    assert header == ["ratio_db", "rate"]
    ratios = [float(r[0]) for r in rows]
    rates = [float(r[1]) for r in rows]
    crossing = find_crossing(ratios, rates, 0.5)
    assert crossing == pytest.approx(modem.required_ratio_for_message_error(0.5), abs=0.05)


def test_decoder_sweep_ecc_off_crosses_earlier(capsys, tmp_path):
    crossings = {}
    for ecc_flag in ("on", "off"):
        out = tmp_path / f"sweep_{ecc_flag}.csv"
        code, _, _ = run(
            capsys, "decoder-sweep",
            "--ratio-db-start", "-12", "--ratio-db-stop", "0", "--ratio-db-step", "1",
            "--trials", "100", "--ecc", ecc_flag, "--out", str(out),
        )
        assert code == 0
        header, rows = iqio.read_csv(tmp_path / f"sweep_{ecc_flag}.analytic.csv")
        ratios = [float(r[0]) for r in rows]
        rates = [float(r[1]) for r in rows]
        crossings[ecc_flag] = find_crossing(ratios, rates, 0.5)
    assert crossings["off"] < crossings["on"]


def test_decoder_sweep_zero_step_usage_error(capsys, tmp_path):
    code, _, err = run(
        capsys, "decoder-sweep", "--ratio-db-step", "0", "--out", str(tmp_path / "x.csv"),
    )
    assert code == 1
    assert "step" in err


def test_decoder_sweep_reproducible(capsys, tmp_path):
    args = (
        "decoder-sweep", "--ratio-db-start", "-6", "--ratio-db-stop", "-4",
        "--ratio-db-step", "1", "--trials", "150", "--seed", "11",
    )
    run(capsys, *args, "--out", str(tmp_path / "a.csv"))
    run(capsys, *args, "--parallel", "2", "--out", str(tmp_path / "b.csv"))
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


# --- fingerprint sweep ----------------------------------------------------------------

def test_fingerprint_sweep_dc_metric_zero_tone_not_reached(capsys, tmp_path):
    prefix = tmp_path / "fp"
    code, _, err = run(
        capsys, "fingerprint-sweep",
        "--jammer", "tone", "--tone-freq-hz", "0", "--metric", "l2-dc",
        "--ratio-db-start", "-10", "--ratio-db-stop", "30", "--ratio-db-step", "10",
        "--trials", "120", "--transmitters", "3", "--anchors", "2",
        "--calibration", "100", "--out", str(prefix),
    )
    assert code == 0
    summary = dict(
        line.split(",") for line in (tmp_path / "fp_summary.csv").read_text().splitlines()[1:]
    )
    assert summary["disruption_ratio_db"] == "not-reached"
    assert (tmp_path / "fp_rejection.csv").exists()
    assert (tmp_path / "fp_median.csv").exists()


def test_fingerprint_sweep_single_transmitter_contract_error(capsys, tmp_path):
    code, _, err = run(
        capsys, "fingerprint-sweep", "--transmitters", "1",
        "--trials", "120", "--out", str(tmp_path / "fp"),
    )
    assert code == 2
    assert "at least 2" in err


# --- linkbudget ----------------------------------------------------------------------

def test_linkbudget_solve_range(capsys):
    code, out, _ = run(capsys, "linkbudget", "--tx-power-dbw", "10", "--solve-range")
    assert code == 0
    values = dict(line.split("=") for line in out.strip().splitlines())
    assert float(values["attack_range_m"]) == pytest.approx(1.18e6, rel=0.01)
    assert float(values["denial_threshold_dbw"]) == pytest.approx(-147.98, abs=1e-9)


def test_linkbudget_received_power_at_solved_range(capsys):
    code, out, _ = run(capsys, "linkbudget", "--tx-power-dbw", "10", "--solve-range")
    reach = dict(line.split("=") for line in out.strip().splitlines())["attack_range_m"]
    code, out, _ = run(capsys, "linkbudget", "--tx-power-dbw", "10", "--distance-m", reach)
    assert code == 0
    values = dict(line.split("=") for line in out.strip().splitlines())
    assert float(values["received_power_dbw"]) == pytest.approx(-147.98, abs=0.01)


def test_linkbudget_requires_an_action(capsys):
    code, _, err = run(capsys, "linkbudget", "--tx-power-dbw", "10")
    assert code == 1
    assert "usage error" in err


def test_linkbudget_sweep_csv(capsys, tmp_path):
    out = tmp_path / "range.csv"
    code, _, _ = run(capsys, "linkbudget", "--tx-power-dbw", "7", "--sweep", "--out", str(out))
    assert code == 0
    header, rows = iqio.read_csv(out)
    assert header == ["distance_m", "received_power_dbw", "denial_threshold_dbw"]
    assert len(rows) == 300


# --- inject ---------------------------------------------------------------------------

def make_header_file(tmp_path):
    template = impair.HeaderTemplate()
    buf = impair.synth_header(template, impair.random_profile(0, 5), seed=5)
    path = tmp_path / "header.iq"
    iqio.write_iq(buf, path)
    return path


def test_inject_calibration_and_outputs(capsys, tmp_path):
    source = make_header_file(tmp_path)
    out = tmp_path / "jammed.iq"
    csv = tmp_path / "points.csv"
    code, stdout, _ = run(
        capsys, "inject", "--in", str(source), "--jammer", "gaussian",
        "--ratio-db", "-10", "--seed", "9", "--out", str(out),
        "--constellation-csv", str(csv),
    )
    assert code == 0
    achieved = float(stdout.strip().split("=")[1])
    assert achieved == pytest.approx(-10.0, abs=1e-9)
    combined = iqio.read_iq(out)
    original = iqio.read_iq(source)
    assert len(combined) == len(original)
    header, rows = iqio.read_csv(csv)
    assert header == ["index", "i", "q"]
    assert len(rows) == len(original)


def test_inject_missing_input_is_data_error(capsys, tmp_path):
    missing = tmp_path / "nope.iq"
    code, _, err = run(
        capsys, "inject", "--in", str(missing), "--ratio-db", "-10",
        "--out", str(tmp_path / "out.iq"),
    )
    assert code == 2
    assert "nope.iq" in err


# --- parser plumbing --------------------------------------------------------------------

def test_unknown_subcommand_usage_error(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 1
    assert "usage error" in err


@pytest.mark.parametrize("command", [
    "decoder-sweep", "fingerprint-sweep", "linkbudget", "inject", "schedule", "reproduce",
])
def test_help_lists_flags(capsys, command):
    with pytest.raises(SystemExit) as exc:
        cli.main([command, "--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert "--" in out
    if command != "schedule":  # schedule's only flag is required, no default
        assert "default" in out


def test_reproduce_quick_writes_bundle(capsys, tmp_path):
    out_dir = tmp_path / "bundle"
    code, _, _ = run(capsys, "reproduce", "--out-dir", str(out_dir), "--quick", "--parallel", "2")
    assert code == 0
    expected = [
        "decoder_error_ecc_on.csv",
        "decoder_error_ecc_on.analytic.csv",
        "decoder_error_ecc_off.csv",
        "jammer_range_module_amp_7dbw.csv",
        "jammer_range_ic_amp_10dbw.csv",
        "constellation_clean_header.csv",
        "constellation_gaussian_combined.csv",
        "constellation_tone_0hz_alone.csv",
        "constellation_tone_10khz_combined.csv",
        "fingerprint_rejection_gaussian_l2raw.csv",
        "fingerprint_summary_tone_0hz_l2dc.csv",
        "decoder_vs_fingerprinter.csv",
        "decoder_vs_fingerprinter_summary.csv",
    ]
    for name in expected:
        assert (out_dir / name).exists(), name
    summary = dict(
        line.split(",")
        for line in (out_dir / "fingerprint_summary_tone_0hz_l2dc.csv").read_text().splitlines()[1:]
    )
    assert summary["disruption_ratio_db"] == "not-reached"
