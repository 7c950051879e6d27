"""Command-line surface: every pipeline end to end, emitting plottable CSVs.

Exit codes: 0 success, 1 usage error, 2 data or contract error.  Progress
and diagnostics go to standard error; data goes to standard output or to
the --out files.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import impair, io as iqio, jammer, linkbudget, modem, sim

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    """Bad flags or flag combinations; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _status(message: str) -> None:
    print(message, file=sys.stderr)


def _analytic_path(out) -> Path:
    return Path(out).with_suffix(".analytic.csv")


def _add_sweep_axis_flags(parser, start: float, stop: float, step: float, trials: int) -> None:
    parser.add_argument("--ratio-db-start", type=float, default=start,
                        help=f"first attacker-to-victim ratio in dB (default {start})")
    parser.add_argument("--ratio-db-stop", type=float, default=stop,
                        help=f"last attacker-to-victim ratio in dB (default {stop})")
    parser.add_argument("--ratio-db-step", type=float, default=step,
                        help=f"grid step in dB (default {step})")
    parser.add_argument("--trials", type=int, default=trials,
                        help=f"Monte Carlo trials per ratio point, at least 100 (default {trials})")
    parser.add_argument("--seed", type=int, default=0,
                        help="master seed; reruns are byte-identical (default 0)")
    parser.add_argument("--parallel", type=int, default=1,
                        help="worker processes; output is independent of this (default 1)")


def _check_axis(args) -> None:
    if args.ratio_db_step <= 0:
        raise UsageError("--ratio-db-step must be positive")
    if args.ratio_db_start >= args.ratio_db_stop:
        raise UsageError("--ratio-db-start must be below --ratio-db-stop")


def _cmd_decoder_sweep(args) -> None:
    _check_axis(args)
    config = sim.SweepConfig(
        ratio_db_start=args.ratio_db_start,
        ratio_db_stop=args.ratio_db_stop,
        ratio_db_step=args.ratio_db_step,
        trials_per_point=args.trials,
        master_seed=args.seed,
        jammer_family=args.jammer,
        tone_freq_hz=args.tone_freq_hz,
        ecc_enabled=args.ecc == "on",
    )
    curve = sim.decoder_sweep(config, workers=args.parallel)
    curve.write_csv(args.out)
    fine = np.arange(args.ratio_db_start, args.ratio_db_stop + args.ratio_db_step / 10.0,
                     args.ratio_db_step / 5.0)
    sim.write_rate_curve_csv(sim.analytic_decoder_curve(fine, config.ecc_enabled),
                             _analytic_path(args.out))
    _status(f"wrote {args.out} and {_analytic_path(args.out)}")


def _cmd_fingerprint_sweep(args) -> None:
    _check_axis(args)
    config = sim.SweepConfig(
        ratio_db_start=args.ratio_db_start,
        ratio_db_stop=args.ratio_db_stop,
        ratio_db_step=args.ratio_db_step,
        trials_per_point=args.trials,
        master_seed=args.seed,
        jammer_family=args.jammer,
        tone_freq_hz=args.tone_freq_hz,
        metric_name=args.metric,
        percentile=args.percentile,
    )
    profiles = [impair.random_profile(i, args.seed) for i in range(args.transmitters)]
    result = sim.fingerprint_sweep(
        config, profiles,
        anchors_per_tx=args.anchors,
        calibration_candidates=args.calibration,
        workers=args.parallel,
    )
    prefix = Path(str(args.out))
    rejection = prefix.parent / f"{prefix.name}_rejection.csv"
    median = prefix.parent / f"{prefix.name}_median.csv"
    summary = prefix.parent / f"{prefix.name}_summary.csv"
    result.rejection.write_csv(rejection)
    result.write_median_csv(median)
    result.write_summary_csv(summary)
    disruption = "not-reached" if result.disruption_ratio_db is None else f"{result.disruption_ratio_db:.3f} dB"
    _status(f"threshold {result.threshold.value:.6g} at percentile {result.threshold.percentile}")
    _status(f"disruption ratio: {disruption}")
    _status(f"wrote {rejection}, {median}, {summary}")


def _cmd_linkbudget(args) -> None:
    params = linkbudget.LinkBudgetParams(
        tx_power_dbw=args.tx_power_dbw,
        antenna_gain_db=args.antenna_gain_db,
        frequency_mhz=args.frequency_mhz,
        victim_peak_power_dbw=args.victim_dbw,
        required_ratio_db=args.required_ratio_db,
    )
    if args.distance_m is None and not args.solve_range and not args.sweep:
        raise UsageError("provide --distance-m, --solve-range, or --sweep")
    if args.sweep and not args.out:
        raise UsageError("--sweep requires --out")
    print(f"denial_threshold_dbw={linkbudget.denial_threshold_dbw(params)!r}")
    if args.distance_m is not None:
        power = linkbudget.received_power_dbw(params, args.distance_m)
        print(f"received_power_dbw={power!r}")
    if args.solve_range:
        reach = linkbudget.attack_range_m(params)
        print(f"attack_range_m={reach!r}")
    if args.sweep:
        reach = linkbudget.attack_range_m(params)
        distances = np.logspace(0.0, np.log10(reach * 3.0), 300)
        linkbudget.write_range_curve_csv(params, distances, args.out)
        _status(f"wrote {args.out}")


def _cmd_inject(args) -> None:
    victim = iqio.read_iq(args.infile)
    spec = jammer.JammerSpec(
        family=args.jammer,
        target_ratio_db=args.ratio_db,
        tone_freq_hz=args.tone_freq_hz,
        tone_phase_rad=args.tone_phase_rad,
        seed=args.seed,
        wideband=args.wideband,
    )
    combined, achieved = jammer.inject(victim, spec)
    iqio.write_iq(combined, args.out)
    if args.constellation_csv:
        jammer.write_constellation_csv(combined, args.constellation_csv)
        _status(f"wrote {args.constellation_csv}")
    print(f"achieved_ratio_db={achieved.ratio_db!r}")
    _status(f"wrote {args.out}")


def _cmd_schedule(args) -> None:
    if args.slots < 1:
        raise UsageError("--slots must be a positive integer")
    print("slot_index,noise_level,amplitude,slot_minutes")
    for i in range(args.slots):
        entry = sim.noise_schedule(i)
        print(f"{entry.slot_index},{entry.noise_level},{entry.amplitude},{entry.slot_minutes}")


def _reproduce_decoder(out_dir: Path, seed: int, trials: int, workers: int) -> sim.SweepCurve:
    curves = {}
    for ecc_flag in ("on", "off"):
        config = sim.SweepConfig(
            ratio_db_start=-10.0, ratio_db_stop=2.0, ratio_db_step=0.5,
            trials_per_point=trials, master_seed=seed,
            jammer_family="gaussian", ecc_enabled=ecc_flag == "on",
        )
        curve = sim.decoder_sweep(config, workers=workers)
        out = out_dir / f"decoder_error_ecc_{ecc_flag}.csv"
        curve.write_csv(out)
        fine = np.arange(-10.0, 2.05, 0.1)
        sim.write_rate_curve_csv(sim.analytic_decoder_curve(fine, ecc_flag == "on"),
                                 _analytic_path(out))
        _status(f"wrote {out}")
        curves[ecc_flag] = curve
    return curves["on"]


def _reproduce_ranges(out_dir: Path) -> None:
    for name, params in linkbudget.EQUIPMENT_PRESETS.items():
        reach = linkbudget.attack_range_m(params)
        distances = np.logspace(0.0, np.log10(reach * 3.0), 300)
        out = out_dir / f"jammer_range_{name.replace('-', '_')}.csv"
        linkbudget.write_range_curve_csv(params, distances, out)
        _status(f"wrote {out}")


def _reproduce_constellations(out_dir: Path, seed: int) -> None:
    template = impair.HeaderTemplate()
    profile = impair.random_profile(0, seed)
    header = impair.synth_header(template, profile, seed)
    jammer.write_constellation_csv(header, out_dir / "constellation_clean_header.csv")
    cases = (
        ("gaussian", jammer.JammerSpec("gaussian", -10.0, seed=seed)),
        ("tone_0hz", jammer.JammerSpec("tone", -10.0, tone_freq_hz=0.0)),
        ("tone_10khz", jammer.JammerSpec("tone", -10.0, tone_freq_hz=10_000.0)),
    )
    for name, spec in cases:
        alone = jammer.synthesize(spec, len(header), header.sample_rate_hz,
                                  jammer.rms(header) * 10.0 ** (spec.target_ratio_db / 20.0))
        combined, _ = jammer.inject(header, spec)
        jammer.write_constellation_csv(alone, out_dir / f"constellation_{name}_alone.csv")
        jammer.write_constellation_csv(combined, out_dir / f"constellation_{name}_combined.csv")
    _status(f"wrote constellation CSVs under {out_dir}")


def _reproduce_fingerprint(out_dir: Path, seed: int, quick: bool, workers: int) -> sim.SweepCurve:
    transmitters = 4 if quick else 8
    trials = 150 if quick else 400
    calibration = 400 if quick else 1000
    anchors = 3 if quick else 5
    profiles = [impair.random_profile(i, seed) for i in range(transmitters)]
    cases = (
        ("gaussian_l2raw", "gaussian", 0.0, "l2-raw", (-40.0, 10.0, 2.0)),
        ("tone_10khz_l2raw", "tone", 10_000.0, "l2-raw", (-40.0, 10.0, 2.0)),
        ("tone_0hz_l2raw", "tone", 0.0, "l2-raw", (-40.0, 10.0, 2.0)),
        ("tone_0hz_l2dc", "tone", 0.0, "l2-dc", (-10.0, 30.0, 5.0)),
    )
    gaussian_curve = None
    for name, family, freq, metric, (start, stop, step) in cases:
        config = sim.SweepConfig(
            ratio_db_start=start, ratio_db_stop=stop, ratio_db_step=step,
            trials_per_point=trials, master_seed=seed,
            jammer_family=family, tone_freq_hz=freq, metric_name=metric,
        )
        result = sim.fingerprint_sweep(
            config, profiles, anchors_per_tx=anchors,
            calibration_candidates=calibration, workers=workers,
        )
        result.rejection.write_csv(out_dir / f"fingerprint_rejection_{name}.csv")
        result.write_median_csv(out_dir / f"fingerprint_median_{name}.csv")
        result.write_summary_csv(out_dir / f"fingerprint_summary_{name}.csv")
        _status(f"wrote fingerprint CSVs for {name}")
        if name == "gaussian_l2raw":
            gaussian_curve = result.rejection
    return gaussian_curve


def _cmd_reproduce(args) -> None:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    trials = 500 if args.quick else 4000
    decoder_curve = _reproduce_decoder(out_dir, args.seed, trials, args.parallel)
    _reproduce_ranges(out_dir)
    _reproduce_constellations(out_dir, args.seed)
    fingerprint_curve = _reproduce_fingerprint(out_dir, args.seed, args.quick, args.parallel)
    report = sim.compare_decoder_vs_fingerprinter(decoder_curve, fingerprint_curve)
    report.write_csv(out_dir / "decoder_vs_fingerprinter.csv")
    report.write_summary_csv(out_dir / "decoder_vs_fingerprinter_summary.csv")
    _status(f"wrote comparison report under {out_dir}")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="jamlab",
        description="Measure how jamming power degrades a coded satellite "
                    "message decoder and a transmitter-fingerprint gate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decoder-sweep",
                       help="Monte Carlo message error rate vs attacker-to-victim ratio")
    _add_sweep_axis_flags(p, -10.0, 5.0, 0.5, 1000)
    p.add_argument("--ecc", choices=("on", "off"), default="on",
                   help="use the interleaved block code (default on)")
    p.add_argument("--jammer", choices=("gaussian", "tone"), default="gaussian",
                   help="jammer family (default gaussian)")
    p.add_argument("--tone-freq-hz", type=float, default=0.0,
                   help="tone offset frequency in Hz, tone family only (default 0)")
    p.add_argument("--out", required=True,
                   help="sweep CSV path; an .analytic.csv companion is written beside it")
    p.set_defaults(func=_cmd_decoder_sweep)

    p = sub.add_parser("fingerprint-sweep",
                       help="fingerprint rejection rate vs attacker-to-victim ratio")
    _add_sweep_axis_flags(p, -40.0, 10.0, 2.0, 300)
    p.add_argument("--metric", choices=sorted(("l2-raw", "l2-dc")), default="l2-raw",
                   help="distance metric (default l2-raw)")
    p.add_argument("--jammer", choices=("gaussian", "tone"), default="gaussian",
                   help="jammer family (default gaussian)")
    p.add_argument("--tone-freq-hz", type=float, default=0.0,
                   help="tone offset frequency in Hz, tone family only (default 0)")
    p.add_argument("--percentile", type=float, default=95.0,
                   help="clean-distance percentile for the threshold (default 95)")
    p.add_argument("--transmitters", type=int, default=8,
                   help="number of synthetic transmitters, at least 2 (default 8)")
    p.add_argument("--anchors", type=int, default=5,
                   help="zero-noise anchors per transmitter (default 5)")
    p.add_argument("--calibration", type=int, default=1000,
                   help="held-out clean candidates for calibration (default 1000)")
    p.add_argument("--out", required=True,
                   help="output prefix; writes <prefix>_rejection.csv, _median.csv, _summary.csv")
    p.set_defaults(func=_cmd_fingerprint_sweep)

    p = sub.add_parser("linkbudget", help="free-space received power and attack range")
    p.add_argument("--tx-power-dbw", type=float, required=True, help="transmit power in dBW")
    p.add_argument("--antenna-gain-db", type=float, default=0.0, help="antenna gain in dB (default 0)")
    p.add_argument("--frequency-mhz", type=float, default=1600.0,
                   help="carrier frequency in MHz (default 1600)")
    p.add_argument("--victim-dbw", type=float, default=-145.0,
                   help="victim peak received power in dBW (default -145)")
    p.add_argument("--required-ratio-db", type=float, default=-2.98,
                   help="attacker-to-victim ratio that denies service, dB (default -2.98)")
    p.add_argument("--distance-m", type=float, default=None, help="evaluate received power here, meters")
    p.add_argument("--solve-range", action="store_true",
                   help="solve for the distance where received power hits the denial threshold")
    p.add_argument("--sweep", action="store_true", help="emit a distance/power CSV (needs --out)")
    p.add_argument("--out", default=None, help="CSV path for --sweep")
    p.set_defaults(func=_cmd_linkbudget)

    p = sub.add_parser("inject", help="add a calibrated jammer to an IQ capture")
    p.add_argument("--in", dest="infile", required=True, help="input IQ file (with JSON sidecar)")
    p.add_argument("--jammer", choices=("gaussian", "tone"), default="gaussian",
                   help="jammer family (default gaussian)")
    p.add_argument("--ratio-db", type=float, required=True,
                   help="target clean attacker-to-victim ratio in dB")
    p.add_argument("--tone-freq-hz", type=float, default=0.0,
                   help="tone offset frequency in Hz (default 0)")
    p.add_argument("--tone-phase-rad", type=float, default=0.0,
                   help="tone phase in radians (default 0)")
    p.add_argument("--wideband", action="store_true",
                   help="approximate a 4x-rate recording decimated without filtering (gaussian only)")
    p.add_argument("--seed", type=int, default=0, help="jammer seed (default 0)")
    p.add_argument("--out", required=True, help="output IQ file")
    p.add_argument("--constellation-csv", default=None,
                   help="also emit index,i,q rows of the combined signal")
    p.set_defaults(func=_cmd_inject)

    p = sub.add_parser("schedule", help="print the capture noise-level schedule")
    p.add_argument("--slots", type=int, required=True,
                   help="number of 15-minute slots to print, starting at slot 0")
    p.set_defaults(func=_cmd_schedule)

    p = sub.add_parser("reproduce",
                       help="regenerate the full set of curves and constellations into a directory")
    p.add_argument("--out-dir", required=True, help="output directory, created if needed")
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--quick", action="store_true", help="smaller trial counts for a fast pass")
    p.add_argument("--parallel", type=int, default=1,
                   help="worker processes; output is independent of this (default 1)")
    p.set_defaults(func=_cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
