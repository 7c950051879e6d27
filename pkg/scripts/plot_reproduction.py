#!/usr/bin/env python3
"""Render the CSV bundle from `jamlab reproduce` into PNG figures.

Usage:
    jamlab reproduce --out-dir results/
    python scripts/plot_reproduction.py results/
"""

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def read_csv(path):
    rows = np.genfromtxt(path, delimiter=",", names=True, dtype=None, encoding="utf-8")
    return rows


def plot_decoder(out_dir, fig_dir):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for ecc_flag, color in (("on", "C0"), ("off", "C1")):
        mc = read_csv(out_dir / f"decoder_error_ecc_{ecc_flag}.csv")
        analytic = read_csv(out_dir / f"decoder_error_ecc_{ecc_flag}.analytic.csv")
        ax.plot(analytic["ratio_db"], analytic["rate"], color=color,
                label=f"analytic, code {ecc_flag}")
        ax.errorbar(mc["ratio_db"], mc["rate"],
                    yerr=[mc["rate"] - mc["ci_low"], mc["ci_high"] - mc["rate"]],
                    fmt=".", color=color, alpha=0.7, label=f"Monte Carlo, code {ecc_flag}")
    ax.axhline(0.5, linestyle="--", color="gray", linewidth=1)
    ax.set_xlabel("attacker-to-victim power ratio (dB)")
    ax.set_ylabel("message error rate")
    ax.legend()
    fig.tight_layout()
    fig.savefig(fig_dir / "decoder_error_vs_power.png", dpi=150)
    plt.close(fig)


def plot_ranges(out_dir, fig_dir):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name in ("module_amp_7dbw", "ic_amp_10dbw"):
        rows = read_csv(out_dir / f"jammer_range_{name}.csv")
        ax.plot(rows["distance_m"] / 1e3, rows["received_power_dbw"], label=name)
        threshold = rows["denial_threshold_dbw"][0]
    ax.axhline(threshold, linestyle="--", color="gray", linewidth=1, label="denial threshold")
    ax.set_xscale("log")
    ax.set_xlabel("distance to victim (km)")
    ax.set_ylabel("received jammer power (dBW)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(fig_dir / "jammer_power_vs_distance.png", dpi=150)
    plt.close(fig)


def plot_constellations(out_dir, fig_dir):
    cases = [
        ("constellation_clean_header.csv", "clean header"),
        ("constellation_gaussian_combined.csv", "gaussian at -10 dB"),
        ("constellation_tone_0hz_combined.csv", "tone 0 Hz at -10 dB"),
        ("constellation_tone_10khz_combined.csv", "tone 10 kHz at -10 dB"),
    ]
    fig, axes = plt.subplots(1, len(cases), figsize=(4 * len(cases), 4))
    for ax, (name, title) in zip(axes, cases):
        rows = read_csv(out_dir / name)
        ax.scatter(rows["i"], rows["q"], s=4, alpha=0.5)
        ax.set_title(title)
        ax.set_aspect("equal")
        ax.set_xlabel("I")
        ax.set_ylabel("Q")
    fig.tight_layout()
    fig.savefig(fig_dir / "constellations.png", dpi=150)
    plt.close(fig)


def plot_rejection(out_dir, fig_dir):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name, label in (
        ("gaussian_l2raw", "gaussian, raw metric"),
        ("tone_10khz_l2raw", "tone 10 kHz, raw metric"),
        ("tone_0hz_l2raw", "tone 0 Hz, raw metric"),
        ("tone_0hz_l2dc", "tone 0 Hz, mean-removing metric"),
    ):
        path = out_dir / f"fingerprint_rejection_{name}.csv"
        if not path.exists():
            continue
        rows = read_csv(path)
        ax.plot(rows["ratio_db"], rows["rate"], marker=".", label=label)
    ax.axhline(0.5, linestyle="--", color="gray", linewidth=1)
    ax.set_xlabel("attacker-to-victim power ratio (dB)")
    ax.set_ylabel("fingerprint rejection rate")
    ax.legend()
    fig.tight_layout()
    fig.savefig(fig_dir / "fingerprint_rejection.png", dpi=150)
    plt.close(fig)


def plot_comparison(out_dir, fig_dir):
    rows = read_csv(out_dir / "decoder_vs_fingerprinter.csv")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(rows["ratio_db"], rows["decoder_rate"], "--", label="decoder error")
    ax.plot(rows["ratio_db"], rows["fingerprinter_rate"], label="fingerprinter rejection")
    ax.axhline(0.5, linestyle=":", color="gray", linewidth=1)
    ax.set_xlabel("attacker-to-victim power ratio (dB)")
    ax.set_ylabel("proportion of messages lost")
    ax.legend()
    fig.tight_layout()
    fig.savefig(fig_dir / "decoder_vs_fingerprinter.png", dpi=150)
    plt.close(fig)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("results_dir", help="directory written by `jamlab reproduce`")
    parser.add_argument("--fig-dir", default=None, help="output directory (default: results_dir/figures)")
    args = parser.parse_args()
    out_dir = Path(args.results_dir)
    if not out_dir.is_dir():
        print(f"no such directory: {out_dir}", file=sys.stderr)
        return 2
    fig_dir = Path(args.fig_dir) if args.fig_dir else out_dir / "figures"
    fig_dir.mkdir(parents=True, exist_ok=True)
    plot_decoder(out_dir, fig_dir)
    plot_ranges(out_dir, fig_dir)
    plot_constellations(out_dir, fig_dir)
    plot_rejection(out_dir, fig_dir)
    plot_comparison(out_dir, fig_dir)
    print(f"figures written to {fig_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
