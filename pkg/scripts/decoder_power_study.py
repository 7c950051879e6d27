#!/usr/bin/env python3
"""Print the closed-form jamming-power chain for the coded downlink.

Walks the analytic path from message error rate to bit error rate to
Eb/N0 to attacker-to-victim ratio, showing both erfc inversion
conventions side by side, then the free-space consequences for the two
equipment presets.
"""

import argparse

from scipy.optimize import brentq

from jamlab import ecc, linkbudget, modem


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--target-rate", type=float, default=0.5,
                        help="message error rate to solve for (default 0.5)")
    args = parser.parse_args()
    target = args.target_rate

    p_coded = brentq(lambda p: ecc.p_message_error(p) - target, 1e-9, 0.4999, xtol=1e-14)
    p_uncoded = brentq(lambda p: ecc.p_message_error_no_ecc(p) - target, 1e-12, 0.4999, xtol=1e-14)

    print(f"target message error rate: {target}")
    print()
    print("coded frames (three interleaved 31-bit blocks, 2-error correction):")
    print(f"  required bit error rate        p  = {p_coded:.6f}")
    print(f"  message error rate at p=0.08      = {float(ecc.p_message_error(0.08)):.4f}")
    print(f"  ratio, Eb/N0 = erfcinv(2p)^2      = {modem.ratio_db_for_ber(p_coded):8.4f} dB")
    print(f"  ratio, unsquared erfcinv form     = {modem.ratio_db_for_ber(p_coded, paper_form=True):8.4f} dB")
    print(f"  ratio anchored at p = 0.08        = {modem.ratio_db_for_ber(0.08):8.4f} dB "
          f"(unsquared {modem.ratio_db_for_ber(0.08, paper_form=True):.4f} dB)")
    print()
    print("uncoded 93-bit frames:")
    print(f"  required bit error rate        p  = {p_uncoded:.6f}")
    print(f"  ratio                             = {modem.ratio_db_for_ber(p_uncoded):8.4f} dB")
    print()
    print("free-space reach at the -2.98 dB published denial ratio:")
    for name, params in linkbudget.EQUIPMENT_PRESETS.items():
        reach = linkbudget.attack_range_m(params)
        print(f"  {name:>18}: threshold {linkbudget.denial_threshold_dbw(params):.2f} dBW, "
              f"range {reach / 1e3:8.1f} km")


if __name__ == "__main__":
    main()
