"""Free-space path loss, received jammer power, and attack range.

All powers are bookkept in dBW; the free-space path loss formula takes
distance in meters and frequency in MHz:

    fspl = 20*log10(d) + 20*log10(f) - 27.55

Free space only: no multipath or line-of-sight margin is modeled, so real
ranges would come out lower.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import io as iqio


@dataclass(frozen=True)
class LinkBudgetParams:
    """Attacker transmit chain plus the victim link constants.

    Defaults place the victim at the constellation's peak received power of
    -145 dBW, denied once the attacker is within -2.98 dB of it.
    """

    tx_power_dbw: float
    antenna_gain_db: float = 0.0
    frequency_mhz: float = 1600.0
    victim_peak_power_dbw: float = -145.0
    required_ratio_db: float = -2.98

    def __post_init__(self):
        if not self.frequency_mhz > 0:
            raise ValueError("frequency_mhz must be positive")


# Amplifier options from the component survey: an off-the-shelf module and
# an RF IC, both driving the 0 dB patch antenna.
EQUIPMENT_PRESETS = {
    "module-amp-7dbw": LinkBudgetParams(tx_power_dbw=7.0, antenna_gain_db=0.0),
    "ic-amp-10dbw": LinkBudgetParams(tx_power_dbw=10.0, antenna_gain_db=0.0),
}


def fspl_db(distance_m: float, frequency_mhz: float) -> float:
    """Free-space path loss in dB for distance in meters, frequency in MHz."""
    if not distance_m > 0:
        raise ValueError("distance_m must be positive")
    if not frequency_mhz > 0:
        raise ValueError("frequency_mhz must be positive")
    return 20.0 * math.log10(distance_m) + 20.0 * math.log10(frequency_mhz) - 27.55


def distance_for_fspl(loss_db: float, frequency_mhz: float) -> float:
    """Distance in meters at which the path loss equals loss_db."""
    if not frequency_mhz > 0:
        raise ValueError("frequency_mhz must be positive")
    return 10.0 ** ((loss_db - 20.0 * math.log10(frequency_mhz) + 27.55) / 20.0)


def received_power_dbw(params: LinkBudgetParams, distance_m: float) -> float:
    """Attacker power arriving at the victim antenna over free space."""
    return params.tx_power_dbw + params.antenna_gain_db - fspl_db(distance_m, params.frequency_mhz)


def denial_threshold_dbw(params: LinkBudgetParams) -> float:
    """Incident attacker power above which the victim link is denied."""
    return params.victim_peak_power_dbw + params.required_ratio_db


def attack_range_m(params: LinkBudgetParams) -> float:
    """Distance at which the received attacker power equals the denial threshold.

    Closed-form inversion of the path loss formula.
    """
    exponent = (
        params.tx_power_dbw
        + params.antenna_gain_db
        - denial_threshold_dbw(params)
        - 20.0 * math.log10(params.frequency_mhz)
        + 27.55
    ) / 20.0
    if not math.isfinite(exponent) or exponent > 300.0 or exponent < -300.0:
        raise ValueError("attack range is numerically degenerate for these parameters")
    return 10.0 ** exponent


def write_range_curve_csv(params: LinkBudgetParams, distances_m, path) -> None:
    """Received power over a distance grid, with the denial threshold
    repeated per row as a plotting marker."""
    threshold = denial_threshold_dbw(params)
    rows = (
        (float(d), received_power_dbw(params, float(d)), threshold)
        for d in distances_m
    )
    iqio.write_csv(path, ("distance_m", "received_power_dbw", "denial_threshold_dbw"), rows)
