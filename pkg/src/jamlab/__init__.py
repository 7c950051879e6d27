"""Desk-scale lab for quantifying how jamming power degrades a coded
satellite message decoder and a transmitter-fingerprint acceptance gate,
with synthetic signals throughout."""

from .curves import SweepCurve, SweepRow, find_crossing
from .fingerprint import (
    AnchorStore,
    Threshold,
    UnknownTransmitterError,
    calibrate_threshold,
    evaluate,
    find_disruption_ratio,
    get_metric,
    metric_l2_dc,
    metric_l2_raw,
)
from .impair import HeaderTemplate, ImpairmentProfile, random_profile, synth_header
from .iq import IqBuffer
from .jammer import (
    JammerSpec,
    PowerMeasurement,
    gen_gaussian,
    gen_tone,
    inject,
    measured_ratio_clean,
    measured_ratio_combined,
    rms,
)
from .linkbudget import (
    EQUIPMENT_PRESETS,
    LinkBudgetParams,
    attack_range_m,
    denial_threshold_dbw,
    fspl_db,
    received_power_dbw,
)
from .sim import (
    ComparisonReport,
    FingerprintSweepResult,
    ScheduleEntry,
    SweepConfig,
    compare_decoder_vs_fingerprinter,
    decoder_sweep,
    fingerprint_sweep,
    frame_error_rate_mc,
    noise_schedule,
    wilson_interval,
)

__version__ = "0.1.0"
