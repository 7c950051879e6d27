"""Monte Carlo sweep engine tying the codec, modem, jammer, and
fingerprint pipeline together, plus the capture-schedule arithmetic.

Determinism contract: every trial derives its generator from a Philox key
that is a pure function of (master_seed, stream tag, point index, trial
index).  No trial observes another's state, so sweep output is
byte-identical at any parallelism level.

Decoder trials run symbol-synchronous at one sample per symbol, where the
linear attacker-to-victim power ratio R maps onto Eb/N0 = 1/(2R) with no
processing-gain bookkeeping.  Channel noise for decoder sweeps is drawn at
its expected power rather than rescaled per trial: exact per-trial
rescaling would condition each frame on its empirical noise power and bias
the comparison against the closed-form error model.  Fingerprint sweeps
instead calibrate every injected jammer exactly, mirroring the
software-jamming measurement pipeline.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import ecc, impair, io as iqio, jammer, modem
from .curves import SweepCurve, SweepRow, find_crossing
from .fingerprint import (
    AnchorStore,
    Threshold,
    calibrate_threshold,
    candidate_distance,
    find_disruption_ratio,
    get_metric,
)
from .iq import IqBuffer
from .seeds import (
    STREAM_DECODER_TRIAL,
    STREAM_FP_ANCHOR,
    STREAM_FP_CALIBRATION,
    STREAM_FP_TRIAL,
    STREAM_FRAME_MC,
    stream_rng,
)

SCHEDULE_PERIOD = 33
SLOT_MINUTES = 15


@dataclass(frozen=True)
class SweepConfig:
    """Axes and knobs of one sweep: ratio grid, trial count, seed, jammer."""

    ratio_db_start: float
    ratio_db_stop: float
    ratio_db_step: float
    trials_per_point: int
    master_seed: int = 0
    jammer_family: str = "gaussian"
    tone_freq_hz: float = 0.0
    ecc_enabled: bool = True
    metric_name: str = "l2-raw"
    percentile: float = 95.0

    def __post_init__(self):
        if not self.ratio_db_start < self.ratio_db_stop:
            raise ValueError("ratio_db_start must be below ratio_db_stop")
        if not self.ratio_db_step > 0:
            raise ValueError("ratio_db_step must be positive")
        if self.trials_per_point < 100:
            raise ValueError("trials_per_point must be at least 100")
        if self.jammer_family not in jammer.JAMMER_FAMILIES:
            raise ValueError(f"unknown jammer family {self.jammer_family!r}")
        if not 0.0 < self.percentile < 100.0:
            raise ValueError("percentile must lie strictly between 0 and 100")

    def ratios(self) -> np.ndarray:
        n = int(math.floor((self.ratio_db_stop - self.ratio_db_start) / self.ratio_db_step + 1 + 1e-9))
        return self.ratio_db_start + self.ratio_db_step * np.arange(n)


@dataclass(frozen=True)
class ScheduleEntry:
    slot_index: int
    noise_level: int
    amplitude: int
    slot_minutes: int = SLOT_MINUTES


def noise_schedule(slot_index: int) -> ScheduleEntry:
    """Capture-schedule slot: noise level N = 7*i mod 33, amplitude N^2.

    gcd(7, 33) = 1, so 33 consecutive slots visit every level in [0, 32]
    exactly once (one full period is 8 h 15 min of 15-minute slots).
    """
    if slot_index < 0:
        raise ValueError("slot index must be nonnegative")
    level = (7 * slot_index) % SCHEDULE_PERIOD
    return ScheduleEntry(slot_index=slot_index, noise_level=level, amplitude=level**2)


def wilson_interval(failures: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval; behaves sensibly at rates near 0 and 1."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 <= failures <= trials:
        raise ValueError("failures must lie in [0, trials]")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie in (0, 1)")
    z = math.sqrt(2.0) * modem.erfcinv(1.0 - confidence)
    phat = failures / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials)) / denom
    # rounding can push the bounds a few ulp past the point estimate
    return max(0.0, min(center - half, phat)), min(1.0, max(center + half, phat))


_BIT_POWERS_31 = np.int64(1) << np.arange(ecc.CODEWORD_BITS, dtype=np.int64)


def _decoder_point(config: SweepConfig, point_index: int, ratio_db: float) -> SweepRow:
    """One ratio point of a decoder sweep.

    Per-trial randomness comes from per-trial Philox streams; the
    encode/modulate/inject/demodulate/decode math is evaluated for all
    trials at once and is equivalent to the scalar single-frame path (the
    test suite asserts trial-for-trial agreement).
    """
    trials = config.trials_per_point
    n_frame = ecc.FRAME_BITS
    n_symbols = (n_frame + 1) // 2  # one zero pad bit
    gaussian = config.jammer_family == "gaussian"

    frame_bits = np.empty((trials, n_frame), dtype=np.uint8)
    data_words = np.empty((trials, ecc.BLOCKS_PER_FRAME), dtype=np.uint32)
    noise = np.empty((trials, n_symbols), dtype=np.complex128)
    phases = np.empty(trials)
    for t in range(trials):
        rng = stream_rng(config.master_seed, STREAM_DECODER_TRIAL, point_index, t)
        if config.ecc_enabled:
            data = rng.integers(0, 2, ecc.DATA_BITS * ecc.BLOCKS_PER_FRAME, dtype=np.uint8)
            for b in range(ecc.BLOCKS_PER_FRAME):
                data_words[t, b] = data[b * ecc.DATA_BITS : (b + 1) * ecc.DATA_BITS] @ (
                    np.uint32(1) << np.arange(ecc.DATA_BITS, dtype=np.uint32)
                )
        else:
            frame_bits[t] = rng.integers(0, 2, n_frame, dtype=np.uint8)
        if gaussian:
            draws = rng.standard_normal(2 * n_symbols)
            noise[t] = draws[0::2] + 1j * draws[1::2]
        else:
            phases[t] = rng.uniform(0.0, 2.0 * np.pi)

    if config.ecc_enabled:
        codewords = ecc.encode_words(data_words)
        for b in range(ecc.BLOCKS_PER_FRAME):
            frame_bits[:, b::ecc.BLOCKS_PER_FRAME] = (
                (codewords[:, b : b + 1] >> np.arange(ecc.CODEWORD_BITS, dtype=np.uint32)) & 1
            ).astype(np.uint8)

    padded = np.concatenate([frame_bits, np.zeros((trials, 1), dtype=np.uint8)], axis=1)
    symbols = (
        (1.0 - 2.0 * padded[:, 0::2]) + 1j * (1.0 - 2.0 * padded[:, 1::2])
    ) * math.sqrt(0.5)
    rms_victim = np.sqrt(np.mean(np.abs(symbols) ** 2, axis=1))
    rms_attacker = rms_victim * 10.0 ** (ratio_db / 20.0)
    fs = modem.DEFAULT_SYMBOL_RATE_HZ
    if gaussian:
        rx = symbols + noise * (rms_attacker[:, None] / math.sqrt(2.0))
    else:
        if not abs(config.tone_freq_hz) < fs / 2.0:
            raise ValueError(f"tone frequency {config.tone_freq_hz} Hz aliases at {fs} Hz")
        angles = phases[:, None] + 2.0 * np.pi * config.tone_freq_hz * np.arange(n_symbols) / fs
        rx = symbols + rms_attacker[:, None] * np.exp(1j * angles)

    rx_bits = np.empty_like(padded)
    rx_bits[:, 0::2] = rx.real < 0.0
    rx_bits[:, 1::2] = rx.imag < 0.0
    rx_bits = rx_bits[:, :n_frame]

    if config.ecc_enabled:
        fail = np.zeros(trials, dtype=bool)
        for b in range(ecc.BLOCKS_PER_FRAME):
            received = (rx_bits[:, b::ecc.BLOCKS_PER_FRAME].astype(np.int64) @ _BIT_POWERS_31).astype(np.uint32)
            decoded, ok = ecc.decode_words(received)
            fail |= ~ok | (decoded != data_words[:, b])
    else:
        fail = np.any(rx_bits != frame_bits, axis=1)

    failures = int(fail.sum())
    low, high = wilson_interval(failures, trials)
    return SweepRow(float(ratio_db), trials, failures, failures / trials, low, high)


def _decoder_job(args) -> SweepRow:
    return _decoder_point(*args)


def decoder_sweep(config: SweepConfig, workers: int = 1) -> SweepCurve:
    """Empirical message error rate over the configured ratio grid."""
    jobs = [(config, idx, float(ratio)) for idx, ratio in enumerate(config.ratios())]
    if workers <= 1:
        rows = [_decoder_job(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_decoder_job, jobs))
    return SweepCurve(tuple(rows))


def analytic_decoder_curve(ratios_db, ecc_enabled: bool = True) -> tuple:
    """Closed-form message error rate at each ratio, for overlay plots."""
    model = ecc.p_message_error if ecc_enabled else ecc.p_message_error_no_ecc
    return tuple(
        (float(r), float(model(modem.ber_for_power_ratio(float(r))))) for r in ratios_db
    )


def write_rate_curve_csv(rows, path) -> None:
    """CSV for (ratio_db, rate) pairs such as the analytic overlay curve."""
    iqio.write_csv(path, ("ratio_db", "rate"), rows)


def frame_error_rate_mc(p: float, trials: int, seed: int = 0) -> tuple[int, int, float]:
    """Empirical frame error rate under i.i.d. bit flips at probability p.

    Random payloads are encoded, flipped bitwise in interleaved frame
    order, and decoded through the real codec; miscorrections count as
    errors.  Returns (failures, trials, rate).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("bit-error probability must lie in [0, 1]")
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = stream_rng(seed, STREAM_FRAME_MC)
    data = rng.integers(0, 1 << ecc.DATA_BITS, size=(trials, ecc.BLOCKS_PER_FRAME), dtype=np.uint32)
    codewords = ecc.encode_words(data)
    flips = rng.random((trials, ecc.FRAME_BITS)) < p
    fail = np.zeros(trials, dtype=bool)
    for b in range(ecc.BLOCKS_PER_FRAME):
        masks = (flips[:, b::ecc.BLOCKS_PER_FRAME].astype(np.int64) @ _BIT_POWERS_31).astype(np.uint32)
        decoded, ok = ecc.decode_words(codewords[:, b] ^ masks)
        fail |= ~ok | (decoded != data[:, b])
    failures = int(fail.sum())
    return failures, trials, failures / trials


@dataclass(frozen=True)
class FingerprintSweepResult:
    """Rejection curve, calibrated threshold, 50% crossings, and the
    per-ratio median distance curve."""

    rejection: SweepCurve
    threshold: Threshold
    disruption_ratio_db: float | None
    median_rows: tuple
    median_crossing_db: float | None

    def write_median_csv(self, path) -> None:
        iqio.write_csv(path, ("ratio_db", "median_distance"), self.median_rows)

    def write_summary_csv(self, path) -> None:
        def fmt(value):
            return "not-reached" if value is None else value

        iqio.write_csv(
            path,
            ("field", "value"),
            (
                ("threshold_value", self.threshold.value),
                ("threshold_percentile", self.threshold.percentile),
                ("calibration_count", self.threshold.calibration_count),
                ("disruption_ratio_db", fmt(self.disruption_ratio_db)),
                ("median_crossing_db", fmt(self.median_crossing_db)),
            ),
        )


def _fingerprint_point(config: SweepConfig, point_index: int, ratio_db: float,
                       profiles: list, template, store: AnchorStore,
                       threshold: Threshold, n_candidates: int) -> tuple[SweepRow, float]:
    metric = get_metric(config.metric_name)
    distances = np.empty(n_candidates)
    for c in range(n_candidates):
        rng = stream_rng(config.master_seed, STREAM_FP_TRIAL, point_index, c)
        profile = profiles[c % len(profiles)]
        clean = impair.synth_header(template, profile, rng)
        rms_attacker = jammer.rms(clean) * 10.0 ** (ratio_db / 20.0)
        if config.jammer_family == "gaussian":
            draws = rng.standard_normal(2 * len(clean))
            jam = draws[0::2] + 1j * draws[1::2]
            jam *= rms_attacker / jammer.rms(jam)
        else:
            phase = rng.uniform(0.0, 2.0 * np.pi)
            jam = jammer.gen_tone(
                len(clean), config.tone_freq_hz, phase, clean.sample_rate_hz, rms_attacker
            ).samples
        candidate = IqBuffer(clean.samples + jam, clean.sample_rate_hz)
        distances[c] = candidate_distance(
            store.anchors_for(profile.transmitter_id), candidate, metric
        )
    failures = int((distances > threshold.value).sum())
    low, high = wilson_interval(failures, n_candidates)
    row = SweepRow(float(ratio_db), n_candidates, failures, failures / n_candidates, low, high)
    return row, float(np.median(distances))


def _fingerprint_job(args) -> tuple[SweepRow, float]:
    return _fingerprint_point(*args)


def build_anchor_store(profiles, template, anchors_per_tx: int, master_seed: int) -> AnchorStore:
    """Clean synthesized anchors for each profile, deterministically seeded."""
    store = AnchorStore()
    for ti, profile in enumerate(profiles):
        for a in range(anchors_per_tx):
            rng = stream_rng(master_seed, STREAM_FP_ANCHOR, ti, a)
            store.add(profile.transmitter_id, impair.synth_header(template, profile, rng))
    return store


def calibration_distances(config: SweepConfig, profiles, template, store: AnchorStore,
                          count: int) -> list[float]:
    """Distances of held-out clean candidates to their own anchors."""
    metric = get_metric(config.metric_name)
    values = []
    for c in range(count):
        rng = stream_rng(config.master_seed, STREAM_FP_CALIBRATION, 0, c)
        profile = profiles[c % len(profiles)]
        buf = impair.synth_header(template, profile, rng)
        values.append(candidate_distance(store.anchors_for(profile.transmitter_id), buf, metric))
    return values


def fingerprint_sweep(config: SweepConfig, profiles, anchors_per_tx: int = 5,
                      candidates_per_point: int | None = None,
                      calibration_candidates: int = 1000,
                      template=None, workers: int = 1) -> FingerprintSweepResult:
    """Rejection-rate sweep of the fingerprint gate under jamming.

    Builds the anchor store from clean headers, calibrates the threshold at
    config.percentile on held-out clean candidates, then evaluates fresh
    jammed headers at every ratio point.
    """
    profiles = list(profiles)
    if len(profiles) < 2:
        raise ValueError("at least 2 transmitter profiles are needed to calibrate separability")
    if anchors_per_tx < 1:
        raise ValueError("anchors_per_tx must be positive")
    if candidates_per_point is None:
        candidates_per_point = config.trials_per_point
    if template is None:
        template = impair.HeaderTemplate()
    store = build_anchor_store(profiles, template, anchors_per_tx, config.master_seed)
    cal = calibration_distances(config, profiles, template, store, calibration_candidates)
    threshold = calibrate_threshold(cal, config.percentile)
    jobs = [
        (config, idx, float(ratio), profiles, template, store, threshold, candidates_per_point)
        for idx, ratio in enumerate(config.ratios())
    ]
    if workers <= 1:
        results = [_fingerprint_job(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_fingerprint_job, jobs))
    rows = tuple(row for row, _ in results)
    medians = tuple((row.ratio_db, med) for row, med in results)
    curve = SweepCurve(rows)
    return FingerprintSweepResult(
        rejection=curve,
        threshold=threshold,
        disruption_ratio_db=find_disruption_ratio(curve),
        median_rows=medians,
        median_crossing_db=find_crossing(
            [r for r, _ in medians], [m for _, m in medians], threshold.value
        ),
    )


@dataclass(frozen=True)
class ComparisonReport:
    """Decoder and fingerprinter error curves on a shared ratio grid, plus
    the dB gap between their 50% crossings."""

    rows: tuple
    decoder_crossing_db: float | None
    fingerprinter_crossing_db: float | None
    gap_db: float | None

    def write_csv(self, path) -> None:
        iqio.write_csv(path, ("ratio_db", "decoder_rate", "fingerprinter_rate"), self.rows)

    def write_summary_csv(self, path) -> None:
        def fmt(value):
            return "not-reached" if value is None else value

        iqio.write_csv(
            path,
            ("field", "value"),
            (
                ("decoder_crossing_db", fmt(self.decoder_crossing_db)),
                ("fingerprinter_crossing_db", fmt(self.fingerprinter_crossing_db)),
                ("gap_db", fmt(self.gap_db)),
            ),
        )


def compare_decoder_vs_fingerprinter(decoder_curve: SweepCurve,
                                     rejection_curve: SweepCurve,
                                     level: float = 0.5) -> ComparisonReport:
    """Align both curves over their overlapping ratio range and report the
    gap between their `level` crossings (fingerprinter minus decoder)."""
    d_ratios, d_rates = decoder_curve.ratios(), decoder_curve.rates()
    f_ratios, f_rates = rejection_curve.ratios(), rejection_curve.rates()
    lo = max(d_ratios[0], f_ratios[0])
    hi = min(d_ratios[-1], f_ratios[-1])
    if lo > hi:
        raise ValueError("curves cover disjoint ratio ranges")
    grid = sorted({r for r in d_ratios + f_ratios if lo <= r <= hi})
    rows = tuple(
        (r, float(np.interp(r, d_ratios, d_rates)), float(np.interp(r, f_ratios, f_rates)))
        for r in grid
    )
    decoder_crossing = find_crossing(d_ratios, d_rates, level)
    fingerprinter_crossing = find_crossing(f_ratios, f_rates, level)
    gap = None
    if decoder_crossing is not None and fingerprinter_crossing is not None:
        gap = fingerprinter_crossing - decoder_crossing
    return ComparisonReport(rows, decoder_crossing, fingerprinter_crossing, gap)
