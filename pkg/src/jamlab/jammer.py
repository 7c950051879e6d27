"""Jamming waveform synthesis, power calibration, and ratio measurement.

Two jammer families: circularly symmetric Gaussian noise and a single
complex tone at a relative frequency.  Generated waveforms are rescaled to
hit their target RMS exactly, so the achieved clean attacker-to-victim
ratio matches the requested one to floating-point precision.

Two ratio estimators mirror the capture pipeline: the combined-signal form
20*log10((rms_a - rms_v)/rms_v), which assumes the measured attacker signal
still contains the victim signal, and the clean form 20*log10(rms_a/rms_v).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import io as iqio
from .iq import IqBuffer, as_samples
from .seeds import make_rng

JAMMER_FAMILIES = ("gaussian", "tone")


def rms(signal) -> float:
    """Root-mean-square magnitude sqrt(mean(|s|^2)) of a nonempty signal."""
    samples = as_samples(signal)
    if len(samples) == 0:
        raise ValueError("cannot take the RMS of an empty buffer")
    return math.sqrt(float(np.mean(np.abs(samples) ** 2)))


def measured_ratio_combined(rms_combined: float, rms_victim: float) -> float:
    """Attacker-to-victim ratio in dB from a combined-signal measurement.

    20*log10((rms_a - rms_v)/rms_v); defined only while the combined RMS
    exceeds the victim RMS.
    """
    if not rms_victim > 0:
        raise ValueError("victim RMS must be positive")
    if not rms_combined > rms_victim:
        raise ValueError(
            f"combined RMS {rms_combined} must exceed victim RMS {rms_victim}; "
            "the combined-signal estimator is undefined otherwise"
        )
    return 20.0 * math.log10((rms_combined - rms_victim) / rms_victim)


def measured_ratio_clean(rms_attacker: float, rms_victim: float) -> float:
    """Attacker-to-victim ratio in dB for a jammer measured by itself."""
    if not (rms_attacker > 0 and rms_victim > 0):
        raise ValueError("RMS amplitudes must be positive")
    return 20.0 * math.log10(rms_attacker / rms_victim)


@dataclass(frozen=True)
class JammerSpec:
    """Jammer family, parameters, and the target clean power ratio in dB."""

    family: str
    target_ratio_db: float
    tone_freq_hz: float = 0.0
    tone_phase_rad: float = 0.0
    seed: int = 0
    wideband: bool = False

    def __post_init__(self):
        if self.family not in JAMMER_FAMILIES:
            raise ValueError(f"unknown jammer family {self.family!r}; choose from {JAMMER_FAMILIES}")
        if self.wideband and self.family != "gaussian":
            raise ValueError("wideband generation applies to the gaussian family only")


@dataclass(frozen=True)
class PowerMeasurement:
    rms_victim: float
    rms_attacker: float
    ratio_db: float
    estimator: str = "clean"


def gen_gaussian(n: int, seed, rms_target: float, sample_rate_hz: float = 1.0,
                 wideband: bool = False) -> IqBuffer:
    """Circularly symmetric complex Gaussian noise rescaled to an exact RMS.

    wideband approximates a recording made at 4x rate and decimated without
    filtering; for synthetic white noise this only changes which draws are
    kept, and it is off by default.
    """
    if n < 1:
        raise ValueError("sample count must be positive")
    if not rms_target > 0:
        raise ValueError("rms_target must be positive")
    rng = make_rng(seed)
    m = 4 * n if wideband else n
    raw = rng.standard_normal(2 * m)
    z = raw[0::2] + 1j * raw[1::2]
    if wideband:
        z = z[::4]
    z = z * (rms_target / rms(z))
    return IqBuffer(z, sample_rate_hz)


def gen_tone(n: int, f_rel_hz: float, phase_rad: float, sample_rate_hz: float,
             rms_target: float) -> IqBuffer:
    """Complex tone A*exp(j*(2*pi*f*k/fs + phase)) with A = rms_target."""
    if n < 1:
        raise ValueError("sample count must be positive")
    if not rms_target > 0:
        raise ValueError("rms_target must be positive")
    if not abs(f_rel_hz) < sample_rate_hz / 2.0:
        raise ValueError(
            f"tone frequency {f_rel_hz} Hz would alias at sample rate {sample_rate_hz} Hz"
        )
    k = np.arange(n)
    samples = rms_target * np.exp(1j * (2.0 * np.pi * f_rel_hz * k / sample_rate_hz + phase_rad))
    return IqBuffer(samples, sample_rate_hz)


def synthesize(spec: JammerSpec, n: int, sample_rate_hz: float, rms_target: float) -> IqBuffer:
    """Standalone jammer waveform for a spec, at an exact RMS amplitude."""
    if spec.family == "gaussian":
        return gen_gaussian(n, spec.seed, rms_target, sample_rate_hz, spec.wideband)
    return gen_tone(n, spec.tone_freq_hz, spec.tone_phase_rad, sample_rate_hz, rms_target)


def add_signals(a: IqBuffer, b: IqBuffer) -> IqBuffer:
    """Sample-wise sum; inputs must agree in length and sample rate."""
    if a.sample_rate_hz != b.sample_rate_hz:
        raise ValueError(
            f"sample-rate mismatch: {a.sample_rate_hz} Hz vs {b.sample_rate_hz} Hz"
        )
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)} samples")
    return IqBuffer(a.samples + b.samples, a.sample_rate_hz)


def inject(victim: IqBuffer, spec: JammerSpec) -> tuple[IqBuffer, PowerMeasurement]:
    """Add a jammer calibrated against the victim's RMS to the victim signal.

    The jammer RMS is rms(victim) * 10^(target_ratio_db/20), so the achieved
    clean ratio equals the target to floating-point precision.
    """
    if len(victim) == 0:
        raise ValueError("victim buffer must be nonempty")
    rms_victim = rms(victim)
    rms_attacker = rms_victim * 10.0 ** (spec.target_ratio_db / 20.0)
    jam = synthesize(spec, len(victim), victim.sample_rate_hz, rms_attacker)
    combined = add_signals(victim, jam)
    achieved = PowerMeasurement(
        rms_victim=rms_victim,
        rms_attacker=rms(jam),
        ratio_db=measured_ratio_clean(rms(jam), rms_victim),
        estimator="clean",
    )
    return combined, achieved


def write_constellation_csv(buffer: IqBuffer, path) -> None:
    """Emit `index,i,q` rows for constellation-diagram plotting."""
    rows = (
        (k, float(s.real), float(s.imag))
        for k, s in enumerate(buffer.samples)
    )
    iqio.write_csv(path, ("index", "i", "q"), rows)
