"""Synthetic per-transmitter analog imperfections.

Each simulated transmitter gets a distinguishable identity by distorting
the shared synchronization header with a small set of impairments applied
in a fixed order: I/Q gain imbalance, quadrature skew, carrier frequency
offset, white per-sample phase jitter, then DC offset, followed by a final
renormalization to unit RMS.  Real hardware interleaves these effects; the
fixed order here is chosen for reproducibility.

Impairment magnitudes are engineering choices tuned for separability at
desk scale, not calibrated hardware values.  The phase jitter is white,
not a random walk: the simplest model that perturbs steady-state features.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import modem
from .iq import IqBuffer
from .jammer import rms
from .seeds import STREAM_PROFILE, make_rng, stream_rng

DEFAULT_SAMPLES_PER_SYMBOL = 16
DEFAULT_SAMPLE_RATE_HZ = modem.DEFAULT_SYMBOL_RATE_HZ * DEFAULT_SAMPLES_PER_SYMBOL

# Fixed 64-bit pseudorandom pattern standing in for the real sync word,
# identical for every transmitter.
_HEADER_PATTERN = 0xB1E7_52A9_0D4C_8F36
DEFAULT_HEADER_BITS = tuple((_HEADER_PATTERN >> k) & 1 for k in range(64))

# Construction-time bounds on profile magnitudes.
MAX_GAIN_IMBALANCE_DB = 3.0
MAX_QUADRATURE_SKEW_RAD = 0.2
MAX_DC_OFFSET = 0.2
MAX_FREQ_OFFSET_FRACTION = 0.01


@dataclass(frozen=True)
class HeaderTemplate:
    """The known synchronization header all transmitters share."""

    bits: tuple = DEFAULT_HEADER_BITS
    samples_per_symbol: int = DEFAULT_SAMPLES_PER_SYMBOL
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ

    def __post_init__(self):
        if len(self.bits) == 0 or len(self.bits) % 2:
            raise ValueError("header bit count must be positive and even")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("header bits must be 0 or 1")
        if self.samples_per_symbol < 1:
            raise ValueError("samples_per_symbol must be a positive integer")
        if not self.sample_rate_hz > 0:
            raise ValueError("sample_rate_hz must be positive")


@dataclass(frozen=True)
class ImpairmentProfile:
    """Analog imperfection parameters that make one transmitter's fingerprint."""

    transmitter_id: int
    gain_imbalance_db: float = 0.0
    quadrature_skew_rad: float = 0.0
    dc_offset: complex = 0j
    freq_offset_hz: float = 0.0
    phase_noise_dev_rad: float = 0.0

    def __post_init__(self):
        if abs(self.gain_imbalance_db) > MAX_GAIN_IMBALANCE_DB:
            raise ValueError(f"|gain_imbalance_db| must be <= {MAX_GAIN_IMBALANCE_DB}")
        if abs(self.quadrature_skew_rad) > MAX_QUADRATURE_SKEW_RAD:
            raise ValueError(f"|quadrature_skew_rad| must be <= {MAX_QUADRATURE_SKEW_RAD}")
        if abs(self.dc_offset) > MAX_DC_OFFSET:
            raise ValueError(f"|dc_offset| must be <= {MAX_DC_OFFSET}")
        # Checked against the default rate here and against the actual
        # template rate at synthesis time.
        if abs(self.freq_offset_hz) >= MAX_FREQ_OFFSET_FRACTION * DEFAULT_SAMPLE_RATE_HZ:
            raise ValueError(
                f"|freq_offset_hz| must be below {MAX_FREQ_OFFSET_FRACTION:.0%} "
                f"of the {DEFAULT_SAMPLE_RATE_HZ:.0f} Hz default sample rate"
            )
        if self.phase_noise_dev_rad < 0:
            raise ValueError("phase_noise_dev_rad must be nonnegative")


def clean_header(template: HeaderTemplate) -> IqBuffer:
    """The unimpaired normalized header every transmitter starts from."""
    base = modem.qpsk_modulate(
        np.array(template.bits, dtype=np.uint8),
        template.samples_per_symbol,
        template.sample_rate_hz,
    )
    return IqBuffer(base.samples / rms(base), template.sample_rate_hz)


def synth_header(template: HeaderTemplate, profile: ImpairmentProfile, seed) -> IqBuffer:
    """Modulate the header and apply the profile's impairments in fixed order.

    A zero profile reproduces clean_header bit for bit: every stage with a
    zero parameter is an exact floating-point identity.
    """
    if abs(profile.freq_offset_hz) >= MAX_FREQ_OFFSET_FRACTION * template.sample_rate_hz:
        raise ValueError(
            f"freq_offset_hz {profile.freq_offset_hz} too large for sample rate "
            f"{template.sample_rate_hz} Hz"
        )
    rng = make_rng(seed)
    base = modem.qpsk_modulate(
        np.array(template.bits, dtype=np.uint8),
        template.samples_per_symbol,
        template.sample_rate_hz,
    )
    x = base.samples
    i = x.real * 10.0 ** (profile.gain_imbalance_db / 20.0)
    q = x.imag * math.cos(profile.quadrature_skew_rad) + i * math.sin(profile.quadrature_skew_rad)
    y = i + 1j * q
    k = np.arange(len(y))
    y = y * np.exp(2j * np.pi * profile.freq_offset_hz * k / template.sample_rate_hz)
    jitter = rng.standard_normal(len(y)) * profile.phase_noise_dev_rad
    y = y * np.exp(1j * jitter)
    y = y + profile.dc_offset
    return IqBuffer(y / rms(y), template.sample_rate_hz)


def random_profile(transmitter_id: int, seed) -> ImpairmentProfile:
    """Deterministic profile within the construction bounds; distinct ids
    draw from distinct streams and give distinct profiles."""
    rng = stream_rng(seed, STREAM_PROFILE, trial_index=transmitter_id)
    dc_mag = rng.uniform(0.02, 0.10)
    dc_ang = rng.uniform(0.0, 2.0 * np.pi)
    return ImpairmentProfile(
        transmitter_id=transmitter_id,
        gain_imbalance_db=rng.uniform(-1.5, 1.5),
        quadrature_skew_rad=rng.uniform(-0.1, 0.1),
        dc_offset=dc_mag * complex(math.cos(dc_ang), math.sin(dc_ang)),
        freq_offset_hz=rng.uniform(-2000.0, 2000.0),
        phase_noise_dev_rad=rng.uniform(0.01, 0.05),
    )


_PROFILE_FIELDS = (
    "transmitter_id", "gain_imbalance_db", "quadrature_skew_rad",
    "dc_offset_re", "dc_offset_im", "freq_offset_hz", "phase_noise_dev_rad",
)


def save_profiles(profiles, path) -> None:
    """Persist profiles as blank-line separated key=value records."""
    records = []
    for p in profiles:
        records.append("\n".join((
            f"transmitter_id={p.transmitter_id}",
            f"gain_imbalance_db={p.gain_imbalance_db!r}",
            f"quadrature_skew_rad={p.quadrature_skew_rad!r}",
            f"dc_offset_re={p.dc_offset.real!r}",
            f"dc_offset_im={p.dc_offset.imag!r}",
            f"freq_offset_hz={p.freq_offset_hz!r}",
            f"phase_noise_dev_rad={p.phase_noise_dev_rad!r}",
        )))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n\n".join(records) + "\n")


def load_profiles(path) -> list[ImpairmentProfile]:
    """Inverse of save_profiles."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    profiles = []
    for chunk in text.split("\n\n"):
        chunk = chunk.strip()
        if not chunk:
            continue
        fields = {}
        for line in chunk.splitlines():
            key, _, value = line.partition("=")
            if key not in _PROFILE_FIELDS:
                raise ValueError(f"unknown profile field {key!r} in {path}")
            fields[key] = value
        missing = [f for f in _PROFILE_FIELDS if f not in fields]
        if missing:
            raise ValueError(f"profile record missing fields {missing} in {path}")
        profiles.append(ImpairmentProfile(
            transmitter_id=int(fields["transmitter_id"]),
            gain_imbalance_db=float(fields["gain_imbalance_db"]),
            quadrature_skew_rad=float(fields["quadrature_skew_rad"]),
            dc_offset=complex(float(fields["dc_offset_re"]), float(fields["dc_offset_im"])),
            freq_offset_hz=float(fields["freq_offset_hz"]),
            phase_noise_dev_rad=float(fields["phase_noise_dev_rad"]),
        ))
    return profiles
