"""Synthetic transmitter impairment tests: identity, determinism, bounds,
and empirical separability of the resulting fingerprints."""

import numpy as np
import pytest

from jamlab import impair
from jamlab.fingerprint import metric_l2_raw
from jamlab.iq import IqBuffer


def zero_profile(tx=0):
    return impair.ImpairmentProfile(transmitter_id=tx)


def test_zero_profile_is_exact_identity():
    template = impair.HeaderTemplate()
    clean = impair.clean_header(template)
    synth = impair.synth_header(template, zero_profile(), seed=12345)
    assert np.array_equal(synth.samples, clean.samples)


def test_synth_deterministic_per_seed():
    template = impair.HeaderTemplate()
    profile = impair.random_profile(3, 42)
    a = impair.synth_header(template, profile, seed=7)
    b = impair.synth_header(template, profile, seed=7)
    c = impair.synth_header(template, profile, seed=8)
    assert np.array_equal(a.samples, b.samples)
    assert not np.array_equal(a.samples, c.samples)  # phase jitter redraws


def test_synth_output_unit_rms():
    template = impair.HeaderTemplate()
    buf = impair.synth_header(template, impair.random_profile(1, 1), seed=1)
    assert np.sqrt(np.mean(np.abs(buf.samples) ** 2)) == pytest.approx(1.0, abs=1e-12)
    assert len(buf) == len(template.bits) // 2 * template.samples_per_symbol


def test_gain_imbalance_separates_profiles():
    """1 dB of gain imbalance must move the header further than jitter does."""
    template = impair.HeaderTemplate()
    base = impair.ImpairmentProfile(transmitter_id=0, phase_noise_dev_rad=0.01)
    offset = impair.ImpairmentProfile(
        transmitter_id=1, gain_imbalance_db=1.0, phase_noise_dev_rad=0.01
    )
    intra = []
    inter = []
    for seed in range(100):
        a = impair.synth_header(template, base, seed=2 * seed)
        b = impair.synth_header(template, base, seed=2 * seed + 1)
        c = impair.synth_header(template, offset, seed=2 * seed + 1)
        intra.append(metric_l2_raw(a, b))
        inter.append(metric_l2_raw(a, c))
    assert np.mean(inter) > np.mean(intra)


def test_profile_bounds_enforced():
    with pytest.raises(ValueError):
        impair.ImpairmentProfile(0, gain_imbalance_db=3.5)
    with pytest.raises(ValueError):
        impair.ImpairmentProfile(0, quadrature_skew_rad=0.25)
    with pytest.raises(ValueError):
        impair.ImpairmentProfile(0, dc_offset=0.15 + 0.15j)
    with pytest.raises(ValueError):
        impair.ImpairmentProfile(0, freq_offset_hz=5000.0)
    with pytest.raises(ValueError):
        impair.ImpairmentProfile(0, phase_noise_dev_rad=-0.01)


def test_freq_offset_rechecked_against_template_rate():
    slow = impair.HeaderTemplate(sample_rate_hz=50_000.0)
    profile = impair.ImpairmentProfile(0, freq_offset_hz=1000.0)  # fine at the default rate
    with pytest.raises(ValueError):
        impair.synth_header(slow, profile, seed=0)


def test_random_profile_deterministic_and_distinct():
    assert impair.random_profile(5, 99) == impair.random_profile(5, 99)
    assert impair.random_profile(5, 99) != impair.random_profile(5, 100)
    profiles = [impair.random_profile(i, 7) for i in range(66)]
    assert len({(p.gain_imbalance_db, p.freq_offset_hz) for p in profiles}) == 66


def test_random_profile_bounds_audit():
    for draw in range(10_000):
        p = impair.random_profile(draw % 66, draw)
        assert abs(p.gain_imbalance_db) <= impair.MAX_GAIN_IMBALANCE_DB
        assert abs(p.quadrature_skew_rad) <= impair.MAX_QUADRATURE_SKEW_RAD
        assert abs(p.dc_offset) <= impair.MAX_DC_OFFSET
        assert abs(p.freq_offset_hz) < impair.MAX_FREQ_OFFSET_FRACTION * impair.DEFAULT_SAMPLE_RATE_HZ
        assert p.phase_noise_dev_rad >= 0


def test_fingerprint_separability_across_fleet():
    """Mean inter-transmitter distance exceeds mean intra-transmitter
    distance across 66 profiles x 20 headers."""
    template = impair.HeaderTemplate()
    profiles = [impair.random_profile(i, 11) for i in range(66)]
    headers = {
        p.transmitter_id: [
            impair.synth_header(template, p, seed=1000 * p.transmitter_id + k) for k in range(20)
        ]
        for p in profiles
    }
    intra = []
    inter = []
    for p in profiles:
        own = headers[p.transmitter_id]
        for k in range(0, 20, 2):
            intra.append(metric_l2_raw(own[k], own[k + 1]))
        other = headers[(p.transmitter_id + 1) % 66]
        for k in range(0, 20, 2):
            inter.append(metric_l2_raw(own[k], other[k]))
    assert np.mean(inter) > np.mean(intra)


def test_header_template_validation():
    with pytest.raises(ValueError):
        impair.HeaderTemplate(bits=(0, 1, 1))
    with pytest.raises(ValueError):
        impair.HeaderTemplate(bits=(0, 2))
    with pytest.raises(ValueError):
        impair.HeaderTemplate(samples_per_symbol=0)
    with pytest.raises(ValueError):
        impair.HeaderTemplate(sample_rate_hz=0.0)


def test_profile_persistence_round_trip(tmp_path):
    profiles = [impair.random_profile(i, 21) for i in range(5)]
    path = tmp_path / "profiles.txt"
    impair.save_profiles(profiles, path)
    assert impair.load_profiles(path) == profiles


def test_profile_persistence_rejects_unknown_field(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("transmitter_id=0\nbogus=1\n")
    with pytest.raises(ValueError):
        impair.load_profiles(path)
    path.write_text("transmitter_id=0\n")
    with pytest.raises(ValueError):
        impair.load_profiles(path)
