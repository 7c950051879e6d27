"""IQ file round trips, malformed-input rejection, CSV formatting, and the
dataset adapter."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import jamlab.io as iqio
from jamlab.iq import IqBuffer


def f32_buffer(rng, n, rate=1e6):
    samples = (
        rng.standard_normal(n).astype(np.float32).astype(np.float64)
        + 1j * rng.standard_normal(n).astype(np.float32).astype(np.float64)
    )
    return IqBuffer(samples, rate)


def test_two_sample_round_trip(tmp_path):
    buf = IqBuffer(np.array([1.5 - 2.25j, -0.5 + 0.125j]), 250000.0)
    path = tmp_path / "two.iq"
    iqio.write_iq(buf, path)
    assert path.stat().st_size == 16
    back = iqio.read_iq(path)
    assert np.array_equal(back.samples, buf.samples)
    assert back.sample_rate_hz == 250000.0


def test_large_random_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    buf = f32_buffer(rng, 1_000_000)
    path = tmp_path / "big.iq"
    iqio.write_iq(buf, path)
    back = iqio.read_iq(path)
    assert np.array_equal(back.samples, buf.samples)


def test_byte_level_round_trip_with_signed_zeros(tmp_path):
    buf = IqBuffer(np.array([complex(0.0, -0.0), complex(-0.0, 0.0), 1e-38 + 0j]), 1.0)
    first = tmp_path / "a.iq"
    second = tmp_path / "b.iq"
    iqio.write_iq(buf, first)
    back = iqio.read_iq(first)
    assert np.signbit(back.samples[0].imag)
    assert np.signbit(back.samples[1].real)
    iqio.write_iq(back, second)
    assert first.read_bytes() == second.read_bytes()


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1), st.integers(1, 64))
def test_round_trip_property(seed, n):
    import tempfile
    from pathlib import Path

    rng = np.random.default_rng(seed)
    buf = f32_buffer(rng, n, rate=float(rng.integers(1, 10**7)))
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "buf.iq"
        iqio.write_iq(buf, path)
        back = iqio.read_iq(path)
        assert np.array_equal(back.samples, buf.samples)
        assert back.sample_rate_hz == buf.sample_rate_hz


def test_sidecar_optional_fields(tmp_path):
    buf = IqBuffer(np.ones(4, dtype=complex), 2e6)
    path = tmp_path / "meta.iq"
    iqio.write_iq(buf, path, center_frequency_hz=1.626e9, description="ring alert header")
    sidecar = json.loads(iqio.sidecar_path(path).read_text())
    assert sidecar["format_version"] == 1
    assert sidecar["center_frequency_hz"] == 1.626e9
    assert sidecar["description"] == "ring alert header"


def test_read_errors(tmp_path):
    missing = tmp_path / "missing.iq"
    with pytest.raises(FileNotFoundError):
        iqio.read_iq(missing)

    empty = tmp_path / "empty.iq"
    empty.write_bytes(b"")
    iqio.sidecar_path(empty).write_text('{"format_version": 1, "sample_rate_hz": 1}')
    with pytest.raises(ValueError, match="empty"):
        iqio.read_iq(empty)

    truncated = tmp_path / "trunc.iq"
    truncated.write_bytes(b"\x00" * 12)
    iqio.sidecar_path(truncated).write_text('{"format_version": 1, "sample_rate_hz": 1}')
    with pytest.raises(ValueError, match="truncated"):
        iqio.read_iq(truncated)

    orphan = tmp_path / "orphan.iq"
    orphan.write_bytes(b"\x00" * 16)
    with pytest.raises(FileNotFoundError, match="sidecar"):
        iqio.read_iq(orphan)

    bad_json = tmp_path / "bad.iq"
    bad_json.write_bytes(b"\x00" * 16)
    iqio.sidecar_path(bad_json).write_text("{not json")
    with pytest.raises(ValueError, match="sidecar"):
        iqio.read_iq(bad_json)

    bad_version = tmp_path / "vers.iq"
    bad_version.write_bytes(b"\x00" * 16)
    iqio.sidecar_path(bad_version).write_text('{"format_version": 9, "sample_rate_hz": 1}')
    with pytest.raises(ValueError, match="format_version"):
        iqio.read_iq(bad_version)

    bad_rate = tmp_path / "rate.iq"
    bad_rate.write_bytes(b"\x00" * 16)
    iqio.sidecar_path(bad_rate).write_text('{"format_version": 1, "sample_rate_hz": -4}')
    with pytest.raises(ValueError, match="sample_rate_hz"):
        iqio.read_iq(bad_rate)


def test_non_finite_samples_rejected(tmp_path):
    buf = IqBuffer(np.array([1.0 + 1j, complex(np.nan, 0.0)]), 1.0)
    path = tmp_path / "nan.iq"
    iqio.write_iq(buf, path)
    with pytest.raises(ValueError, match="NaN or Inf"):
        iqio.read_iq(path)


def test_csv_formatting_round_trip(tmp_path):
    path = tmp_path / "table.csv"
    values = (0.1, 1e-9, -2.980000000000001, 12345.0)
    iqio.write_csv(path, ("a", "b", "c", "d"), [values])
    header, rows = iqio.read_csv(path)
    assert header == ["a", "b", "c", "d"]
    assert tuple(float(cell) for cell in rows[0]) == values


def test_csv_fixed_column_order(tmp_path):
    path = tmp_path / "cols.csv"
    iqio.write_csv(path, ("x", "y"), [(1, 2), (3, 4)])
    assert path.read_text().splitlines()[0] == "x,y"
    with pytest.raises(ValueError):
        iqio.write_csv(path, ("x", "y"), [(1, 2, 3)])


# --- dataset adapter -----------------------------------------------------------

def build_fixture(root, rng):
    """Documented layout: noise_<LL>/tx<ID>_<SEQ>.iq."""
    layout = {
        ("noise_00", 1, 0): None,
        ("noise_00", 2, 0): None,
        ("noise_05", 1, 0): None,
        ("noise_05", 3, 0): None,
    }
    for (noise_dir, tx, seq) in layout:
        directory = root / noise_dir
        directory.mkdir(exist_ok=True, parents=True)
        buf = f32_buffer(rng, 32)
        iqio.write_iq(buf, directory / f"tx{tx}_{seq}.iq")


def test_dataset_fixture_parses_and_flags(tmp_path):
    rng = np.random.default_rng(3)
    build_fixture(tmp_path, rng)
    records = list(iqio.load_released_dataset(tmp_path))
    assert len(records) == 4
    by_key = {(r.transmitter_id, r.noise_level): r for r in records}
    assert by_key[(1, 0)].usable
    assert by_key[(1, 5)].usable
    assert by_key[(2, 0)].usable
    assert not by_key[(3, 5)].usable  # no zero-noise anchor for tx 3
    assert all(len(r.buffer) == 32 for r in records)


def test_dataset_empty_root_warns(tmp_path):
    with pytest.warns(UserWarning, match="empty"):
        records = list(iqio.load_released_dataset(tmp_path))
    assert records == []


def test_dataset_unsupported_layout(tmp_path):
    (tmp_path / "README.txt").write_text("hello")
    with pytest.raises(iqio.UnsupportedLayoutError):
        list(iqio.load_released_dataset(tmp_path))


def test_dataset_bad_capture_name(tmp_path):
    rng = np.random.default_rng(5)
    directory = tmp_path / "noise_00"
    directory.mkdir()
    iqio.write_iq(f32_buffer(rng, 8), directory / "capture1.iq")
    with pytest.raises(iqio.UnsupportedLayoutError):
        list(iqio.load_released_dataset(tmp_path))


def test_dataset_missing_root(tmp_path):
    with pytest.raises(FileNotFoundError):
        list(iqio.load_released_dataset(tmp_path / "nope"))
