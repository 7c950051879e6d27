"""Bit-exact IQ file format, dataset adapter, and CSV emission.

IQ payload files hold interleaved 32-bit little-endian IEEE-754 floats,
I then Q per sample, with no container framing.  A JSON sidecar at
``<path>.json`` carries ``format_version`` (currently 1), ``sample_rate_hz``
and the optional ``center_frequency_hz`` and ``description`` fields.
Values are rounded to float32 on write; a read-back buffer therefore
re-writes byte-identically.

CSV emitters use UTF-8, comma separators, a fixed column order, and the
shortest round-trip decimal representation for floats.  Bit sequences are
always printed in index order, index k being the coefficient of x^k in the
code-polynomial view.

The dataset adapter expects capture bundles laid out as::

    <root>/noise_<LL>/tx<ID>_<SEQ>.iq     (plus JSON sidecars)

with ``LL`` the integer noise level (00 is the zero-noise control set) and
``ID`` the transmitter identifier.  Anything else under ``<root>`` raises
UnsupportedLayoutError rather than misparsing silently.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .iq import IqBuffer

FORMAT_VERSION = 1

_NOISE_DIR_RE = re.compile(r"^noise_(\d{2})$")
_CAPTURE_FILE_RE = re.compile(r"^tx(\d+)_(\d+)\.iq$")


class UnsupportedLayoutError(ValueError):
    """Raised when a dataset directory does not match the documented layout."""


def sidecar_path(path) -> Path:
    return Path(str(path) + ".json")


def write_iq(buffer: IqBuffer, path, center_frequency_hz: float | None = None,
             description: str | None = None) -> None:
    """Write samples as interleaved little-endian float32 plus a JSON sidecar."""
    path = Path(path)
    interleaved = np.empty(2 * len(buffer.samples), dtype="<f4")
    interleaved[0::2] = buffer.samples.real.astype("<f4")
    interleaved[1::2] = buffer.samples.imag.astype("<f4")
    try:
        path.write_bytes(interleaved.tobytes())
    except OSError as exc:
        raise OSError(f"cannot write IQ payload {path}: {exc}") from exc
    sidecar = {"format_version": FORMAT_VERSION, "sample_rate_hz": buffer.sample_rate_hz}
    if center_frequency_hz is not None:
        sidecar["center_frequency_hz"] = float(center_frequency_hz)
    if description is not None:
        sidecar["description"] = str(description)
    sidecar_path(path).write_text(json.dumps(sidecar, sort_keys=True) + "\n", encoding="utf-8")


def read_iq(path) -> IqBuffer:
    """Exact inverse of write_iq; rejects malformed payloads and sidecars."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"IQ payload not found: {path}")
    payload = path.read_bytes()
    if len(payload) == 0:
        raise ValueError(f"IQ payload is empty: {path}")
    if len(payload) % 8:
        raise ValueError(f"IQ payload truncated (length {len(payload)} not a multiple of 8): {path}")
    meta_path = sidecar_path(path)
    if not meta_path.exists():
        raise FileNotFoundError(f"missing sidecar {meta_path}")
    try:
        sidecar = json.loads(meta_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid sidecar JSON {meta_path}: {exc}") from exc
    version = sidecar.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported format_version {version!r} in {meta_path}")
    rate = sidecar.get("sample_rate_hz")
    if not isinstance(rate, (int, float)) or not rate > 0:
        raise ValueError(f"sidecar sample_rate_hz must be a positive number, got {rate!r} in {meta_path}")
    interleaved = np.frombuffer(payload, dtype="<f4")
    if not np.all(np.isfinite(interleaved)):
        raise ValueError(f"IQ payload contains NaN or Inf samples: {path}")
    # assign through the component views so signed zeros survive
    samples = np.empty(len(interleaved) // 2, dtype=np.complex128)
    samples.real = interleaved[0::2]
    samples.imag = interleaved[1::2]
    return IqBuffer(samples, float(rate))


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path, fieldnames, rows) -> None:
    """Write rows of cells with a fixed header and round-trip float formatting."""
    path = Path(path)
    lines = [",".join(fieldnames)]
    for row in rows:
        if len(row) != len(fieldnames):
            raise ValueError(f"row has {len(row)} cells, header has {len(fieldnames)}")
        lines.append(",".join(_format_cell(cell) for cell in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    """Read back a write_csv file as (fieldnames, string rows)."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"CSV file is empty: {path}")
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:] if line]


@dataclass(frozen=True)
class DatasetRecord:
    """One capture: transmitter id, noise level, samples, and whether the
    transmitter also appears in the zero-noise control set (usable)."""

    transmitter_id: int
    noise_level: int
    buffer: IqBuffer
    usable: bool


def load_released_dataset(root_path):
    """Iterate over (transmitter_id, noise_level, buffer, usable) records.

    Records are usable when their transmitter has at least one zero-noise
    capture to anchor against.  An empty root yields nothing (with a
    warning); an unrecognized layout raises UnsupportedLayoutError.
    """
    root = Path(root_path)
    if not root.is_dir():
        raise FileNotFoundError(f"dataset root not found: {root}")
    entries = sorted(root.iterdir())
    if not entries:
        warnings.warn(f"dataset root {root} is empty; no records to load", stacklevel=2)
        return
    captures: list[tuple[int, int, Path]] = []
    for entry in entries:
        match = _NOISE_DIR_RE.match(entry.name)
        if match is None or not entry.is_dir():
            raise UnsupportedLayoutError(
                f"unexpected entry {entry.name!r} under {root}; expected noise_<LL> directories"
            )
        level = int(match.group(1))
        for item in sorted(entry.iterdir()):
            if item.suffix == ".json":
                continue
            file_match = _CAPTURE_FILE_RE.match(item.name)
            if file_match is None:
                raise UnsupportedLayoutError(
                    f"unexpected file {item.name!r} in {entry}; expected tx<ID>_<SEQ>.iq"
                )
            captures.append((int(file_match.group(1)), level, item))
    anchored = {tx for tx, level, _ in captures if level == 0}
    for tx, level, path in captures:
        yield DatasetRecord(tx, level, read_iq(path), usable=tx in anchored)
