"""Transmitter-fingerprint acceptance pipeline.

Incoming headers are compared to zero-noise anchor headers of the claimed
transmitter through a pluggable distance metric.  A threshold calibrated as
a percentile of clean-candidate distances (the 95th by default) splits
accept from reject, and the disruption ratio is the attacker-to-victim
power at which half of legitimate headers get rejected.

Two baseline metrics are built in.  "l2-raw" is the RMS of the sample-wise
difference after normalizing each buffer to unit RMS.  "l2-dc" first
subtracts each buffer's complex mean, which makes it exactly blind to a
constant offset, the shape a 0 Hz tone jammer adds.  A neural or otherwise
external metric can be wired in through the batch file interface at the
bottom of this module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io as iqio
from .curves import SweepCurve, find_crossing
from .iq import IqBuffer, as_samples
from .jammer import rms


class UnknownTransmitterError(KeyError):
    """Candidate claims a transmitter with no anchors in the store."""


class AnchorStore:
    """Zero-noise reference headers keyed by transmitter id."""

    def __init__(self):
        self._anchors: dict[int, list[IqBuffer]] = {}

    def add(self, transmitter_id: int, buffer: IqBuffer) -> None:
        if len(buffer) == 0:
            raise ValueError("anchor buffers must be nonempty")
        self._anchors.setdefault(int(transmitter_id), []).append(buffer)

    def anchors_for(self, transmitter_id: int) -> list[IqBuffer]:
        try:
            return self._anchors[int(transmitter_id)]
        except KeyError:
            raise UnknownTransmitterError(
                f"transmitter {transmitter_id} has no zero-noise anchors; "
                "the candidate is unusable"
            ) from None

    def transmitter_ids(self) -> list[int]:
        return sorted(self._anchors)

    def __contains__(self, transmitter_id) -> bool:
        return int(transmitter_id) in self._anchors

    def __len__(self) -> int:
        return len(self._anchors)


def _normalized(signal) -> np.ndarray:
    samples = as_samples(signal)
    power = rms(samples)
    if power == 0.0:
        raise ValueError("cannot normalize an all-zero buffer")
    return samples / power


def _check_equal_length(a, b) -> tuple[np.ndarray, np.ndarray]:
    sa, sb = as_samples(a), as_samples(b)
    if len(sa) != len(sb):
        raise ValueError(f"length mismatch: {len(sa)} vs {len(sb)} samples")
    return sa, sb


def metric_l2_raw(a, b) -> float:
    """RMS difference between the unit-RMS normalizations of a and b."""
    sa, sb = _check_equal_length(a, b)
    return rms(_normalized(sa) - _normalized(sb))


def metric_l2_dc(a, b) -> float:
    """As metric_l2_raw with each buffer's complex mean removed first,
    cancelling any constant offset exactly."""
    sa, sb = _check_equal_length(a, b)
    return rms(_normalized(sa - sa.mean()) - _normalized(sb - sb.mean()))


METRICS = {"l2-raw": metric_l2_raw, "l2-dc": metric_l2_dc}


def get_metric(name: str):
    try:
        return METRICS[name]
    except KeyError:
        raise ValueError(f"unknown metric {name!r}; choose from {sorted(METRICS)}") from None


@dataclass(frozen=True)
class Threshold:
    """Acceptance threshold with its calibration provenance."""

    value: float
    percentile: float
    calibration_count: int


def calibrate_threshold(distances, percentile: float) -> Threshold:
    """Order-statistic percentile with linear interpolation between ranks."""
    values = np.asarray(list(distances), dtype=float)
    if len(values) < 20:
        raise ValueError(f"threshold calibration needs at least 20 distances, got {len(values)}")
    if not 0.0 < percentile < 100.0:
        raise ValueError("percentile must lie strictly between 0 and 100")
    value = float(np.percentile(values, percentile, method="linear"))
    return Threshold(value=value, percentile=float(percentile), calibration_count=len(values))


def candidate_distance(anchors, candidate, metric, aggregate: str = "min") -> float:
    """Distance from a candidate to a transmitter's anchor set.

    Aggregation over anchors is "min" (most permissive) by default, with
    "mean" available for the averaged view of the same comparison.
    """
    distances = [metric(candidate, anchor) for anchor in anchors]
    if not distances:
        raise ValueError("anchor list is empty")
    if aggregate == "min":
        return min(distances)
    if aggregate == "mean":
        return float(np.mean(distances))
    raise ValueError(f"unknown aggregate {aggregate!r}; use 'min' or 'mean'")


def evaluate(anchors: AnchorStore, candidates, metric, threshold: Threshold,
             aggregate: str = "min") -> tuple[np.ndarray, float]:
    """Accept/reject each (transmitter_id, buffer) candidate.

    Returns (rejected flags, rejection rate); a candidate is rejected when
    its distance to the claimed transmitter's anchors exceeds the threshold.
    """
    rejected = []
    for transmitter_id, buffer in candidates:
        d = candidate_distance(anchors.anchors_for(transmitter_id), buffer, metric, aggregate)
        rejected.append(d > threshold.value)
    if not rejected:
        raise ValueError("no candidates to evaluate")
    flags = np.asarray(rejected, dtype=bool)
    return flags, float(flags.mean())


def find_disruption_ratio(curve: SweepCurve, level: float = 0.5):
    """Attacker-to-victim ratio (dB) at which the rejection rate reaches
    `level`, linearly interpolated; None when the curve never gets there."""
    return find_crossing(curve.ratios(), curve.rates(), level)


# --- batch interface for external distance metrics -------------------------
#
# export_metric_batch writes a directory an external scorer can consume:
#
#   <root>/manifest.json
#   <root>/anchors/<transmitter>_<index>.iq      (+ sidecars)
#   <root>/candidates/<index>.iq                 (+ sidecars)
#
# The manifest lists, per candidate, the claimed transmitter and the anchor
# ids to score against.  The external program writes one CSV with header
# `candidate_id,anchor_id,distance`; evaluate_from_table then applies the
# usual threshold rule to those distances.

BATCH_FORMAT_VERSION = 1


def export_metric_batch(root, anchors: AnchorStore, candidates) -> Path:
    """Write anchors, candidates, and the scoring manifest; returns the
    manifest path."""
    root = Path(root)
    (root / "anchors").mkdir(parents=True, exist_ok=True)
    (root / "candidates").mkdir(parents=True, exist_ok=True)
    anchor_ids = {}
    for tx in anchors.transmitter_ids():
        for k, buffer in enumerate(anchors.anchors_for(tx)):
            anchor_id = f"{tx}:{k}"
            rel = f"anchors/{tx}_{k}.iq"
            iqio.write_iq(buffer, root / rel)
            anchor_ids.setdefault(tx, []).append({"anchor_id": anchor_id, "file": rel})
    entries = []
    for idx, (tx, buffer) in enumerate(candidates):
        if tx not in anchors:
            raise UnknownTransmitterError(f"candidate {idx} claims unknown transmitter {tx}")
        rel = f"candidates/{idx}.iq"
        iqio.write_iq(buffer, root / rel)
        entries.append({
            "candidate_id": idx,
            "file": rel,
            "transmitter_id": int(tx),
            "anchors": anchor_ids[int(tx)],
        })
    manifest = {"format_version": BATCH_FORMAT_VERSION, "candidates": entries}
    manifest_path = root / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest_path


def read_metric_manifest(manifest_path) -> dict:
    manifest = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
    if manifest.get("format_version") != BATCH_FORMAT_VERSION:
        raise ValueError(f"unsupported batch format_version {manifest.get('format_version')!r}")
    return manifest


def score_metric_batch(manifest_path, metric, csv_path) -> None:
    """Reference scorer for the batch interface: plays the role of the
    external program using an in-process metric."""
    manifest = read_metric_manifest(manifest_path)
    root = Path(manifest_path).parent
    rows = []
    for entry in manifest["candidates"]:
        candidate = iqio.read_iq(root / entry["file"])
        for anchor in entry["anchors"]:
            ref = iqio.read_iq(root / anchor["file"])
            rows.append((entry["candidate_id"], anchor["anchor_id"], metric(candidate, ref)))
    iqio.write_csv(csv_path, ("candidate_id", "anchor_id", "distance"), rows)


def load_distance_csv(csv_path) -> dict:
    """Read `candidate_id,anchor_id,distance` rows into a lookup table."""
    header, rows = iqio.read_csv(csv_path)
    if header != ["candidate_id", "anchor_id", "distance"]:
        raise ValueError(f"unexpected distance CSV header {header} in {csv_path}")
    return {(int(cid), aid): float(dist) for cid, aid, dist in rows}


def evaluate_from_table(manifest, table, threshold: Threshold,
                        aggregate: str = "min") -> tuple[np.ndarray, float]:
    """evaluate() driven by externally computed distances."""
    rejected = []
    for entry in manifest["candidates"]:
        distances = []
        for anchor in entry["anchors"]:
            key = (entry["candidate_id"], anchor["anchor_id"])
            if key not in table:
                raise ValueError(f"distance table is missing pair {key}")
            distances.append(table[key])
        d = min(distances) if aggregate == "min" else float(np.mean(distances))
        rejected.append(d > threshold.value)
    flags = np.asarray(rejected, dtype=bool)
    return flags, float(flags.mean())
