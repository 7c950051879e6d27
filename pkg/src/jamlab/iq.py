"""Complex-baseband sample buffers, the currency of the signal-path modules."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class IqBuffer:
    """One-dimensional complex128 sample sequence plus its sample rate in Hz."""

    samples: np.ndarray
    sample_rate_hz: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.complex128)
        if samples.ndim != 1:
            raise ValueError("IqBuffer samples must be one-dimensional")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))
        if not self.sample_rate_hz > 0:
            raise ValueError(f"sample_rate_hz must be positive, got {self.sample_rate_hz}")

    def __len__(self) -> int:
        return len(self.samples)


def as_samples(signal) -> np.ndarray:
    """Complex sample array behind `signal` (IqBuffer or array-like)."""
    if isinstance(signal, IqBuffer):
        return signal.samples
    return np.asarray(signal, dtype=np.complex128)
