"""Deterministic random streams built on the counter-based Philox generator.

Every stochastic routine in this package derives its generator from integer
stream coordinates, never from global state, so results do not depend on
call order or on how work is split across processes.

A stream is addressed by (master_seed, stream_tag) packed into the 128-bit
Philox key, with (point_index, trial_index) placed in the top words of the
256-bit counter.  Distinct trials therefore start 2^128 counter steps
apart and can never overlap.
"""

from __future__ import annotations

import numpy as np

# Stream tags keep independently seeded subsystems from colliding when they
# share a master seed.
STREAM_DECODER_TRIAL = 1
STREAM_FP_ANCHOR = 2
STREAM_FP_CALIBRATION = 3
STREAM_FP_TRIAL = 4
STREAM_PROFILE = 5
STREAM_FRAME_MC = 6

_MASK64 = (1 << 64) - 1
_MASK128 = (1 << 128) - 1


def make_rng(seed) -> np.random.Generator:
    """Generator from an integer seed; an existing Generator passes through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(key=int(seed) & _MASK128))


def stream_rng(master_seed: int, stream_tag: int, point_index: int = 0,
               trial_index: int = 0) -> np.random.Generator:
    """Independent generator for one (stream, point, trial) coordinate."""
    key = ((int(master_seed) & _MASK64) << 64) | (int(stream_tag) & _MASK64)
    counter = ((int(point_index) & _MASK64) << 192) | ((int(trial_index) & _MASK64) << 128)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))
