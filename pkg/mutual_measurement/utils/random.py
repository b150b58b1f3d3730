"""
:Description: Provides reproducible, counter-based random substreams for Monte Carlo work.

Every random draw in this project is addressed by a `(purpose, block, step)` triple. Samples are grouped into fixed
blocks of `BLOCK_SIZE`; each block owns a Philox key derived from the master seed, and each step selects a disjoint
counter range under that key. The numbers a given sample receives are therefore fixed by the master seed and the
sample's index, no matter how the samples are partitioned across workers.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Final

import numpy as np

from mutual_measurement.types import FloatArray

# Number of samples that share one Philox key. Partitions of an ensemble must be aligned to this size.
BLOCK_SIZE: Final[int] = 4096

# Largest seed accepted by the experiment configuration (64-bit).
MAX_SEED: Final[int] = 2**64 - 1


class StreamPurpose(IntEnum):
    """
    Separates the random streams used for unrelated tasks, so that adding draws to one never shifts another.
    """

    INITIAL_CONDITION = 0
    VELOCITY_INCREMENT = 1
    BRANCH_SAMPLING = 2
    SPLIT_OBJECT = 3


class SampleStreams:
    """
    Factory of counter-based random generators derived from a single master seed.
    """

    def __init__(self, seed: int, purpose: StreamPurpose = StreamPurpose.VELOCITY_INCREMENT):
        """
        Constructs a set of substreams.

        :param seed: Master seed. Must be a non-negative integer below 2**64.
        :param purpose: (Optional) Task that the streams are used for.
        :raises ValueError: If the seed is out of range.
        """
        if seed < 0 or seed > MAX_SEED:
            raise ValueError(f"Seed must be in [0, 2**64): {seed}")
        self._seed: Final[int] = seed
        self._purpose: Final[StreamPurpose] = purpose
        # Philox keys, one per sample block
        self._keys: dict[int, np.ndarray] = {}

    @property
    def seed(self) -> int:
        """
        :returns: The master seed these streams are derived from.
        """
        return self._seed

    def _block_key(self, block: int) -> np.ndarray:
        """
        Derives (and caches) the Philox key of a sample block.

        :param block: Block index.
        :returns: Two-word Philox key.
        """
        if block not in self._keys:
            seq = np.random.SeedSequence(entropy=self._seed, spawn_key=(int(self._purpose), block))
            self._keys[block] = seq.generate_state(2, dtype=np.uint64)
        return self._keys[block]

    def generator(self, step: int, block: int = 0) -> np.random.Generator:
        """
        Returns the generator owning the counter range of one `(block, step)` pair.

        :param step: Step (draw round) index. Each step occupies its own 2**64-wide counter range.
        :param block: (Optional) Sample block index. Defaults to the first block.
        :returns: A freshly positioned generator.
        """
        if step < 0:
            raise ValueError(f"Step index must be non-negative: {step}")
        bit_gen = np.random.Philox(key=self._block_key(block), counter=step << 64)
        return np.random.Generator(bit_gen)

    def standard_normal(self, step: int, n_samples: int, first_sample: int = 0) -> FloatArray:
        """
        Draws one standard normal variate per sample for a given step.

        :param step: Step index.
        :param n_samples: Number of samples to draw for.
        :param first_sample: (Optional) Global index of the first sample. Must be a multiple of `BLOCK_SIZE`.
        :raises ValueError: If `first_sample` is not aligned to a block boundary.
        :returns: Array of `n_samples` standard normal values.
        """
        if first_sample % BLOCK_SIZE != 0:
            raise ValueError(f"Sample offset {first_sample} is not a multiple of the block size {BLOCK_SIZE}")
        out = np.empty(n_samples, dtype=np.float64)
        first_block: Final[int] = first_sample // BLOCK_SIZE
        for start in range(0, n_samples, BLOCK_SIZE):
            stop = min(start + BLOCK_SIZE, n_samples)
            # Draw a full block even when the ensemble ends mid-block, so the values do not depend on the length.
            draws = self.generator(step, first_block + start // BLOCK_SIZE).standard_normal(BLOCK_SIZE)
            out[start:stop] = draws[: stop - start]
        return out
