"""
:Description: Tests the counter-based random substreams.
"""

from __future__ import annotations

import numpy as np
import pytest

from mutual_measurement.utils.random import BLOCK_SIZE, MAX_SEED, SampleStreams, StreamPurpose


def test_same_seed_same_draws() -> None:
    """
    Streams built from the same seed and purpose produce identical draws.
    """
    np.testing.assert_array_equal(
        SampleStreams(42).standard_normal(3, 100), SampleStreams(42).standard_normal(3, 100)
    )


def test_streams_are_separated() -> None:
    """
    Different seeds, steps and purposes draw different numbers.
    """
    base = SampleStreams(42).standard_normal(0, 100)
    assert not np.array_equal(base, SampleStreams(43).standard_normal(0, 100))
    assert not np.array_equal(base, SampleStreams(42).standard_normal(1, 100))
    assert not np.array_equal(base, SampleStreams(42, StreamPurpose.SPLIT_OBJECT).standard_normal(0, 100))


def test_draws_do_not_depend_on_ensemble_length() -> None:
    """
    A sample's value is fixed by its index, so shorter ensembles are prefixes of longer ones.
    """
    streams = SampleStreams(7)
    long = streams.standard_normal(5, 2 * BLOCK_SIZE + 10)
    np.testing.assert_array_equal(streams.standard_normal(5, 10), long[:10])
    np.testing.assert_array_equal(streams.standard_normal(5, BLOCK_SIZE + 3), long[: BLOCK_SIZE + 3])


def test_partitioned_draws_match() -> None:
    """
    Drawing a block-aligned tail separately gives the same values as drawing the whole ensemble.
    """
    streams = SampleStreams(7)
    whole = streams.standard_normal(2, 3 * BLOCK_SIZE)
    tail = streams.standard_normal(2, 2 * BLOCK_SIZE, first_sample=BLOCK_SIZE)
    np.testing.assert_array_equal(whole[BLOCK_SIZE:], tail)


def test_generator_reproducible() -> None:
    """
    `generator()` always starts at the beginning of its counter range.
    """
    streams = SampleStreams(1, StreamPurpose.BRANCH_SAMPLING)
    assert streams.generator(0).random() == streams.generator(0).random()
    assert streams.seed == 1


@pytest.mark.parametrize("seed", [-1, MAX_SEED + 1])
def test_invalid_seed(seed: int) -> None:
    """
    Seeds must fit into 64 unsigned bits.

    :param seed: Out-of-range seed
    """
    with pytest.raises(ValueError):
        SampleStreams(seed)


def test_invalid_offsets() -> None:
    """
    Offsets must be block aligned and steps non-negative.
    """
    with pytest.raises(ValueError):
        SampleStreams(0).standard_normal(0, 10, first_sample=1)
    with pytest.raises(ValueError):
        SampleStreams(0).generator(-1)
