import numpy as np
import pytest

from popgenlab import fresh_seed, substream


def test_same_path_same_stream():
    a = substream(42, 3).integers(0, 2**32, size=16)
    b = substream(42, 3).integers(0, 2**32, size=16)
    assert np.array_equal(a, b)


def test_different_paths_differ():
    a = substream(42, 1).integers(0, 2**32, size=16)
    b = substream(42, 2).integers(0, 2**32, size=16)
    c = substream(43, 1).integers(0, 2**32, size=16)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_nested_paths_are_independent_of_consumption():
    # Drawing from one sub-stream never shifts a sibling sub-stream.
    g1 = substream(7, 1)
    g1.integers(0, 10, size=1000)
    fresh = substream(7, 2).integers(0, 2**32, size=8)
    assert np.array_equal(fresh, substream(7, 2).integers(0, 2**32, size=8))


def test_fresh_seed_is_64_bit():
    for _ in range(100):
        assert 0 <= fresh_seed() < 2**64


def test_seed_range_checked():
    with pytest.raises(ValueError):
        substream(-1, 0)
    with pytest.raises(ValueError):
        substream(2**64, 0)
