import numpy as np

from qdlab.streams import substream


def test_reproducible():
    a = substream(42, "tag", 3).random(10)
    b = substream(42, "tag", 3).random(10)
    assert np.array_equal(a, b)


def test_independent_indices():
    a = substream(42, "tag", 0).random(10)
    b = substream(42, "tag", 1).random(10)
    assert not np.array_equal(a, b)


def test_tag_separation():
    a = substream(42, "alpha", 0).random(10)
    b = substream(42, "beta", 0).random(10)
    assert not np.array_equal(a, b)


def test_extending_never_changes_earlier_draws():
    first = [substream(7, "bump-offset", j).integers(-j - 1, j + 2)
             for j in range(5)]
    again = [substream(7, "bump-offset", j).integers(-j - 1, j + 2)
             for j in range(50)][:5]
    assert first == again
