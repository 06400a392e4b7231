import math

import numpy as np
import pytest

from qdlab import ensembles
from qdlab.ensembles import BERNOULLI, GAUSSIAN, UNIFORM, Kind, from_name
from qdlab.streams import substream


def test_from_name():
    assert from_name("bernoulli").kind is Kind.BERNOULLI
    assert from_name("Uniform").kind is Kind.UNIFORM
    assert from_name("gaussian").variance == 0.5
    with pytest.raises(ValueError):
        from_name("cauchy")
    with pytest.raises(ValueError):
        from_name("gaussian", variance=-1.0)


def test_bernoulli_support():
    x = ensembles.sample(BERNOULLI, substream(0, "t", 0), size=1000)
    assert set(np.unique(x)) == {-1.0, 1.0}


def test_uniform_second_moment():
    # E[J^2] = 1/3 for uniform on [-1, 1]; 3-sigma tolerance on 1e6 draws
    x = ensembles.sample(UNIFORM, substream(1, "t", 0), size=1_000_000)
    m2 = np.mean(x**2)
    # var of J^2 is 1/5 - 1/9 = 4/45
    sigma = math.sqrt(4.0 / 45.0 / x.size)
    assert abs(m2 - 1.0 / 3.0) < 3 * sigma


def test_gaussian_second_moment():
    # default density pi^(-1/2) exp(-x^2) has variance 1/2
    x = ensembles.sample(GAUSSIAN, substream(2, "t", 0), size=1_000_000)
    m2 = np.mean(x**2)
    # var of J^2 for N(0, s2) is 2 s2^2 = 1/2
    sigma = math.sqrt(0.5 / x.size)
    assert abs(m2 - 0.5) < 3 * sigma


def test_char_function_at_zero():
    for dist in (BERNOULLI, UNIFORM, GAUSSIAN):
        assert ensembles.char_function(dist, 0.0) == 1.0


def test_char_function_values():
    assert ensembles.char_function(BERNOULLI, math.pi) == pytest.approx(-1.0)
    assert ensembles.char_function(UNIFORM, math.pi) == pytest.approx(0.0, abs=1e-15)
    # E cos(aJ) = exp(-a^2 s2 / 2); default s2 = 1/2 gives e^(-a^2/4)
    a = 2.0
    assert ensembles.char_function(GAUSSIAN, a) == pytest.approx(math.exp(-a * a / 4))


def test_char_function_matches_samples():
    rng = substream(3, "t", 0)
    for dist in (UNIFORM, GAUSSIAN):
        x = ensembles.sample(dist, rng, size=200_000)
        for s in (0.5, 1.7):
            emp = np.mean(np.cos(s * x))
            err = np.std(np.cos(s * x), ddof=1) / math.sqrt(x.size)
            assert abs(emp - ensembles.char_function(dist, s)) < 4 * err


def test_moment_bound_gaussian():
    # (n-1)!! (1/2)^(n/2) <= n! c^n holds with c near 1/sqrt(2) but the
    # binding constraint is n=2: |E J^2| = 1/2 <= 2 c^2 -> c = 1/2
    c = ensembles.moment_bound_check(GAUSSIAN, 20)
    assert 0 < c < 1.0
    for n in range(2, 21):
        assert ensembles._abs_moment(GAUSSIAN, n) <= math.factorial(n) * c**n + 1e-12


def test_moment_bound_bounded_distributions():
    for dist in (BERNOULLI, UNIFORM):
        c = ensembles.moment_bound_check(dist, 12)
        for n in range(2, 13):
            assert ensembles._abs_moment(dist, n) <= math.factorial(n) * c**n + 1e-12


def test_odd_moments_vanish():
    for dist in (BERNOULLI, UNIFORM, GAUSSIAN):
        assert ensembles._abs_moment(dist, 3) == 0.0
        assert ensembles._abs_moment(dist, 7) == 0.0
