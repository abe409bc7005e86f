from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from progsize.errors import EmptySample
from progsize.stats import describe, empirical_cdf, fraction_above, fraction_below, log2_bin_edges, rank_size_curve


def test_describe_small_sample():
    s = describe([1, 2, 2, 9])
    assert (s.n, s.min, s.median, s.max, s.mode) == (4, 1, 2.0, 9, 2)
    assert s.mean == 3.5
    assert s.std_dev == pytest.approx(math.sqrt(41 / 3), abs=1e-3)
    assert s.std_dev == pytest.approx(3.697, abs=1e-3)


def test_describe_singleton():
    s = describe([5])
    assert s.min == s.median == s.max == s.mode == s.mean == 5
    assert s.std_dev == 0


def test_describe_even_median_and_mode_tie():
    s = describe([4, 1, 3, 3, 1, 10])
    assert s.median == 3.0
    assert s.mode == 1


def test_empty_inputs():
    for fn in (describe, empirical_cdf, rank_size_curve):
        with pytest.raises(EmptySample):
            fn([])


sizes = st.lists(st.integers(1, 5000), min_size=1, max_size=200)


@given(sizes, st.randoms())
def test_describe_permutation_invariant(xs, rnd):
    shuffled = list(xs)
    rnd.shuffle(shuffled)
    a, b = describe(xs), describe(shuffled)
    assert (a.n, a.min, a.median, a.max, a.mode) == (b.n, b.min, b.median, b.max, b.mode)
    assert a.mean == pytest.approx(b.mean, rel=1e-12)
    assert a.std_dev == pytest.approx(b.std_dev, rel=1e-9, abs=1e-9)


@given(sizes)
def test_describe_ordering_invariants(xs):
    s = describe(xs)
    assert s.min <= s.median <= s.max
    assert s.min <= s.mode <= s.max
    assert s.std_dev >= 0


def test_empirical_cdf_examples():
    assert empirical_cdf([2, 2, 4]).points == ((2, 2 / 3), (4, 1.0))
    assert empirical_cdf([7]).points == ((7, 1.0),)


@given(sizes)
def test_empirical_cdf_invariants(xs):
    cdf = empirical_cdf(xs)
    x = cdf.sizes
    f = cdf.fractions
    assert all(a < b for a, b in zip(x, x[1:]))
    assert all(a <= b for a, b in zip(f, f[1:]))
    assert all(0 < v <= 1 for v in f)
    assert f[-1] == 1.0
    assert len(x) == len(set(xs))


def test_empirical_cdf_lookup():
    cdf = empirical_cdf([2, 2, 4])
    assert cdf(1) == 0.0
    assert cdf(2) == pytest.approx(2 / 3)
    assert cdf(3.5) == pytest.approx(2 / 3)
    assert cdf(100) == 1.0


def test_rank_size_curve():
    assert rank_size_curve([3, 9, 5]) == [(1, 9), (2, 5), (3, 3)]
    assert rank_size_curve([4, 4]) == [(1, 4), (2, 4)]


def test_fractions_are_strict():
    xs = [10, 32, 40, 64, 600, 2000]
    assert fraction_below(xs, 32) == pytest.approx(1 / 6)
    assert fraction_below(xs, 64) == pytest.approx(3 / 6)
    assert fraction_above(xs, 512) == pytest.approx(2 / 6)
    assert fraction_above(xs, 2000) == 0


def test_log2_edges():
    assert log2_bin_edges(3, 5207) == [2.0 ** k for k in range(1, 14)]
    assert log2_bin_edges(4, 4) == [4.0]
