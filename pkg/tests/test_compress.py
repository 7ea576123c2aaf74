import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qloq.compress import (ConnectivityMultigraph, RatioQuery, compressible_fraction, exact_compressible_fraction,
                           expected_ratio_exact, expected_ratio_mc, is_compressible, random_circuit, threshold_scan,
                           _compressible_counts, _pairs)


def test_single_gate_always_compressible():
    assert compressible_fraction(5, 1, 100, seed=0) == (1.0, 0.0)
    assert exact_compressible_fraction(4, 1) == 1


def test_exact_small_case():
    assert exact_compressible_fraction(3, 2) == Fraction(1, 3)


@settings(max_examples=25)
@given(st.integers(3, 6), st.integers(0, 12), st.integers(0, 2 ** 31))
def test_scalar_and_vector_tests_agree(N, m, seed):
    g = random_circuit(N, m, seed)
    pairs = _pairs(N)
    counts = np.zeros((1, len(pairs)))
    lookup = {tuple(p): k for k, p in enumerate(pairs.tolist())}
    for i, j in g.edges:
        counts[0, lookup[(min(i, j), max(i, j))]] += 1
    assert bool(_compressible_counts(counts, pairs, N)[0]) == is_compressible(g)


def test_isolated_pair_is_compressible():
    assert is_compressible(ConnectivityMultigraph(4, ((0, 1), (0, 1), (2, 3), (1, 2))))
    assert not is_compressible(ConnectivityMultigraph(3, ((0, 1), (1, 2), (0, 2))))
    with pytest.raises(ValueError):
        ConnectivityMultigraph(3, ((0, 0),))


def test_monte_carlo_is_seeded():
    assert compressible_fraction(4, 6, 2000, seed=3) == compressible_fraction(4, 6, 2000, seed=3)


@pytest.mark.parametrize("N", range(3, 21))
def test_pair_gate_ratio_closed_form(N):
    assert expected_ratio_exact(RatioQuery(2, 2, N)) == Fraction(4 * N - 8, 2 * N - 3)


@given(st.integers(2, 6), st.integers(2, 6), st.integers(0, 30))
def test_ratio_is_positive(g, n, extra):
    N = max(n, g + 1) + extra
    r = expected_ratio_exact(RatioQuery(g, n, N))
    assert r > 0


def test_ratio_query_validation():
    with pytest.raises(ValueError):
        RatioQuery(3, 2, 3)
    with pytest.raises(ValueError):
        RatioQuery(0, 2, 5)


def test_monte_carlo_ratio_agrees():
    q = RatioQuery(3, 4, 9)
    mean, se = expected_ratio_mc(q, 20000, seed=1)
    assert abs(mean - float(expected_ratio_exact(q))) < 4 * se


def test_threshold_scan():
    assert threshold_scan(2, 2) == 3
    assert threshold_scan(1, 3, 50) is None
