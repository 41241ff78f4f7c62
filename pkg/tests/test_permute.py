import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import complex_normal, within_3se
from sparsefft.core import TimeSignal, dft_naive
from sparsefft.permute import PermutationParams, circular_distance, permuted_sample, random_permutation


def permuted_dense(P, x):
    return permuted_sample(P, TimeSignal(x), np.arange(P.n))


def test_identity_parameters(rng):
    x = complex_normal(rng, 16)
    np.testing.assert_allclose(permuted_dense(PermutationParams(16, 1, 0, 0), x), x)


def test_direct_substitution():
    x = TimeSignal(np.arange(8) * 1.0)
    assert permuted_sample(PermutationParams(8, 3, 1, 0), x, 2) == 3.0
    assert x.reads == 1


def test_spectrum_permutation_identity_n16(rng):
    x = complex_normal(rng, 16)
    xh = dft_naive(x)
    P = random_permutation(16, rng)
    ph = dft_naive(permuted_dense(P, x))
    i = np.arange(16)
    np.testing.assert_allclose(ph[P.pi_map(i)], xh * P.phase(i), atol=1e-9)


@given(st.integers(0, 6), st.integers(0, 2**32 - 1))
def test_spectrum_permutation_identity_property(p, seed):
    n = 1 << p
    r = np.random.default_rng(seed)
    x = complex_normal(r, n)
    P = random_permutation(n, r)
    i = np.arange(n)
    np.testing.assert_allclose(
        dft_naive(permuted_dense(P, x))[P.pi_map(i)], dft_naive(x) * P.phase(i), atol=1e-9
    )


def test_bin_offset_examples():
    P = PermutationParams(16, 1, 0, 0, 4)
    assert (P.pi_map(3), P.bin_of(3), P.offset_of(3)) == (3, 1, -1)
    assert (P.pi_map(0), P.bin_of(0), P.offset_of(0)) == (0, 0, 0)
    # exact half rounds up
    assert P.bin_of(2) == 1 and P.offset_of(2) == -2


def test_rejects_invalid():
    with pytest.raises(ValueError):
        PermutationParams(16, 2, 0, 0)
    with pytest.raises(ValueError):
        PermutationParams(16, 1, 0, 0, 3)
    with pytest.raises(ValueError):
        PermutationParams(12, 1, 0, 0)


@given(st.integers(1, 12), st.integers(0, 12), st.integers(0, 2**32 - 1))
def test_offset_bound_and_bijection(p, q, seed):
    n = 1 << p
    B = 1 << min(q, p)
    P = random_permutation(n, np.random.default_rng(seed), B)
    i = np.arange(n)
    pi = P.pi_map(i)
    assert np.array_equal(np.sort(pi), i)
    assert np.all(np.abs(P.offset_of(i)) <= n / (2 * B))
    assert np.all((P.bin_of(i) >= 0) & (P.bin_of(i) < B))
    assert np.array_equal(np.mod(P.bin_of(i) * (n // B) + P.offset_of(i), n), pi)
    assert np.array_equal(P.invert_location(pi), i)
    assert (P.sigma * P.sigma_inv) % n == 1 % n


def test_invert_location_examples(rng):
    P = PermutationParams(16, 3, 0, 5)
    assert P.invert_location(P.pi_map(7)) == 7
    I = PermutationParams(16, 1, 0, 0)
    assert np.array_equal(I.invert_location(np.arange(16)), np.arange(16))
    for _ in range(20):
        P = random_permutation(64, rng)
        assert np.array_equal(P.invert_location(P.pi_map(np.arange(64))), np.arange(64))


def test_collision_rate_monte_carlo(rng):
    n, B, size, draws = 1024, 64, 8, 2000
    S = rng.choice(n, size, replace=False)
    hits = 0
    for _ in range(draws):
        P = random_permutation(n, rng, B)
        h = P.bin_of(S)
        hits += int(np.sum(np.bincount(h, minlength=B)[h] > 1))
    assert within_3se(hits, draws * size, 4 * size / B)


def test_pairwise_collision_bound(rng):
    # Pr_sigma[sigma j in [-C, C] mod n] <= 4C/n for j != 0
    n, C, draws = 4096, 32, 20000
    for j in (1, 6, 1024, 3000):
        sig = rng.integers(0, n, draws) | 1
        v = np.mod(sig * j, n)
        hits = int(np.sum((v <= C) | (v >= n - C)))
        assert within_3se(hits, draws, 4 * C / n)


def test_large_offset_probability(rng):
    n, B, alpha, draws = 4096, 16, 0.25, 5000
    i = 123
    big = 0
    for _ in range(draws):
        P = random_permutation(n, rng, B)
        big += int(abs(P.offset_of(i)) >= (1 - alpha) * n / (2 * B))
    assert within_3se(big, draws, alpha)


@given(st.floats(-20, 20), st.floats(-20, 20), st.floats(-20, 20))
def test_circular_distance_metric(x, y, z):
    d = circular_distance(x, y)
    assert math.isclose(d, circular_distance(y, x), abs_tol=1e-12)
    assert 0 <= d <= math.pi + 1e-12
    assert d <= circular_distance(x, z) + circular_distance(z, y) + 1e-9
    m = (x - y) % (2 * math.pi)
    assert math.isclose(d, min(m, 2 * math.pi - m), abs_tol=1e-12)
