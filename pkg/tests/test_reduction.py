import numpy as np
import pytest

from sparsefft.core import TimeSignal, dft_naive, idft_naive, spawn_rngs
from sparsefft.reduction import LiftedSignal, full_dft_via_sparse, lift_scale


def test_constant_vector():
    got = full_dft_via_sparse(np.ones(4), 16, np.random.default_rng(0), L=2)
    assert np.array_equal(got, np.array([2, 0, 0, 0]))


def test_seeded_integer_spectra_n64():
    ok = 0
    for r in spawn_rngs(8, 30):
        spec = r.integers(-50, 51, 8) + 1j * r.integers(-50, 51, 8)
        x = idft_naive(spec)
        ok += np.array_equal(full_dft_via_sparse(x, 64, r, L=50), np.round(dft_naive(x)))
    assert ok / 30 >= 2 / 3


def test_scale_factor(rng):
    x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    y = LiftedSignal(TimeSignal(x), 16).dense()
    assert abs(dft_naive(y)[4] - 2 * dft_naive(x)[1]) < 1e-9


@pytest.mark.parametrize("k,n", [(2, 8), (4, 64), (8, 1024), (16, 256)])
def test_lifted_support(k, n, rng):
    x = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    yh = dft_naive(LiftedSignal(TimeSignal(x), n).dense())
    off = np.ones(n, bool)
    off[:: n // k] = False
    assert np.max(np.abs(yh[off])) < 1e-9 * np.linalg.norm(x)
    np.testing.assert_allclose(yh[:: n // k], np.sqrt(n / k) * dft_naive(x), atol=1e-9)


def test_reads_are_delegated():
    base = TimeSignal(np.arange(4.0))
    y = LiftedSignal(base, 32)
    assert y[9] == 1.0 and y[np.array([0, 5, 31])].tolist() == [0, 1, 3]
    assert base.reads == 4 and y.reads == 4


def test_non_square_ratio_keeps_integers():
    assert lift_scale(64, 4) == (1.0, 4)
    c, m = lift_scale(32, 4)
    assert m == 4 and abs(c - np.sqrt(2)) < 1e-15
    ok = 0
    for r in spawn_rngs(3, 10):
        spec = r.integers(-9, 10, 4) + 1j * r.integers(-9, 10, 4)
        ok += np.array_equal(full_dft_via_sparse(idft_naive(spec), 32, r, L=9), spec)
    assert ok >= 7


def test_rejects_bad_sizes():
    with pytest.raises(ValueError):
        full_dft_via_sparse(np.ones(8), 12, np.random.default_rng(0), L=1)
    with pytest.raises(ValueError):
        full_dft_via_sparse(np.ones(8), 4, np.random.default_rng(0), L=1)
