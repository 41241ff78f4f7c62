"""Test-signal generators with known spectra."""

from __future__ import annotations

import math

import numpy as np

from .core import SparseSpectrum, TimeSignal, ifft_dense

__all__ = ["gen_exact_sparse", "gen_noisy_sparse", "tone_signal"]


def tone_signal(n: int, freqs, coefs) -> TimeSignal:
    """Lazily evaluated x with xhat = sum_f coefs[f] e_f; O(k) per sample."""
    freqs = np.asarray(freqs, dtype=np.int64)
    coefs = np.asarray(coefs, dtype=np.complex128)
    scale = 1.0 / math.sqrt(n)
    table = np.exp(2j * np.pi * np.arange(n) / n)

    def fn(idx: np.ndarray) -> np.ndarray:
        if freqs.size == 0:
            return np.zeros(idx.shape, dtype=np.complex128)
        e = np.mod(np.multiply.outer(idx, freqs), n)
        return scale * (table[e] @ coefs)

    return TimeSignal(n=n, fn=fn)


def gen_exact_sparse(n: int, k: int, L: int, rng: np.random.Generator):
    """k distinct uniform frequencies, integer re/im parts in [-L, L] \\ {0}.

    Returns (signal, true spectrum).
    """
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}")
    if k > 0 and L < 1:
        raise ValueError("L must be at least 1")
    freqs = np.sort(rng.choice(n, size=k, replace=False)).astype(np.int64)
    parts = rng.integers(1, L + 1, size=(2, k)) * rng.choice([-1, 1], size=(2, k))
    coefs = parts[0] + 1j * parts[1]
    truth = SparseSpectrum(n, zip(freqs.tolist(), coefs.tolist()))
    return tone_signal(n, freqs, coefs), truth


def gen_noisy_sparse(n: int, k: int, head_magnitude: float, noise_sigma: float, rng: np.random.Generator):
    """k-sparse head of fixed magnitude and random phase plus complex Gaussian
    noise (std ``noise_sigma`` on each of re and im) on every frequency.

    Returns (signal, dense true spectrum).  The signal is materialised with one
    dense inverse FFT.
    """
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}")
    xhat = noise_sigma * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    freqs = rng.choice(n, size=k, replace=False)
    xhat[freqs] += head_magnitude * np.exp(2j * np.pi * rng.random(k))
    return TimeSignal(ifft_dense(xhat)), xhat


def head_for_ratio(n: int, k: int, noise_sigma: float, ratio: float = 20.0) -> float:
    """Head magnitude ratio * noise_sigma * sqrt(n) / k."""
    return ratio * noise_sigma * math.sqrt(n) / max(k, 1)
