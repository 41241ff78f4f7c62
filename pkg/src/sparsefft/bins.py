"""HashToBins: filter the permuted signal, alias it down to B points, FFT,
then peel off the contribution of an already-known sparse estimate.

The result satisfies, for every bin j,

    u_j = sum_{h(i) = j} (xhat - zhat)_i Ghat'_{-o(i)} omega^(a sigma i)  +/-  delta ||xhat||_1
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SparseSpectrum, TimeSignal, fft_dense, is_power_of_two
from .permute import PermutationParams, permuted_sample
from .window import FlatWindowPair, build_flat_window

__all__ = ["BinMeasurement", "hash_to_bins", "fold_to_bins", "subtract_estimate"]


@dataclass
class BinMeasurement:
    B: int
    u_hat: np.ndarray
    perm: PermutationParams
    samples_used: int


def fold_to_bins(y_idx: np.ndarray, y_val: np.ndarray, B: int) -> np.ndarray:
    """v_r = sum_m y_{r + mB} for a sparse time vector y."""
    r = np.mod(y_idx, B)
    return np.bincount(r, weights=y_val.real, minlength=B) + 1j * np.bincount(
        r, weights=y_val.imag, minlength=B
    )


def subtract_estimate(u: np.ndarray, z: SparseSpectrum, P: PermutationParams, w: FlatWindowPair) -> None:
    """In place: u[h(i)] -= Ghat'_{-o(i)} z_i omega^(a sigma i) for i in supp(z)."""
    if len(z) == 0:
        return
    idx, val = z.arrays()
    gain = w.ghat_prime(-P.offset_of(idx))
    contrib = gain * val * P.phase(idx)
    u -= np.bincount(P.bin_of(idx), weights=contrib.real, minlength=u.size) + 1j * np.bincount(
        P.bin_of(idx), weights=contrib.imag, minlength=u.size
    )


def hash_to_bins(
    x: TimeSignal,
    z: SparseSpectrum | None,
    P: PermutationParams,
    B: int,
    delta: float,
    alpha: float,
    w: FlatWindowPair | None = None,
) -> BinMeasurement:
    n = x.n
    if not is_power_of_two(B) or n % B:
        raise ValueError(f"B={B} must be a power of two dividing n={n}")
    if w is None:
        w = build_flat_window(n, B, delta, alpha)
    elif (w.n, w.B, w.delta, w.alpha) != (n, B, delta, alpha):
        raise ValueError(
            f"window built for (n={w.n}, B={w.B}, delta={w.delta}, alpha={w.alpha}) "
            f"does not match (n={n}, B={B}, delta={delta}, alpha={alpha})"
        )
    if P.B != B:
        P = P.with_bins(B)
    if P.n != n:
        raise ValueError("permutation dimension does not match the signal")

    before = x.reads
    y = w.g_val * permuted_sample(P, x, w.g_idx)
    samples = x.reads - before
    v = fold_to_bins(w.g_idx, y, B)
    # unnormalised B-point DFT of v equals sqrt(n) * yhat at multiples of n/B
    u = math.sqrt(B) * fft_dense(v)
    if z is not None:
        subtract_estimate(u, z, P, w)
    return BinMeasurement(B, u, P, samples)
