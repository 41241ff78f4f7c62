"""Full k-point DFT through the exact sparse algorithm.

Repeating a k-vector n/k times gives a length-n signal y whose spectrum is
zero off multiples of n/k, with yhat_{m n/k} = sqrt(n/k) xhat_m under the
unitary convention.  Recovering that k-sparse yhat recovers xhat.
"""

from __future__ import annotations

import math

import numpy as np

from .core import TimeSignal, is_power_of_two
from .exact import ExactParams, noiseless_sparse_fft

__all__ = ["LiftedSignal", "full_dft_via_sparse", "lift_scale"]


class LiftedSignal(TimeSignal):
    """y_i = scale * x_{i mod k}; every read of y is one read of x."""

    def __init__(self, x: TimeSignal, n: int, scale: float = 1.0):
        k = x.n
        if n % k:
            raise ValueError(f"k={k} must divide n={n}")
        self.base = x
        self.k = k
        self.scale = scale

        def fn(idx: np.ndarray) -> np.ndarray:
            return scale * x[np.mod(idx, k)]

        super().__init__(n=n, fn=fn)


def lift_scale(n: int, k: int) -> tuple[float, int]:
    """(sample scale c, integer spectral multiplier m) with yhat_{j n/k} = m xhat_j.

    m = c sqrt(n/k); c is 1 when n/k is a perfect square and sqrt(2) otherwise,
    so integer spectra stay integer after lifting.
    """
    ratio = n // k
    root = math.isqrt(ratio)
    if root * root == ratio:
        return 1.0, root
    return math.sqrt(2.0), math.isqrt(2 * ratio)


def full_dft_via_sparse(
    x,
    n: int,
    rng: np.random.Generator,
    L: int,
    params: ExactParams = ExactParams(),
) -> np.ndarray:
    """Unitary k-point DFT of ``x`` (integer spectrum bounded by L) via a lift to n points."""
    if not isinstance(x, TimeSignal):
        x = TimeSignal(np.asarray(x, dtype=np.complex128))
    k = x.n
    if not is_power_of_two(n):
        raise ValueError(f"n must be a power of two, got {n}")
    if n % k:
        raise ValueError(f"k={k} must divide n={n}")
    scale, mult = lift_scale(n, k)
    y = LiftedSignal(x, n, scale)
    zhat = noiseless_sparse_fft(y, k, L * mult, rng, params)
    out = np.zeros(k, dtype=np.complex128)
    step = n // k
    for i, v in zhat.items():
        if i % step == 0:
            out[i // step] = v / mult
    return out
