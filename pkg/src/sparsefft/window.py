"""Flat window functions: a truncated Gaussian times a sinc in time, whose
spectrum is a Gaussian-smoothed boxcar.

A window pair (G, Ghat') for parameters (n, B, delta, alpha) satisfies

* Ghat'_i = 1 for |i| <= (1 - alpha) n / (2B)
* Ghat'_i = 0 for |i| >= n / (2B)
* Ghat'_i in [0, 1] everywhere, non-increasing in |i|
* max_i |DFT(G)_i - Ghat'_i| < delta

G has O((B/alpha) log(n/delta)) nonzero taps before folding mod n.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .core import is_power_of_two

__all__ = [
    "FlatWindowPair",
    "gaussian_cdf_approx",
    "build_flat_window",
    "eval_ghat_prime",
    "SUPPORT_CONSTANT",
    "window_table",
]

# |supp(G)| <= SUPPORT_CONSTANT * (B/alpha) * log2(n/delta); the construction
# gives 16*ln(2) ~= 11.09 plus one centre tap.
SUPPORT_CONSTANT = 12.0

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_CHUNK = 1 << 20
# beyond this many unfolded taps "auto" switches to the spectral construction
DIRECT_TAP_LIMIT = 1 << 24


def gaussian_cdf_approx(t, delta: float):
    """Standard normal CDF to absolute precision ``delta``.

    Returns exactly 0 or 1 once |t| exceeds sqrt(2 ln(1/delta)); otherwise
    sums the series 1/2 + pdf(t) * (t + t^3/3 + t^5/(3*5) + ...) until the
    geometric bound on the remainder drops below delta/2.  Accepts scalars or
    arrays.
    """
    if not 0.0 < delta < 0.5:
        raise ValueError("delta must lie in (0, 1/2)")
    scalar = np.isscalar(t)
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    out = np.empty_like(t)
    cut = math.sqrt(2.0 * math.log(1.0 / delta))
    out[t <= -cut] = 0.0
    out[t >= cut] = 1.0
    mid = np.abs(t) < cut
    if np.any(mid):
        tm = t[mid]
        t2 = tm * tm
        pdf = _INV_SQRT_2PI * np.exp(-0.5 * t2)
        term = tm.copy()
        total = tm.copy()
        active = np.ones(tm.shape, dtype=bool)
        m = 0
        while np.any(active):
            term = np.where(active, term * t2 / (2 * m + 3), term)
            total = np.where(active, total + term, total)
            m += 1
            ratio = t2 / (2 * m + 3)
            with np.errstate(divide="ignore", invalid="ignore"):
                bound = np.where(
                    ratio < 1.0, pdf * np.abs(term) * ratio / (1.0 - ratio), np.inf
                )
            active &= bound >= 0.5 * delta
        out[mid] = 0.5 + pdf * total
    np.clip(out, 0.0, 1.0, out=out)
    return float(out[0]) if scalar else out


def _signed(i, n: int):
    """Representative of i mod n in (-n/2, n/2]."""
    r = np.mod(i, n)
    return np.where(r > n // 2, r - n, r)


@dataclass(frozen=True, eq=False)
class FlatWindowPair:
    n: int
    B: int
    delta: float
    alpha: float
    sigma_gauss: float
    c_box: float
    g_idx: np.ndarray = field(repr=False)
    g_val: np.ndarray = field(repr=False)

    @property
    def support_size(self) -> int:
        return int(self.g_idx.size)

    @property
    def g_support(self) -> list[tuple[int, float]]:
        return list(zip(self.g_idx.tolist(), self.g_val.tolist()))

    @property
    def pass_edge(self) -> float:
        """Ghat' is exactly 1 for |i| at or below this."""
        return (1.0 - self.alpha) * self.n / (2.0 * self.B)

    @property
    def stop_edge(self) -> float:
        """Ghat' is exactly 0 for |i| at or above this."""
        return self.n / (2.0 * self.B)

    def dense_g(self) -> np.ndarray:
        g = np.zeros(self.n, dtype=np.float64)
        g[self.g_idx] = self.g_val
        return g

    def ghat_prime(self, i):
        """Ghat'_i for integer i (scalar or array), i taken mod n."""
        scalar = np.isscalar(i)
        s = np.abs(_signed(np.atleast_1d(np.asarray(i, dtype=np.int64)), self.n))
        out = np.zeros(s.shape, dtype=np.float64)
        if self.B == 1:
            out[:] = 1.0
        else:
            out[s <= self.pass_edge] = 1.0
            band = (s > self.pass_edge) & (s < self.stop_edge)
            if np.any(band):
                out[band] = self._transition(s[band])
        return float(out[0]) if scalar else out

    def _transition(self, s: np.ndarray) -> np.ndarray:
        # tighter than the required delta/n so rounding noise cannot break monotonicity
        prec = min(self.delta / self.n, 1e-17)
        f = s / self.n
        v = gaussian_cdf_approx(self.sigma_gauss * (f + self.c_box), prec) - gaussian_cdf_approx(
            self.sigma_gauss * (f - self.c_box), prec
        )
        return np.clip(v, 0.0, 1.0)


def eval_ghat_prime(w: FlatWindowPair, i):
    return w.ghat_prime(i)


def _folded_taps(n: int, sigma: float, c_box: float, half: int) -> np.ndarray:
    """sqrt(n) * sum_{|j| <= half, j = i mod n} D(j) F(j), for every i in [n]."""
    acc = np.zeros(n, dtype=np.float64)
    # D is the inverse transform of the N(0, 1/sigma^2) density, so that the
    # spectrum of D*F is Phi(sigma(f + C)) - Phi(sigma(f - C)).
    k = 2.0 * math.pi * math.pi / (sigma * sigma)
    for start in range(-half, half + 1, _CHUNK):
        j = np.arange(start, min(start + _CHUNK, half + 1), dtype=np.int64)
        jf = j.astype(np.float64)
        vals = np.exp(-k * jf * jf) * (2.0 * c_box) * np.sinc(2.0 * c_box * jf)
        acc += np.bincount(np.mod(j, n), weights=vals, minlength=n)
    return math.sqrt(n) * acc


def _periodized_taps(n: int, sigma: float, c_box: float) -> np.ndarray:
    """Same window periodized over all integers, built from its spectrum.

    By Poisson summation the DFT of the fully folded G* is
    sum_m Phi(sigma(i/n + m + C)) - Phi(sigma(i/n + m - C)); the m = -1, 0, 1
    terms already reach double precision.  O(n log n) regardless of reach.
    """
    from .core import ifft_dense

    f = _signed(np.arange(n, dtype=np.int64), n) / n
    spec = np.zeros(n, dtype=np.float64)
    for m in (-1, 0, 1):
        spec += gaussian_cdf_approx(sigma * (f + m + c_box), 1e-17) - gaussian_cdf_approx(
            sigma * (f + m - c_box), 1e-17
        )
    return ifft_dense(spec).real


@functools.lru_cache(maxsize=256)
def build_flat_window(
    n: int, B: int, delta: float, alpha: float, method: str = "auto"
) -> FlatWindowPair:
    """Construct the Gaussian-times-sinc flat window for (n, B, delta, alpha).

    ``method`` is "direct" (sum the truncated taps), "spectral" (exact
    periodization via the spectrum; only valid once the taps cover [n]) or
    "auto" (direct unless that would exceed DIRECT_TAP_LIMIT taps).
    Results are cached per parameter tuple; the returned pair is immutable.
    """
    if not is_power_of_two(n):
        raise ValueError(f"n must be a power of two, got {n}")
    if not 1 <= B <= n:
        raise ValueError(f"B must lie in [1, n], got {B}")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")

    if B == 1:
        idx = np.array([0], dtype=np.int64)
        val = np.array([math.sqrt(n)])
        idx.setflags(write=False)
        val.setflags(write=False)
        return FlatWindowPair(n, 1, delta, alpha, math.inf, 0.5, idx, val)

    log_term = math.sqrt(2.0 * math.log(n / delta))
    sigma = (4.0 * B / alpha) * log_term
    c_box = (1.0 - alpha / 2.0) / (2.0 * B)
    reach = sigma * log_term
    half = math.ceil(reach) - 1  # taps with |j| < reach

    if method not in ("auto", "direct", "spectral"):
        raise ValueError(f"unknown method {method!r}")
    saturated = 2 * half + 1 >= n
    if method == "spectral" and not saturated:
        raise ValueError("spectral construction needs the taps to cover all of [n]")
    if method == "spectral" or (method == "auto" and saturated and 2 * half + 1 > DIRECT_TAP_LIMIT):
        g = _periodized_taps(n, sigma, c_box)
    else:
        g = _folded_taps(n, sigma, c_box, half)
    if saturated:
        idx = np.arange(n, dtype=np.int64)
    else:
        idx = np.mod(np.arange(-half, half + 1, dtype=np.int64), n)
    val = g[idx]
    keep = val != 0.0
    idx, val = idx[keep], val[keep]
    idx.setflags(write=False)
    val.setflags(write=False)
    return FlatWindowPair(n, B, delta, alpha, sigma, c_box, idx, val)


def window_table(w: FlatWindowPair) -> list[tuple[int, float, complex, float]]:
    """Rows (i, G_i, Ghat_i, Ghat'_i) for debugging dumps (dense, O(n log n))."""
    from .core import fft_dense

    g = w.dense_g()
    ghat = fft_dense(g)
    gp = w.ghat_prime(np.arange(w.n))
    return [(i, float(g[i]), complex(ghat[i]), float(gp[i])) for i in range(w.n)]
