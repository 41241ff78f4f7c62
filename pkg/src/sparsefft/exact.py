"""Exact k-sparse recovery for integer spectra in expected O(k log n) time.

Each inner pass hashes the residual spectrum into B ~ k'/beta bins twice,
with time shifts a = 0 and a = 1.  For a coefficient alone in its bin and
inside the flat part of the filter, the phase ratio of the two bin values
is omega^(-sigma i), which pins down i exactly; rounding the bin value
gives the coefficient.  The outer loop peels recovered coefficients from
the bins (never from the signal) and halves k' each pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bins import hash_to_bins
from .core import SparseSpectrum, TimeSignal
from .permute import PermutationParams

__all__ = [
    "ExactParams",
    "STRICT_EXACT",
    "noiseless_inner",
    "noiseless_sparse_fft",
    "decode_bins",
    "round_half_away",
    "bins_for",
]


@dataclass(frozen=True)
class ExactParams:
    """Tuning constants.  ``beta`` is the bin load k'/B; alpha_t = min(alpha_cap, c_alpha 2^(-t/2))."""

    beta: float = 1.0 / 32
    c_alpha: float = 1.0 / 8
    alpha_cap: float = 0.25

    def alpha_at(self, t: int) -> float:
        return min(self.alpha_cap, self.c_alpha * 2.0 ** (-t / 2.0))


# Constants small enough for the (4 gamma)^(1/2) < 1/4 condition, gamma = 64(beta + alpha).
STRICT_EXACT = ExactParams(beta=1.0 / 8192, c_alpha=1.0 / 8192)


def exact_delta(n: int, L: int) -> float:
    return 1.0 / (4.0 * n * n * L)


def bins_for(k_prime: float, beta: float, n: int) -> int:
    """k'/beta rounded up to a power of two, clamped to [1, n]."""
    target = max(1.0, k_prime / beta)
    B = 1 << max(0, math.ceil(math.log2(target) - 1e-12))
    return min(B, n)


def round_half_away(v):
    """Round real and imaginary parts independently, halves away from zero."""
    v = np.asarray(v)
    re = np.sign(v.real) * np.floor(np.abs(v.real) + 0.5)
    im = np.sign(v.imag) * np.floor(np.abs(v.imag) + 0.5)
    return re + 1j * im


def decode_bins(u0: np.ndarray, u1: np.ndarray, sigma_inv: int, n: int):
    """Locate and value every bin with |u0_j| > 1/2.

    Returns (bins, indices, values).  u1 is the measurement with time shift
    a = 1, so u0/u1 ~ omega^(-sigma i) = exp(2 pi i sigma i / n).
    """
    J = np.flatnonzero(np.abs(u0) > 0.5)
    if J.size == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, np.zeros(0, dtype=np.complex128)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = u0[J] / u1[J]
    phi = np.mod(np.angle(ratio), 2.0 * math.pi)
    tau = np.floor(phi * n / (2.0 * math.pi) + 0.5).astype(np.int64)
    idx = np.mod(sigma_inv * tau, n)
    return J, idx, round_half_away(u0[J])


def noiseless_inner(
    x: TimeSignal,
    k_prime: float,
    z: SparseSpectrum,
    alpha: float,
    rng: np.random.Generator,
    *,
    L: int,
    beta: float = ExactParams.beta,
    B: int | None = None,
    perm: PermutationParams | None = None,
) -> SparseSpectrum:
    """One location/estimation pass over the residual xhat - zhat.

    ``perm`` fixes (sigma, b) instead of drawing them; its ``a`` is ignored.
    """
    n = x.n
    if B is None:
        B = bins_for(k_prime, beta, n)
    delta = exact_delta(n, L)
    if perm is None:
        sigma = int(rng.integers(0, n)) | 1
        b = int(rng.integers(0, n))
        perm = PermutationParams(n, sigma, 0, b, B)
    else:
        perm = PermutationParams(n, perm.sigma, 0, perm.b, B)
    u0 = hash_to_bins(x, z, perm, B, delta, alpha).u_hat
    u1 = hash_to_bins(x, z, perm.with_a(1), B, delta, alpha).u_hat
    _, idx, vals = decode_bins(u0, u1, perm.sigma_inv, n)
    w = SparseSpectrum(n)
    for i, v in zip(idx.tolist(), vals.tolist()):
        w[i] = v  # last write wins on collisions
    return w


@dataclass
class ExactTrace:
    """Per-iteration bookkeeping for tests and the benchmark harness."""

    rounds: list[dict] = field(default_factory=list)

    @property
    def peak_nnz(self) -> int:
        return max((r["nnz"] for r in self.rounds), default=0)


def noiseless_sparse_fft(
    x: TimeSignal,
    k: int,
    L: int,
    rng: np.random.Generator,
    params: ExactParams = ExactParams(),
    trace: ExactTrace | None = None,
) -> SparseSpectrum:
    """Recover an exactly k-sparse integer spectrum (correct w.p. >= 2/3)."""
    n = x.n
    z = SparseSpectrum(n)
    if k <= 0:
        return z
    for t in range(1 + int(math.floor(math.log2(k)))):
        k_t = k / 2.0**t
        alpha = params.alpha_at(t)
        B = bins_for(k_t, params.beta, n)
        if B > alpha * n:
            # bins under 1/alpha positions wide leave ~B/n of coordinates on the stop edge
            B = n
        w = noiseless_inner(x, k_t, z, alpha, rng, L=L, beta=params.beta, B=B)
        z = z + w
        if trace is not None:
            trace.rounds.append(
                {"t": t, "B": B, "alpha": alpha, "found": len(w), "nnz": len(z), "z": z.copy()}
            )
    return z
