"""Pseudorandom spectrum permutations and the bin/offset hash maps.

For odd sigma and a, b in [n], the time-domain map

    (P x)_i = x[sigma (i - a)] * omega^(sigma b i)

permutes the spectrum: DFT(P x)[pi(i)] = xhat_i * omega^(a sigma i) with
pi(i) = sigma (i - b) mod n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import TimeSignal, inverse_mod_pow2, is_power_of_two

__all__ = ["PermutationParams", "random_permutation", "permuted_sample", "circular_distance"]


@dataclass(frozen=True)
class PermutationParams:
    n: int
    sigma: int
    a: int
    b: int
    B: int = 1

    def __post_init__(self):
        if not is_power_of_two(self.n):
            raise ValueError(f"n must be a power of two, got {self.n}")
        if self.sigma % 2 == 0:
            raise ValueError(f"sigma must be odd, got {self.sigma}")
        if self.B < 1 or self.n % self.B:
            raise ValueError(f"B={self.B} must divide n={self.n}")
        object.__setattr__(self, "sigma", self.sigma % self.n if self.n > 1 else 1)
        object.__setattr__(self, "a", self.a % self.n)
        object.__setattr__(self, "b", self.b % self.n)
        object.__setattr__(self, "sigma_inv", inverse_mod_pow2(self.sigma, self.n))

    def with_bins(self, B: int) -> "PermutationParams":
        return PermutationParams(self.n, self.sigma, self.a, self.b, B)

    def with_a(self, a: int) -> "PermutationParams":
        return PermutationParams(self.n, self.sigma, a, self.b, self.B)

    # -- maps (scalar or array arguments) ------------------------------------

    def pi_map(self, i):
        """pi(i) = sigma (i - b) mod n."""
        return np.mod(self.sigma * (np.asarray(i, dtype=np.int64) - self.b), self.n)

    def bin_of(self, i):
        """h(i) = round(pi(i) B / n) mod B, exact halves rounded up."""
        p = self.pi_map(i)
        span = self.n // self.B
        return np.mod((2 * p + span) // (2 * span), self.B)

    def offset_of(self, i):
        """o(i) = pi(i) - h(i) n / B, as the signed value with |o| <= n/(2B)."""
        p = self.pi_map(i)
        span = self.n // self.B
        h = (2 * p + span) // (2 * span)  # before the mod, so o stays small
        return p - h * span

    def invert_location(self, tau):
        """The unique i with pi(i) = tau: sigma^-1 tau + b mod n."""
        return np.mod(self.sigma_inv * np.asarray(tau, dtype=np.int64) + self.b, self.n)

    def phase(self, i):
        """omega^(a sigma i), the rotation a coefficient picks up."""
        e = np.mod(self.a * self.sigma * np.asarray(i, dtype=np.int64), self.n)
        return np.exp(-2j * np.pi * e / self.n)

    def sample_index(self, j):
        """Time index of x read to produce (P x)_j."""
        return np.mod(self.sigma * (np.asarray(j, dtype=np.int64) - self.a), self.n)

    def modulation(self, j):
        e = np.mod(self.sigma * self.b * np.asarray(j, dtype=np.int64), self.n)
        return np.exp(-2j * np.pi * e / self.n)


def random_permutation(n: int, rng: np.random.Generator, B: int = 1) -> PermutationParams:
    """sigma uniform over odd residues (low bit forced), a and b uniform in [n]."""
    sigma = int(rng.integers(0, n)) | 1
    a = int(rng.integers(0, n))
    b = int(rng.integers(0, n))
    return PermutationParams(n, sigma, a, b, B)


def permuted_sample(P: PermutationParams, x: TimeSignal, i):
    """(P x)_i, reading exactly one sample of x per requested index."""
    vals = x[P.sample_index(i)]
    return vals * P.modulation(i)


def circular_distance(u, v):
    """min over integers g of |u - v + 2 pi g|."""
    d = np.mod(np.asarray(u, dtype=np.float64) - v, 2.0 * math.pi)
    return np.minimum(d, 2.0 * math.pi - d)
