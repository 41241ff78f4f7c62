"""(1+eps)-approximate k-sparse recovery for arbitrary signals.

Each outer round r hashes into B_r bins, locates the heavy coordinates by
a t-ary search on phase differences (``locate_signal``), estimates them by
coordinate-wise medians over fresh hashings (``estimate_values``), keeps
the 3 k_r largest and recurses on the residual with k_{r+1} = f_r k_r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bins import hash_to_bins
from .core import SparseSpectrum, TimeSignal
from .permute import PermutationParams, circular_distance, random_permutation

__all__ = [
    "GeneralConfig",
    "RoundParams",
    "GeneralTrace",
    "schedule",
    "locate_inner",
    "locate_signal",
    "estimate_values",
    "sparse_fft",
    "search_branching",
    "subregion_centres",
    "vote_round",
    "progression_hits",
    "progression_bound",
]


@dataclass(frozen=True)
class GeneralConfig:
    """All tunable constants of the general algorithm in one place.

    f_r = c_f / r^2,  alpha_r = min(alpha_max, c_alpha f_r^2),
    B_r = c_B k_r / (alpha_r^2 eps_r) rounded up to a power of two, replaced
    by n once it exceeds alpha_r n,
    s = c_s alpha^(1/3).
    """

    c_f: float = 0.25
    c_alpha: float = 1.0
    c_B: float = 0.125
    c_s: float = 0.05
    alpha_max: float = 0.5
    r_loc_min: int = 4
    r_loc_max: int = 24
    r_est_min: int = 5
    r_est_max: int = 31
    min_bins: int = 2


@dataclass(frozen=True)
class RoundParams:
    r: int
    f: float
    k: float
    eps: float
    alpha: float
    B: int
    R_est: int
    R_loc: int


def _pow2_at_least(v: float) -> int:
    return 1 << max(0, math.ceil(math.log2(max(v, 1.0)) - 1e-12))


def search_branching(n: int) -> tuple[int, float]:
    """(t, t') for the t-ary location search: t = ceil(log2 n) (at least 8), t' = t/4."""
    t = max(8, math.ceil(math.log2(n)))
    return t, t / 4.0


def default_r_loc(t: int, alpha: float, cfg: GeneralConfig) -> int:
    r = math.ceil(2.0 * math.log(t / alpha) / math.log(1.0 / alpha))
    return min(cfg.r_loc_max, max(cfg.r_loc_min, r))


def default_r_est(B: int, alpha: float, k: float, cfg: GeneralConfig) -> int:
    r = math.ceil(4.0 * math.log2(max(B / (alpha * max(k, 1e-12)), 2.0)))
    r = min(cfg.r_est_max, max(cfg.r_est_min, r))
    return r if r % 2 else r + 1 if r + 1 <= cfg.r_est_max else r - 1


def schedule(n: int, k: int, eps: float, cfg: GeneralConfig = GeneralConfig()) -> list[RoundParams]:
    """Round parameters; R is the least R with prod_{r<=R} f_r < 1/k."""
    if k <= 0:
        return []
    t, _ = search_branching(n)
    rounds = []
    k_r = float(k)
    prod = 1.0
    r = 0
    while True:
        r += 1
        f = cfg.c_f / (r * r)
        eps_r = f * eps
        alpha = min(cfg.alpha_max, cfg.c_alpha * f * f)
        B = _pow2_at_least(cfg.c_B * k_r / (alpha * alpha * eps_r))
        B = min(n, max(B, min(n, cfg.min_bins)))
        if B > alpha * n:
            # bins narrower than 1/alpha positions put a fraction ~B/n of all
            # coordinates on the stop edge; one position per bin has none
            B = n
        rounds.append(
            RoundParams(
                r=r,
                f=f,
                k=k_r,
                eps=eps_r,
                alpha=alpha,
                B=B,
                R_est=default_r_est(B, alpha, k_r, cfg),
                R_loc=default_r_loc(t, alpha, cfg),
            )
        )
        prod *= f
        k_r *= f
        if prod < 1.0 / k:
            return rounds


# ---------------------------------------------------------------------------
# Location
# ---------------------------------------------------------------------------


def _draw_stride(s: float, n: int, t: int, w: float, rng: np.random.Generator) -> int:
    lo = math.ceil(s * n * t / (4.0 * w))
    hi = math.floor(s * n * t / (2.0 * w))
    if hi < lo:
        return 1
    return int(rng.integers(lo, hi + 1))


def subregion_centres(l: np.ndarray, w: float, t: int) -> np.ndarray:
    """m_{j,q} = l_j + (q - 1/2) w / t for q = 1..t, shape (B, t)."""
    q = np.arange(1, t + 1, dtype=np.float64)
    return l[:, None] + (q[None, :] - 0.5) * (w / t)


def vote_round(
    x: TimeSignal,
    z: SparseSpectrum,
    perm: PermutationParams,
    delta: float,
    alpha: float,
    centres: np.ndarray,
    w: float,
    t: int,
    s: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """One round of phase voting: boolean (B, t) matrix of subregions voted for.

    ``perm`` supplies (sigma, b, B); a and the stride beta are drawn here.
    Bins whose measurement is zero vote for nothing.
    """
    n, B = x.n, perm.B
    a = int(rng.integers(0, n))
    beta = _draw_stride(s, n, t, w, rng)
    u = hash_to_bins(x, z, perm.with_a(a), B, delta, alpha).u_hat
    u2 = hash_to_bins(x, z, perm.with_a(a + beta), B, delta, alpha).u_hat
    ok = (u != 0) & (u2 != 0)
    c = np.zeros(B)
    c[ok] = np.angle(u[ok] / u2[ok])
    # theta_{j,q} = 2 pi (m_{j,q} + sigma b) / n, scaled by beta, reduced mod n first
    shifted = centres + float((perm.sigma * perm.b) % n)
    theta_beta = 2.0 * math.pi * np.mod(beta * shifted, n) / n
    return (circular_distance(theta_beta, c[:, None]) < s * math.pi) & ok[:, None]


def locate_inner(
    x: TimeSignal,
    z: SparseSpectrum,
    B: int,
    delta: float,
    alpha: float,
    sigma: int,
    b: int,
    l: np.ndarray,
    w: float,
    t: int,
    R_loc: int,
    rng: np.random.Generator,
    s: float,
) -> np.ndarray:
    """Narrow each region [l_j, l_j + w] to [l'_j, l'_j + 4w/t] by majority vote.

    ``l`` holds region starts in permuted coordinates; NaN marks a lane with
    no surviving region.  Returns the new starts (NaN where no subregion won).
    """
    live = ~np.isnan(l)
    centres = subregion_centres(l, w, t)
    perm = PermutationParams(x.n, sigma, 0, b, B)
    votes = np.zeros((B, t), dtype=np.int64)
    for _ in range(R_loc):
        votes += vote_round(x, z, perm, delta, alpha, centres, w, t, s, rng)
    won = (votes > R_loc / 2.0) & live[:, None]
    has = won.any(axis=1)
    first = np.argmax(won, axis=1)  # smallest winning q, 0-based
    out = np.full(B, np.nan)
    out[has] = l[has] + first[has] * (w / t)
    return out


def locate_signal(
    x: TimeSignal,
    z: SparseSpectrum,
    B: int,
    alpha: float,
    delta: float,
    rng: np.random.Generator,
    cfg: GeneralConfig = GeneralConfig(),
    R_loc: int | None = None,
    perm: PermutationParams | None = None,
) -> np.ndarray:
    """Candidate set L (sorted unique indices, |L| <= B) likely covering the heavy coordinates."""
    n = x.n
    t, t_shrink = search_branching(n)
    if R_loc is None:
        R_loc = default_r_loc(t, alpha, cfg)
    s = cfg.c_s * alpha ** (1.0 / 3.0)
    if perm is None:
        perm = random_permutation(n, rng, B)
    sigma, b = perm.sigma, perm.b
    w0 = n / B
    # bin j collects permuted positions within n/(2B) of j n / B
    l = np.arange(B, dtype=np.float64) * w0 - w0 / 2.0
    d_max = max(1, math.ceil(math.log(w0 + 1.0) / math.log(t_shrink)))
    for D in range(1, d_max + 1):
        w = w0 / t_shrink ** (D - 1)
        l = locate_inner(x, z, B, delta, alpha, sigma, b, l, w, t, R_loc, rng, s)
    live = ~np.isnan(l)
    tau = np.mod(np.ceil(l[live] - 1e-9).astype(np.int64), n)
    P = PermutationParams(n, sigma, 0, b, B)
    return np.unique(P.invert_location(tau))


def progression_hits(n: int, i: int, betas: np.ndarray, l: int) -> int:
    """max over intervals S of l consecutive residues of #{beta : beta i mod n in S}."""
    r = np.sort(np.mod(np.asarray(betas, dtype=np.int64) * i, n))
    # intervals [s0, s0 + l - 1] with s0 in [0, n - l]; the count only changes at residues
    starts = np.unique(np.clip(r, 0, n - l))
    lo = np.searchsorted(r, starts, side="left")
    hi = np.searchsorted(r, starts + l - 1, side="right")
    return int(np.max(hi - lo, initial=0))


def progression_bound(n: int, m: int, t: int, i: int, l: int) -> float:
    """ceil(i m / n) (1 + floor(l / i)) / t."""
    return math.ceil(i * m / n) * (1 + l // i) / t


# ---------------------------------------------------------------------------
# Estimation
# ---------------------------------------------------------------------------


def estimate_values(
    x: TimeSignal,
    z: SparseSpectrum,
    k_prime: int,
    L,
    B: int,
    delta: float,
    R_est: int,
    rng: np.random.Generator,
    alpha: float = 0.25,
) -> SparseSpectrum:
    """Median-of-R_est estimates of the residual on L; keep the k' largest."""
    n = x.n
    L = np.unique(np.asarray(L, dtype=np.int64))
    out = SparseSpectrum(n)
    if L.size == 0 or k_prime <= 0:
        return out
    est = np.empty((R_est, L.size), dtype=np.complex128)
    for r in range(R_est):
        P = random_permutation(n, rng, B)
        u = hash_to_bins(x, z, P, B, delta, alpha).u_hat
        est[r] = u[P.bin_of(L)] * np.conj(P.phase(L))
    w = np.median(est.real, axis=0) + 1j * np.median(est.imag, axis=0)
    if L.size > k_prime:
        keep = np.argsort(-np.abs(w), kind="stable")[:k_prime]
    else:
        keep = np.arange(L.size)
    for i, v in zip(L[keep].tolist(), w[keep].tolist()):
        out[i] = v
    return out


# ---------------------------------------------------------------------------
# Outer loop
# ---------------------------------------------------------------------------


@dataclass
class GeneralTrace:
    rounds: list[dict] = field(default_factory=list)

    @property
    def peak_nnz(self) -> int:
        return max((r["nnz"] for r in self.rounds), default=0)


def sparse_fft(
    x: TimeSignal,
    k: int,
    eps: float,
    delta: float,
    rng: np.random.Generator,
    cfg: GeneralConfig = GeneralConfig(),
    trace: GeneralTrace | None = None,
) -> SparseSpectrum:
    """zhat with ||xhat - zhat||_2 <= (1+eps) err(xhat, k) + delta ||xhat||_2 w.p. >= 2/3."""
    if not 0.0 < eps <= 1.0:
        raise ValueError("eps must lie in (0, 1]")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    n = x.n
    z = SparseSpectrum(n)
    for rp in schedule(n, k, eps, cfg):
        L = locate_signal(x, z, rp.B, rp.alpha, delta, rng, cfg, R_loc=rp.R_loc)
        k_prime = math.ceil(3 * rp.k)
        w = estimate_values(x, z, k_prime, L, rp.B, delta, rp.R_est, rng, alpha=rp.alpha)
        if trace is not None:
            trace.rounds.append(
                {"params": rp, "candidates": int(L.size), "kept": len(w), "z_before": z.copy()}
            )
        z = z + w
        if trace is not None:
            trace.rounds[-1]["nnz"] = len(z)
    return z
