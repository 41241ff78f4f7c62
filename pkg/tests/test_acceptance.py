"""Acceptance criteria 1-10.  Each test prints one PASS/FAIL line (also
collected in the pytest terminal summary) and asserts the criterion."""

import math
import time

import numpy as np
import pytest

from conftest import within_3se
from oracles import e_noise, heavy_set, mu2
from sparsefft.bench import TrialConfig, run_trials, scaling_sweep
from sparsefft.bins import hash_to_bins
from sparsefft.core import SparseSpectrum, TimeSignal, dft_naive, idft_naive, spawn_rngs
from sparsefft.exact import ExactParams, decode_bins, exact_delta, noiseless_inner
from sparsefft.general import estimate_values, progression_bound, progression_hits
from sparsefft.permute import PermutationParams, permuted_sample, random_permutation
from sparsefft.reduction import LiftedSignal, full_dft_via_sparse
from sparsefft.signals import gen_exact_sparse, gen_noisy_sparse, head_for_ratio
from sparsefft.window import build_flat_window

pytestmark = pytest.mark.slow


def bins_by_formula(residual, P, w):
    """Exhaustive sum over all i of residual_i Ghat'_{-o(i)} omega^(a sigma i) into bin h(i)."""
    i = np.arange(P.n)
    contrib = residual * w.ghat_prime(-P.offset_of(i)) * P.phase(i)
    h = P.bin_of(i)
    return np.bincount(h, contrib.real, P.B) + 1j * np.bincount(h, contrib.imag, P.B)


def test_c01_exact_recovery(record):
    t0 = time.perf_counter()
    rates = {}
    for k in (4, 16, 64):
        rep = run_trials(TrialConfig(algorithm="exact", n=4096, k=k, L=1023, trials=200, seed=100 + k))
        rates[k] = rep.success_rate
    elapsed = time.perf_counter() - t0
    ok = all(r >= 2 / 3 for r in rates.values()) and elapsed < 120
    record("C1 exact recovery n=4096", ok, f"rates {rates}, {elapsed:.1f}s (limit 120s)")
    assert ok


def test_c02_general_bound(record):
    t0 = time.perf_counter()
    rep = run_trials(TrialConfig(algorithm="general", n=8192, k=8, eps=1.0, delta=0.01, noise=1.0, trials=100, seed=2))
    elapsed = time.perf_counter() - t0
    ok = rep.success_rate >= 2 / 3 and elapsed < 300
    record("C2 general l2/l2 bound n=8192 k=8", ok, f"rate {rep.success_rate:.2f}, {elapsed:.1f}s (limit 300s)")
    assert ok


def test_c03_hash_to_bins_formula(record):
    worst = 0.0
    delta, alpha = 1e-6, 0.25
    rng = np.random.default_rng(3)
    for n, B in ((64, 8), (256, 16), (1024, 32)):
        w = build_flat_window(n, B, delta, alpha)
        for _ in range(50):
            x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            z = SparseSpectrum(n)
            for i in rng.choice(n, 5, replace=False):
                z[i] = complex(rng.standard_normal(), rng.standard_normal())
            P = random_permutation(n, rng, B)
            u = hash_to_bins(TimeSignal(x), z, P, B, delta, alpha).u_hat
            xhat = dft_naive(x)
            expect = bins_by_formula(xhat - z.to_dense(), P, w)
            slack = delta * np.abs(xhat).sum() + 1e-8 * np.linalg.norm(xhat)
            worst = max(worst, np.max(np.abs(u - expect)) / slack)
    ok = worst <= 1.0
    record("C3 hash_to_bins formula", ok, f"max error / allowed = {worst:.2e}")
    assert ok


def test_c04_window_grid(record):
    bad = []
    worst = 0.0
    for n in (256, 1024):
        for B in (2, 4, 16):
            for alpha in (1 / 8, 1 / 4):
                for delta in (1e-4, 1e-6):
                    w = build_flat_window(n, B, delta, alpha)
                    i = np.arange(n)
                    s = np.minimum(i, n - i)
                    gp = w.ghat_prime(i)
                    band_ok = (
                        np.all(gp[s <= (1 - alpha) * n / (2 * B)] == 1.0)
                        and np.all(gp[s >= n / (2 * B)] == 0.0)
                        and np.all((gp >= 0) & (gp <= 1))
                    )
                    err = np.max(np.abs(dft_naive(w.dense_g()) - gp))
                    worst = max(worst, err / delta)
                    if not band_ok or err >= delta:
                        bad.append((n, B, alpha, delta))
    record("C4 window conformance grid", not bad, f"{24 - len(bad)}/24 points, max error/delta {worst:.2e}")
    assert not bad


def test_c05_permutation_identity(record):
    n = 64
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(100):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        P = random_permutation(n, rng)
        px = permuted_sample(P, TimeSignal(x), np.arange(n))
        i = np.arange(n)
        worst = max(worst, np.max(np.abs(dft_naive(px)[P.pi_map(i)] - dft_naive(x) * P.phase(i))))
    ok = worst <= 1e-9
    record("C5 permutation identity n=64", ok, f"max deviation {worst:.2e}")
    assert ok


def test_c06_progression_bound(record):
    checked = violations = 0
    rng = np.random.default_rng(6)
    for n in (16, 64, 256, 1024, 4096):
        for i in sorted({1, 2, 3, 7, n // 3 or 1, n // 2 + 1, n - 1}):
            for l in sorted({1, 2, 5, n // 8 or 1, n // 2, n}):
                for t in (1, 3, 16, 100):
                    for m in (t, 2 * t + 1, n, 3 * n):
                        if m < t:
                            continue
                        starts = {1, m - t + 1, int(rng.integers(1, m - t + 2))}
                        for start in starts:
                            hits = progression_hits(n, i, np.arange(start, start + t), l)
                            checked += 1
                            violations += hits > progression_bound(n, m, t, i, l) * t
    ok = violations == 0
    record("C6 arithmetic-progression bound (exhaustive)", ok, f"{checked} cases, {violations} violations")
    assert ok


def test_c07_sample_complexity_shape(record):
    grid = [(1 << p, k) for p in range(12, 17) for k in (4, 8, 16, 32, 64, 128, 256)]
    rep = scaling_sweep(grid, TrialConfig(trials=1, L=1023, seed=7))
    ex, ge = rep.spread("exact"), rep.spread("general")
    ok = rep.passed("exact") and rep.passed("general")
    record(
        "C7 sample-complexity spread < 4x",
        ok,
        f"exact samples/(k log n) spread {ex:.1f}x, general samples/(k log n log(n/k)) spread {ge:.1f}x",
    )
    assert ok


def test_c08_reduction(record):
    rates = {}
    for k in (4, 8, 16):
        ok = 0
        for r in spawn_rngs(800 + k, 50):
            spec = r.integers(-1023, 1024, k) + 1j * r.integers(-1023, 1024, k)
            x = idft_naive(spec)
            ok += np.array_equal(full_dft_via_sparse(x, 16 * k, r, L=1023), np.round(dft_naive(x)))
        rates[k] = ok / 50
    x = np.random.default_rng(8).standard_normal(4) + 0j
    scale_ok = abs(dft_naive(LiftedSignal(TimeSignal(x), 16).dense())[4] - 2 * dft_naive(x)[1]) < 1e-9
    ok = all(v >= 2 / 3 for v in rates.values()) and scale_ok
    record("C8 reduction k in {4,8,16}, n=16k", ok, f"rates {rates}, scale check {'ok' if scale_ok else 'bad'}")
    assert ok


def test_c09_phase_decode(record):
    n, k, L = 1024, 8, 1023
    B, alpha = 64, 1 / 8
    delta = exact_delta(n, L)
    w = build_flat_window(n, B, delta, alpha)
    rng = np.random.default_rng(9)
    cases = correct = 0
    while cases < 1000:
        x, truth = gen_exact_sparse(n, k, L, rng)
        z = SparseSpectrum(n)
        for i, v in list(truth.items())[:2]:
            z[i] = v - 1  # partial estimate; residual there is 1
        P = PermutationParams(n, int(rng.integers(n)) | 1, 0, int(rng.integers(n)), B)
        residual = truth - z
        idx = np.array(list(residual), dtype=np.int64)
        bins = P.bin_of(idx)
        u0 = hash_to_bins(x, z, P, B, delta, alpha, w).u_hat
        u1 = hash_to_bins(x, z, P.with_a(1), B, delta, alpha, w).u_hat
        for i, j in zip(idx, bins):
            isolated = np.sum(bins == j) == 1 and abs(P.offset_of(i)) <= w.pass_edge
            if not isolated or cases >= 1000:
                continue
            cases += 1
            _, got_i, got_v = decode_bins(u0[[j]], u1[[j]], P.sigma_inv, n)
            correct += got_i.size == 1 and got_i[0] == i and got_v[0] == residual[i]
    ok = correct == cases
    record("C9 phase decode on isolated coordinates", ok, f"{correct}/{cases} exact")
    assert ok


def test_c10_statistical_bounds(record):
    rng = np.random.default_rng(10)
    out = {}

    # collision and large-offset probabilities for a fixed support
    n, B, alpha, size, draws = 4096, 16, 1 / 8, 2, 20000
    S = rng.choice(n, size, replace=False)
    coll = off = 0
    for _ in range(draws):
        P = random_permutation(n, rng, B)
        h = P.bin_of(S)
        coll += int(h[0] == h[1])
        off += int(abs(P.offset_of(S[0])) >= (1 - alpha) * n / (2 * B))
    out["collision"] = within_3se(coll, draws, 4 * size / B)
    out["offset"] = within_3se(off, draws, alpha)

    # large-noise probability for heavy coordinates of noisy instances
    n, k, B, alpha, eps, delta = 1024, 4, 64, 1 / 4, 1.0, 1e-6
    noisy = events = 0
    for _ in range(40):
        x, xhat = gen_noisy_sparse(n, k, head_for_ratio(n, k, 1.0), 1.0, rng)
        Sh = heavy_set(xhat, xhat, k, eps, delta)
        for _ in range(25):
            P = random_permutation(n, rng, B)
            for i in Sh:
                events += e_noise(P, i, Sh, xhat, k, alpha)
                noisy += 1
    out["noise"] = within_3se(events, noisy, 4 * alpha)

    # expected leftover support after one exact inner pass
    n, k, trials = 4096, 32, 300
    beta, a_in = ExactParams().beta, 1 / 64
    left = []
    for r in spawn_rngs(1010, trials):
        x, truth = gen_exact_sparse(n, k, 1023, r)
        left.append(len(truth - noiseless_inner(x, k, SparseSpectrum(n), a_in, r, L=1023, beta=beta)))
    left = np.array(left, float)
    out["leftover"] = left.mean() <= 8 * (beta + a_in) * k + 3 * max(left.std(ddof=1), 1e-12) / math.sqrt(trials)

    # estimation failure probability decays with the number of repetitions
    n, k, B = 1024, 4, 64
    reps, rates = (1, 3, 5, 9), []
    for R_est in reps:
        bad = total = 0
        for r in spawn_rngs(1020 + R_est, 150):
            x, xhat = gen_noisy_sparse(n, k, head_for_ratio(n, k, 1.0, 4.0), 1.0, r)
            Sh = np.argsort(-np.abs(xhat))[:k]
            m2 = mu2(xhat, xhat, k, 1.0, 1e-6) / 4
            wv = estimate_values(x, SparseSpectrum(n), k, Sh, B, 1e-6, R_est, r, alpha=0.25)
            bad += sum(abs(wv[i] - xhat[i]) ** 2 > m2 for i in Sh)
            total += k
        rates.append(max(bad, 0.5) / total)
    out["estimate decay"] = bool(np.polyfit(reps, np.log(rates), 1)[0] < 0)

    ok = all(out.values())
    record("C10 statistical event bounds", ok, ", ".join(f"{k} {'ok' if v else 'FAIL'}" for k, v in out.items()))
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
