"""Sample-count and wall-time sweep for the exact and general algorithms.

    python scripts/run_sweep.py --trials 3 --out sweep.json
"""

import argparse
import json

from sparsefft.bench import TrialConfig, scaling_sweep


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--ns", default="4096,8192,16384,32768,65536")
    p.add_argument("--ks", default="4,8,16,32,64,128,256")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", default="sweep.json")
    args = p.parse_args()
    grid = [(n, k) for n in map(int, args.ns.split(",")) for k in map(int, args.ks.split(",")) if k < n]
    rep = scaling_sweep(grid, TrialConfig(trials=args.trials, L=1023, seed=args.seed))
    print(f"{'alg':8s} {'n':>6s} {'k':>4s} {'samples':>9s} {'ratio':>8s} {'ms':>8s} {'dense ms':>8s}")
    for pt in rep.points:
        print(f"{pt.algorithm:8s} {pt.n:6d} {pt.k:4d} {pt.median_samples:9.0f} {pt.ratio:8.1f} "
              f"{pt.median_wall_ns / 1e6:8.1f} {pt.dense_fft_ns / 1e6:8.2f}")
    for alg in ("exact", "general"):
        print(f"{alg}: ratio spread {rep.spread(alg):.1f}x")
    with open(args.out, "w") as fh:
        json.dump({"points": rep.rows(), "spread": {a: rep.spread(a) for a in ("exact", "general")}}, fh, indent=1)


if __name__ == "__main__":
    main()
