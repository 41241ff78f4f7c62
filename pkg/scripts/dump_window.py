"""Print a flat window's taps and its frequency response in and around one bin.

    python scripts/dump_window.py --n 1024 --B 16 --alpha 0.25 --delta 1e-6
"""

import argparse

import numpy as np

from sparsefft.core import fft_dense
from sparsefft.window import build_flat_window


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--B", type=int, default=16)
    p.add_argument("--alpha", type=float, default=0.25)
    p.add_argument("--delta", type=float, default=1e-6)
    args = p.parse_args()
    w = build_flat_window(args.n, args.B, args.delta, args.alpha)
    print(f"support {w.support_size} taps, pass edge {w.pass_edge:.1f}, stop edge {w.stop_edge:.1f}")
    resp = fft_dense(w.dense_g())
    for i in range(0, int(w.stop_edge) + 3):
        print(f"{i:5d}  Ghat'={w.ghat_prime(i):.6f}  |ghat - Ghat'|={abs(resp[i] - w.ghat_prime(i)):.2e}")
    print(f"max |ghat - Ghat'| over all n: {np.max(np.abs(resp - w.ghat_prime(np.arange(args.n)))):.2e}")


if __name__ == "__main__":
    main()
