"""Shared primitives: counted signals, sparse spectra, dense DFTs, RNG streams.

All transforms use the unitary convention

    xhat_i = 1/sqrt(n) * sum_j omega^(i*j) x_j,   omega = exp(-2*pi*1j/n)

so the DFT preserves the l2 norm.
"""

from __future__ import annotations

import functools
import json
import math
import struct
import threading
from pathlib import Path
from typing import Callable, Iterable, Mapping

import numpy as np

__all__ = [
    "TimeSignal",
    "SparseSpectrum",
    "make_rng",
    "spawn_rngs",
    "is_power_of_two",
    "dft_naive",
    "idft_naive",
    "fft_dense",
    "ifft_dense",
    "tail_err",
    "inverse_mod_pow2",
    "write_signal",
    "read_signal",
]

SIGNAL_MAGIC = b"SFT1"


def is_power_of_two(n: int) -> bool:
    return isinstance(n, (int, np.integer)) and n >= 1 and (n & (n - 1)) == 0


def _require_pow2(n: int, what: str = "length") -> None:
    if not is_power_of_two(n):
        raise ValueError(f"{what} must be a power of two, got {n}")


# ---------------------------------------------------------------------------
# RNG streams
# ---------------------------------------------------------------------------


def make_rng(seed: int | np.random.SeedSequence | None) -> np.random.Generator:
    """Reproducible generator; identical seeds give identical draw sequences."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent child streams derived from one master seed (one per trial)."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [make_rng(c) for c in children]


# ---------------------------------------------------------------------------
# Signals
# ---------------------------------------------------------------------------


class TimeSignal:
    """Length-n complex time-domain signal with counted element access.

    Backed either by a dense array or by a callback ``fn(indices) -> values``
    evaluated lazily.  Indices are reduced mod n on every access and every
    element read increments ``reads``.
    """

    def __init__(
        self,
        values: np.ndarray | None = None,
        *,
        n: int | None = None,
        fn: Callable[[np.ndarray], np.ndarray] | None = None,
    ):
        if (values is None) == (fn is None):
            raise ValueError("give exactly one of values or fn")
        if values is not None:
            values = np.asarray(values, dtype=np.complex128)
            if values.ndim != 1:
                raise ValueError("values must be one-dimensional")
            n = values.shape[0]
        if n is None:
            raise ValueError("n is required with a callback signal")
        _require_pow2(n, "signal length")
        self.n = int(n)
        self._values = values
        self._fn = fn
        self._reads = 0
        self._lock = threading.Lock()

    @property
    def reads(self) -> int:
        return self._reads

    def reset_reads(self) -> None:
        with self._lock:
            self._reads = 0

    def _count(self, m: int) -> None:
        with self._lock:
            self._reads += m

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, idx):
        if np.isscalar(idx):
            self._count(1)
            i = int(idx) % self.n
            if self._values is not None:
                return complex(self._values[i])
            return complex(np.asarray(self._fn(np.array([i])))[0])
        idx = np.asarray(idx, dtype=np.int64) % self.n
        self._count(idx.size)
        if self._values is not None:
            return self._values[idx]
        return np.asarray(self._fn(idx), dtype=np.complex128)

    def take(self, idx) -> np.ndarray:
        return self[np.asarray(idx)]

    def dense(self) -> np.ndarray:
        """All n values (counts n reads)."""
        return self[np.arange(self.n)]

    def uncounted_copy(self) -> "TimeSignal":
        """A separate handle on the same data with its own counter.

        Used by the oracle side so it never touches the algorithm's count.
        """
        if self._values is not None:
            return TimeSignal(self._values)
        return TimeSignal(n=self.n, fn=self._fn)


class SparseSpectrum:
    """Frequency-index -> complex coefficient map over [n]; zeros are dropped."""

    def __init__(self, n: int, entries: Mapping[int, complex] | Iterable | None = None):
        self.n = int(n)
        self._d: dict[int, complex] = {}
        if entries is not None:
            items = entries.items() if isinstance(entries, Mapping) else entries
            for i, v in items:
                self[i] = v

    @classmethod
    def from_dense(cls, v: np.ndarray, tol: float = 0.0) -> "SparseSpectrum":
        v = np.asarray(v)
        nz = np.flatnonzero(np.abs(v) > tol)
        return cls(v.shape[0], zip(nz.tolist(), v[nz].tolist()))

    def __setitem__(self, i: int, value: complex) -> None:
        i = int(i) % self.n
        value = complex(value)
        if value == 0:
            self._d.pop(i, None)
        else:
            self._d[i] = value

    def __getitem__(self, i: int) -> complex:
        return self._d.get(int(i) % self.n, 0j)

    def __contains__(self, i) -> bool:
        return int(i) % self.n in self._d

    def __len__(self) -> int:
        return len(self._d)

    def __iter__(self):
        return iter(self._d)

    def items(self):
        return self._d.items()

    def copy(self) -> "SparseSpectrum":
        out = SparseSpectrum(self.n)
        out._d = dict(self._d)
        return out

    def __add__(self, other: "SparseSpectrum") -> "SparseSpectrum":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        out = self.copy()
        for i, v in other.items():
            out[i] = out[i] + v
        return out

    def __sub__(self, other: "SparseSpectrum") -> "SparseSpectrum":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        out = self.copy()
        for i, v in other.items():
            out[i] = out[i] - v
        return out

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(indices, values) as numpy arrays, in insertion order."""
        idx = np.fromiter(self._d.keys(), dtype=np.int64, count=len(self._d))
        val = np.fromiter(self._d.values(), dtype=np.complex128, count=len(self._d))
        return idx, val

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=np.complex128)
        idx, val = self.arrays()
        out[idx] = val
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseSpectrum):
            return NotImplemented
        return self.n == other.n and self._d == other._d

    def __repr__(self) -> str:
        return f"SparseSpectrum(n={self.n}, nnz={len(self)})"


# ---------------------------------------------------------------------------
# Dense transforms
# ---------------------------------------------------------------------------


def _as_values(x) -> np.ndarray:
    if isinstance(x, TimeSignal):
        return x.dense()
    return np.asarray(x, dtype=np.complex128)


_MATRIX_LIMIT = 4096


@functools.lru_cache(maxsize=2)
def _dft_matrix(n: int, sign: int) -> np.ndarray:
    table = np.exp(sign * 2j * np.pi * np.arange(n) / n)
    m = table[np.outer(np.arange(n, dtype=np.int64), np.arange(n, dtype=np.int64)) % n]
    m.setflags(write=False)
    return m


def dft_naive(x, *, sign: int = -1, block: int = 256) -> np.ndarray:
    """O(n^2) unitary DFT, the ground-truth oracle.

    Twiddles come from an exact integer table ``omega^((i*j) mod n)`` so the
    phase never loses precision for large products.  ``sign=+1`` gives the
    inverse transform.  Matrices up to n = 4096 are cached.
    """
    v = _as_values(x)
    n = v.shape[0]
    if n == 0:
        return v.copy()
    if n <= _MATRIX_LIMIT:
        return (_dft_matrix(n, sign) @ v) / math.sqrt(n)
    table = np.exp(sign * 2j * np.pi * np.arange(n) / n)
    j = np.arange(n, dtype=np.int64)
    out = np.empty(n, dtype=np.complex128)
    for start in range(0, n, block):
        i = np.arange(start, min(start + block, n), dtype=np.int64)
        out[start : start + i.size] = table[np.outer(i, j) % n] @ v
    return out / math.sqrt(n)


def idft_naive(xhat) -> np.ndarray:
    return dft_naive(xhat, sign=+1)


def _bit_reverse_permutation(m: int) -> np.ndarray:
    bits = m.bit_length() - 1
    idx = np.arange(m, dtype=np.int64)
    rev = np.zeros(m, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def fft_dense(x, *, inverse: bool = False) -> np.ndarray:
    """Iterative radix-2 decimation-in-time FFT, unitary normalisation."""
    a = np.array(_as_values(x), dtype=np.complex128, copy=True)
    m = a.shape[0]
    _require_pow2(m, "FFT length")
    a = a[_bit_reverse_permutation(m)]
    sign = 1.0 if inverse else -1.0
    half = 1
    while half < m:
        tw = np.exp(sign * 1j * np.pi * np.arange(half) / half)
        blocks = a.reshape(-1, 2 * half)
        even = blocks[:, :half].copy()
        odd = blocks[:, half:] * tw
        blocks[:, :half] = even + odd
        blocks[:, half:] = even - odd
        half *= 2
    return a / math.sqrt(m)


def ifft_dense(x) -> np.ndarray:
    return fft_dense(x, inverse=True)


# ---------------------------------------------------------------------------
# Misc
# ---------------------------------------------------------------------------


def tail_err(v, k: int) -> float:
    """l2 norm of ``v`` with its k largest-magnitude entries removed.

    Ties keep the lower index.  Accepts a dense vector or a SparseSpectrum.
    """
    if isinstance(v, SparseSpectrum):
        _, vals = v.arrays()
        mags = np.abs(vals)
    else:
        mags = np.abs(np.asarray(v))
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k >= mags.size:
        return 0.0
    # stable sort on -|v| keeps lower indices first among equal magnitudes
    order = np.argsort(-mags, kind="stable")
    rest = mags[order[k:]]
    return float(math.sqrt(float(np.sum(rest * rest))))


def inverse_mod_pow2(sigma: int, n: int) -> int:
    _require_pow2(n)
    if sigma % 2 == 0:
        raise ValueError(f"sigma must be odd to be invertible mod {n}, got {sigma}")
    return pow(int(sigma) % n, -1, n) if n > 1 else 0


# ---------------------------------------------------------------------------
# Signal files
# ---------------------------------------------------------------------------


def write_signal(path: str | Path, values: np.ndarray) -> None:
    """Binary format: b"SFT1", u64 n (little endian), n interleaved (re, im) f64.

    A ``.json`` suffix writes the small-fixture variant: ``[[re, im], ...]``.
    """
    path = Path(path)
    values = np.asarray(values, dtype=np.complex128)
    if path.suffix == ".json":
        path.write_text(json.dumps([[float(z.real), float(z.imag)] for z in values]))
        return
    body = np.empty(2 * values.size, dtype="<f8")
    body[0::2] = values.real
    body[1::2] = values.imag
    with open(path, "wb") as fh:
        fh.write(SIGNAL_MAGIC)
        fh.write(struct.pack("<Q", values.size))
        fh.write(body.tobytes())


def read_signal(path: str | Path) -> np.ndarray:
    path = Path(path)
    if path.suffix == ".json":
        pairs = json.loads(path.read_text())
        return np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
    raw = path.read_bytes()
    if raw[:4] != SIGNAL_MAGIC:
        raise ValueError(f"{path}: bad magic {raw[:4]!r}")
    (n,) = struct.unpack("<Q", raw[4:12])
    body = np.frombuffer(raw[12:], dtype="<f8")
    if body.size != 2 * n:
        raise ValueError(f"{path}: expected {n} samples, found {body.size // 2}")
    return body[0::2] + 1j * body[1::2]
