"""Sublinear-time sparse Fourier transforms with a dense-DFT oracle."""

from .core import (
    SparseSpectrum,
    TimeSignal,
    dft_naive,
    fft_dense,
    idft_naive,
    ifft_dense,
    make_rng,
    spawn_rngs,
    tail_err,
)
from .exact import ExactParams, noiseless_sparse_fft
from .general import GeneralConfig, sparse_fft
from .permute import PermutationParams, random_permutation
from .reduction import full_dft_via_sparse
from .window import FlatWindowPair, build_flat_window

__all__ = [
    "SparseSpectrum",
    "TimeSignal",
    "dft_naive",
    "fft_dense",
    "idft_naive",
    "ifft_dense",
    "make_rng",
    "spawn_rngs",
    "tail_err",
    "ExactParams",
    "noiseless_sparse_fft",
    "GeneralConfig",
    "sparse_fft",
    "PermutationParams",
    "random_permutation",
    "full_dft_via_sparse",
    "FlatWindowPair",
    "build_flat_window",
]
