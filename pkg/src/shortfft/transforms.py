"""Radix-2 transform kernels and the periodization primitives.

Convention: the forward DFT is unnormalized with ``w_n = exp(-2*pi*i/n)``,
the inverse carries the ``1/n`` factor.  Every other module inherits this.
"""
from __future__ import annotations

import threading
from functools import lru_cache

import numpy as np

__all__ = [
    "is_power_of_two",
    "log2_exact",
    "twiddles",
    "fft",
    "ifft",
    "naive_dft",
    "periodize",
    "subsample_spectrum",
]

_table_lock = threading.Lock()


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def log2_exact(n: int) -> int:
    """Return ``k`` with ``n == 2**k``; raise ValueError otherwise."""
    n = int(n)
    if not is_power_of_two(n):
        raise ValueError(f"length {n} is not a power of two")
    return n.bit_length() - 1


@lru_cache(maxsize=None)
def _twiddle_table(n: int) -> np.ndarray:
    k = np.arange(n // 2)
    table = np.exp(-2j * np.pi * k / n)
    table.setflags(write=False)
    return table


def twiddles(n: int) -> np.ndarray:
    """Read-only table ``(w_n**k)`` for ``k < n/2``, built once per length."""
    with _table_lock:
        return _twiddle_table(n)


@lru_cache(maxsize=None)
def _bit_reversal(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    rev.setflags(write=False)
    return rev


def _permutation(n: int) -> np.ndarray:
    with _table_lock:
        return _bit_reversal(n)


def fft(v) -> np.ndarray:
    """Forward DFT ``F_n v`` by iterative radix-2 decimation in time.

    Parameters
    ----------
    v : array_like
        Input of length ``2**k`` (``k >= 0``).

    Returns
    -------
    ndarray of complex128
        A new array; the input is never modified.
    """
    x = np.asarray(v, dtype=np.complex128)
    if x.ndim != 1:
        raise ValueError("fft expects a one-dimensional input")
    n = x.size
    log2_exact(n)
    if n == 1:
        return x.copy()
    if n == 2:
        return np.array([x[0] + x[1], x[0] - x[1]])

    x = x[_permutation(n)]
    size = 2
    while size <= n:
        half = size // 2
        blocks = x.reshape(-1, size)
        top = blocks[:, :half].copy()
        bottom = blocks[:, half:] * twiddles(size)
        blocks[:, :half] = top + bottom
        blocks[:, half:] = top - bottom
        size *= 2
    return x


def ifft(v) -> np.ndarray:
    """Inverse DFT ``F_n^{-1} v = conj(F_n conj(v)) / n``."""
    x = np.asarray(v, dtype=np.complex128)
    n = x.size
    return np.conj(fft(np.conj(x))) / n


def naive_dft(v) -> np.ndarray:
    """Literal O(n^2) product with the Fourier matrix; any length.  Test oracle."""
    x = np.asarray(v, dtype=np.complex128)
    n = x.size
    if n == 0:
        raise ValueError("naive_dft needs a non-empty input")
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(-2j * np.pi * jk / n) @ x


def periodize(x, target_level: int) -> np.ndarray:
    """Sum ``x`` over residue classes modulo ``2**target_level``."""
    x = np.asarray(x, dtype=np.float64)
    level = log2_exact(x.size)
    if not 0 <= target_level <= level:
        raise ValueError(
            f"target level {target_level} outside [0, {level}] for length {x.size}"
        )
    return x.reshape(-1, 1 << target_level).sum(axis=0)


def subsample_spectrum(xhat, j: int) -> np.ndarray:
    """Every ``2**(J-j)``-th sample of ``xhat``, i.e. the spectrum of the
    level-``j`` periodization."""
    xhat = np.asarray(xhat, dtype=np.complex128)
    big_j = log2_exact(xhat.size)
    if not 0 <= j <= big_j:
        raise ValueError(f"level {j} outside [0, {big_j}]")
    return xhat[:: 1 << (big_j - j)].copy()
