"""Adaptive level-by-level recovery of a nonnegative vector from its DFT.

The vector is rebuilt through its periodizations ``x^(s), ..., x^(J)``.  At
each level the support of the current periodization decides between a full
inverse FFT of length ``2**j`` and a restricted solve of length ``2**L_j``
on the support window, so a short support costs only
``O(m log m log(N/m))`` operations and ``O(m log(N/m))`` spectrum samples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .support import SupportInfo, propagate_candidates, scan_support, support_mask
from .transforms import fft, ifft, log2_exact, twiddles

__all__ = [
    "ContractError",
    "Spectrum",
    "DenseSpectrum",
    "LazySpectrum",
    "ReconstructionConfig",
    "StepRecord",
    "ReconstructionReport",
    "threshold_clip",
    "mod_diag_weights",
    "case1_step",
    "case2_step",
    "reconstruct",
]


class ContractError(RuntimeError):
    """A step was called outside the branch its inputs qualify for."""


class Spectrum:
    """Sample source for ``xhat = F_N x`` that counts distinct queried indices.

    Subclasses implement ``_evaluate``.  One instance serves one
    reconstruction at a time; the access set is mutable state.
    """

    def __init__(self, n: int):
        self.levels = log2_exact(n)
        self.n = int(n)
        self._accessed: set[int] = set()

    @property
    def accessed(self) -> frozenset[int]:
        return frozenset(self._accessed)

    @property
    def query_count(self) -> int:
        return len(self._accessed)

    def reset(self) -> None:
        self._accessed.clear()

    def sample(self, indices) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.int64) % self.n
        self._accessed.update(idx.tolist())
        return self._evaluate(idx)

    def __getitem__(self, k: int) -> complex:
        return complex(self.sample([k])[0])

    def __len__(self) -> int:
        return self.n

    def _evaluate(self, idx: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class DenseSpectrum(Spectrum):
    """Wraps a precomputed (possibly noisy) spectrum vector."""

    def __init__(self, values):
        values = np.asarray(values, dtype=np.complex128)
        if values.ndim != 1:
            raise ValueError("spectrum must be one-dimensional")
        super().__init__(values.size)
        self.values = values

    def _evaluate(self, idx):
        return self.values[idx]


class LazySpectrum(Spectrum):
    """Evaluates ``xhat_k`` on demand from a known ground-truth ``x``.

    Costs O(nnz(x)) per sample, so sample-complexity experiments never touch
    all ``N`` coefficients.
    """

    def __init__(self, x):
        x = np.asarray(x, dtype=np.float64)
        super().__init__(x.size)
        self._support = np.flatnonzero(x)
        self._weights = x[self._support]

    def _evaluate(self, idx):
        phase = np.outer(idx, self._support) % self.n
        return np.exp(-2j * np.pi * phase / self.n) @ self._weights


@dataclass(frozen=True)
class ReconstructionConfig:
    threshold: float = 0.0
    start_level: int = 0

    def __post_init__(self):
        if not self.threshold >= 0:
            raise ValueError(f"threshold must be >= 0, got {self.threshold}")
        if self.start_level < 0:
            raise ValueError(f"start level must be >= 0, got {self.start_level}")


@dataclass(frozen=True)
class StepRecord:
    level: int
    case: int
    m: int
    mu: int
    L: int | None
    samples: int

    def as_dict(self) -> dict:
        return {
            "level": self.level,
            "case": self.case,
            "m": self.m,
            "mu": self.mu,
            "L": self.L,
            "samples": self.samples,
        }


@dataclass
class ReconstructionReport:
    steps: list[StepRecord] = field(default_factory=list)
    total_samples: int = 0
    final_support: SupportInfo | None = None
    start_level: int = 0
    threshold: float = 0.0

    @property
    def case1_count(self) -> int:
        return sum(1 for s in self.steps if s.case == 1)

    @property
    def case2_count(self) -> int:
        return sum(1 for s in self.steps if s.case == 2)

    def support_lengths(self) -> list[int]:
        """``m_s, ..., m_{J-1}`` followed by the support length of the output."""
        lengths = [s.m for s in self.steps]
        if self.final_support is not None and self.steps:
            lengths.append(self.final_support.length)
        return lengths

    def as_dict(self) -> dict:
        fs = self.final_support
        return {
            "threshold": self.threshold,
            "start_level": self.start_level,
            "steps": [s.as_dict() for s in self.steps],
            "case1_count": self.case1_count,
            "case2_count": self.case2_count,
            "total_samples": self.total_samples,
            "final_support": None
            if fs is None
            else {"level": fs.level, "mu": fs.first_index, "m": fs.length},
        }


def threshold_clip(values, threshold: float) -> np.ndarray:
    """Keep ``Re(v)`` where ``Re(v) >= threshold``, else 0."""
    re = np.real(np.asarray(values)).astype(np.float64)
    return np.where(re >= threshold, re, 0.0)


def _inverse_half_twiddles(n: int) -> np.ndarray:
    # w_{2n}^{-l}, l < n
    return np.conj(twiddles(2 * n))


def mod_diag_weights(mu: int, j: int, L: int) -> np.ndarray:
    """``(w_{2^{j+1}}^{-((mu + r) mod 2^j)})`` for ``r < 2**L``."""
    if not 0 <= L <= j:
        raise ValueError(f"need 0 <= L <= j, got L={L}, j={j}")
    n = 1 << j
    if not 0 <= mu < n:
        raise ValueError(f"mu={mu} outside [0, {n})")
    return _inverse_half_twiddles(n)[(mu + np.arange(1 << L)) % n]


def _window_exponent(m: int) -> int:
    return 0 if m <= 1 else math.ceil(math.log2(m))


def _check_level(x_j: np.ndarray, spectrum: Spectrum) -> int:
    j = log2_exact(x_j.size)
    if j >= spectrum.levels:
        raise ValueError(f"level {j} has no finer level below N={spectrum.n}")
    return j


def case1_step(x_j, spectrum: Spectrum, threshold: float) -> np.ndarray:
    """Full step ``x^(j) -> x^(j+1)`` from the ``2**j`` odd samples of the
    level-``(j+1)`` spectrum."""
    x_j = np.asarray(x_j, dtype=np.float64)
    j = _check_level(x_j, spectrum)
    n = 1 << j
    stride = spectrum.n >> (j + 1)
    y = spectrum.sample(stride * (2 * np.arange(n) + 1))
    z = _inverse_half_twiddles(n) * ifft(y)
    return threshold_clip(np.concatenate([x_j + z, x_j - z]) / 2, threshold)


def case2_step(x_j, support: SupportInfo, spectrum: Spectrum, threshold: float) -> np.ndarray:
    """Restricted step using only ``2**L_j`` samples, ``L_j = ceil(log2 m_j)``.

    The result is zero outside the windows ``(mu + k) mod 2^j`` and
    ``2^j + (mu + k) mod 2^j``, ``k < 2**L_j``.
    """
    x_j = np.asarray(x_j, dtype=np.float64)
    j = _check_level(x_j, spectrum)
    n = 1 << j
    m, mu = support.length, support.first_index
    if support.level != j:
        raise ContractError(f"support is for level {support.level}, vector is level {j}")
    if m == 0:
        raise ContractError("empty support must be short-circuited by the caller")
    if 2 * m > n:
        raise ContractError(f"m={m} exceeds half the length 2^{j}; case 1 applies")

    L = _window_exponent(m)
    width = 1 << L
    window = (mu + np.arange(width)) % n
    p = np.arange(width)
    y = spectrum.sample((spectrum.n >> L) * p + (spectrum.n >> (j + 1)))
    shift = np.exp(2j * np.pi * ((mu * p) % width) / width)
    z = mod_diag_weights(mu, j, L) * ifft(shift * y)

    x_tilde = x_j[window]
    out = np.zeros(2 * n)
    out[window] = threshold_clip((x_tilde + z) / 2, threshold)
    out[n + window] = threshold_clip((x_tilde - z) / 2, threshold)
    return out


def reconstruct(spectrum: Spectrum, config: ReconstructionConfig | None = None):
    """Recover ``x`` from ``spectrum``, querying as few samples as the
    support allows.

    Returns ``(x, report)``.  If the start periodization clips to zero, the
    zero vector is returned with an empty step list.  From the second level
    on, supports are scanned only over candidates propagated from the
    previous level, and entries outside the detected interval are dropped.
    """
    if config is None:
        config = ReconstructionConfig()
    big_j, T, s = spectrum.levels, config.threshold, config.start_level
    if s > big_j:
        raise ValueError(f"start level {s} exceeds J={big_j}")

    report = ReconstructionReport(start_level=s, threshold=T)
    before = spectrum.query_count
    x = threshold_clip(ifft(spectrum.sample((spectrum.n >> s) * np.arange(1 << s))), T)
    support = scan_support(x, T)

    for j in range(s, big_j):
        if j > s:
            support = scan_support(x, T, propagate_candidates(support))
            x = np.where(support_mask(support), x, 0.0)
        if support.length == 0:
            break
        count = spectrum.query_count
        if 2 * support.length > (1 << j):
            x = case1_step(x, spectrum, T)
            record = StepRecord(j, 1, support.length, support.first_index, None, 0)
        else:
            x = case2_step(x, support, spectrum, T)
            L = _window_exponent(support.length)
            record = StepRecord(j, 2, support.length, support.first_index, L, 0)
        report.steps.append(replace(record, samples=spectrum.query_count - count))

    if support.length == 0:
        x = np.zeros(spectrum.n)
        report.final_support = SupportInfo(big_j, 0, 0)
    else:
        if report.steps:
            support = scan_support(x, T, propagate_candidates(support))
            x = np.where(support_mask(support), x, 0.0)
        report.final_support = support
    report.total_samples = spectrum.query_count - before
    return x, report


def spectrum_of(x) -> DenseSpectrum:
    """Dense spectrum of a real vector, via the radix-2 kernel."""
    return DenseSpectrum(fft(np.asarray(x, dtype=np.float64)))
