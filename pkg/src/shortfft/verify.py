"""Randomized property suites behind ``shortfft verify``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .noise import random_short_support
from .sparse_ifft import (
    DenseSpectrum,
    LazySpectrum,
    ReconstructionConfig,
    case1_step,
    case2_step,
    reconstruct,
)
from .support import scan_support
from .transforms import fft, ifft, naive_dft, periodize, subsample_spectrum


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0

    def record(self, ok: bool) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1


def _random_vector(rng, big_j: int) -> np.ndarray:
    n = 1 << big_j
    m = int(rng.integers(1, n + 1))
    return random_short_support(rng, n, m)


def subsample_suite(rng, max_j: int, cases: int = 50) -> SuiteResult:
    res = SuiteResult("subsample_identity")
    for _ in range(cases):
        big_j = int(rng.integers(0, max_j + 1))
        x = _random_vector(rng, big_j)
        xhat = fft(x)
        for j in range(big_j + 1):
            diff = subsample_spectrum(xhat, j) - fft(periodize(x, j))
            res.record(np.max(np.abs(diff)) < 1e-10)
    return res


def transform_suite(rng, max_j: int, cases: int = 20) -> SuiteResult:
    res = SuiteResult("fft")
    for _ in range(cases):
        n = 1 << int(rng.integers(0, min(max_j, 10) + 1))
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        ref = naive_dft(v)
        res.record(np.max(np.abs(fft(v) - ref)) <= 1e-10 * max(1.0, np.max(np.abs(ref))))
        res.record(np.max(np.abs(ifft(fft(v)) - v)) < 1e-11)
    return res


def branch_suite(rng, max_j: int, cases: int = 50) -> SuiteResult:
    res = SuiteResult("branch_equivalence")
    tries = 0
    while res.passed + res.failed < cases and tries < 20 * cases:
        tries += 1
        big_j = int(rng.integers(2, max(max_j, 2) + 1))
        n = 1 << big_j
        x = random_short_support(rng, n, int(rng.integers(1, n // 2 + 1)))
        j = int(rng.integers(1, big_j))
        xj = periodize(x, j)
        support = scan_support(xj, 0.0)
        if 2 * support.length > (1 << j):
            continue
        spec = DenseSpectrum(fft(x))
        a = case1_step(xj, spec, 0.0)
        b = case2_step(xj, support, spec, 0.0)
        res.record(np.max(np.abs(a - b)) < 1e-10)
    return res


def recovery_suite(rng, max_j: int, cases: int = 50) -> SuiteResult:
    """Exact recovery, sample bound and monotonicity on one set of draws."""
    res = SuiteResult("recovery_and_samples")
    for _ in range(cases):
        big_j = int(rng.integers(1, max_j + 1))
        x = _random_vector(rng, big_j)
        m = scan_support(x, 0.0).length
        L = 0 if m <= 1 else int(np.ceil(np.log2(m)))
        spectrum = LazySpectrum(x)
        y, report = reconstruct(spectrum, ReconstructionConfig(1e-9 * x.sum()))
        lengths = report.support_lengths()
        monotone = all(a <= b for a, b in zip(lengths, lengths[1:])) and all(
            s.m <= (1 << s.level) for s in report.steps
        )
        res.record(
            np.max(np.abs(y - x)) < 1e-8
            and report.total_samples <= 2 ** (L + 1) + (big_j - L) * 2**L
            and monotone
        )
    return res


SUITES: dict[str, Callable] = {
    "fft": transform_suite,
    "subsample_identity": subsample_suite,
    "branch_equivalence": branch_suite,
    "recovery_and_samples": recovery_suite,
}


def run_all(max_j: int = 10, seed: int = 0) -> list[SuiteResult]:
    if max_j < 1:
        raise ValueError("max_j must be >= 1")
    return [
        suite(np.random.default_rng([seed, i]), max_j)
        for i, suite in enumerate(SUITES.values())
    ]
