"""Uniform-noise model, error metrics and the benchmark harness."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .sparse_ifft import DenseSpectrum, ReconstructionConfig, reconstruct
from .transforms import fft, ifft, log2_exact

__all__ = [
    "NoiseSpec",
    "NoisySpectrum",
    "TrialResult",
    "ThresholdRule",
    "SweepRow",
    "snr_db",
    "add_uniform_noise",
    "random_short_support",
    "run_trial",
    "run_sweep",
    "DEMO_ENTRIES",
    "demo_vector",
]

DEMO_ENTRIES = {50: 5.0, 53: 8.0, 54: 1.0, 179: 2.0, 180: 7.0, 181: 4.0}


def demo_vector() -> np.ndarray:
    x = np.zeros(256)
    for k, v in DEMO_ENTRIES.items():
        x[k] = v
    return x


@dataclass(frozen=True)
class NoiseSpec:
    """Target SNR in dB and the seed of the noise draw.

    ``shape="square"`` draws real and imaginary parts independently;
    ``shape="real"`` perturbs only the real parts.
    """

    target_snr_db: float
    seed: int | Sequence[int] = 0
    shape: str = "square"

    def __post_init__(self):
        if not math.isfinite(self.target_snr_db):
            raise ValueError("target SNR must be finite")
        if self.shape not in ("square", "real"):
            raise ValueError(f"unknown noise shape {self.shape!r}")


class NoisySpectrum(NamedTuple):
    values: np.ndarray
    snr_db: float
    delta: float  # half-width of the uniform draw per component


def snr_db(xhat, eps) -> float:
    """``20 log10(||xhat|| / ||eps||)``; ``inf`` when ``eps`` is all zero."""
    num = np.linalg.norm(xhat)
    den = np.linalg.norm(eps)
    if den == 0:
        return math.inf
    if num == 0:
        return -math.inf
    return 20.0 * math.log10(num / den)


def add_uniform_noise(xhat, spec: NoiseSpec) -> NoisySpectrum:
    """Perturb ``xhat`` by uniform noise rescaled to hit ``spec.target_snr_db``.

    A unit-scale draw on ``[-1, 1]`` is scaled by ``delta`` so that the SNR
    matches the target exactly; ``delta`` is returned for threshold rules.
    """
    xhat = np.asarray(xhat, dtype=np.complex128)
    norm = np.linalg.norm(xhat)
    if norm == 0:
        raise ValueError("SNR is undefined for a zero spectrum")
    rng = np.random.default_rng(spec.seed)
    unit = rng.uniform(-1.0, 1.0, xhat.size).astype(np.complex128)
    if spec.shape == "square":
        unit += 1j * rng.uniform(-1.0, 1.0, xhat.size)
    delta = norm / np.linalg.norm(unit) * 10.0 ** (-spec.target_snr_db / 20.0)
    eps = delta * unit
    return NoisySpectrum(xhat + eps, snr_db(xhat, eps), float(delta))


@dataclass(frozen=True)
class ThresholdRule:
    """``T = factor * delta`` (``kind="delta"``) or ``T = factor`` (``"const"``)."""

    kind: str = "delta"
    factor: float = 0.3

    def __post_init__(self):
        if self.kind not in ("delta", "const"):
            raise ValueError(f"unknown threshold rule {self.kind!r}")
        if not self.factor >= 0:
            raise ValueError("threshold factor must be nonnegative")

    def __call__(self, delta: float) -> float:
        return self.factor * delta if self.kind == "delta" else self.factor

    @classmethod
    def parse(cls, text: str) -> "ThresholdRule":
        """Parse ``delta:<c>`` or ``const:<T>``."""
        kind, sep, value = text.partition(":")
        if not sep:
            raise ValueError(f"threshold rule {text!r} is not of the form kind:value")
        return cls(kind.strip(), float(value))

    def __str__(self):
        return f"{self.kind}:{self.factor:g}"


@dataclass(frozen=True)
class TrialResult:
    snr_db: float
    err_sparse: float
    err_ifft: float
    support_exact: bool
    case1_count: int
    case2_count: int
    total_samples: int
    threshold: float
    monotone: bool


def _is_monotone(report) -> bool:
    lengths = report.support_lengths()
    levels = [s.level for s in report.steps]
    if any(m > (1 << j) for m, j in zip(lengths, levels)):
        return False
    return all(a <= b for a, b in zip(lengths, lengths[1:]))


def run_trial(x, spec: NoiseSpec, threshold: float | None = None, start_level: int = 0,
              rule: ThresholdRule | None = None) -> TrialResult:
    """Add noise to ``fft(x)``, reconstruct, and compare with a plain inverse FFT.

    Exactly one of ``threshold`` and ``rule`` is used; a rule sees the
    realized noise half-width.
    """
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0):
        raise ValueError("signal must be nonnegative")
    n = x.size
    log2_exact(n)
    noisy = add_uniform_noise(fft(x), spec)
    if threshold is None:
        threshold = (rule or ThresholdRule())(noisy.delta)
    spectrum = DenseSpectrum(noisy.values)
    recovered, report = reconstruct(spectrum, ReconstructionConfig(threshold, start_level))
    return TrialResult(
        snr_db=noisy.snr_db,
        err_sparse=float(np.linalg.norm(x - recovered) / n),
        err_ifft=float(np.linalg.norm(x - ifft(noisy.values)) / n),
        support_exact=bool(np.array_equal(np.flatnonzero(recovered), np.flatnonzero(x))),
        case1_count=report.case1_count,
        case2_count=report.case2_count,
        total_samples=report.total_samples,
        threshold=float(threshold),
        monotone=_is_monotone(report),
    )


def random_short_support(rng: np.random.Generator, n: int, m: int,
                         max_value: float = 10.0) -> np.ndarray:
    """Nonnegative vector whose support length is exactly ``m``.

    The interval start is uniform (wrapping allowed); both endpoints are
    drawn from ``(0, max_value]`` and interior entries from ``[0, max_value]``.
    """
    if not 1 <= m <= n:
        raise ValueError(f"support length {m} outside [1, {n}]")
    x = np.zeros(n)
    start = int(rng.integers(n))
    values = rng.uniform(0.0, max_value, m)
    values[0] = max_value - values[0]
    values[-1] = max_value - values[-1]
    x[(start + np.arange(m)) % n] = values
    return x


@dataclass(frozen=True)
class SweepRow:
    snr_db: float
    mean_err_sparse: float
    median_err_sparse: float
    mean_err_ifft: float
    mean_case1: float
    mean_case2: float
    mean_samples: float
    support_exact_rate: float

    def as_dict(self) -> dict:
        return asdict(self)


def run_sweep(snr_levels: Sequence[float], trials: int, n: int, m: int,
              rule: ThresholdRule | None = None, seed: int = 0, start_level: int = 0,
              shape: str = "square", collect: list | None = None) -> list[SweepRow]:
    """One aggregated row per SNR level.

    Trial ``t`` uses the same random vector at every SNR (seeded by
    ``(seed, t)``); its noise is seeded by ``(seed, t, level index)``.  Raw
    ``TrialResult`` objects are appended to ``collect`` when given.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    log2_exact(n)
    rule = rule or ThresholdRule()
    vectors = [
        random_short_support(np.random.default_rng([seed, t]), n, m) for t in range(trials)
    ]
    rows = []
    for li, level in enumerate(snr_levels):
        results = [
            run_trial(x, NoiseSpec(level, [seed, t, li], shape), rule=rule,
                      start_level=start_level)
            for t, x in enumerate(vectors)
        ]
        if collect is not None:
            collect.extend(results)
        err = np.array([r.err_sparse for r in results])
        rows.append(SweepRow(
            snr_db=float(level),
            mean_err_sparse=float(err.mean()),
            median_err_sparse=float(np.median(err)),
            mean_err_ifft=float(np.mean([r.err_ifft for r in results])),
            mean_case1=float(np.mean([r.case1_count for r in results])),
            mean_case2=float(np.mean([r.case2_count for r in results])),
            mean_samples=float(np.mean([r.total_samples for r in results])),
            support_exact_rate=float(np.mean([r.support_exact for r in results])),
        ))
    return rows
