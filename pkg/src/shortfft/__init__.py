"""Sparse inverse FFT for nonnegative vectors with short circular support."""

from .sparse_ifft import (
    ContractError,
    DenseSpectrum,
    LazySpectrum,
    ReconstructionConfig,
    ReconstructionReport,
    StepRecord,
    reconstruct,
    spectrum_of,
)
from .support import SupportInfo, propagate_candidates, scan_support
from .transforms import fft, ifft, naive_dft, periodize, subsample_spectrum

__version__ = "0.1.0"
CONVENTION = "forward DFT unnormalized, w = exp(-2*pi*i/N); inverse carries 1/N"

__all__ = [
    "ContractError",
    "DenseSpectrum",
    "LazySpectrum",
    "ReconstructionConfig",
    "ReconstructionReport",
    "StepRecord",
    "SupportInfo",
    "fft",
    "ifft",
    "naive_dft",
    "periodize",
    "propagate_candidates",
    "reconstruct",
    "scan_support",
    "spectrum_of",
    "subsample_spectrum",
]
