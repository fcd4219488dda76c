"""Circular support intervals of periodized vectors."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .transforms import log2_exact

__all__ = ["SupportInfo", "scan_support", "propagate_candidates", "support_mask"]


@dataclass(frozen=True)
class SupportInfo:
    """Minimal circular interval ``{(first_index + l) mod 2**level : l < length}``.

    An empty support is encoded as ``first_index=0, length=0``.
    """

    level: int
    first_index: int
    length: int

    @property
    def size(self) -> int:
        return 1 << self.level

    def indices(self) -> np.ndarray:
        return (self.first_index + np.arange(self.length)) % self.size


def _above(values: np.ndarray, threshold: float) -> np.ndarray:
    # ``> 0`` keeps exact zeros out of the support when threshold is 0.
    return (values >= threshold) & (values > 0)


def scan_support(values, threshold: float, candidates=None) -> SupportInfo:
    """Find the minimal circular interval covering every entry ``>= threshold``.

    Only the indices in ``candidates`` are inspected when it is given; the
    caller guarantees that no above-threshold entry lies outside it.  When
    several minimal intervals exist the one with the smallest first index
    wins.
    """
    values = np.asarray(values)
    if np.iscomplexobj(values):
        values = values.real
    n = values.size
    level = log2_exact(n)
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")

    if candidates is None:
        hits = np.flatnonzero(_above(values, threshold))
    else:
        cand = np.unique(np.asarray(candidates, dtype=np.intp) % n)
        hits = cand[_above(values[cand], threshold)]

    if hits.size == 0:
        return SupportInfo(level, 0, 0)
    if hits.size == 1:
        return SupportInfo(level, int(hits[0]), 1)

    # gap[i] = number of empty slots between hits[i] and the next hit (cyclic)
    nxt = np.roll(hits, -1)
    gaps = (nxt - hits - 1) % n
    widest = gaps.max()
    starts = nxt[gaps == widest]
    return SupportInfo(level, int(starts.min()), int(n - widest))


def propagate_candidates(prev: SupportInfo) -> np.ndarray:
    """Indices at level ``prev.level + 1`` that may hold positive entries.

    A periodization can only be positive where its coarser periodization is
    positive, or at those positions shifted by ``2**prev.level``.
    """
    if prev.length == 0:
        return np.empty(0, dtype=np.intp)
    base = prev.indices()
    return np.concatenate([base, base + prev.size]).astype(np.intp)


def support_mask(info: SupportInfo) -> np.ndarray:
    """Boolean mask of length ``2**info.level`` selecting the interval."""
    mask = np.zeros(info.size, dtype=bool)
    mask[info.indices()] = True
    return mask
