import numpy as np
import pytest

from shortfft.sparse_ifft import (
    ContractError,
    DenseSpectrum,
    LazySpectrum,
    ReconstructionConfig,
    case1_step,
    case2_step,
    mod_diag_weights,
    reconstruct,
    spectrum_of,
    threshold_clip,
)
from shortfft.support import SupportInfo, scan_support
from shortfft.transforms import fft, ifft, naive_dft, periodize
from conftest import brute_periodize

SMALL = np.array([1, 2, 0, 0, 0, 5, 3, 0], dtype=float)


# -- spectrum oracles ------------------------------------------------------

def test_dense_counts_distinct_indices():
    sp = DenseSpectrum(fft(SMALL))
    sp.sample([0, 1, 1, 9])  # 9 wraps to 1
    assert sp.query_count == 2
    assert sp.accessed == {0, 1}
    assert sp[8] == pytest.approx(11)
    assert sp.query_count == 2


def test_lazy_matches_dense(rng):
    x = rng.uniform(0, 1, 64) * (rng.random(64) < 0.2)
    lazy, dense = LazySpectrum(x), DenseSpectrum(naive_dft(x))
    k = rng.integers(0, 200, 30)
    np.testing.assert_allclose(lazy.sample(k), dense.sample(k), atol=1e-12)
    assert lazy.query_count == dense.query_count


# -- threshold procedure ---------------------------------------------------

def test_threshold_clip_examples():
    np.testing.assert_array_equal(threshold_clip([3 + 0.1j, -2, 0.5], 0.9), [3, 0, 0])
    np.testing.assert_array_equal(threshold_clip([0.9, 0.8999], 0.9), [0.9, 0])
    np.testing.assert_array_equal(threshold_clip([-1e-17, 0.0, 2 - 5j], 0.0), [0, 0, 2])


# -- diagonal weights ------------------------------------------------------

def test_mod_diag_no_wrap():
    j, L = 4, 2
    expected = np.exp(2j * np.pi * np.arange(4) / 2 ** (j + 1))
    np.testing.assert_allclose(mod_diag_weights(0, j, L), expected, atol=1e-15)


def test_mod_diag_wrap_value():
    assert mod_diag_weights(7, 3, 2)[1] == pytest.approx(1.0)


@pytest.mark.parametrize("j", range(1, 8))
def test_mod_diag_block_sign_form(j):
    for L in range(0, j + 1):
        for mu in range(2**j - 2**L + 1, 2**j):
            r = np.arange(2**L)
            sign = np.where(r >= 2**j - mu, -1.0, 1.0)
            block = np.exp(2j * np.pi * mu / 2 ** (j + 1)) * sign * np.exp(2j * np.pi * r / 2 ** (j + 1))
            assert np.max(np.abs(mod_diag_weights(mu, j, L) - block)) < 1e-14


def test_mod_diag_range_errors():
    with pytest.raises(ValueError):
        mod_diag_weights(8, 3, 2)
    with pytest.raises(ValueError):
        mod_diag_weights(0, 3, 4)


# -- single steps ----------------------------------------------------------

def test_case1_small_example():
    sp = spectrum_of(SMALL)
    out = case1_step(brute_periodize(SMALL, 2), sp, 1e-9)
    assert np.max(np.abs(out - SMALL)) < 1e-10
    assert sp.query_count == 4


def test_case1_delta_at_level0():
    sp = spectrum_of([1.0, 0, 0, 0])
    np.testing.assert_allclose(case1_step([1.0], sp, 1e-9), [1, 0], atol=1e-15)


@pytest.mark.parametrize("j", [0, 1, 2, 3, 4])
def test_case1_constant_splits_evenly(j):
    x = np.full(32, 2.5)
    odd = naive_dft(x)[2 ** (5 - j - 1) * (2 * np.arange(2**j) + 1)]
    assert np.max(np.abs(odd)) < 1e-12
    xj = brute_periodize(x, j)
    out = case1_step(xj, spectrum_of(x), 1e-9)
    np.testing.assert_allclose(out, np.concatenate([xj, xj]) / 2, atol=1e-12)


def test_case1_rejects_top_level():
    with pytest.raises(ValueError):
        case1_step(SMALL, spectrum_of(SMALL), 0.0)


def test_case2_adjacent_pair():
    x = np.array([0, 0, 3, 4, 0, 0, 0, 0.0])
    xj = brute_periodize(x, 2)
    support = scan_support(xj, 1e-9)
    assert (support.first_index, support.length) == (2, 2)
    out2 = case2_step(xj, support, spectrum_of(x), 1e-9)
    out1 = case1_step(xj, spectrum_of(x), 1e-9)
    assert np.max(np.abs(out2 - x)) < 1e-10
    assert np.max(np.abs(out2 - out1)) < 1e-10


def test_case2_single_entry_uses_one_sample():
    x = np.zeros(8)
    x[5] = 7
    sp = spectrum_of(x)
    xj = brute_periodize(x, 2)
    out = case2_step(xj, scan_support(xj, 1e-9), sp, 1e-9)
    assert sp.query_count == 1
    assert np.flatnonzero(out).tolist() == [5]
    assert out[5] == pytest.approx(7)


def test_case2_wraparound():
    x = np.zeros(16)
    x[15], x[0] = 1, 2
    xj = brute_periodize(x, 3)
    support = scan_support(xj, 1e-9)
    assert (support.first_index, support.length) == (7, 2)
    out = case2_step(xj, support, spectrum_of(x), 1e-9)
    assert np.max(np.abs(out - x)) < 1e-10


def test_case2_contracts():
    x = np.zeros(8)
    x[[0, 1, 2]] = 1
    xj = brute_periodize(x, 2)
    with pytest.raises(ContractError):
        case2_step(xj, scan_support(xj, 0.5), spectrum_of(x), 0.5)
    with pytest.raises(ContractError):
        case2_step(np.zeros(4), SupportInfo(2, 0, 0), spectrum_of(x), 0.5)


def test_box_ordering_of_diagonals_would_be_wrong():
    # Swapping the two diagonal factors breaks the solve once mu is not 0.
    x = np.zeros(64)
    x[[21, 23, 24]] = [1.0, 2.0, 3.0]
    j, sp = 4, spectrum_of(x)
    xj = periodize(x, j)
    s = scan_support(xj, 1e-9)
    L, n = 2, 16
    p = np.arange(4)
    y = sp.sample((64 >> L) * p + (64 >> (j + 1)))
    swapped = np.exp(2j * np.pi * s.first_index * p / 4) * ifft(mod_diag_weights(s.first_index, j, L) * y)
    window = (s.first_index + p) % n
    x0_swapped = threshold_clip((xj[window] + swapped) / 2, 1e-9)
    x0_good = case2_step(xj, s, spectrum_of(x), 1e-9)[window]
    np.testing.assert_allclose(x0_good, periodize(x, j + 1)[window], atol=1e-10)
    assert np.max(np.abs(x0_swapped - x0_good)) > 0.1


@pytest.mark.parametrize("seed", range(60))
def test_branch_equivalence(seed):
    rng = np.random.default_rng([1, seed])
    big_j = int(rng.integers(2, 11))
    n = 2**big_j
    m = int(rng.integers(1, max(2, n // 4)))
    x = np.zeros(n)
    idx = (int(rng.integers(n)) + np.arange(m)) % n
    x[idx] = rng.uniform(0.5, 5, m)
    for j in range(1, big_j):
        xj = brute_periodize(x, j)
        s = scan_support(xj, 1e-9)
        if 2 * s.length > 2**j:
            continue
        a = case1_step(xj, spectrum_of(x), 1e-9)
        b = case2_step(xj, s, spectrum_of(x), 1e-9)
        assert np.max(np.abs(a - b)) < 1e-10
        np.testing.assert_allclose(b, brute_periodize(x, j + 1), atol=1e-10)


# -- full reconstruction ---------------------------------------------------

def test_demo_trace(demo_x):
    y, report = reconstruct(spectrum_of(demo_x), ReconstructionConfig(1e-9 * demo_x.sum()))
    assert np.max(np.abs(y - demo_x)) < 1e-9
    assert [s.case for s in report.steps] == [1, 1, 1, 1, 2, 2, 2, 2]
    assert [s.m for s in report.steps] == [1, 2, 4, 5, 5, 5, 5, 5]
    assert report.total_samples == 1 + 1 + 2 + 4 + 8 + 4 * 8


def test_zero_spectrum_short_circuits():
    sp = DenseSpectrum(np.zeros(64))
    y, report = reconstruct(sp, ReconstructionConfig(1e-9, start_level=3))
    assert not y.any() and y.size == 64
    assert report.steps == [] and report.total_samples == 8


def test_equidistant_example():
    x = np.zeros(1024)
    x[[0, 256, 512, 768]] = 1
    for j in range(9):
        nz = np.flatnonzero(brute_periodize(x, j))
        assert nz.tolist() == [0]
    assert np.flatnonzero(brute_periodize(x, 9)).tolist() == [0, 256]
    y, report = reconstruct(spectrum_of(x), ReconstructionConfig(4e-9))
    assert np.max(np.abs(y - x)) < 1e-12
    for s in report.steps[1:9]:
        assert (s.case, s.L, s.samples) == (2, 0, 1)
    assert report.steps[9].case == 1


@pytest.mark.parametrize("big_j", [1, 3, 6, 9, 12])
def test_exact_recovery_arbitrary_support(rng, big_j):
    for _ in range(10):
        n = 2**big_j
        x = rng.uniform(0, 10, n) * (rng.random(n) < rng.uniform(0.01, 1))
        if not x.any():
            continue
        y, _ = reconstruct(spectrum_of(x), ReconstructionConfig(1e-9 * x.sum()))
        assert np.max(np.abs(y - x)) < 1e-8


@pytest.mark.parametrize("seed", range(10))
def test_full_support_fallback(seed):
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.5, 3, 2**9)
    sp = spectrum_of(x)
    y, report = reconstruct(sp, ReconstructionConfig(1e-9))
    assert all(s.case == 1 for s in report.steps)
    assert report.total_samples == 2**9
    np.testing.assert_allclose(y, threshold_clip(ifft(sp.values), 1e-9), atol=1e-10)


@pytest.mark.parametrize("seed", range(10))
def test_sum_conservation_each_level(seed):
    rng = np.random.default_rng([2, seed])
    x = rng.uniform(0, 1, 256) * (rng.random(256) < 0.3)
    total = x.sum()
    sp = spectrum_of(x)
    xj = threshold_clip(ifft(sp.sample([0])), 0.0)
    for j in range(8):
        xj = case1_step(xj, sp, 0.0)
        assert xj.sum() == pytest.approx(total, rel=1e-9)
        assert np.all(xj >= 0)


@pytest.mark.parametrize("seed", range(20))
def test_sample_bound_and_case1_confinement(seed):
    rng = np.random.default_rng([3, seed])
    big_j = int(rng.integers(4, 16))
    n = 2**big_j
    m = int(rng.integers(1, min(n, 200) + 1))
    x = np.zeros(n)
    idx = (int(rng.integers(n)) + np.arange(m)) % n
    x[idx] = rng.uniform(0, 10, m)
    x[idx[0]] = x[idx[-1]] = 5.0
    L = int(np.ceil(np.log2(m))) if m > 1 else 0
    sp = LazySpectrum(x)
    y, report = reconstruct(sp, ReconstructionConfig(1e-9 * x.sum()))
    assert np.max(np.abs(y - x)) < 1e-8
    assert report.total_samples == sp.query_count
    assert report.total_samples <= 2 ** (L + 1) + (big_j - L) * 2**L
    for s in report.steps:
        if s.case == 1:
            assert 2 ** (s.level - 1) < m
        else:
            assert s.m <= 2 ** (s.level - 1) and s.L <= s.level - 1


def test_start_level_skips_steps(demo_x):
    y, report = reconstruct(spectrum_of(demo_x), ReconstructionConfig(1e-6, start_level=4))
    assert np.max(np.abs(y - demo_x)) < 1e-9
    assert [s.level for s in report.steps] == [4, 5, 6, 7]


def test_config_validation():
    with pytest.raises(ValueError):
        ReconstructionConfig(-1.0)
    with pytest.raises(ValueError):
        ReconstructionConfig(0.0, -1)
    with pytest.raises(ValueError):
        reconstruct(spectrum_of(SMALL), ReconstructionConfig(0.0, 4))
    with pytest.raises(ValueError):
        DenseSpectrum(np.ones(6))
