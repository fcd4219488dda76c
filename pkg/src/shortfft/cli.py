"""Command line front end: ``shortfft synth | reconstruct | bench | verify``."""
from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import CONVENTION, __version__
from .fileio import (
    FormatError,
    atomic_write_text,
    format_bench,
    format_report,
    format_signal,
    format_spectrum,
    read_spectrum,
)
from .noise import NoiseSpec, ThresholdRule, add_uniform_noise, random_short_support, run_sweep
from .sparse_ifft import ContractError, DenseSpectrum, ReconstructionConfig, reconstruct
from .transforms import fft, is_power_of_two
from . import verify as _verify

EXIT_USAGE = 2
EXIT_CONTRACT = 3
DEFAULT_RELATIVE_THRESHOLD = 1e-6


class UsageError(ValueError):
    pass


def default_seed() -> int:
    raw = os.environ.get("SHORTFFT_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"SHORTFFT_SEED={raw!r} is not an integer") from None


def parse_entries(text: str, n: int) -> np.ndarray:
    """``"50:5,53:8"`` -> dense vector of length ``n``."""
    x = np.zeros(n)
    for item in filter(None, (s.strip() for s in text.split(","))):
        k_text, sep, v_text = item.partition(":")
        try:
            k, v = int(k_text), float(v_text)
        except ValueError:
            raise UsageError(f"bad entry {item!r}, expected index:value") from None
        if not sep or not 0 <= k < n:
            raise UsageError(f"entry {item!r} has index outside [0, {n})")
        if not v >= 0 or not math.isfinite(v):
            raise UsageError(f"entry {item!r} must be finite and nonnegative")
        x[k] = v
    return x


def parse_snr_list(text: str) -> list[float]:
    """Comma list of values or inclusive ``start:step:stop`` ranges."""
    levels: list[float] = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        parts = item.split(":")
        try:
            nums = [float(p) for p in parts]
        except ValueError:
            raise UsageError(f"bad SNR item {item!r}") from None
        if len(nums) == 1:
            levels.append(nums[0])
        elif len(nums) == 3:
            start, step, stop = nums
            if step <= 0 or stop < start:
                raise UsageError(f"bad SNR range {item!r}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            levels.extend(start + i * step for i in range(count))
        else:
            raise UsageError(f"bad SNR item {item!r}")
    if not levels or not all(math.isfinite(v) for v in levels):
        raise UsageError("SNR list is empty or not finite")
    return levels


def _check_n(n: int) -> int:
    if not is_power_of_two(n) or n < 2:
        raise UsageError(f"N={n} must be a power of two >= 2")
    return n


def cmd_synth(args) -> int:
    n = _check_n(args.n)
    if (args.entries is None) == (args.m is None):
        raise UsageError("give exactly one of --entries and --m")
    if args.entries is not None:
        x = parse_entries(args.entries, n)
    else:
        if not 1 <= args.m <= n:
            raise UsageError(f"--m must lie in [1, {n}]")
        x = random_short_support(np.random.default_rng(args.seed), n, args.m, args.max_value)
    xhat = fft(x)
    if args.snr is not None:
        xhat = add_uniform_noise(xhat, NoiseSpec(args.snr, [args.seed, 1])).values
    atomic_write_text(args.signal, format_signal(x))
    atomic_write_text(args.spectrum, format_spectrum(xhat))
    print(f"xhat0={float(xhat[0].real)!r}")
    return 0


def cmd_reconstruct(args) -> int:
    values = read_spectrum(args.spectrum)
    threshold = args.threshold
    if threshold is None:
        threshold = DEFAULT_RELATIVE_THRESHOLD * abs(values[0])
    if threshold < 0:
        raise UsageError("--threshold must be nonnegative")
    spectrum = DenseSpectrum(values)
    if not 0 <= args.start_level <= spectrum.levels:
        raise UsageError(f"--start-level must lie in [0, {spectrum.levels}]")
    x, report = reconstruct(spectrum, ReconstructionConfig(threshold, args.start_level))
    atomic_write_text(args.out, format_signal(x))
    if args.report:
        atomic_write_text(args.report, format_report(report, spectrum.n))
    fs = report.final_support
    print(
        f"N={spectrum.n} threshold={threshold:g} steps={len(report.steps)} "
        f"case1={report.case1_count} case2={report.case2_count} "
        f"samples={report.total_samples} support=(mu={fs.first_index}, m={fs.length})"
    )
    return 0


def cmd_bench(args) -> int:
    n = _check_n(args.n)
    if not 1 <= args.m <= n:
        raise UsageError(f"--m must lie in [1, {n}]")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    levels = parse_snr_list(args.snr_list)
    try:
        rule = ThresholdRule.parse(args.t_rule)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    seed = default_seed() if args.seed is None else args.seed
    rows = run_sweep(levels, args.trials, n, args.m, rule, seed, args.start_level,
                     args.noise_shape)
    meta = {
        "shortfft": __version__,
        "n": n,
        "m": args.m,
        "trials": args.trials,
        "seed": seed,
        "snr_list": ",".join(f"{v:g}" for v in levels),
        "t_rule": str(rule),
        "start_level": args.start_level,
        "noise": f"uniform-{args.noise_shape}",
    }
    text = format_bench(rows, meta)
    if args.out:
        atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    if args.max_j < 1:
        raise UsageError("--max-j must be >= 1")
    results = _verify.run_all(args.max_j, seed)
    for r in results:
        print(f"{r.name:<22} {'PASS' if r.ok else 'FAIL'}  passed={r.passed} failed={r.failed}")
    return 0 if all(r.ok for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shortfft", description=__doc__)
    parser.add_argument("--version", action="version",
                        version=f"shortfft {__version__} ({CONVENTION})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a signal file and its spectrum")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--entries", help="explicit nonzeros, e.g. 50:5,53:8")
    p.add_argument("--m", type=int, help="random support of this length")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-value", type=float, default=10.0)
    p.add_argument("--snr", type=float, default=None, help="add uniform noise at this SNR (dB)")
    p.add_argument("--signal", default="signal.txt")
    p.add_argument("--spectrum", default="spectrum.txt")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("reconstruct", help="recover a signal from a spectrum file")
    p.add_argument("spectrum")
    p.add_argument("--threshold", type=float, default=None,
                   help=f"default {DEFAULT_RELATIVE_THRESHOLD:g} * |xhat_0|")
    p.add_argument("--start-level", type=int, default=0)
    p.add_argument("--out", default="recovered.txt")
    p.add_argument("--report", default=None, help="JSON report path")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("bench", help="SNR sweep against a plain inverse FFT")
    p.add_argument("--n", type=int, default=1 << 15)
    p.add_argument("--m", type=int, default=15)
    p.add_argument("--snr-list", default="10:5:50")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--t-rule", default="delta:0.3",
                   help="delta:<c> for T=c*delta, const:<T> for a fixed T")
    p.add_argument("--start-level", type=int, default=0)
    p.add_argument("--noise-shape", choices=("square", "real"), default="square")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="run the randomized property suites")
    p.add_argument("--max-j", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", 0) is None and args.command == "synth":
        try:
            args.seed = default_seed()
        except UsageError as exc:
            print(f"shortfft: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, FormatError, OSError) as exc:
        print(f"shortfft: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ContractError as exc:
        print(f"shortfft: internal contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
