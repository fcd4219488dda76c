"""Text formats for spectra, sparse signals, reports and benchmark tables.

Spectrum::

    shortfft-spectrum v1, N=8
    0,11.0,0.0
    ...

Signal (nonzero entries only)::

    shortfft-signal v1, N=8
    0,1.0
"""
from __future__ import annotations

import csv
import io
import json
import os
import re
import tempfile
from pathlib import Path

import numpy as np

from .transforms import is_power_of_two

SPECTRUM_MAGIC = "shortfft-spectrum v1"
SIGNAL_MAGIC = "shortfft-signal v1"
BENCH_COLUMNS = (
    "snr_db",
    "mean_err_sparse",
    "median_err_sparse",
    "mean_err_ifft",
    "mean_case1",
    "mean_case2",
    "mean_samples",
    "support_exact_rate",
)

_HEADER = re.compile(r"^(?P<magic>shortfft-\w+ v\d+),\s*N=(?P<n>\d+)\s*$")


class FormatError(ValueError):
    """Malformed input file; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None, path=None):
        self.line = line
        self.path = path
        where = f"{path or '<input>'}" + (f":{line}" if line is not None else "")
        super().__init__(f"{where}: {message}")


def atomic_write_text(path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_header(line: str, magic: str, path) -> int:
    match = _HEADER.match(line.strip())
    if not match or match["magic"] != magic:
        raise FormatError(f"expected header '{magic}, N=<power of two>'", 1, path)
    n = int(match["n"])
    if not is_power_of_two(n):
        raise FormatError(f"N={n} is not a power of two", 1, path)
    return n


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines()[1:], start=2):
        if raw.strip():
            yield lineno, raw


def format_spectrum(values) -> str:
    values = np.asarray(values, dtype=np.complex128)
    out = [f"{SPECTRUM_MAGIC}, N={values.size}"]
    out += [f"{k},{v.real!r},{v.imag!r}" for k, v in enumerate(values.tolist())]
    return "\n".join(out) + "\n"


def parse_spectrum(text: str, path=None) -> np.ndarray:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty file", 1, path)
    n = _parse_header(lines[0], SPECTRUM_MAGIC, path)
    values = np.empty(n, dtype=np.complex128)
    expected = 0
    for lineno, raw in _data_lines(text):
        fields = raw.split(",")
        if len(fields) != 3:
            raise FormatError(f"expected 'k,re,im', got {raw!r}", lineno, path)
        try:
            k, re_, im = int(fields[0]), float(fields[1]), float(fields[2])
        except ValueError:
            raise FormatError(f"unparseable entry {raw!r}", lineno, path) from None
        if k != expected:
            raise FormatError(f"expected index {expected}, got {k}", lineno, path)
        if expected >= n:
            raise FormatError(f"more than N={n} entries", lineno, path)
        values[k] = complex(re_, im)
        expected += 1
    if expected != n:
        raise FormatError(f"expected {n} entries, found {expected}", len(lines), path)
    return values


def format_signal(x) -> str:
    x = np.asarray(x, dtype=np.float64)
    out = [f"{SIGNAL_MAGIC}, N={x.size}"]
    vals = x.tolist()
    out += [f"{k},{vals[k]!r}" for k in np.flatnonzero(x > 0).tolist()]
    return "\n".join(out) + "\n"


def parse_signal(text: str, path=None) -> np.ndarray:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty file", 1, path)
    n = _parse_header(lines[0], SIGNAL_MAGIC, path)
    x = np.zeros(n)
    last = -1
    for lineno, raw in _data_lines(text):
        fields = raw.split(",")
        if len(fields) != 2:
            raise FormatError(f"expected 'k,value', got {raw!r}", lineno, path)
        try:
            k, value = int(fields[0]), float(fields[1])
        except ValueError:
            raise FormatError(f"unparseable entry {raw!r}", lineno, path) from None
        if not last < k < n:
            raise FormatError(f"index {k} not ascending within [0, {n})", lineno, path)
        if not value > 0:
            raise FormatError(f"value {value} is not positive", lineno, path)
        x[k] = value
        last = k
    return x


def read_spectrum(path) -> np.ndarray:
    return parse_spectrum(Path(path).read_text(), path)


def read_signal(path) -> np.ndarray:
    return parse_signal(Path(path).read_text(), path)


def format_report(report, n: int) -> str:
    doc = {"format": "shortfft-report v1", "N": n, **report.as_dict()}
    return json.dumps(doc, indent=2) + "\n"


def format_bench(rows, metadata: dict) -> str:
    buf = io.StringIO()
    for key, value in metadata.items():
        buf.write(f"# {key}={value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    for row in rows:
        d = row.as_dict()
        writer.writerow([repr(float(d[c])) for c in BENCH_COLUMNS])
    return buf.getvalue()


def parse_bench(text: str) -> tuple[dict, list[dict]]:
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
        elif line.strip():
            body.append(line)
    rows = [{k: float(v) for k, v in r.items()} for r in csv.DictReader(body)]
    return meta, rows
