import numpy as np
import pytest


def brute_periodize(x, j):
    """Literal double loop over residue classes; independent of the reshape path."""
    n = len(x)
    period = 2**j
    out = [0.0] * period
    for k in range(period):
        for ell in range(n // period):
            out[k] += float(x[k + period * ell])
    return np.array(out)


def brute_support(values, threshold):
    """Enumerate every (mu, m) and return the first minimal covering interval."""
    n = len(values)
    hits = {k for k in range(n) if values[k] >= threshold and values[k] > 0}
    if not hits:
        return 0, 0
    for m in range(1, n + 1):
        for mu in range(n):
            if hits <= {(mu + ell) % n for ell in range(m)}:
                return mu, m
    raise AssertionError("unreachable")


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def demo_x():
    x = np.zeros(256)
    x[[50, 53, 54, 179, 180, 181]] = [5, 8, 1, 2, 7, 4]
    return x
