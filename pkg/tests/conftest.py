import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def smooth_random(grid, rng, kmax=None, amplitude=1.0):
    """Random trigonometric polynomial with 1/k^2 decay, band-limited to ``kmax``."""
    kmax = grid.n // 4 if kmax is None else kmax
    c = np.zeros(grid.n // 2 + 1, dtype=complex)
    k = np.arange(1, kmax + 1)
    c[1 : kmax + 1] = (rng.standard_normal(kmax) + 1j * rng.standard_normal(kmax)) / k**2
    f = np.fft.irfft(c, n=grid.n)
    return amplitude * f / np.max(np.abs(f))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
