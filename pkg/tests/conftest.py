import numpy as np
import pytest
from hypothesis import strategies as st

TOL = 1e-10


def random_unitary(n, rng):
    """Haar-ish unitary from the QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def basis(index, n):
    v = np.zeros(n, dtype=complex)
    v[index] = 1.0
    return v


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


dims = st.integers(min_value=2, max_value=16)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
