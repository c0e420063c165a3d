import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays


def random_density_matrix(rng, dim=4):
    rank = rng.integers(1, dim + 1)
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_amplitude(rng):
    """Uniform point in the closed unit disk."""
    r = np.sqrt(rng.uniform())
    return r * np.exp(2j * np.pi * rng.uniform())


@st.composite
def density_matrices(draw, dim=4):
    re = draw(arrays(np.float64, (dim, dim), elements=st.floats(-1, 1)))
    im = draw(arrays(np.float64, (dim, dim), elements=st.floats(-1, 1)))
    a = re + 1j * im
    rho = a @ a.conj().T + 1e-3 * np.eye(dim)
    return rho / np.trace(rho).real


amplitudes = st.builds(
    lambda r, a: r * np.exp(1j * a),
    st.floats(0.0, 1.0),
    st.floats(0.0, 2 * np.pi),
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE = []


def record_criterion(label, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {label}: {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
