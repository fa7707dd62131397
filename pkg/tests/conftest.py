import numpy as np
import pytest

from corona_disc import Polynomial, SolveConfig, build_grid, solve_corona, validate_corona


@pytest.fixture(scope="session")
def baseline_specs():
    """f1 = z - 0.5, f2 = z + 0.5: delta = 1 on [-0.5, 0.5], eta = 1."""
    return Polynomial((-0.5, 1.0)), Polynomial((0.5, 1.0))


def baseline_problem(n, margin=0.0):
    f1, f2 = Polynomial((-0.5, 1.0)), Polynomial((0.5, 1.0))
    return validate_corona(f1, f2, build_grid(n, margin))


@pytest.fixture(scope="session")
def baseline_solutions():
    """End-to-end baseline solved once per session at n = 64, 128, 256."""
    out = {}
    for n in (64, 128, 256):
        out[n] = solve_corona(baseline_problem(n), SolveConfig(n=n))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def smooth_field(grid, rng, terms=4):
    """Random trigonometric field exp(i a.x) sums; smooth on the whole plane."""
    z = grid.centers
    out = np.zeros(z.size, dtype=complex)
    for _ in range(terms):
        kx, ky = rng.uniform(-3, 3, size=2)
        c = rng.normal() + 1j * rng.normal()
        out += c * np.exp(1j * (kx * z.real + ky * z.imag))
    return out


# -- acceptance summary ---------------------------------------------------------

ACCEPTANCE_LINES = []
SESSION_START = []


def pytest_sessionstart(session):
    import time

    SESSION_START.append(time.perf_counter())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
