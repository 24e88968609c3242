import numpy as np
import pytest

from fraclmi.model import FosModel, is_stable

EXAMPLE1 = dict(A=[[-12.1, 2.3], [2.37, -16.2]], B=[[-2.0], [1.2]], C=[[1.5, 1.9]],
                D=[[0.8]], nu=0.6)
EXAMPLE2 = dict(A=[[-1.9, 1.3], [0.6, -1.5]], B=[[-1.8], [2.7]], C=[[2.2, 3.1]],
                D=[[0.2]], nu=0.7)


def example1():
    return FosModel(**EXAMPLE1)


def example2():
    return FosModel(**EXAMPLE2)


def random_hermitian(rng, n, scale=1.0):
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (X + X.conj().T) / 2


def random_stable(rng, nu, n=None, m=1, p=1, spread=3.0):
    """Random system whose spectrum lies strictly inside the stability sector."""
    n = n or int(rng.integers(1, 4))
    while True:
        A = rng.standard_normal((n, n)) * spread / np.sqrt(n)
        lam = np.linalg.eigvals(A)
        # shift left until every eigenvalue clears |arg| > nu*pi/2 comfortably
        shift = 0.0
        for z in lam:
            edge = min(0.5 * np.pi * nu + 0.15, np.pi - 1e-3)
            if abs(np.angle(z)) <= edge or abs(z) < 1e-3:
                need = z.real + abs(z.imag) / np.tan(edge) if np.tan(edge) > 0 else z.real
                shift = max(shift, need + 0.5)
        A = A - shift * np.eye(n)
        sys = FosModel(A, rng.standard_normal((n, m)), rng.standard_normal((p, n)),
                       0.5 * rng.standard_normal((p, m)), nu)
        if is_stable(sys).stable:
            return sys


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
