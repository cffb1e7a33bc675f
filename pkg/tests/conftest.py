import numpy as np
import pytest

_ACCEPTANCE = {}


class DiagonalProblem:
    """``u' + diag(lam) u = g(u)`` with an explicit exponential; small and exact."""

    def __init__(self, lam, g=None, phi1=True):
        self.lam = np.asarray(lam, dtype=complex)
        self.dim = len(self.lam)
        self.g = g if g is not None else (lambda v: np.zeros_like(v))
        if not phi1:
            self.apply_phi1 = None

    def apply_propagator(self, t, v):
        return np.exp(-t * self.lam) * v

    def apply_g(self, v):
        return self.g(v)

    def apply_phi1(self, t, v):
        from lawsonlab.integrators import phi1
        return phi1(-t * self.lam) * v


@pytest.fixture
def diagonal_problem():
    return DiagonalProblem


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
