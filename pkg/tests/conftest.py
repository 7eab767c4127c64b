import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("repo", deadline=None, derandomize=True, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

SX = np.array([[0, 1], [1, 0]], dtype=complex)


def local_op(g):
    """Positive square root of 1/2 + g sigma_x."""
    w, v = np.linalg.eigh(0.5 * np.eye(2) + g * SX)
    return v @ np.diag(np.sqrt(w)) @ v.conj().T


def ghz_vector(g, r, phi):
    """Normalized amplitudes of g^1 g^2 g^3 (P_z x 1 x 1)|GHZ>."""
    z = r * np.exp(1j * phi)
    psi = np.zeros(8, dtype=complex)
    psi[0], psi[7] = z, 1 / z
    op = np.kron(np.kron(local_op(g[0]), local_op(g[1])), local_op(g[2]))
    psi = op @ psi
    return psi / np.linalg.norm(psi)


def w_vector(x):
    psi = np.zeros(8)
    psi[0b000], psi[0b100], psi[0b010], psi[0b001] = np.sqrt(x)
    return psi


def reduced(psi, party):
    t = np.moveaxis(psi.reshape(2, 2, 2), party, 0).reshape(2, 4)
    return t @ t.conj().T


def sq_concurrences(psi):
    """C_i = 4 det(rho_i) straight from the state vector."""
    return tuple(float(4 * np.real(np.linalg.det(reduced(psi, i)))) for i in range(3))


def min_eig2(psi):
    """Twice the smallest eigenvalue of each single-party reduced state."""
    return tuple(float(2 * np.linalg.eigvalsh(reduced(psi, i))[0]) for i in range(3))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def phi_choices():
    return (0.0, math.pi / 4, math.pi / 2)


# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
