"""Shared constructors for the test suite."""

import numpy as np
import pytest

from weakmeas import FactorLayout, Operator, StateVector

SZ = np.diag([1.0, -1.0]).astype(complex)
SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def op(matrix, *dims):
    """Operator over the given factor dims (default: one factor of matching size)."""
    matrix = np.asarray(matrix, dtype=complex)
    if not dims:
        dims = (matrix.shape[0],)
    return Operator(FactorLayout(tuple(dims)), matrix)


def state(amps, *dims):
    amps = np.asarray(amps, dtype=complex)
    if not dims:
        dims = (amps.size,)
    return StateVector(FactorLayout(tuple(dims)), amps)


def random_hermitian(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (m + m.conj().T)


def random_state(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def coherent_amplitudes(alpha, dim):
    """Truncated coherent-state amplitudes exp(-|a|^2/2) a^n / sqrt(n!)."""
    n = np.arange(dim)
    log_fact = np.cumsum(np.concatenate([[0.0], np.log(np.arange(1, dim))]))
    amps = np.exp(-0.5 * np.abs(alpha) ** 2) * (
        np.power(complex(alpha), n) / np.exp(0.5 * log_fact)
    )
    return amps.astype(complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
