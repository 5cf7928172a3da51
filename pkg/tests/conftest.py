"""Shared independent oracles: dense operator builders written from scratch
here, so expected values never come from the code under test."""

import numpy as np
import pytest

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
ID2 = np.eye(2, dtype=complex)
PAULIS = {"x": SX, "y": SY, "z": SZ}


def kron_all(mats):
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def oracle_site_pauli(axis, site, n):
    """Single-site Pauli on an n-qubit chain, site 1 most significant."""
    return kron_all([PAULIS[axis] if k == site else ID2 for k in range(1, n + 1)])


def oracle_tilde(k, n):
    """z(k-1) x(k) z(k+1) with identity past the chain ends."""
    op = oracle_site_pauli("x", k, n)
    if k > 1:
        op = oracle_site_pauli("z", k - 1, n) @ op
    if k < n:
        op = op @ oracle_site_pauli("z", k + 1, n)
    return op


def oracle_collective(axis, n):
    return sum(oracle_site_pauli(axis, k, n) for k in range(1, n + 1)) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
