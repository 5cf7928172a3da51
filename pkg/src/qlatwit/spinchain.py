"""Qubit-chain builders: Pauli strings, three-site correlators, the
neighbor phase gate, cluster states, and Hamiltonian evolution.

The chain is open: the three-site correlator at the ends drops the
out-of-range z factor, and the phase-gate exponent couples sites 1..N-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .qcore import (
    HilbertSpace,
    LinearOperator,
    PureState,
    dim_cap,
    matrix_exponential,
)

SIGMA = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_IDENTITY2 = np.eye(2, dtype=complex)

_QUBIT_EIGENSTATES = {
    ("x", +1): np.array([1, 1], dtype=complex) / np.sqrt(2),
    ("x", -1): np.array([1, -1], dtype=complex) / np.sqrt(2),
    ("y", +1): np.array([1, 1j], dtype=complex) / np.sqrt(2),
    ("y", -1): np.array([1, -1j], dtype=complex) / np.sqrt(2),
    ("z", +1): np.array([1, 0], dtype=complex),
    ("z", -1): np.array([0, 1], dtype=complex),
}


@dataclass(frozen=True)
class ChainSpec:
    """An open chain of ``n_sites`` qubits."""

    n_sites: int
    boundary: str = "open"

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError("a chain needs at least 2 sites")
        if self.boundary != "open":
            raise ValueError("only open boundaries are supported")

    def space(self) -> HilbertSpace:
        return HilbertSpace((2,) * self.n_sites, kind="qubit")


@dataclass(frozen=True)
class ClusterSpec:
    """Sign pattern (+1/-1 per site) selecting one cluster-state sector."""

    chain: ChainSpec
    lambdas: tuple[int, ...]

    def __post_init__(self):
        if len(self.lambdas) != self.chain.n_sites:
            raise ValueError("need one sign per site")
        if any(lam not in (-1, +1) for lam in self.lambdas):
            raise ValueError("signs must be +1 or -1")


def qubit_space(chain: ChainSpec) -> HilbertSpace:
    return chain.space()


def _apply_single_site(vec: np.ndarray, dims: tuple[int, ...], site: int, gate: np.ndarray):
    t = vec.reshape(dims)
    t = np.tensordot(gate, t, axes=([1], [site - 1]))
    t = np.moveaxis(t, 0, site - 1)
    return np.ascontiguousarray(t).reshape(-1)


def pauli_string(chain: ChainSpec, factors: Mapping[int, str]) -> LinearOperator:
    """Product of single-site Paulis, identity on unlisted sites."""
    space = chain.space()
    for site in factors:
        space.check_site(site)
    mat = np.ones((1, 1), dtype=complex)
    for site in range(1, chain.n_sites + 1):
        local = SIGMA[factors[site]] if site in factors else _IDENTITY2
        mat = np.kron(mat, local)
    return LinearOperator(space, mat, hermitian_hint=True)


def pauli(chain: ChainSpec, site: int, axis: str) -> LinearOperator:
    """Single-site Pauli embedded in the chain."""
    if axis not in SIGMA:
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    return pauli_string(chain, {site: axis})


def _tilde_factors(chain: ChainSpec, k: int) -> dict[int, str]:
    # z factors outside the chain are dropped (open ends).
    chain.space().check_site(k)
    factors = {k: "x"}
    if k > 1:
        factors[k - 1] = "z"
    if k < chain.n_sites:
        factors[k + 1] = "z"
    return factors


def tilde_sigma_x(chain: ChainSpec, k: int) -> LinearOperator:
    """Three-site correlator: z on site k-1, x on site k, z on site k+1."""
    return pauli_string(chain, _tilde_factors(chain, k))


def collective_spin(chain: ChainSpec, axis: str) -> LinearOperator:
    """Collective angular momentum component, sum over sites of sigma/2."""
    if axis not in SIGMA:
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    space = chain.space()
    mat = np.zeros((space.dim, space.dim), dtype=complex)
    for site in range(1, chain.n_sites + 1):
        mat += pauli_string(chain, {site: axis}).matrix
    return LinearOperator(space, mat / 2, hermitian_hint=True)


def phase_gate_diagonal(chain: ChainSpec) -> np.ndarray:
    """Diagonal of the neighbor phase gate in the z basis.

    The generator (pi/4) * sum_k (1 - z_k)(1 - z_{k+1}) gives each basis
    string a phase pi times its count of adjacent 1-pairs, so every diagonal
    entry is +1 or -1 and the gate is both Hermitian and an involution.
    """
    n = chain.n_sites
    d = np.empty(2**n)
    for i in range(2**n):
        bits = [(i >> (n - 1 - s)) & 1 for s in range(n)]
        pairs = sum(bits[j] & bits[j + 1] for j in range(n - 1))
        d[i] = -1.0 if pairs % 2 else 1.0
    return d


def phase_gate_unitary(chain: ChainSpec) -> LinearOperator:
    if chain.space().dim > dim_cap():
        raise ValueError(f"dimension {chain.space().dim} exceeds cap {dim_cap()}")
    return LinearOperator(
        chain.space(), np.diag(phase_gate_diagonal(chain)).astype(complex), hermitian_hint=True
    )


def conjugate_by_phase_gate(chain: ChainSpec, k: int) -> LinearOperator:
    """U sigma_x^(k) U for the neighbor phase gate U (an involution).

    Equals the three-site correlator tilde_sigma_x(chain, k); that equality
    is exercised by the test suite rather than assumed here.
    """
    d = phase_gate_diagonal(chain)
    sx = pauli(chain, k, "x").matrix
    mat = d[:, None] * sx * d[None, :]
    return LinearOperator(chain.space(), mat, hermitian_hint=True)


def basis_state(chain: ChainSpec, bits: Sequence[int]) -> PureState:
    """Computational-basis state; bits[0] is site 1."""
    if len(bits) != chain.n_sites:
        raise ValueError("need one bit per site")
    idx = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError("bits must be 0 or 1")
        idx = (idx << 1) | b
    v = np.zeros(chain.space().dim, dtype=complex)
    v[idx] = 1.0
    return PureState(chain.space(), v)


def product_state(site_specs: Sequence[tuple[str, int]]) -> PureState:
    """Tensor product of single-qubit eigenstates, one (axis, sign) per site."""
    if len(site_specs) < 2:
        raise ValueError("need at least 2 sites")
    v = np.ones(1, dtype=complex)
    for axis, sign in site_specs:
        if (axis, sign) not in _QUBIT_EIGENSTATES:
            raise ValueError(f"bad site spec ({axis!r}, {sign!r})")
        v = np.kron(v, _QUBIT_EIGENSTATES[(axis, sign)])
    chain = ChainSpec(len(site_specs))
    return PureState(chain.space(), v)


def plus_chain(chain: ChainSpec) -> PureState:
    """All sites in the +1 eigenstate of sigma_x."""
    return product_state([("x", +1)] * chain.n_sites)


def _apply_tilde(vec: np.ndarray, chain: ChainSpec, k: int) -> np.ndarray:
    dims = chain.space().dims
    out = vec
    for site, axis in _tilde_factors(chain, k).items():
        out = _apply_single_site(out, dims, site, SIGMA[axis])
    return out


def cluster_state(spec: ClusterSpec) -> PureState:
    """Simultaneous eigenstate of the three-site correlators.

    Built by projecting a reference vector onto the joint eigenspace with
    (1 + lambda_k * correlator_k)/2 for every k.  The sector is
    one-dimensional for every sign pattern, so any reference with a nonzero
    component works; a few fallbacks guard against an unlucky choice.
    """
    chain = spec.chain
    space = chain.space()
    if space.dim > dim_cap():
        raise ValueError(f"dimension {space.dim} exceeds cap {dim_cap()}")
    references = []
    e0 = np.zeros(space.dim, dtype=complex)
    e0[0] = 1.0
    references.append(e0)
    references.append(np.ones(space.dim, dtype=complex) / np.sqrt(space.dim))
    rng = np.random.default_rng(7)
    references.append(
        (rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)) / np.sqrt(space.dim)
    )
    for ref in references:
        v = ref
        for k in range(1, chain.n_sites + 1):
            v = 0.5 * (v + spec.lambdas[k - 1] * _apply_tilde(v, chain, k))
        norm = np.linalg.norm(v)
        if norm > 1e-7:
            return PureState(space, v / norm)
    raise ValueError("projector annihilated 3 independent reference vectors")


def evolve(h: LinearOperator, t: float, state: PureState) -> PureState:
    """exp(-i h t) applied to the state, for Hermitian h."""
    if not h.hermitian_hint:
        raise ValueError("evolve requires a Hermitian generator")
    if h.space.dims != state.space.dims:
        raise ValueError("generator and state dimensions differ")
    u = matrix_exponential(h, -1j * t)
    return PureState(state.space, u.matrix @ state.amplitudes)
