"""Two-mode bosonic Fock lattices with Schwinger angular momentum operators.

Each lattice site holds two bosonic modes (a, b) truncated at ``n_max`` total
particles; a site with n particles behaves as a spin of length n/2.  The
Schwinger operators conserve the per-site particle number, so they are built
annihilation-first (a^dag b, b^dag a): no intermediate state ever leaves the
truncated basis and the spin algebra stays exact on every occupation shell.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .qcore import (
    HilbertSpace,
    LinearOperator,
    PureState,
    dim_cap,
)

DEFAULT_SITE_CUTOFF = 2

SPIN_UP = (1, 0)
SPIN_DOWN = (0, 1)
EMPTY = (0, 0)


@dataclass(frozen=True)
class SiteFockSpace:
    """Single-site two-mode Fock space with at most ``n_max`` particles.

    Basis states |n_a, n_b> are ordered by total occupation, then by
    decreasing n_a, so each fixed-total shell reads top spin down:
    (0,0); (1,0), (0,1); (2,0), (1,1), (0,2); ...
    """

    n_max: int

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("site cutoff must be at least 1")

    @property
    def dim(self) -> int:
        return (self.n_max + 1) * (self.n_max + 2) // 2

    def basis(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (na, total - na)
            for total in range(self.n_max + 1)
            for na in range(total, -1, -1)
        )

    def index(self, na: int, nb: int) -> int:
        if na < 0 or nb < 0 or na + nb > self.n_max:
            raise ValueError(f"occupation ({na},{nb}) outside cutoff {self.n_max}")
        total = na + nb
        return total * (total + 1) // 2 + (total - na)

    def space(self) -> HilbertSpace:
        return HilbertSpace((self.dim,), kind="fock", fock_cutoff=self.n_max)


@dataclass(frozen=True)
class FockLatticeSpec:
    """Chain of ``n_sites`` identical two-mode Fock sites."""

    n_sites: int
    site_space: SiteFockSpace

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("lattice needs at least one site")
        if self.site_space.dim**self.n_sites > dim_cap():
            raise ValueError(
                f"lattice dimension {self.site_space.dim ** self.n_sites} exceeds cap {dim_cap()}"
            )

    def space(self) -> HilbertSpace:
        return HilbertSpace(
            (self.site_space.dim,) * self.n_sites,
            kind="fock",
            fock_cutoff=self.site_space.n_max,
        )


@lru_cache(maxsize=32)
def _ladder_matrices(n_max: int) -> dict[str, np.ndarray]:
    space = SiteFockSpace(n_max)
    d = space.dim
    a = np.zeros((d, d), dtype=complex)
    b = np.zeros((d, d), dtype=complex)
    for na, nb in space.basis():
        col = space.index(na, nb)
        if na >= 1:
            a[space.index(na - 1, nb), col] = np.sqrt(na)
        if nb >= 1:
            b[space.index(na, nb - 1), col] = np.sqrt(nb)
    return {"a": a, "b": b}


def mode_operator(space: SiteFockSpace, mode: str, kind: str) -> LinearOperator:
    """Truncated ladder operator; creation beyond the cutoff maps to zero."""
    if mode not in ("a", "b"):
        raise ValueError(f"mode must be 'a' or 'b', got {mode!r}")
    if kind not in ("annihilate", "create"):
        raise ValueError(f"kind must be 'annihilate' or 'create', got {kind!r}")
    m = _ladder_matrices(space.n_max)[mode]
    if kind == "create":
        m = m.conj().T
    return LinearOperator(space.space(), m)


def _schwinger_matrices(space: SiteFockSpace) -> dict[str, np.ndarray]:
    lad = _ladder_matrices(space.n_max)
    a, b = lad["a"], lad["b"]
    ad, bd = a.conj().T, b.conj().T
    # annihilate-before-create keeps every term inside the truncated basis
    return {
        "x": (ad @ b + bd @ a) / 2,
        "y": 1j * (bd @ a - ad @ b) / 2,
        "z": (ad @ a - bd @ b) / 2,
    }


def schwinger_j(space: SiteFockSpace, axis: str) -> LinearOperator:
    """Single-site spin component built from the two bosonic modes."""
    if axis not in ("x", "y", "z"):
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    return LinearOperator(space.space(), _schwinger_matrices(space)[axis], hermitian_hint=True)


def site_number_operator(space: SiteFockSpace) -> LinearOperator:
    lad = _ladder_matrices(space.n_max)
    a, b = lad["a"], lad["b"]
    return LinearOperator(
        space.space(), a.conj().T @ a + b.conj().T @ b, hermitian_hint=True
    )


def _embed(lattice: FockLatticeSpec, site_matrix: np.ndarray, k: int) -> np.ndarray:
    d = lattice.site_space.dim
    eye = np.eye(d, dtype=complex)
    mat = np.ones((1, 1), dtype=complex)
    for j in range(1, lattice.n_sites + 1):
        mat = np.kron(mat, site_matrix if j == k else eye)
    return mat


def collective_J_fock(lattice: FockLatticeSpec, axis: str) -> LinearOperator:
    """Sum of the single-site Schwinger components over the lattice."""
    local = schwinger_j(lattice.site_space, axis).matrix
    space = lattice.space()
    mat = np.zeros((space.dim, space.dim), dtype=complex)
    for k in range(1, lattice.n_sites + 1):
        mat += _embed(lattice, local, k)
    return LinearOperator(space, mat, hermitian_hint=True)


def lattice_number_operator(lattice: FockLatticeSpec) -> LinearOperator:
    local = site_number_operator(lattice.site_space).matrix
    space = lattice.space()
    mat = np.zeros((space.dim, space.dim), dtype=complex)
    for k in range(1, lattice.n_sites + 1):
        mat += _embed(lattice, local, k)
    return LinearOperator(space, mat, hermitian_hint=True)


def maximal_angular_momentum_check(space: SiteFockSpace) -> float:
    """Operator-norm residual of j^2 - (N/2)(1 + N/2) on the full site space.

    Zero (to round-off) because every fixed-occupation shell of a two-mode
    site carries the full spin-n/2 representation.
    """
    j = _schwinger_matrices(space)
    lad = _ladder_matrices(space.n_max)
    a, b = lad["a"], lad["b"]
    nhat = a.conj().T @ a + b.conj().T @ b
    eye = np.eye(space.dim, dtype=complex)
    residual = (
        j["x"] @ j["x"] + j["y"] @ j["y"] + j["z"] @ j["z"] - (nhat / 2) @ (eye + nhat / 2)
    )
    return float(np.linalg.norm(residual, 2))


def occupation_basis_state(
    lattice: FockLatticeSpec, occupations: Sequence[tuple[int, int]]
) -> PureState:
    """Product basis state with the given (n_a, n_b) per site."""
    if len(occupations) != lattice.n_sites:
        raise ValueError("need one occupation pair per site")
    idx = 0
    d = lattice.site_space.dim
    for na, nb in occupations:
        idx = idx * d + lattice.site_space.index(na, nb)
    v = np.zeros(lattice.space().dim, dtype=complex)
    v[idx] = 1.0
    return PureState(lattice.space(), v)


def embed_qubit_chain(state: PureState) -> PureState:
    """Map a qubit chain into the unit-filled sector of an n_max=1 lattice.

    Qubit |0> becomes one atom in mode a (spin up), |1> one atom in mode b
    (spin down).
    """
    if state.space.kind != "qubit":
        raise ValueError("embed_qubit_chain expects a qubit-chain state")
    site = SiteFockSpace(1)
    lattice = FockLatticeSpec(state.space.n_sites, site)
    iso = np.zeros((site.dim, 2), dtype=complex)
    iso[site.index(*SPIN_UP), 0] = 1.0
    iso[site.index(*SPIN_DOWN), 1] = 1.0
    full = np.ones((1, 1), dtype=complex)
    for _ in range(state.space.n_sites):
        full = np.kron(full, iso)
    return PureState(lattice.space(), full @ state.amplitudes)


def singlet_pair() -> PureState:
    """Two unit-filled sites sharing a spin singlet, normalized."""
    lattice = FockLatticeSpec(2, SiteFockSpace(1))
    up_down = occupation_basis_state(lattice, [SPIN_UP, SPIN_DOWN]).amplitudes
    down_up = occupation_basis_state(lattice, [SPIN_DOWN, SPIN_UP]).amplitudes
    return PureState(lattice.space(), (up_down - down_up) / np.sqrt(2))


def singlet_chain(n_pairs: int) -> PureState:
    """Tensor product of adjacent-pair singlets over 2*n_pairs sites."""
    if n_pairs < 1:
        raise ValueError("need at least one pair")
    lattice = FockLatticeSpec(2 * n_pairs, SiteFockSpace(1))
    pair = singlet_pair().amplitudes
    v = np.ones(1, dtype=complex)
    for _ in range(n_pairs):
        v = np.kron(v, pair)
    return PureState(lattice.space(), v)


def heisenberg_hamiltonian(lattice: FockLatticeSpec, sign: int = +1) -> LinearOperator:
    """Nearest-neighbor isotropic spin coupling on the open chain.

    ``sign=+1`` is antiferromagnetic.
    """
    if sign not in (-1, +1):
        raise ValueError("coupling sign must be +1 or -1")
    space = lattice.space()
    js = _schwinger_matrices(lattice.site_space)
    mat = np.zeros((space.dim, space.dim), dtype=complex)
    for k in range(1, lattice.n_sites):
        for axis in ("x", "y", "z"):
            mat += _embed(lattice, js[axis], k) @ _embed(lattice, js[axis], k + 1)
    return LinearOperator(space, sign * mat, hermitian_hint=True)


def total_spin_squared(lattice: FockLatticeSpec) -> LinearOperator:
    """J_x^2 + J_y^2 + J_z^2; its zero eigenspace holds the many-body singlets."""
    space = lattice.space()
    mat = np.zeros((space.dim, space.dim), dtype=complex)
    for axis in ("x", "y", "z"):
        big = collective_J_fock(lattice, axis).matrix
        mat += big @ big
    return LinearOperator(space, mat, hermitian_hint=True)
