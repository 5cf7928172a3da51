"""Dense complex linear algebra over tensor-product Hilbert spaces.

States and operators are immutable value objects validated at construction:
pure states carry unit norm, density matrices are Hermitian trace-one
positive-semidefinite (up to small numerical floors), operators know whether
they are meant to be Hermitian.  Sites are numbered from 1 and site 1 is the
most significant index of the composite basis (big-endian), a convention
shared by every module built on top of this one.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

NORM_TOL = 1e-12
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_EIG_FLOOR = -1e-10
IMAG_TOL = 1e-10
DEGENERACY_GAP = 1e-8
DEFAULT_DIM_CAP = 4096


def dim_cap() -> int:
    """Maximum matrix dimension; override with the QLATWIT_DIM_CAP env var."""
    return int(os.environ.get("QLATWIT_DIM_CAP", DEFAULT_DIM_CAP))


@dataclass(frozen=True)
class HilbertSpace:
    """Ordered site list with local dimensions.

    ``kind`` tags what the local factors are: "qubit" for two-level sites,
    "fock" for two-mode bosonic sites truncated at ``fock_cutoff`` total
    particles, "generic" otherwise.
    """

    dims: tuple[int, ...]
    kind: str = "qubit"
    fock_cutoff: int | None = None

    def __post_init__(self):
        if len(self.dims) == 0:
            raise ValueError("a Hilbert space needs at least one site")
        if any(d < 1 for d in self.dims):
            raise ValueError(f"local dimensions must be positive, got {self.dims}")
        if self.kind == "qubit" and any(d != 2 for d in self.dims):
            raise ValueError("qubit spaces must have local dimension 2 everywhere")

    @property
    def n_sites(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def check_site(self, site: int) -> None:
        if not 1 <= site <= self.n_sites:
            raise ValueError(f"site {site} out of range 1..{self.n_sites}")


def _as_readonly_complex(values, name: str, shape_hint: str) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128, order="C")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    arr.setflags(write=False)
    return arr


def _check_psd(matrix: np.ndarray) -> None:
    # Exactly diagonal matrices (mixed states, dephased diagonal states) skip
    # the dense factorization.
    off = matrix - np.diag(np.diagonal(matrix))
    if not off.any():
        lam_min = float(np.min(np.diagonal(matrix).real))
        if lam_min < PSD_EIG_FLOOR:
            raise ValueError(f"density matrix has negative eigenvalue {lam_min}")
        return
    # Cholesky of (matrix - floor*I) succeeds exactly when every eigenvalue
    # clears the floor; it is several times cheaper than an eigensolve.
    shifted = matrix.copy()
    shifted.flat[:: matrix.shape[0] + 1] += -PSD_EIG_FLOOR
    try:
        np.linalg.cholesky(shifted)
    except np.linalg.LinAlgError:
        lam_min = float(np.linalg.eigvalsh(matrix)[0])
        if lam_min < PSD_EIG_FLOOR:
            raise ValueError(f"density matrix has negative eigenvalue {lam_min}") from None


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over a labeled tensor-product basis."""

    space: HilbertSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _as_readonly_complex(self.amplitudes, "amplitudes", "vector")
        if amps.ndim != 1 or amps.shape[0] != self.space.dim:
            raise ValueError(
                f"amplitude vector has length {amps.shape}, space has dimension {self.space.dim}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm} deviates from 1 beyond {NORM_TOL}")
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive-semidefinite, trace-one matrix over a labeled basis."""

    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        mat = _as_readonly_complex(self.matrix, "density matrix", "square matrix")
        d = self.space.dim
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match space dimension {d}")
        if np.abs(mat - mat.conj().T).max() > HERMITICITY_TOL:
            raise ValueError("density matrix is not Hermitian within tolerance")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr} deviates from 1")
        _check_psd(mat)
        object.__setattr__(self, "matrix", mat)


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """Square complex matrix acting on a state space.

    ``hermitian_hint`` declares the operator is an observable/generator;
    Hermiticity is then verified at construction and required by the
    expectation-value routines.
    """

    space: HilbertSpace
    matrix: np.ndarray
    hermitian_hint: bool = False

    def __post_init__(self):
        mat = _as_readonly_complex(self.matrix, "operator", "square matrix")
        d = self.space.dim
        if mat.shape != (d, d):
            raise ValueError(f"operator shape {mat.shape} does not match space dimension {d}")
        if self.hermitian_hint and np.abs(mat - mat.conj().T).max() > HERMITICITY_TOL:
            raise ValueError("operator marked Hermitian fails the Hermiticity check")
        object.__setattr__(self, "matrix", mat)


@dataclass(frozen=True, eq=False)
class GroundState:
    energy: float
    state: PureState
    degenerate: bool
    gap: float


def identity_operator(space: HilbertSpace) -> LinearOperator:
    return LinearOperator(space, np.eye(space.dim, dtype=complex), hermitian_hint=True)


def pure_to_density(state: PureState) -> DensityMatrix:
    v = state.amplitudes
    return DensityMatrix(state.space, np.outer(v, v.conj()))


def _joined_space(a: HilbertSpace, b: HilbertSpace) -> HilbertSpace:
    if a.kind == b.kind and a.fock_cutoff == b.fock_cutoff:
        return HilbertSpace(a.dims + b.dims, a.kind, a.fock_cutoff)
    return HilbertSpace(a.dims + b.dims, "generic", None)


def tensor_product(a, b):
    """Kronecker product; a's sites come before b's in the composite labels."""
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(_joined_space(a.space, b.space), np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, LinearOperator) and isinstance(b, LinearOperator):
        return LinearOperator(
            _joined_space(a.space, b.space),
            np.kron(a.matrix, b.matrix),
            hermitian_hint=a.hermitian_hint and b.hermitian_hint,
        )
    raise ValueError("tensor_product needs two states or two operators, not a mixture")


def _check_same_space(op: LinearOperator, state) -> None:
    if op.space.dims != state.space.dims:
        raise ValueError(
            f"operator space {op.space.dims} does not match state space {state.space.dims}"
        )


def _real_part(value: complex, what: str) -> float:
    if abs(value.imag) > IMAG_TOL:
        raise ValueError(f"{what} has imaginary residue {value.imag}")
    return float(value.real)


def expectation(op: LinearOperator, state) -> float:
    """<psi|op|psi> or Tr(rho op) for a Hermitian operator."""
    if not op.hermitian_hint:
        raise ValueError("expectation requires an operator with hermitian_hint set")
    _check_same_space(op, state)
    if isinstance(state, PureState):
        val = complex(np.vdot(state.amplitudes, op.matrix @ state.amplitudes))
    elif isinstance(state, DensityMatrix):
        val = complex(np.einsum("ij,ji->", state.matrix, op.matrix))
    else:
        raise ValueError(f"cannot take an expectation on {type(state).__name__}")
    return _real_part(val, "expectation value")


def variance(op: LinearOperator, state) -> float:
    """<op^2> - <op>^2, clamped to zero when within -1e-10 of it."""
    if not op.hermitian_hint:
        raise ValueError("variance requires an operator with hermitian_hint set")
    _check_same_space(op, state)
    m = op.matrix
    if isinstance(state, PureState):
        v = m @ state.amplitudes
        e1 = _real_part(complex(np.vdot(state.amplitudes, v)), "expectation value")
        e2 = float(np.vdot(v, v).real)
    elif isinstance(state, DensityMatrix):
        rho = state.matrix
        e1 = _real_part(complex(np.einsum("ij,ji->", rho, m)), "expectation value")
        off = rho - np.diag(np.diagonal(rho))
        if not off.any():
            # Tr(rho M^2) for diagonal rho needs only the row norms of M.
            e2 = float(np.real(np.diagonal(rho)) @ np.sum(np.abs(m) ** 2, axis=1))
        else:
            e2 = _real_part(complex(np.einsum("ij,ji->", m @ rho, m)), "second moment")
    else:
        raise ValueError(f"cannot take a variance on {type(state).__name__}")
    var = e2 - e1 * e1
    if var < 0.0:
        if var < -IMAG_TOL:
            raise ValueError(f"variance {var} is negative beyond tolerance")
        var = 0.0
    return var


def partial_trace(rho: DensityMatrix, keep_sites: Sequence[int]) -> DensityMatrix:
    """Reduce to ``keep_sites`` (1-based), preserving their original order."""
    space = rho.space
    keep = list(keep_sites)
    if len(keep) == 0:
        raise ValueError("keep_sites must be nonempty")
    if len(set(keep)) != len(keep):
        raise ValueError("keep_sites contains duplicates")
    for s in keep:
        space.check_site(s)
    keep_sorted = sorted(keep)
    n = space.n_sites
    t = rho.matrix.reshape(space.dims + space.dims)
    bra = list(range(n))
    ket = list(range(n, 2 * n))
    for s in range(1, n + 1):
        if s not in keep_sorted:
            ket[s - 1] = bra[s - 1]
    out = [bra[s - 1] for s in keep_sorted] + [ket[s - 1] for s in keep_sorted]
    reduced = np.einsum(t, bra + ket, out)
    sub_dims = tuple(space.dims[s - 1] for s in keep_sorted)
    d = int(np.prod(sub_dims))
    sub_space = HilbertSpace(sub_dims, space.kind, space.fock_cutoff)
    return DensityMatrix(sub_space, reduced.reshape(d, d))


def matrix_exponential(op: LinearOperator, scale: complex = 1.0) -> LinearOperator:
    """exp(scale * op); eigendecomposition for Hermitian generators."""
    if op.space.dim > dim_cap():
        raise ValueError(f"dimension {op.space.dim} exceeds cap {dim_cap()}")
    if op.hermitian_hint:
        w, v = np.linalg.eigh(op.matrix)
        mat = (v * np.exp(scale * w)) @ v.conj().T
    else:
        mat = scipy.linalg.expm(scale * op.matrix)
    return LinearOperator(op.space, mat)


def negativity(rho: DensityMatrix, partition_sites: Sequence[int]) -> float:
    """Sum of |negative eigenvalues| of the partial transpose.

    ``partition_sites`` lists one side of the bipartition; the complement is
    the other side.  A value above ~1e-9 certifies entanglement across the cut
    (and for two qubits the converse holds as well).
    """
    space = rho.space
    side_a = sorted(set(partition_sites))
    for s in side_a:
        space.check_site(s)
    if len(side_a) == 0 or len(side_a) == space.n_sites:
        raise ValueError("partition must be a nonempty strict subset of the sites")
    side_b = [s for s in range(1, space.n_sites + 1) if s not in side_a]
    n = space.n_sites
    t = rho.matrix.reshape(space.dims + space.dims)
    perm = [s - 1 for s in side_a] + [s - 1 for s in side_b]
    t = t.transpose(perm + [n + p for p in perm])
    da = int(np.prod([space.dims[s - 1] for s in side_a]))
    db = space.dim // da
    t = t.reshape(da, db, da, db).transpose(2, 1, 0, 3).reshape(space.dim, space.dim)
    eigs = np.linalg.eigvalsh(t)
    return float(-eigs[eigs < 0.0].sum())


def ground_state(h: LinearOperator) -> GroundState:
    """Lowest eigenpair of a Hermitian operator, with a degeneracy flag."""
    if not h.hermitian_hint:
        raise ValueError("ground_state requires an operator with hermitian_hint set")
    if h.space.dim > dim_cap():
        raise ValueError(f"dimension {h.space.dim} exceeds cap {dim_cap()}")
    w, v = np.linalg.eigh(h.matrix)
    vec = v[:, 0]
    vec = vec / np.linalg.norm(vec)
    gap = float(w[1] - w[0]) if len(w) > 1 else float("inf")
    return GroundState(
        energy=float(w[0]),
        state=PureState(h.space, vec),
        degenerate=gap < DEGENERACY_GAP,
        gap=gap,
    )
