"""Pulse-sequence construction and derivative-free search that maximizes the
violation of the collective-uncertainty criterion from a product start state.

The pulse acts on a unit-filled chain treated as qubits (spin = sigma / 2):
exp(-i [ theta_xx * sum_k jx_k jx_{k+1} + theta_yy * sum_k jy_k jy_{k+1}
        + theta_z * sum_k jz_k ]) with open-chain coupling sums.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spinchain
from .criteria import collective_uncertainty_criterion
from .qcore import LinearOperator, PureState, matrix_exponential


@dataclass(frozen=True)
class PulseParams:
    theta_xx: float
    theta_yy: float
    theta_z: float

    def __post_init__(self):
        for v in (self.theta_xx, self.theta_yy, self.theta_z):
            if not np.isfinite(v):
                raise ValueError("pulse angles must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.theta_xx, self.theta_yy, self.theta_z])


def pulse_generator(chain: spinchain.ChainSpec, params: PulseParams) -> LinearOperator:
    """Hermitian generator of the pulse, with j = sigma/2 per site."""
    if chain.n_sites > 10:
        raise ValueError("pulse generator capped at 10 sites")
    space = chain.space()
    j = {
        ax: [spinchain.pauli(chain, k, ax).matrix / 2 for k in range(1, chain.n_sites + 1)]
        for ax in ("x", "y", "z")
    }
    mat = np.zeros((space.dim, space.dim), dtype=complex)
    for k in range(chain.n_sites - 1):
        mat += params.theta_xx * (j["x"][k] @ j["x"][k + 1])
        mat += params.theta_yy * (j["y"][k] @ j["y"][k + 1])
    for k in range(chain.n_sites):
        mat += params.theta_z * j["z"][k]
    return LinearOperator(space, mat, hermitian_hint=True)


def pulse_unitary(chain: spinchain.ChainSpec, params: PulseParams) -> LinearOperator:
    return matrix_exponential(pulse_generator(chain, params), -1j)


def violation_ratio(state) -> float:
    """Normalized margin below the collective-uncertainty bound.

    1 - sum Var(J) / (<N>/2): zero at saturation, one at maximal violation,
    negative when the variance sum exceeds the bound.
    """
    report = collective_uncertainty_criterion(state)
    if report.bound <= 0.0:
        raise ValueError("violation ratio undefined for zero mean particle number")
    return 1.0 - report.value / report.bound


@dataclass(frozen=True)
class PulseSearchResult:
    params: PulseParams
    ratio: float
    evaluations: int
    trace: tuple[tuple[int, tuple[float, float, float], float], ...]


def _nelder_mead(f, x0: np.ndarray, budget, step: float = 0.4, tol: float = 1e-10):
    """Minimize f from x0 within the evaluation budget; returns (x, fx)."""
    dim = len(x0)
    simplex = [np.array(x0, dtype=float)]
    for i in range(dim):
        x = np.array(x0, dtype=float)
        x[i] += step
        simplex.append(x)
    values = [f(x) for x in simplex]

    while budget.remaining() > 0:
        order = np.argsort(values)
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        if abs(values[-1] - values[0]) < tol:
            break
        centroid = np.mean(simplex[:-1], axis=0)
        reflected = centroid + (centroid - simplex[-1])
        fr = f(reflected)
        if values[0] <= fr < values[-2]:
            simplex[-1], values[-1] = reflected, fr
            continue
        if fr < values[0]:
            if budget.remaining() <= 0:
                simplex[-1], values[-1] = reflected, fr
                break
            expanded = centroid + 2.0 * (centroid - simplex[-1])
            fe = f(expanded)
            if fe < fr:
                simplex[-1], values[-1] = expanded, fe
            else:
                simplex[-1], values[-1] = reflected, fr
            continue
        if budget.remaining() <= 0:
            break
        contracted = centroid + 0.5 * (simplex[-1] - centroid)
        fc = f(contracted)
        if fc < values[-1]:
            simplex[-1], values[-1] = contracted, fc
            continue
        for i in range(1, dim + 1):
            if budget.remaining() <= 0:
                break
            simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
            values[i] = f(simplex[i])
    best = int(np.argmin(values))
    return simplex[best], values[best]


class _Budget:
    def __init__(self, total: int):
        self.total = total
        self.used = 0

    def remaining(self) -> int:
        return self.total - self.used


def optimize_pulse(
    chain: spinchain.ChainSpec,
    initial: PulseParams,
    budget: int,
    seed: int = 0,
    n_restarts: int = 3,
) -> PulseSearchResult:
    """Simplex search with seeded restarts maximizing the violation ratio.

    Deterministic for a fixed seed; never returns a point worse than the
    starting one, and the reported ratio is re-evaluated from the returned
    parameters (no cached objective values).
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    start = spinchain.basis_state(chain, [0] * chain.n_sites)
    counter = _Budget(budget)
    trace: list[tuple[int, tuple[float, float, float], float]] = []

    def ratio_of(x: np.ndarray) -> float:
        u = pulse_unitary(chain, PulseParams(*x))
        state = PureState(chain.space(), u.matrix @ start.amplitudes)
        return violation_ratio(state)

    def objective(x: np.ndarray) -> float:
        counter.used += 1
        r = ratio_of(x)
        trace.append((counter.used, (float(x[0]), float(x[1]), float(x[2])), r))
        return -r

    x_init = initial.as_array()
    best_x = np.array(x_init, dtype=float)
    best_val = objective(x_init)
    rng = np.random.default_rng(seed)
    for restart in range(n_restarts):
        if counter.remaining() <= 0:
            break
        if restart == 0:
            x0 = x_init
        else:
            x0 = x_init + rng.normal(scale=0.5, size=3)
        x, val = _nelder_mead(objective, x0, counter)
        if val < best_val:
            best_x, best_val = x, val
    final_ratio = ratio_of(best_x)
    initial_ratio = ratio_of(x_init)
    if final_ratio < initial_ratio:
        best_x, final_ratio = x_init, initial_ratio
    return PulseSearchResult(
        params=PulseParams(float(best_x[0]), float(best_x[1]), float(best_x[2])),
        ratio=final_ratio,
        evaluations=counter.used,
        trace=tuple(trace),
    )
