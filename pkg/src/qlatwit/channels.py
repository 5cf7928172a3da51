"""Local decoherence channels and the cluster-state lifetime experiment.

The phase-flip channel on one site is rho -> p rho + (1-p) Z rho Z with
p(t) = (1 + exp(-kappa t)) / 2; the depolarizing channel used here is
rho -> p rho + (1-p)/3 (X rho X + Y rho Y + Z rho Z).  Single-site Pauli
conjugations are applied through tensor reshapes, so whole-chain channel
sweeps cost O(d^2) per site instead of dense matrix products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spinchain
from .criteria import CriterionReport, _report
from .qcore import DensityMatrix, expectation, negativity

_NEGATIVITY_TOL = 1e-9


@dataclass(frozen=True)
class DecoherenceModel:
    """A per-site channel at a fixed exposure.

    ``p`` is the keep-state weight.  When built from a rate and a duration it
    is (1 + exp(-kappa * t_d)) / 2, which confines it to [1/2, 1].
    """

    kind: str
    p: float
    kappa: float | None = None
    t_d: float | None = None

    def __post_init__(self):
        if self.kind not in ("phase_flip", "depolarizing"):
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if not 0.5 <= self.p <= 1.0:
            raise ValueError(f"model weight p={self.p} outside [1/2, 1]")
        if self.kappa is not None and self.t_d is not None:
            derived = (1.0 + math.exp(-self.kappa * self.t_d)) / 2.0
            if abs(derived - self.p) > 1e-12:
                raise ValueError("p inconsistent with (kappa, t_d)")

    @classmethod
    def from_rate(cls, kind: str, kappa: float, t_d: float) -> "DecoherenceModel":
        if kappa <= 0.0:
            raise ValueError("decay rate must be positive")
        if t_d < 0.0:
            raise ValueError("exposure time must be nonnegative")
        return cls(kind=kind, p=(1.0 + math.exp(-kappa * t_d)) / 2.0, kappa=kappa, t_d=t_d)


def _conjugate_site_pauli(mat: np.ndarray, n_sites: int, site: int, axis: str) -> np.ndarray:
    """P_site rho P_site for a single-site Pauli, via index manipulation."""
    t = mat.reshape((2,) * (2 * n_sites))
    bra_ax, ket_ax = site - 1, n_sites + site - 1
    sign = np.array([1.0, -1.0])

    def _signed(tensor):
        shape_bra = [1] * (2 * n_sites)
        shape_bra[bra_ax] = 2
        shape_ket = [1] * (2 * n_sites)
        shape_ket[ket_ax] = 2
        return tensor * sign.reshape(shape_bra) * sign.reshape(shape_ket)

    if axis == "z":
        out = _signed(t)
    elif axis == "x":
        out = np.flip(t, (bra_ax, ket_ax))
    elif axis == "y":
        out = _signed(np.flip(t, (bra_ax, ket_ax)))
    else:
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    return np.ascontiguousarray(out).reshape(mat.shape)


def _check_qubit_density(rho: DensityMatrix) -> int:
    if rho.space.kind != "qubit":
        raise ValueError("channels act on qubit-chain density matrices")
    return rho.space.n_sites


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"channel weight p={p} outside [0, 1]")


def _phase_flip_raw(mat: np.ndarray, n_sites: int, site: int, p: float) -> np.ndarray:
    return p * mat + (1.0 - p) * _conjugate_site_pauli(mat, n_sites, site, "z")


def _depolarizing_raw(mat: np.ndarray, n_sites: int, site: int, p: float) -> np.ndarray:
    mixed = sum(_conjugate_site_pauli(mat, n_sites, site, ax) for ax in ("x", "y", "z"))
    return p * mat + (1.0 - p) / 3.0 * mixed


def phase_flip(rho: DensityMatrix, site: int, p: float) -> DensityMatrix:
    """p rho + (1-p) Z rho Z on one site."""
    n = _check_qubit_density(rho)
    rho.space.check_site(site)
    _check_p(p)
    return DensityMatrix(rho.space, _phase_flip_raw(rho.matrix, n, site, p))


def depolarizing(rho: DensityMatrix, site: int, p: float) -> DensityMatrix:
    """p rho + (1-p)/3 (X rho X + Y rho Y + Z rho Z) on one site."""
    n = _check_qubit_density(rho)
    rho.space.check_site(site)
    _check_p(p)
    return DensityMatrix(rho.space, _depolarizing_raw(rho.matrix, n, site, p))


def apply_all_sites(model: DecoherenceModel, rho: DensityMatrix) -> DensityMatrix:
    """The model's channel applied to every site (order irrelevant)."""
    n = _check_qubit_density(rho)
    raw = {"phase_flip": _phase_flip_raw, "depolarizing": _depolarizing_raw}[model.kind]
    mat = rho.matrix
    for site in range(1, n + 1):
        mat = raw(mat, n, site, model.p)
    return DensityMatrix(rho.space, mat)


_CHANNEL_FORMS = {
    "phase_flip": "p*rho + (1-p)*Z rho Z per site",
    "depolarizing": "p*rho + (1-p)/3*(X rho X + Y rho Y + Z rho Z) per site",
}


def decoherence_experiment(n_sites: int, p: float, channel: str = "phase_flip") -> CriterionReport:
    """Phase-gate echo of a noisy cluster state, read out collectively.

    Pipeline: prepare all sites along +x, apply the neighbor phase gate, send
    every site through the channel with weight p, apply the gate again, and
    sum the single-site x expectations.  At p=1 the echo restores the start
    state and the value reaches n; the witness bound stays n/2.
    """
    if n_sites % 2 != 0:
        raise ValueError("the witness experiment requires an even chain")
    if n_sites > 10:
        raise ValueError("experiment capped at 10 sites")
    _check_p(p)
    if channel not in _CHANNEL_FORMS:
        raise ValueError(f"unknown channel kind {channel!r}")
    raw = {"phase_flip": _phase_flip_raw, "depolarizing": _depolarizing_raw}[channel]
    chain = spinchain.ChainSpec(n_sites)
    start = spinchain.plus_chain(chain)
    gate_diag = spinchain.phase_gate_diagonal(chain)
    psi = gate_diag * start.amplitudes
    mat = np.outer(psi, psi.conj())
    for site in range(1, n_sites + 1):
        mat = raw(mat, n_sites, site, p)
    # the phase gate is diagonal with +-1 entries, so conjugation is a mask
    mat = (gate_diag[:, None] * mat) * gate_diag[None, :]
    rho = DensityMatrix(chain.space(), mat)
    per_site = [expectation(spinchain.pauli(chain, k, "x"), rho) for k in range(1, n_sites + 1)]
    value = float(sum(per_site))
    return _report(
        "decoherence_witness",
        value,
        n_sites / 2,
        "<=",
        {
            "n_sites": n_sites,
            "p": p,
            "per_site_x": per_site,
            "channel": f"{channel}: {_CHANNEL_FORMS[channel]}",
        },
    )


def witness_threshold(n_sites: int, precision: float = 1e-3, channel: str = "phase_flip") -> float:
    """Bisect the channel weight where the echo witness crosses its bound."""
    lo, hi = 0.5, 1.0
    if decoherence_experiment(n_sites, hi, channel).value <= n_sites / 2:
        raise ValueError("witness does not cross its bound even without noise")
    while hi - lo > precision:
        mid = (lo + hi) / 2
        if decoherence_experiment(n_sites, mid, channel).value > n_sites / 2:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def localized_pair_state(
    n_sites: int,
    p: float,
    pair: tuple[int, int] | None = None,
    outcomes: tuple[int, ...] | None = None,
    channel: str = "phase_flip",
) -> DensityMatrix:
    """Neighboring-pair state of the dephased cluster after measuring out the rest.

    Every site outside the pair is measured in the z basis and one outcome
    branch is kept (all +1 by default; ``outcomes`` selects another branch,
    one bit per non-pair site in site order).  Dephasing commutes with those
    measurements and the branches differ only by local z rotations, so the
    branch choice does not affect the pair's entanglement.  (The plain
    partial trace would erase it: for an interior pair of a cluster state it
    is exactly the maximally mixed two-qubit state.)
    """
    if n_sites < 4 or n_sites % 2 != 0:
        raise ValueError("pair reduction defined for even chains of at least 4 sites")
    if n_sites > 8:
        raise ValueError("pair reduction capped at 8 sites")
    if pair is None:
        pair = (2, 3)  # interior by default; end sites have shorter correlators
    k1, k2 = pair
    if k2 != k1 + 1:
        raise ValueError("pair must be two neighboring sites")
    chain = spinchain.ChainSpec(n_sites)
    chain.space().check_site(k1)
    chain.space().check_site(k2)
    _check_p(p)
    others = [s for s in range(1, n_sites + 1) if s not in (k1, k2)]
    if outcomes is None:
        outcomes = (0,) * len(others)
    if len(outcomes) != len(others) or any(b not in (0, 1) for b in outcomes):
        raise ValueError("need one 0/1 outcome per measured site")
    if channel not in _CHANNEL_FORMS:
        raise ValueError(f"unknown channel kind {channel!r}")
    raw = {"phase_flip": _phase_flip_raw, "depolarizing": _depolarizing_raw}[channel]
    cluster = spinchain.cluster_state(
        spinchain.ClusterSpec(chain, (1,) * n_sites)
    ).amplitudes
    mat = np.outer(cluster, cluster.conj())
    for site in range(1, n_sites + 1):
        mat = raw(mat, n_sites, site, p)
    t = mat.reshape((2,) * (2 * n_sites))
    index = [slice(None)] * (2 * n_sites)
    for site, bit in zip(others, outcomes):
        index[site - 1] = bit
        index[n_sites + site - 1] = bit
    block = np.ascontiguousarray(t[tuple(index)]).reshape(4, 4)
    block = block / np.trace(block).real
    pair_space = spinchain.ChainSpec(2).space()
    return DensityMatrix(pair_space, block)


def pairwise_threshold(
    n_sites: int,
    pair: tuple[int, int] | None = None,
    precision: float = 1e-3,
    channel: str = "phase_flip",
) -> float | None:
    """Bisect the channel weight where the localized pair loses negativity.

    Returns None when the pair is already separable at p=1 (no crossing).
    """
    if negativity(localized_pair_state(n_sites, 1.0, pair, channel=channel), [1]) <= _NEGATIVITY_TOL:
        return None
    lo, hi = 0.5, 1.0
    while hi - lo > precision:
        mid = (lo + hi) / 2
        if negativity(localized_pair_state(n_sites, mid, pair, channel=channel), [1]) > _NEGATIVITY_TOL:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


@dataclass(frozen=True)
class LifetimeComparison:
    t_witness: float
    t_pairwise: float
    ratio: float


def _time_to_reach(p: float, kappa: float) -> float:
    # invert p(t) = (1 + exp(-kappa t)) / 2
    if not 0.5 < p < 1.0:
        raise ValueError(f"threshold p={p} must lie strictly between 1/2 and 1")
    return math.log(1.0 / (2.0 * p - 1.0)) / kappa


def lifetime_comparison(
    kappa: float, p_crit: float | None = None, n_sites: int = 4, witness_p: float = 0.75
) -> LifetimeComparison:
    """Entanglement lifetimes from the witness and pairwise thresholds.

    With dephasing the witness detects until p(t) drops to 3/4, giving
    t = ln(2)/kappa; the pair stays entangled until p(t) reaches the pairwise
    threshold (computed when not supplied).  The ratio is witness lifetime
    over pair lifetime.  ``witness_p`` admits the threshold of a different
    channel in place of 3/4.
    """
    if kappa <= 0.0:
        raise ValueError("decay rate must be positive")
    if p_crit is None:
        p_crit = pairwise_threshold(n_sites)
        if p_crit is None:
            raise ValueError("no pairwise entanglement crossing to compare against")
    t_witness = _time_to_reach(witness_p, kappa)
    t_pairwise = _time_to_reach(p_crit, kappa)
    return LifetimeComparison(t_witness, t_pairwise, t_witness / t_pairwise)
