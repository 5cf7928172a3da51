import numpy as np
import pytest

from qlatwit import bosonic, sampling
from qlatwit.criteria import (
    AXIS_X,
    AXIS_Y,
    AXIS_Z,
    Direction,
    angular_moment,
    anticommutator_moments,
    collective_uncertainty_criterion,
    moment_indistinguishability,
    moment_matching_separable_state,
    quadruplet_bound,
    spin_squeezing_best,
    spin_squeezing_criterion,
    squared_criterion,
    totally_mixed_state,
    variance_x_criterion,
    witness_criterion,
)
from qlatwit.qcore import expectation, negativity, pure_to_density
from qlatwit.spinchain import ChainSpec, ClusterSpec, cluster_state, product_state, tilde_sigma_x

TILTED_XZ = Direction.normalized(1.0, 0.0, 1.0)


def make_cluster(n, lambdas=None):
    chain = ChainSpec(n)
    return cluster_state(ClusterSpec(chain, tuple(lambdas or (1,) * n)))


def saturating(n):
    return product_state([("x", 1) if k % 2 == 1 else ("z", 1) for k in range(1, n + 1)])


# ---------------------------------------------------------------------------
# independent oracle: correlators of product states from single-site algebra


_BLOCH = {
    ("x", 1): {"x": 1.0, "z": 0.0},
    ("x", -1): {"x": -1.0, "z": 0.0},
    ("y", 1): {"x": 0.0, "z": 0.0},
    ("y", -1): {"x": 0.0, "z": 0.0},
    ("z", 1): {"x": 0.0, "z": 1.0},
    ("z", -1): {"x": 0.0, "z": -1.0},
}


def oracle_product_correlators(site_specs):
    """<z(k-1) x(k) z(k+1)> of a product of axis eigenstates, site by site."""
    n = len(site_specs)
    vals = []
    for k in range(1, n + 1):
        v = _BLOCH[site_specs[k - 1]]["x"]
        if k > 1:
            v *= _BLOCH[site_specs[k - 2]]["z"]
        if k < n:
            v *= _BLOCH[site_specs[k]]["z"]
        vals.append(v)
    return vals


# ---------------------------------------------------------------------------
# report mechanics


def test_report_margin_and_violation_consistency():
    rep = witness_criterion(make_cluster(4))
    assert rep.margin == pytest.approx(rep.value - rep.bound, abs=1e-12)
    assert rep.violated == (rep.value > rep.bound + 1e-9)
    assert rep.direction == "<="


def test_saturation_is_not_violation():
    rep = witness_criterion(saturating(6))
    assert rep.value == pytest.approx(rep.bound, abs=1e-10)
    assert not rep.violated


def test_report_serializes_to_json_types():
    import json

    doc = witness_criterion(make_cluster(4)).to_json_dict()
    json.dumps(doc)  # every entry must be plain python


# ---------------------------------------------------------------------------
# witness


def test_witness_cluster_maximal():
    rep = witness_criterion(make_cluster(6))
    assert rep.value == pytest.approx(6.0, abs=1e-10)
    assert rep.bound == 3.0
    assert rep.violated


def test_witness_all_up_zero():
    rep = witness_criterion(product_state([("z", 1)] * 6))
    assert rep.value == pytest.approx(0.0, abs=1e-12)
    assert not rep.violated


def test_witness_rejects_odd_chains():
    with pytest.raises(ValueError, match="even"):
        witness_criterion(make_cluster(5))


def test_witness_accepts_density_matrices():
    rep = witness_criterion(pure_to_density(make_cluster(4)))
    assert rep.value == pytest.approx(4.0, abs=1e-10)


# ---------------------------------------------------------------------------
# quadruplet count


def test_quadruplet_bound_at_maximal_violation():
    assert quadruplet_bound(8.0, 8) == pytest.approx(2.0)


def test_quadruplet_bound_at_the_boundary():
    assert quadruplet_bound(4.0, 8) == pytest.approx(0.0)


def test_quadruplet_bound_fractional():
    assert quadruplet_bound(5.0, 8) == pytest.approx(0.5)


def test_quadruplet_bound_clamps_to_zero():
    assert quadruplet_bound(0.0, 8) == 0.0


# ---------------------------------------------------------------------------
# squared criterion


@pytest.mark.parametrize("lambdas", [(1, 1, 1, 1), (1, -1, 1, -1), (-1, -1, -1, -1)])
def test_squared_detects_every_sign_sector(lambdas):
    rep = squared_criterion(make_cluster(4, lambdas))
    assert rep.value == pytest.approx(4.0, abs=1e-10)
    assert rep.violated


def test_squared_saturating_product_matches_oracle():
    specs = [("x", 1), ("z", 1), ("x", 1), ("z", 1)]
    oracle = sum(c * c for c in oracle_product_correlators(specs))
    assert oracle == 2.0
    rep = squared_criterion(product_state(specs))
    assert rep.value == pytest.approx(oracle, abs=1e-10)
    assert not rep.violated


def test_squared_on_fully_mixed_is_zero():
    rep = squared_criterion(totally_mixed_state(4))
    assert rep.value == pytest.approx(0.0, abs=1e-12)


def test_squared_value_cannot_exceed_site_count(rng):
    space = ChainSpec(4).space()
    for _ in range(50):
        rho = sampling.random_separable_density(space, rng)
        assert squared_criterion(rho).value <= 4.0 + 1e-9


# ---------------------------------------------------------------------------
# variance criterion


def test_variance_x_cluster_reaches_zero():
    rep = variance_x_criterion(make_cluster(6))
    assert rep.value == pytest.approx(0.0, abs=1e-9)
    assert rep.bound == 3.0
    assert rep.violated


def test_variance_x_on_any_correlator_eigenstate_is_exactly_zero():
    rep = variance_x_criterion(make_cluster(6, (1, -1, -1, 1, -1, 1)))
    assert rep.value == pytest.approx(0.0, abs=1e-10)


def test_variance_x_saturating_product_matches_oracle():
    specs = [("x", 1) if k % 2 == 1 else ("z", 1) for k in range(1, 7)]
    # group members sit >= 3 sites apart, so the product-state variance
    # is a sum of single-correlator variances 1 - <c_k>^2
    oracle = sum(1.0 - c * c for c in oracle_product_correlators(specs))
    assert oracle == 3.0
    rep = variance_x_criterion(product_state(specs))
    assert rep.value == pytest.approx(oracle, abs=1e-10)
    assert not rep.violated


def test_variance_x_fully_mixed():
    rep = variance_x_criterion(totally_mixed_state(6))
    assert rep.value == pytest.approx(6.0, abs=1e-10)
    assert not rep.violated


# ---------------------------------------------------------------------------
# collective uncertainty


def test_collective_uncertainty_singlet_chain():
    rep = collective_uncertainty_criterion(bosonic.singlet_chain(2))
    assert rep.value == pytest.approx(0.0, abs=1e-12)
    assert rep.bound == pytest.approx(2.0, abs=1e-12)
    assert rep.violated


def test_collective_uncertainty_product_saturates():
    lattice = bosonic.FockLatticeSpec(4, bosonic.SiteFockSpace(1))
    state = bosonic.occupation_basis_state(lattice, [bosonic.SPIN_UP] * 4)
    rep = collective_uncertainty_criterion(state)
    assert rep.value == pytest.approx(rep.bound, abs=1e-10)
    assert not rep.violated


def test_collective_uncertainty_heisenberg_ground_state():
    from qlatwit.qcore import ground_state

    lattice = bosonic.FockLatticeSpec(4, bosonic.SiteFockSpace(1))
    gs = ground_state(bosonic.heisenberg_hamiltonian(lattice))
    rep = collective_uncertainty_criterion(gs.state)
    assert rep.value == pytest.approx(0.0, abs=1e-9)
    assert rep.violated


def test_collective_uncertainty_on_qubit_chain():
    rep = collective_uncertainty_criterion(product_state([("z", 1)] * 4))
    assert rep.value == pytest.approx(rep.bound, abs=1e-10)


# ---------------------------------------------------------------------------
# spin squeezing


def test_spin_squeezing_cannot_detect_cluster():
    rep = spin_squeezing_criterion(make_cluster(4), AXIS_X, AXIS_Z, AXIS_Y)
    assert rep.aux.get("undefined") is True
    assert not rep.violated


def test_spin_squeezing_cannot_detect_singlet_chain():
    rep = spin_squeezing_criterion(bosonic.singlet_chain(2), AXIS_X, AXIS_Z, AXIS_Y)
    assert rep.aux.get("undefined") is True
    assert not rep.violated


def test_spin_squeezing_coherent_product_saturates():
    rep = spin_squeezing_criterion(product_state([("z", 1)] * 4), AXIS_X, AXIS_Z, AXIS_Y)
    assert rep.value == pytest.approx(1.0, abs=1e-10)
    assert not rep.violated


def test_spin_squeezing_rejects_non_orthogonal_directions():
    with pytest.raises(ValueError, match="orthogonal"):
        spin_squeezing_criterion(make_cluster(4), AXIS_X, AXIS_X, AXIS_Y)


def test_spin_squeezing_grid_search_handles_undetectable_states():
    rep = spin_squeezing_best(make_cluster(4), grid_points=8)
    assert not rep.violated


def test_spin_squeezing_grid_search_on_polarized_state():
    rep = spin_squeezing_best(product_state([("z", 1)] * 4), grid_points=12)
    assert not rep.violated  # separable states never dip below the bound


def test_direction_requires_unit_norm():
    with pytest.raises(ValueError):
        Direction(1.0, 1.0, 0.0)


# ---------------------------------------------------------------------------
# moments


def test_mixed_state_second_moment():
    rho = totally_mixed_state(9)
    assert angular_moment(rho, AXIS_Z, 2) == pytest.approx(9 / 4, abs=1e-10)


def test_mixed_state_fourth_moment():
    rho = totally_mixed_state(9)
    assert angular_moment(rho, AXIS_Z, 4) == pytest.approx(9 * 25 / 16, abs=1e-10)


def test_first_moment_of_singlet_vanishes():
    assert angular_moment(bosonic.singlet_chain(1), AXIS_Z, 1) == pytest.approx(0.0, abs=1e-12)


def test_moment_order_must_be_positive():
    with pytest.raises(ValueError):
        angular_moment(totally_mixed_state(2), AXIS_Z, 0)


@pytest.mark.parametrize("n", range(4, 10))
def test_cluster_anticommutator_table(n):
    # the zx entry comes from the two chain-end correlators and stays 1 at
    # every size; the off-diagonal xy and yz entries vanish
    table = anticommutator_moments(make_cluster(n))
    assert table[2, 0] == pytest.approx(1.0, abs=1e-9)  # zx
    assert table[0, 1] == pytest.approx(0.0, abs=1e-9)  # xy
    assert table[1, 2] == pytest.approx(0.0, abs=1e-9)  # yz
    for i in range(3):
        assert table[i, i] == pytest.approx(n / 2, abs=1e-9)


def test_singlet_chain_anticommutator_off_diagonals_vanish():
    table = anticommutator_moments(bosonic.singlet_chain(2))
    for i in range(3):
        for j in range(3):
            if i != j:
                assert abs(table[i, j]) < 1e-10


def test_mixed_state_anticommutator_is_diagonal():
    n = 4
    table = anticommutator_moments(totally_mixed_state(n))
    for i in range(3):
        for j in range(3):
            want = n / 2 if i == j else 0.0  # 2 <J_i^2> = 2 * n/4 on the diagonal
            assert table[i, j] == pytest.approx(want, abs=1e-10)


def test_totally_mixed_basics():
    rho = totally_mixed_state(3)
    assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-12)
    for d in (AXIS_X, AXIS_Y, AXIS_Z, TILTED_XZ):
        assert angular_moment(rho, d, 1) == pytest.approx(0.0, abs=1e-12)
    assert angular_moment(rho, AXIS_Z, 2) == pytest.approx(3 / 4, abs=1e-12)


# ---------------------------------------------------------------------------
# the moment-matching separable state


def test_moment_matching_first_moments_vanish():
    rho = moment_matching_separable_state(4)
    for d in (AXIS_X, AXIS_Y, AXIS_Z):
        assert angular_moment(rho, d, 1) == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_moment_matching_anticommutator_table_matches_cluster(n):
    table_sep = anticommutator_moments(moment_matching_separable_state(n))
    table_cl = anticommutator_moments(make_cluster(n))
    assert np.abs(table_sep - table_cl).max() < 1e-9


def test_moment_matching_state_is_ppt_across_every_cut():
    rho = moment_matching_separable_state(4)
    cuts = [[1], [2], [3], [4], [1, 2], [1, 3], [1, 4]]
    for cut in cuts:
        assert negativity(rho, cut) < 1e-9


def test_moment_matching_needs_four_sites():
    with pytest.raises(ValueError, match="at least 4"):
        moment_matching_separable_state(3)


def test_moment_matching_second_moments_any_direction(rng):
    # first plus second moments fix <J_n^m> for m <= 2 along any direction
    rho = moment_matching_separable_state(4)
    cl = make_cluster(4)
    for _ in range(10):
        d = Direction.normalized(*sampling.random_direction(rng))
        for m in (1, 2):
            assert angular_moment(rho, d, m) == pytest.approx(
                angular_moment(cl, d, m), abs=1e-9
            )


# ---------------------------------------------------------------------------
# moment indistinguishability


def test_cluster_nine_matches_mixed_up_to_fourth_order():
    comp = moment_indistinguishability(
        make_cluster(9), totally_mixed_state(9), [AXIS_X, AXIS_Y, AXIS_Z], 4
    )
    assert comp.indistinguishable
    assert comp.differences.max() < 1e-9


def test_cluster_four_differs_along_tilted_axis():
    comp = moment_indistinguishability(
        make_cluster(4), totally_mixed_state(4), [AXIS_X, AXIS_Y, AXIS_Z, TILTED_XZ], 4
    )
    assert not comp.indistinguishable
    # along the axis directions every moment matches; the cross moment shows
    # up only for the tilted direction, first at second order
    assert comp.first_difference == (3, 2)
    assert comp.differences[3, 1] == pytest.approx(0.5, abs=1e-9)


def test_cluster_five_differs_at_third_order_on_x():
    comp = moment_indistinguishability(
        make_cluster(5), totally_mixed_state(5), [AXIS_X], 3
    )
    assert comp.first_difference == (0, 3)
    assert comp.differences[0, 2] == pytest.approx(0.75, abs=1e-9)


def test_state_is_indistinguishable_from_itself():
    c = make_cluster(4)
    comp = moment_indistinguishability(c, c, [AXIS_X, AXIS_Y, AXIS_Z, TILTED_XZ], 4)
    assert comp.indistinguishable
    assert comp.differences.max() == 0.0


def test_mismatched_sizes_rejected():
    with pytest.raises(ValueError):
        moment_indistinguishability(make_cluster(4), totally_mixed_state(6), [AXIS_Z], 2)


# ---------------------------------------------------------------------------
# soundness: separable states never violate any criterion


@pytest.mark.parametrize("n_sites,count", [(4, 1000), (6, 1000)])
def test_qubit_separable_states_never_violate(n_sites, count):
    rng = np.random.default_rng(5150 + n_sites)
    space = ChainSpec(n_sites).space()
    for _ in range(count):
        rho = sampling.random_separable_density(space, rng)
        assert not witness_criterion(rho).violated
        assert not squared_criterion(rho).violated
        assert not variance_x_criterion(rho).violated
        assert not collective_uncertainty_criterion(rho).violated
        assert not spin_squeezing_criterion(rho, AXIS_X, AXIS_Z, AXIS_Y).violated


@pytest.mark.parametrize(
    "n_sites,cutoff,count", [(4, 1, 1000), (2, 2, 600), (3, 2, 400)]
)
def test_fock_separable_states_never_violate(n_sites, cutoff, count):
    rng = np.random.default_rng(7000 + 10 * n_sites + cutoff)
    space = bosonic.FockLatticeSpec(n_sites, bosonic.SiteFockSpace(cutoff)).space()
    for _ in range(count):
        rho = sampling.random_separable_density(space, rng)
        assert not collective_uncertainty_criterion(rho).violated


def test_neighboring_correlator_pair_bound_on_products(rng):
    # <c_k + c_{k+1}> <= 1 for every product state and every k
    n = 6
    chain = ChainSpec(n)
    tildes = [tilde_sigma_x(chain, k) for k in range(1, n + 1)]
    for _ in range(1000):
        state = sampling.random_product_state(chain.space(), rng)
        vals = [expectation(op, state) for op in tildes]
        pair_max = max(vals[k] + vals[k + 1] for k in range(n - 1))
        assert pair_max <= 1.0 + 1e-10


def test_unit_filled_products_saturate_collective_bound(rng):
    n = 4
    chain = ChainSpec(n)
    for _ in range(200):
        state = bosonic.embed_qubit_chain(sampling.random_product_state(chain.space(), rng))
        rep = collective_uncertainty_criterion(state)
        assert rep.value == pytest.approx(rep.bound, abs=1e-9)
        assert not rep.violated
