import numpy as np
import pytest
from hypothesis import given, strategies as st

from frustra.entanglement import (
    PureState,
    brute_force_geometric_measure,
    geometric_measure_bipartite,
    geometric_measure_multipartite,
    overlap_with_product,
    product_state,
    regroup_state,
    schmidt,
)
from frustra.errors import InvalidBipartitionError, OracleScaleError
from frustra.linalg import haar_unitary
from frustra.models import build_dense, ising2
from frustra.verify import random_product_state, random_state

BELL = PureState.normalized(np.array([1, 0, 0, 1], dtype=complex), (2, 2))
GHZ3 = PureState.normalized(np.array([1, 0, 0, 0, 0, 0, 0, 1], dtype=complex), (2, 2, 2))
W3 = PureState.normalized(np.array([0, 1, 1, 0, 1, 0, 0, 0], dtype=complex), (2, 2, 2))


def ising_ground(g):
    h = build_dense(ising2(g))
    _, vecs = np.linalg.eigh(h)
    return PureState.normalized(vecs[:, 0], (2, 2))


# ---------------------------------------------------------------------------
# state plumbing


def test_pure_state_validation():
    with pytest.raises(ValueError):
        PureState(np.array([1.0, 1.0]), (2,))  # not normalized
    with pytest.raises(ValueError):
        PureState(np.array([1.0, 0.0]), (2, 2))  # wrong size


def test_regroup_state_partition_check():
    with pytest.raises(InvalidBipartitionError):
        regroup_state(GHZ3, ((0, 1), (1, 2)))


# ---------------------------------------------------------------------------
# schmidt


def test_schmidt_bell():
    dec = schmidt(BELL, ((0,), (1,)))
    np.testing.assert_allclose(dec.coefficients, [1 / np.sqrt(2)] * 2, atol=1e-12)


def test_schmidt_product_state():
    plus = np.array([1, 1]) / np.sqrt(2)
    psi = product_state([np.array([1, 0]), plus])
    dec = schmidt(psi, ((0,), (1,)))
    np.testing.assert_allclose(dec.coefficients, [1.0, 0.0], atol=1e-12)


def test_schmidt_ising_ground_top_coefficient():
    # lambda_0^2 = 1/2 + g / sqrt(1 + 4 g^2) at g = 1
    dec = schmidt(ising_ground(1.0), ((0,), (1,)))
    assert abs(dec.coefficients[0] ** 2 - (0.5 + 1 / np.sqrt(5.0))) < 1e-12


def test_schmidt_bad_bipartition():
    with pytest.raises(InvalidBipartitionError):
        schmidt(BELL, ((0,), (0,)))


@given(st.integers(0, 5_000))
def test_schmidt_weights_and_reconstruction(seed):
    psi = random_state(np.random.default_rng(seed), (2, 3))
    dec = schmidt(psi, ((0,), (1,)))
    assert abs(np.sum(dec.coefficients**2) - 1.0) < 1e-10
    matrix = psi.tensor().reshape(2, 3)
    np.testing.assert_allclose(dec.reconstruct(), matrix, atol=1e-9)


# ---------------------------------------------------------------------------
# bipartite measure


def test_bipartite_bell_half():
    assert abs(geometric_measure_bipartite(BELL).value - 0.5) < 1e-12


def test_bipartite_maximally_entangled_qutrits():
    amps = np.zeros(9, dtype=complex)
    amps[[0, 4, 8]] = 1 / np.sqrt(3)
    psi = PureState(amps, (3, 3))
    assert abs(geometric_measure_bipartite(psi).value - (1 - 1 / 3)) < 1e-12


def test_bipartite_ising_ground():
    res = geometric_measure_bipartite(ising_ground(1.0))
    assert abs(res.value - 0.0527864045) < 1e-9
    assert res.method == "schmidt_exact"


def test_result_consistency_invariants():
    res = geometric_measure_bipartite(ising_ground(0.7))
    assert res.value == 1.0 - res.overlap_sq
    recomputed = abs(overlap_with_product(ising_ground(0.7), res.maximizer)) ** 2
    assert abs(recomputed - res.overlap_sq) < 1e-9


# ---------------------------------------------------------------------------
# multipartite measure


def test_multipartite_product_state_zero():
    psi = random_product_state(np.random.default_rng(1), (2, 2, 2))
    res = geometric_measure_multipartite(psi, restarts=4)
    assert res.value <= 1e-9
    assert res.converged


def test_multipartite_ghz():
    res = geometric_measure_multipartite(GHZ3)
    assert abs(res.value - 0.5) < 1e-6


def test_multipartite_w():
    # oracle agreement and the known value 5/9
    res = geometric_measure_multipartite(W3)
    oracle = brute_force_geometric_measure(W3, grid_depth=5)
    assert abs(res.value - 5.0 / 9.0) < 1e-4
    assert abs(res.value - oracle.value) < 1e-3


def test_multipartite_matches_exact_on_bipartite():
    for seed in range(12):
        psi = random_state(np.random.default_rng(seed), (2, 2))
        exact = geometric_measure_bipartite(psi).value
        alt = geometric_measure_multipartite(psi).value
        assert alt <= exact + 1e-9  # optimizer cannot report below the true E
        assert abs(alt - exact) < 1e-6


def test_multipartite_seed_determinism():
    psi = random_state(np.random.default_rng(77), (2, 2, 2))
    a = geometric_measure_multipartite(psi, seed=123)
    b = geometric_measure_multipartite(psi, seed=123)
    assert a.value == b.value and a.iterations == b.iterations
    for va, vb in zip(a.maximizer, b.maximizer):
        np.testing.assert_array_equal(va, vb)


def test_monotone_overlap_within_run():
    psi = random_state(np.random.default_rng(42), (2, 2, 2))
    res = geometric_measure_multipartite(psi, restarts=4, record_trace=True)
    assert res.overlap_sq <= 1.0
    for trace in res.traces:
        diffs = np.diff(np.asarray(trace))
        assert np.all(diffs >= -1e-12)


def test_local_unitary_invariance_bipartite():
    rng = np.random.default_rng(9)
    psi = random_state(rng, (2, 3))
    base = geometric_measure_bipartite(psi).value
    u = haar_unitary(2, rng)
    v = haar_unitary(3, rng)
    rotated = np.kron(u, v) @ psi.amplitudes
    after = geometric_measure_bipartite(PureState.normalized(rotated, (2, 3))).value
    assert abs(base - after) < 1e-8


def test_local_unitary_invariance_multipartite():
    rng = np.random.default_rng(10)
    psi = random_state(rng, (2, 2, 2))
    base = geometric_measure_multipartite(psi).value
    us = [haar_unitary(2, rng) for _ in range(3)]
    rotated = np.kron(np.kron(us[0], us[1]), us[2]) @ psi.amplitudes
    after = geometric_measure_multipartite(PureState.normalized(rotated, (2, 2, 2))).value
    assert abs(base - after) < 1e-6


@given(st.integers(0, 5_000), st.sampled_from([2, 3, 4]))
def test_bipartite_value_cap(seed, d):
    # E <= 1 - 1/d for a d x d pair
    psi = random_state(np.random.default_rng(seed), (d, d))
    value = geometric_measure_bipartite(psi).value
    assert -1e-12 <= value <= 1.0 - 1.0 / d + 1e-12


def test_zero_iff_product_both_directions():
    rng = np.random.default_rng(11)
    for dims in ((2, 2), (2, 3), (2, 2, 2)):
        psi = random_product_state(rng, dims)
        res = geometric_measure_multipartite(psi, restarts=4)
        assert res.value <= 1e-9
    assert geometric_measure_multipartite(GHZ3).value > 0.4
    assert geometric_measure_bipartite(BELL).value > 0.4


# ---------------------------------------------------------------------------
# brute-force oracle


def test_oracle_bell():
    assert abs(brute_force_geometric_measure(BELL, grid_depth=5).value - 0.5) < 1e-3


def test_oracle_ghz_cross_check():
    oracle = brute_force_geometric_measure(GHZ3, grid_depth=5).value
    alt = geometric_measure_multipartite(GHZ3).value
    assert abs(oracle - 0.5) < 1e-3
    assert abs(oracle - alt) < 1e-3


def test_oracle_matches_schmidt_on_two_qubits():
    for seed in range(5):
        psi = random_state(np.random.default_rng(seed), (2, 2))
        exact = geometric_measure_bipartite(psi).value
        oracle = brute_force_geometric_measure(psi, grid_depth=5).value
        assert abs(exact - oracle) < 1e-3


def test_oracle_scale_limits():
    qutrit = random_state(np.random.default_rng(0), (3, 3))
    with pytest.raises(OracleScaleError):
        brute_force_geometric_measure(qutrit)
    seven = random_state(np.random.default_rng(0), (2,) * 7)
    with pytest.raises(OracleScaleError):
        brute_force_geometric_measure(seven)
    four = random_state(np.random.default_rng(0), (2, 2, 2, 2))
    with pytest.raises(OracleScaleError):
        brute_force_geometric_measure(four, grid_depth=5)  # work cap
    brute_force_geometric_measure(four, grid_depth=2)  # feasible at low depth
