import numpy as np
import pytest
from hypothesis import given, strategies as st

from frustra.errors import NotHermitianError
from frustra.linalg import (
    NormKind,
    appendix_norm_check,
    haar_unitary,
    hermitian_eig,
    op_norm,
    operator_abs,
    psd_leq,
    singular_dominance,
    singular_values,
    svd,
    ui_norm,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


def random_hermitian(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (z + z.conj().T) / 2


# ---------------------------------------------------------------------------
# hermitian_eig


def test_eig_pauli_z_diagonal():
    dec = hermitian_eig(SZ)
    np.testing.assert_allclose(dec.eigenvalues, [-1.0, 1.0], atol=1e-14)


def test_eig_pauli_x_vectors_and_phase():
    dec = hermitian_eig(SX)
    np.testing.assert_allclose(dec.eigenvalues, [-1.0, 1.0], atol=1e-14)
    minus = dec.eigenvectors[:, 0]
    plus = dec.eigenvectors[:, 1]
    s = 1 / np.sqrt(2)
    np.testing.assert_allclose(minus, [s, -s], atol=1e-14)
    np.testing.assert_allclose(plus, [s, s], atol=1e-14)


def test_eig_reconstruction_8x8():
    m = random_hermitian(np.random.default_rng(88), 8)
    dec = hermitian_eig(m)
    resid = op_norm(dec.reconstruct() - m)
    assert resid <= 1e-10 * max(1.0, op_norm(m))


def test_eig_reconstruction_sweep():
    # dims cycle 2..64; reconstruction residual stays below 1e-10 * scale
    rng = np.random.default_rng(1234)
    for trial in range(1000):
        n = 2 + trial % 63
        m = random_hermitian(rng, n)
        dec = hermitian_eig(m)
        scale = max(1.0, abs(dec.eigenvalues[0]), abs(dec.eigenvalues[-1]))
        resid = op_norm(dec.reconstruct() - m)
        assert resid <= 1e-10 * scale


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(NotHermitianError):
        hermitian_eig(np.zeros((2, 3)))


def test_eig_rejects_non_finite():
    with pytest.raises(ValueError):
        hermitian_eig(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_eig_deterministic():
    m = random_hermitian(np.random.default_rng(5), 16)
    a = hermitian_eig(m)
    b = hermitian_eig(m.copy())
    np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)
    np.testing.assert_array_equal(a.eigenvectors, b.eigenvectors)


@given(st.integers(0, 10_000), st.integers(2, 24))
def test_eig_phase_convention_and_orthonormality(seed, n):
    m = random_hermitian(np.random.default_rng(seed), n)
    dec = hermitian_eig(m)
    gram = dec.eigenvectors.conj().T @ dec.eigenvectors
    assert np.max(np.abs(gram - np.eye(n))) < 1e-12
    assert np.all(np.diff(dec.eigenvalues) >= -1e-13)
    for k in range(n):
        col = dec.eigenvectors[:, k]
        pivot = col[int(np.argmax(np.abs(col)))]
        assert abs(pivot.imag) < 1e-12 and pivot.real > 0


# ---------------------------------------------------------------------------
# svd


def test_svd_rank_one():
    rng = np.random.default_rng(0)
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    w = rng.normal(size=4) + 1j * rng.normal(size=4)
    v /= np.linalg.norm(v)
    w /= np.linalg.norm(w)
    dec = svd(np.outer(v, w.conj()))
    np.testing.assert_allclose(dec.singular_values, [1, 0, 0, 0], atol=1e-12)


def test_svd_zero_matrix():
    dec = svd(np.zeros((3, 3)))
    np.testing.assert_allclose(dec.singular_values, 0.0, atol=0)


def test_svd_hand_solved_2x2():
    # singular values of [[1,1],[0,1]]: eigenvalues of M^dag M = [[1,1],[1,2]]
    # solve the quadratic by hand: (3 +- sqrt(5)) / 2, take square roots
    m = np.array([[1.0, 1.0], [0.0, 1.0]])
    expected = np.sqrt(np.array([(3 + np.sqrt(5)) / 2, (3 - np.sqrt(5)) / 2]))
    dec = svd(m)
    np.testing.assert_allclose(dec.singular_values, expected, atol=1e-12)
    np.testing.assert_allclose(expected, [(1 + np.sqrt(5)) / 2, (np.sqrt(5) - 1) / 2])


@given(st.integers(0, 10_000), st.integers(1, 12), st.integers(1, 12))
def test_svd_reconstruction(seed, rows, cols):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))
    dec = svd(m)
    assert np.all(np.diff(dec.singular_values) <= 1e-13)
    assert op_norm(dec.reconstruct() - m) <= 1e-10 * max(1.0, op_norm(m))


# ---------------------------------------------------------------------------
# operator_abs


def test_operator_abs_scalar_matrix():
    np.testing.assert_allclose(operator_abs(-2.0 * np.eye(2)), 2.0 * np.eye(2), atol=1e-12)


def test_operator_abs_fixes_psd():
    rng = np.random.default_rng(2)
    a = random_hermitian(rng, 5)
    psd = a @ a.conj().T
    np.testing.assert_allclose(operator_abs(psd), psd, atol=1e-10)


def test_operator_abs_pauli_z():
    # sqrt(sz sz^dag) = sqrt(I) = I, checked by direct multiplication
    np.testing.assert_allclose(operator_abs(SZ), np.eye(2), atol=1e-12)


def test_operator_abs_matches_singular_values():
    rng = np.random.default_rng(3)
    s = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    abs_s = operator_abs(s)
    sq = abs_s @ abs_s
    np.testing.assert_allclose(sq, s @ s.conj().T, atol=1e-9 * max(1.0, op_norm(s) ** 2))
    ev = np.linalg.eigvalsh(abs_s)[::-1]
    np.testing.assert_allclose(ev, singular_values(s), atol=1e-10)


# ---------------------------------------------------------------------------
# psd_leq


def test_psd_leq_trivial_cases():
    holds, margin = psd_leq(np.zeros((2, 2)), np.eye(2))
    assert holds and abs(margin - 1.0) < 1e-14
    holds, margin = psd_leq(np.eye(2), np.zeros((2, 2)))
    assert not holds and abs(margin + 1.0) < 1e-14


def test_psd_leq_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        psd_leq(np.array([[0.0, 1.0], [0.0, 0.0]]), np.eye(2))


def test_psd_leq_partial_order():
    rng = np.random.default_rng(11)
    tol = 1e-9
    mats = [random_hermitian(rng, 4) for _ in range(4)]
    for s in mats:
        holds, _ = psd_leq(s, s, tol)
        assert holds  # reflexive
    a = mats[0]
    b = a + 0.5 * np.eye(4)
    c = b + 0.5 * np.eye(4)
    assert psd_leq(a, b, tol)[0] and psd_leq(b, c, tol)[0]
    holds, margin = psd_leq(a, c, tol)
    assert holds and margin >= psd_leq(a, b, tol)[1] + psd_leq(b, c, tol)[1] - 2 * tol
    # antisymmetry up to tol: both directions only when nearly equal
    d = a + 1e-12 * np.eye(4)
    assert psd_leq(a, d, tol)[0] and psd_leq(d, a, tol)[0]
    assert op_norm(a - d) <= 10 * tol


# ---------------------------------------------------------------------------
# norms


def test_ui_norm_identity_hs():
    assert abs(ui_norm(np.eye(2), NormKind.HILBERT_SCHMIDT) - np.sqrt(2)) < 1e-14


def test_ui_norm_rank_one_normalized():
    rng = np.random.default_rng(4)
    v = rng.normal(size=5) + 1j * rng.normal(size=5)
    w = rng.normal(size=5) + 1j * rng.normal(size=5)
    dyad = np.outer(v / np.linalg.norm(v), (w / np.linalg.norm(w)).conj())
    for kind in NormKind:
        assert abs(ui_norm(dyad, kind) - 1.0) < 1e-12


def test_ui_norm_pauli_x_trace():
    assert abs(ui_norm(SX, NormKind.TRACE) - 2.0) < 1e-14


@given(st.integers(0, 10_000), st.integers(1, 12))
def test_norm_dominance(seed, n):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    op = ui_norm(m, NormKind.OPERATOR)
    hs = ui_norm(m, NormKind.HILBERT_SCHMIDT)
    tr = ui_norm(m, NormKind.TRACE)
    assert op <= hs + 1e-12 * max(1, tr) <= tr + 2e-12 * max(1, tr)


@given(st.integers(0, 10_000), st.integers(2, 10))
def test_unitary_invariance(seed, n):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    u = haar_unitary(n, rng)
    v = haar_unitary(n, rng)
    for kind in NormKind:
        before = ui_norm(m, kind)
        after = ui_norm(u @ m @ v, kind)
        assert abs(before - after) <= 1e-10 * max(1.0, before)


# ---------------------------------------------------------------------------
# singular dominance / appendix check


def test_singular_dominance_reflexive_and_scaled():
    rng = np.random.default_rng(6)
    t = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert singular_dominance(t, t)
    assert not singular_dominance(2 * t, t)


def test_singular_dominance_projected_products():
    # P S Q cannot beat S in any singular value
    rng = np.random.default_rng(7)
    for _ in range(20):
        s = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        u = haar_unitary(6, rng)
        p = u[:, :3] @ u[:, :3].conj().T
        v = haar_unitary(6, rng)
        q = v[:, :2] @ v[:, :2].conj().T
        assert singular_dominance(p @ s @ q, s, tol=1e-10)


def test_appendix_norm_check_cases():
    rng = np.random.default_rng(8)
    v = rng.normal(size=3) + 1j * rng.normal(size=3)
    w = rng.normal(size=3) + 1j * rng.normal(size=3)
    dyad = np.outer(v / np.linalg.norm(v), (w / np.linalg.norm(w)).conj())
    assert appendix_norm_check(dyad)
    assert appendix_norm_check(np.eye(2))  # 1 <= sqrt(2) <= 2
    m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    assert appendix_norm_check(m)
