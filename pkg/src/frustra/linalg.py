"""Dense complex-matrix kernel.

Hermitian eigendecomposition, SVD, operator absolute value, the
positive-semidefinite (PSD) ordering test, and the three normalized
unitarily invariant norms (operator, Hilbert-Schmidt, trace).  Everything
downstream (local spectra, frustration energies, canonical angles) is
built on these few operations.

All functions are pure and deterministic for identical input: eigenvalues
come back ascending, singular values descending, and every returned
eigen/singular vector carries a fixed phase convention (largest-magnitude
entry real and positive) so vector-valued results are reproducible
across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NoConvergenceError, NotHermitianError

# Structural checks use 1e-9 * scale, reconstruction-grade checks
# 1e-10 * scale; adequate for double precision at dims <= few hundred.
STRUCTURAL_TOL = 1e-9
RECONSTRUCTION_TOL = 1e-10


class NormKind(Enum):
    """Normalized unitarily invariant norms: rank-1 unit dyads have norm 1."""

    OPERATOR = "operator"
    HILBERT_SCHMIDT = "hilbert_schmidt"
    TRACE = "trace"


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenvalues ascending, orthonormal eigenvector columns, phase-fixed."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


@dataclass(frozen=True, eq=False)
class SVDResult:
    """Singular values descending; U/V columns orthonormal, U phase-fixed."""

    singular_values: np.ndarray
    left: np.ndarray
    right: np.ndarray  # columns; matrix = left @ diag(s) @ right.conj().T

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.singular_values) @ self.right.conj().T


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def op_norm(m) -> float:
    """Operator (spectral) norm: the largest singular value."""
    a = _as_matrix(m)
    return float(np.linalg.norm(a, 2))


def fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive.

    Ties in magnitude resolve to the lowest row index, so the output is a
    deterministic function of the input.
    """
    v = np.array(vectors, dtype=complex, copy=True)
    for k in range(v.shape[1]):
        col = v[:, k]
        i = int(np.argmax(np.abs(col)))
        pivot = col[i]
        if abs(pivot) > 0:
            v[:, k] = col * (pivot.conjugate() / abs(pivot))
    return v


def hermitian_eig(m, tol: float = STRUCTURAL_TOL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Raises NotHermitianError unless ||M - M^dag|| <= tol * max(1, ||M||),
    NoConvergenceError if the underlying iteration fails.  The returned
    eigenvectors are orthonormal columns paired with ascending eigenvalues.
    Reconstruction holds to RECONSTRUCTION_TOL * max(1, ||M||).
    """
    a = _as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise NotHermitianError(f"matrix is not square: shape {a.shape}")
    scale = max(1.0, op_norm(a))
    asym = float(np.linalg.norm(a - a.conj().T, 2))
    if asym > tol * scale:
        raise NotHermitianError(f"asymmetry {asym:.3e} exceeds {tol:.1e} * {scale:.3e}")
    h = (a + a.conj().T) / 2.0
    try:
        vals, vecs = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergenceError(str(exc)) from exc
    return EigenDecomposition(vals, fix_phases(vecs))


def svd(m) -> SVDResult:
    """Singular value decomposition with the package phase convention.

    Left singular vectors are phase-fixed; the compensating phase moves to
    the right vectors, so reconstruction is unaffected.
    """
    a = _as_matrix(m)
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergenceError(str(exc)) from exc
    u_fixed = fix_phases(u)
    # per-column phase applied to u must be undone on the matching row of vh
    for k in range(u.shape[1]):
        ref = u[:, k]
        i = int(np.argmax(np.abs(ref)))
        pivot = ref[i]
        if abs(pivot) > 0:
            vh[k, :] *= pivot / abs(pivot)
    return SVDResult(s, u_fixed, vh.conj().T)


def singular_values(m) -> np.ndarray:
    """Singular values, descending."""
    a = _as_matrix(m)
    return np.linalg.svd(a, compute_uv=False)


def operator_abs(s) -> np.ndarray:
    """Operator absolute value sqrt(S S^dag), a Hermitian PSD matrix."""
    a = _as_matrix(s)
    if a.shape[0] != a.shape[1]:
        raise ValueError("operator absolute value requires a square matrix")
    d = svd(a)
    return (d.left * d.singular_values) @ d.left.conj().T


def psd_leq(s, t, tol: float = STRUCTURAL_TOL) -> tuple[bool, float]:
    """Test S <= T in the PSD order; returns (holds, margin).

    margin is the smallest eigenvalue of T - S; the order holds when
    margin >= -tol * max(1, ||T - S||).
    """
    a = _as_matrix(s)
    b = _as_matrix(t)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise NotHermitianError(f"incompatible shapes {a.shape} vs {b.shape}")
    for name, mat in (("S", a), ("T", b)):
        if np.linalg.norm(mat - mat.conj().T, 2) > tol * max(1.0, op_norm(mat)):
            raise NotHermitianError(f"{name} is not Hermitian within tolerance")
    diff = b - a
    diff = (diff + diff.conj().T) / 2.0
    margin = float(np.linalg.eigvalsh(diff)[0])
    holds = margin >= -tol * max(1.0, float(np.linalg.norm(diff, 2)))
    return holds, margin


def ui_norm(s, kind: NormKind) -> float:
    """Normalized unitarily invariant norm of a matrix.

    OPERATOR: largest singular value; HILBERT_SCHMIDT: sqrt of the sum of
    squared singular values; TRACE: sum of singular values.
    """
    sv = singular_values(s)
    if kind is NormKind.OPERATOR:
        return float(sv[0]) if sv.size else 0.0
    if kind is NormKind.HILBERT_SCHMIDT:
        return float(np.sqrt(np.sum(sv * sv)))
    if kind is NormKind.TRACE:
        return float(np.sum(sv))
    raise ValueError(f"unknown norm kind: {kind!r}")


def singular_dominance(s, t, tol: float = 1e-12) -> bool:
    """True iff sigma_k(S) <= sigma_k(T) + tol for all k (both descending).

    This is the checkable certificate for the existential statement
    "there is a unitary U with |S| <= U |T| U^dag": sorted singular-value
    dominance is necessary (Weyl ordering under the PSD order) and
    sufficient (align the eigenbases).
    """
    a = _as_matrix(s)
    b = _as_matrix(t)
    if a.shape != b.shape:
        raise ValueError(f"incompatible shapes {a.shape} vs {b.shape}")
    return bool(np.all(singular_values(a) <= singular_values(b) + tol))


def appendix_norm_check(s, tol: float = 1e-12) -> bool:
    """Operator norm <= Hilbert-Schmidt norm <= trace norm, within tol*scale."""
    sv = singular_values(s)
    if sv.size == 0:
        return True
    op = float(sv[0])
    hs = float(np.sqrt(np.sum(sv * sv)))
    tr = float(np.sum(sv))
    slack = tol * max(1.0, tr)
    return op <= hs + slack and hs <= tr + slack


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary, deterministic given the generator state."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
