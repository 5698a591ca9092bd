"""Geometric entanglement of pure states.

The measure is E(psi) = 1 - max |<psi|phi_1 x ... x phi_n>|^2, the maximal
squared overlap with a full product state subtracted from one.  It is zero
exactly on product states and at most 1 - 1/d for a d x d bipartite pair.

Three routes are provided:

* exact, for any bipartition, via the Schmidt decomposition (the optimal
  overlap is the largest Schmidt coefficient);
* alternating optimization for the multipartite case: cycling over sites,
  the optimal vector at one site given the others is a normalized partial
  contraction, so every update increases the overlap;
* a brute-force Bloch-sphere grid oracle for small all-qubit states, used
  to validate the optimizer.

The alternating route returns a certified lower bound on the overlap
(hence an upper bound on E); with restarts plus an initialization from the
dominant product-basis amplitude it reliably reaches the optimum at the
sizes treated here.  All routes are pure functions of (input, seed).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import InvalidBipartitionError, OracleScaleError
from .linalg import fix_phases, svd

DEFAULT_RESTARTS = 32
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITERS = 1000
DEFAULT_SEED = 0x5EED

_ORACLE_WORK_CAP = 4_000_000  # grid points evaluated in one coarse pass


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector over the product basis of listed site dims."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        dims = tuple(int(d) for d in self.dims)
        if amps.size != int(np.prod(dims)):
            raise ValueError(f"{amps.size} amplitudes incompatible with dims {dims}")
        nrm = float(np.linalg.norm(amps))
        if abs(nrm - 1.0) > 1e-10:
            raise ValueError(f"state not normalized: |norm - 1| = {abs(nrm - 1.0):.3e}")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def normalized(cls, amplitudes, dims) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        nrm = np.linalg.norm(amps)
        if nrm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(amps / nrm, tuple(dims))

    @property
    def num_sites(self) -> int:
        return len(self.dims)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)


def product_state(vectors: Sequence[np.ndarray], dims=None) -> PureState:
    """Tensor product of per-site unit vectors."""
    vecs = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
    amps = reduce(np.kron, vecs)
    return PureState.normalized(amps, dims or tuple(v.size for v in vecs))


def overlap_with_product(psi: PureState, vectors: Sequence[np.ndarray]) -> complex:
    """<psi | phi_1 x ... x phi_n> for per-party vectors matching psi.dims."""
    if tuple(np.asarray(v).size for v in vectors) != psi.dims:
        raise ValueError("ansatz vector dimensions do not match the state")
    out = psi.amplitudes.conj().reshape(psi.dims)
    for v in vectors:
        out = np.tensordot(out, np.asarray(v, dtype=complex), axes=([0], [0]))
    return complex(out)


def regroup_state(psi: PureState, parts: Sequence[Sequence[int]]) -> PureState:
    """View a state with sites merged into parties (amplitudes permuted)."""
    flat = [int(i) for part in parts for i in part]
    if sorted(flat) != list(range(psi.num_sites)):
        raise InvalidBipartitionError(f"parts {parts} do not partition the sites")
    tensor = psi.tensor().transpose(flat)
    dims = tuple(int(np.prod([psi.dims[i] for i in part])) for part in parts)
    return PureState(tensor.reshape(-1), dims)


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """coefficients descending (squares sum to 1); left/right orthonormal columns."""

    coefficients: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.left_vectors * self.coefficients) @ self.right_vectors.T


@dataclass(frozen=True, eq=False)
class GeometricMeasureResult:
    """E(psi) plus the maximizing product ansatz and how it was obtained."""

    value: float
    overlap_sq: float
    maximizer: tuple[np.ndarray, ...]
    method: str
    converged: bool
    restarts: int = 0
    iterations: int = 0
    traces: tuple = ()


def _result(psi: PureState, vectors, method: str, converged: bool,
            restarts: int = 0, iterations: int = 0, traces=()) -> GeometricMeasureResult:
    # recompute from the ansatz so value and overlap_sq are exactly consistent
    vecs = tuple(fix_phases(np.asarray(v, dtype=complex).reshape(-1, 1))[:, 0] for v in vectors)
    ov = min(abs(overlap_with_product(psi, vecs)) ** 2, 1.0)
    return GeometricMeasureResult(
        value=1.0 - ov,
        overlap_sq=ov,
        maximizer=vecs,
        method=method,
        converged=converged,
        restarts=restarts,
        iterations=iterations,
        traces=tuple(traces),
    )


def schmidt(psi: PureState, bipartition: tuple[Sequence[int], Sequence[int]]) -> SchmidtDecomposition:
    """Schmidt decomposition along a bipartition of the sites."""
    left = tuple(int(i) for i in bipartition[0])
    right = tuple(int(i) for i in bipartition[1])
    if sorted(left + right) != list(range(psi.num_sites)):
        raise InvalidBipartitionError(
            f"bipartition {left}|{right} does not cover sites 0..{psi.num_sites - 1} exactly once"
        )
    d_left = int(np.prod([psi.dims[i] for i in left]))
    matrix = psi.tensor().transpose(left + right).reshape(d_left, -1)
    dec = svd(matrix)
    resid = float(np.max(np.abs(dec.reconstruct() - matrix)))
    if resid > 1e-9:
        raise ArithmeticError(f"schmidt reconstruction residual {resid:.3e}")
    return SchmidtDecomposition(dec.singular_values, dec.left, dec.right.conj())


def geometric_measure_bipartite(
    psi: PureState, bipartition: tuple[Sequence[int], Sequence[int]] | None = None
) -> GeometricMeasureResult:
    """Exact geometric measure across a bipartition: 1 - lambda_0^2."""
    if bipartition is None:
        if psi.num_sites != 2:
            raise InvalidBipartitionError("state has more than two sites; pass a bipartition")
        bipartition = ((0,), (1,))
    if psi.num_sites == 2 and tuple(bipartition[0]) == (0,) and tuple(bipartition[1]) == (1,):
        grouped = psi
    else:
        grouped = regroup_state(psi, bipartition)
    dec = schmidt(grouped, ((0,), (1,)))
    return _result(grouped, (dec.left_vectors[:, 0], dec.right_vectors[:, 0]),
                   method="schmidt_exact", converged=True)


def _alternating_run(tensor_conj, dims, phis, tol, max_iters):
    """One alternating-maximization run from a given initialization."""
    n = len(dims)
    mats = [np.moveaxis(tensor_conj, i, 0).reshape(dims[i], -1) for i in range(n)]
    overlap = 0.0
    trace = []
    converged = False
    sweeps = 0
    for sweeps in range(1, max_iters + 1):
        current = overlap
        for i in range(n):
            rest = reduce(np.kron, [phis[k] for k in range(n) if k != i])
            w = mats[i] @ rest
            nrm = float(np.linalg.norm(w))
            if nrm == 0.0:
                # overlap is zero whatever phi_i is; reset the direction
                phis[i] = np.ones(dims[i], dtype=complex) / np.sqrt(dims[i])
                continue
            phis[i] = w.conj() / nrm
            current = nrm
        trace.append(current)
        if current - overlap < tol:
            overlap = current
            converged = True
            break
        overlap = current
    return overlap, phis, sweeps, converged, trace


def geometric_measure_multipartite(
    psi: PureState,
    restarts: int = DEFAULT_RESTARTS,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    seed: int = DEFAULT_SEED,
    record_trace: bool = False,
) -> GeometricMeasureResult:
    """Geometric measure by alternating optimization over per-site vectors.

    Runs ``restarts`` seeded random initializations plus one built from the
    dominant product-basis amplitude, and keeps the best overlap (ties go to
    the earliest run).  ``converged`` reports whether any run met ``tol``
    before ``max_iters`` sweeps.
    """
    if psi.num_sites < 2:
        raise ValueError("multipartite measure requires at least 2 parties")
    dims = psi.dims
    tensor_conj = psi.amplitudes.conj().reshape(dims)

    inits = []
    top = np.unravel_index(int(np.argmax(np.abs(psi.amplitudes))), dims)
    amp_init = []
    for i, d in enumerate(dims):
        e = np.zeros(d, dtype=complex)
        e[top[i]] = 1.0
        amp_init.append(e)
    inits.append(amp_init)
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        vecs = []
        for d in dims:
            v = rng.normal(size=d) + 1j * rng.normal(size=d)
            vecs.append(v / np.linalg.norm(v))
        inits.append(vecs)

    best_overlap = -1.0
    best_vectors = inits[0]
    total_sweeps = 0
    any_converged = False
    traces = []
    for phis in inits:
        ov, vecs, sweeps, conv, trace = _alternating_run(
            tensor_conj, dims, [v.copy() for v in phis], tol, max_iters
        )
        total_sweeps += sweeps
        any_converged = any_converged or conv
        if record_trace:
            traces.append(tuple(trace))
        if ov > best_overlap:
            best_overlap = ov
            best_vectors = vecs

    return _result(psi, best_vectors, method="alternating", converged=any_converged,
                   restarts=restarts, iterations=total_sweeps, traces=traces)


def _bloch_vectors(thetas: np.ndarray, phases: np.ndarray):
    """Qubit vectors for all (theta, phi) pairs; rows cos(t/2), e^{i p} sin(t/2)."""
    t = np.repeat(thetas, phases.size)
    p = np.tile(phases, thetas.size)
    vecs = np.stack([np.cos(t / 2.0), np.exp(1j * p) * np.sin(t / 2.0)], axis=1)
    return vecs, t, p


def _grid_pass(tensor_conj, candidate_sets):
    """Best overlap over the cross product of per-site candidate vectors.

    The last site is not gridded: given the others, its optimal vector is the
    normalized partial contraction, so it is solved in closed form.  This can
    only raise the overlap relative to gridding it too.
    """
    x = tensor_conj  # shape (d_0, ..., d_{n-1})
    for k, (cands, _, _) in enumerate(candidate_sets):
        # x: (c_0..c_{k-1}, d_k, d_{k+1}..) -> contract d_k against candidates
        x = np.moveaxis(np.tensordot(cands, x, axes=([1], [k])), 0, k)
    norms = np.linalg.norm(x, axis=-1)
    idx = np.unravel_index(int(np.argmax(norms)), norms.shape)
    w = x[idx]
    nrm = float(np.linalg.norm(w))
    return nrm, idx, w.conj() / nrm


def brute_force_geometric_measure(psi: PureState, grid_depth: int = 5) -> GeometricMeasureResult:
    """Grid-search oracle for small all-qubit states.

    All sites but the last sweep a Bloch-sphere (theta, phi) grid with
    2**grid_depth points per angle; the last site is optimized in closed
    form.  Three local refinement rounds around the best cell halve the step
    each time, leaving an O(step^2) error in the reported value.
    """
    dims = psi.dims
    if psi.amplitudes.size > 64 or any(d != 2 for d in dims):
        raise OracleScaleError("oracle accepts qubit states of total dimension <= 64")
    n = len(dims)
    if n < 2:
        raise OracleScaleError("oracle requires at least 2 sites")
    m = 2 ** int(grid_depth)
    if m < 2:
        raise OracleScaleError("grid_depth must be at least 1")
    if float(m * m) ** (n - 1) > _ORACLE_WORK_CAP:
        raise OracleScaleError(
            f"grid of {(m * m) ** (n - 1)} points exceeds the work cap; lower grid_depth"
        )
    tensor_conj = psi.amplitudes.conj().reshape(dims)
    thetas = np.linspace(0.0, np.pi, m)
    phases = np.arange(m) * (2.0 * np.pi / m)

    coarse = [_bloch_vectors(thetas, phases) for _ in range(n - 1)]
    best_overlap, idx, last_vec = _grid_pass(tensor_conj, coarse)
    centers = [(coarse[s][1][idx[s]], coarse[s][2][idx[s]]) for s in range(n - 1)]
    best_vectors = [coarse[s][0][idx[s]] for s in range(n - 1)] + [last_vec]

    theta_step = np.pi / (m - 1)
    phi_step = 2.0 * np.pi / m
    for round_idx in range(1, 4):
        half = 0.5 ** round_idx
        cand_sets = []
        for s in range(n - 1):
            th = np.clip(np.linspace(centers[s][0] - theta_step * half * 2,
                                     centers[s][0] + theta_step * half * 2, 5), 0.0, np.pi)
            ph = np.mod(np.linspace(centers[s][1] - phi_step * half * 2,
                                    centers[s][1] + phi_step * half * 2, 5), 2.0 * np.pi)
            cand_sets.append(_bloch_vectors(th, ph))
        overlap, idx, last_vec = _grid_pass(tensor_conj, cand_sets)
        if overlap > best_overlap:
            best_overlap = overlap
            centers = [(cand_sets[s][1][idx[s]], cand_sets[s][2][idx[s]]) for s in range(n - 1)]
            best_vectors = [cand_sets[s][0][idx[s]] for s in range(n - 1)] + [last_vec]

    return _result(psi, best_vectors, method="brute_force", converged=True)
