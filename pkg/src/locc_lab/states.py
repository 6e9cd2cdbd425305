"""Bipartite states: pure vectors, density matrices, Schmidt decomposition,
ensembles, fidelity, decomposition parameterization, and seeded random
generation.

Amplitude vectors use row-major product indexing: component ``a * d_B + b``
is the amplitude on ``|a>|b>``.  All values are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .majorization import SchmidtVector
from .tolerances import TOL


def _complex_to_json(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _vector_to_json(v: np.ndarray) -> list[list[float]]:
    return [_complex_to_json(z) for z in v]


def _vector_from_json(data: Sequence[Sequence[float]]) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def _matrix_to_json(m: np.ndarray) -> list[list[list[float]]]:
    return [[_complex_to_json(z) for z in row] for row in m]


@dataclass(frozen=True)
class PureState:
    """Bipartite pure state, possibly subnormalized.

    The squared norm must lie in (0, 1]; states with squared norm below 1
    are flagged subnormalized (ensembles of such states appear when a
    single list carries both the weights and the directions).
    """

    amplitudes: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        d_a, d_b = self.dims
        if d_a < 1 or d_b < 1:
            raise ValueError(f"dims must be positive, got {self.dims}")
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != d_a * d_b:
            raise ValueError(
                f"amplitude length {amps.size} does not match dims {d_a}x{d_b}"
            )
        nrm2 = float(np.vdot(amps, amps).real)
        if nrm2 > 1.0 + TOL:
            raise ValueError(f"squared norm must not exceed 1, got {nrm2}")
        if nrm2 <= TOL:
            raise ValueError("state vector is numerically zero")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", (int(d_a), int(d_b)))

    @property
    def squared_norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def subnormalized(self) -> bool:
        return self.squared_norm < 1.0 - TOL

    def matrix(self) -> np.ndarray:
        """Amplitudes reshaped to a d_A x d_B coefficient matrix."""
        return self.amplitudes.reshape(self.dims)

    def normalized(self) -> "PureState":
        n = np.sqrt(self.squared_norm)
        return PureState(self.amplitudes / n, self.dims)

    def density(self) -> "DensityMatrix":
        amps = self.normalized().amplitudes
        return DensityMatrix(np.outer(amps, amps.conj()), self.dims)

    def to_json(self) -> dict:
        return {
            "dims": [self.dims[0], self.dims[1]],
            "amplitudes": _vector_to_json(self.amplitudes),
        }

    @classmethod
    def from_json(cls, data: dict) -> "PureState":
        return cls(_vector_from_json(data["amplitudes"]), tuple(data["dims"]))


def overlap(a: PureState, b: PureState) -> float:
    """Magnitude of the inner product (phase-insensitive state equality)."""
    if a.dims != b.dims:
        raise ValueError(f"dimension mismatch: {a.dims} vs {b.dims}")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace bipartite operator."""

    entries: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        d_a, d_b = self.dims
        d = d_a * d_b
        mat = np.asarray(self.entries, dtype=complex)
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {self.dims}")
        if np.max(np.abs(mat - mat.conj().T)) > TOL:
            raise ValueError("density matrix is not Hermitian")
        evals = np.linalg.eigvalsh(mat)
        if evals.min() < -TOL:
            raise ValueError(f"density matrix has negative eigenvalue {evals.min()}")
        tr = float(np.trace(mat).real)
        if abs(tr - 1.0) > TOL:
            raise ValueError(f"density matrix trace must be 1, got {tr}")
        mat.flags.writeable = False
        object.__setattr__(self, "entries", mat)
        object.__setattr__(self, "dims", (int(d_a), int(d_b)))

    def rank(self, tol: float = TOL) -> int:
        return int(np.sum(np.linalg.eigvalsh(self.entries) > tol))

    def eigen_ensemble(self, tol: float = TOL) -> "Ensemble":
        """Spectral decomposition as an ensemble (descending eigenvalues)."""
        evals, evecs = np.linalg.eigh(self.entries)
        order = np.argsort(evals)[::-1]
        members = []
        for idx in order:
            w = float(evals[idx])
            if w <= tol:
                continue
            members.append((w, PureState(evecs[:, idx], self.dims)))
        return Ensemble(tuple(members))

    def to_json(self) -> dict:
        return {
            "dims": [self.dims[0], self.dims[1]],
            "matrix": _matrix_to_json(self.entries),
        }

    @classmethod
    def from_json(cls, data: dict) -> "DensityMatrix":
        return cls(_vector_from_json(data["matrix"]), tuple(data["dims"]))


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Schmidt form of a pure state.

    ``coefficients`` are descending and unit-sum; the columns of
    ``basis_a`` and ``basis_b`` are the local Schmidt bases (full square
    unitaries, the first rank columns carrying the state).  ``source_norm``
    records the norm of the input before normalization.
    """

    coefficients: SchmidtVector
    basis_a: np.ndarray
    basis_b: np.ndarray
    dims: tuple[int, int]
    source_norm: float = 1.0

    def state(self) -> PureState:
        """Reconstruct the (unit-norm) state from the decomposition."""
        d_a, d_b = self.dims
        n = len(self.coefficients)
        mat = np.zeros((d_a, d_b), dtype=complex)
        for k in range(n):
            c = self.coefficients.values[k]
            if c <= 0.0:
                continue
            mat += np.sqrt(c) * np.outer(self.basis_a[:, k], self.basis_b[:, k])
        return PureState(mat.reshape(-1), self.dims)

    def to_json(self) -> dict:
        return {
            "dims": [self.dims[0], self.dims[1]],
            "coefficients": self.coefficients.to_json(),
            "basis_A": _matrix_to_json(self.basis_a),
            "basis_B": _matrix_to_json(self.basis_b),
            "source_norm": float(self.source_norm),
        }


@dataclass(frozen=True)
class Ensemble:
    """Weighted list of unit-norm pure states realizing a density matrix."""

    members: tuple[tuple[float, PureState], ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError("ensemble must have at least one member")
        members = tuple((float(w), s) for w, s in self.members)
        dims = members[0][1].dims
        total = 0.0
        for w, state in members:
            if w < -TOL:
                raise ValueError(f"negative ensemble weight {w}")
            if state.dims != dims:
                raise ValueError("ensemble members must share dimensions")
            if abs(state.squared_norm - 1.0) > TOL:
                raise ValueError("ensemble members must be unit-norm")
            total += w
        if abs(total - 1.0) > TOL:
            raise ValueError(f"ensemble weights must sum to 1, got {total}")
        object.__setattr__(self, "members", members)

    @property
    def dims(self) -> tuple[int, int]:
        return self.members[0][1].dims

    def __len__(self) -> int:
        return len(self.members)

    def weighted_schmidt_vectors(self) -> list[tuple[float, SchmidtVector]]:
        return [(w, schmidt_decompose(s).coefficients) for w, s in self.members]

    def to_json(self) -> dict:
        return {
            "members": [
                {"weight": float(w), "state": s.to_json()} for w, s in self.members
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> "Ensemble":
        return cls(
            tuple(
                (m["weight"], PureState.from_json(m["state"]))
                for m in data["members"]
            )
        )


def schmidt_decompose(psi: PureState) -> SchmidtDecomposition:
    """Schmidt decomposition with deterministic phase conventions.

    Subnormalized input is normalized first; the original norm is kept in
    ``source_norm``.  Each Schmidt basis pair is rotated so the largest
    component of the A-side vector is real positive, which pins the
    per-pair phase freedom.
    """
    norm = np.sqrt(psi.squared_norm)
    mat = psi.matrix() / norm
    u, s, vh = np.linalg.svd(mat, full_matrices=True)
    n = s.size
    u = u.copy()
    vh = vh.copy()
    for k in range(n):
        jmax = int(np.argmax(np.abs(u[:, k])))
        ref = u[jmax, k]
        if abs(ref) > 0.0:
            phase = ref / abs(ref)
            u[:, k] *= phase.conjugate()
            vh[k, :] *= phase
    coeffs = s**2
    coeffs = coeffs / coeffs.sum()
    return SchmidtDecomposition(
        coefficients=SchmidtVector(coeffs),
        basis_a=u,
        basis_b=vh.T,
        dims=psi.dims,
        source_norm=float(norm),
    )


def schmidt_form_state(values, dims: tuple[int, int]) -> PureState:
    """State sum_k sqrt(v_k) |k>|k> in the standard product basis."""
    vec = values.values if isinstance(values, SchmidtVector) else np.asarray(values, float)
    d_a, d_b = dims
    n = min(d_a, d_b)
    if vec.size > n:
        if np.any(vec[n:] > TOL):
            raise ValueError(f"vector rank exceeds min dimension {n}")
        vec = vec[:n]
    mat = np.zeros((d_a, d_b), dtype=complex)
    for k in range(vec.size):
        mat[k, k] = np.sqrt(max(vec[k], 0.0))
    return PureState(mat.reshape(-1), dims)


def reduced_state(state, party: str) -> np.ndarray:
    """Reduced density matrix of one party, normalized to unit trace.

    Accepts a :class:`PureState` (subnormalized input is renormalized) or
    a :class:`DensityMatrix`; ``party`` is ``"A"`` or ``"B"``.
    """
    if party not in ("A", "B"):
        raise ValueError(f"party must be 'A' or 'B', got {party!r}")
    if isinstance(state, PureState):
        mat = state.matrix()
        mat = mat / np.sqrt(state.squared_norm)
        if party == "A":
            return mat @ mat.conj().T
        return mat.T @ mat.conj()
    if isinstance(state, DensityMatrix):
        d_a, d_b = state.dims
        r = state.entries.reshape(d_a, d_b, d_a, d_b)
        if party == "A":
            return np.einsum("aibi->ab", r)
        return np.einsum("aiaj->ij", r)
    raise TypeError(f"expected PureState or DensityMatrix, got {type(state)!r}")


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    evals, evecs = np.linalg.eigh(mat)
    if evals.min() < -TOL:
        raise ValueError(f"matrix is not positive semidefinite: {evals.min()}")
    evals = np.clip(evals, 0.0, None)
    return (evecs * np.sqrt(evals)) @ evecs.conj().T


def sqrt_fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Square-root fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)).

    Evaluated as the trace norm of sqrt(rho) sqrt(sigma), which is
    symmetric in its arguments and reduces to the overlap magnitude on
    pure inputs.
    """
    if rho.dims != sigma.dims:
        raise ValueError(f"dimension mismatch: {rho.dims} vs {sigma.dims}")
    product = _psd_sqrt(rho.entries) @ _psd_sqrt(sigma.entries)
    f = float(np.linalg.svd(product, compute_uv=False).sum())
    return min(1.0, max(0.0, f))


def assemble(ensemble: Ensemble) -> DensityMatrix:
    """Density matrix sum_i w_i |psi_i><psi_i| of an ensemble."""
    dims = ensemble.dims
    d = dims[0] * dims[1]
    rho = np.zeros((d, d), dtype=complex)
    for w, state in ensemble.members:
        amps = state.amplitudes
        rho += w * np.outer(amps, amps.conj())
    return DensityMatrix(rho, dims)


def enumerate_decompositions(
    rho: DensityMatrix, size: int, mixer: np.ndarray
) -> Ensemble:
    """Ensemble of ``size`` states realizing ``rho`` from an isometry.

    Every decomposition of ``rho`` into at most ``size`` pure states
    arises by applying a ``size x rank`` matrix with orthonormal columns
    to the eigendecomposition; the weights are the squared norms of the
    mixed vectors.  Members with numerically zero weight are dropped.
    """
    evals, evecs = np.linalg.eigh(rho.entries)
    order = np.argsort(evals)[::-1]
    evals = np.clip(evals[order], 0.0, None)
    evecs = evecs[:, order]
    rank = int(np.sum(evals > TOL))
    if size < rank:
        raise ValueError(f"size {size} is below rank {rank}")
    mixer = np.asarray(mixer, dtype=complex)
    if mixer.shape != (size, rank):
        raise ValueError(f"mixer shape {mixer.shape} must be ({size}, {rank})")
    gram = mixer.conj().T @ mixer
    if np.max(np.abs(gram - np.eye(rank))) > 1e-8:
        raise ValueError("mixer columns must be orthonormal")
    basis = (evecs[:, :rank] * np.sqrt(evals[:rank])).T
    vectors = mixer @ basis
    weights = np.einsum("ij,ij->i", vectors.conj(), vectors).real
    members = []
    for w, vec in zip(weights, vectors):
        if w <= 1e-14:
            continue
        members.append((float(w), PureState(vec / np.sqrt(w), rho.dims)))
    return Ensemble(tuple(members))


def random_pure(dims: tuple[int, int], seed) -> PureState:
    """Haar-random pure state on the product space, deterministic per seed."""
    rng = np.random.default_rng(seed)
    d = dims[0] * dims[1]
    vec = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(vec / np.linalg.norm(vec), dims)


def random_density(dims: tuple[int, int], rank: int, seed) -> DensityMatrix:
    """Random density matrix of the given rank (Wishart construction)."""
    d = dims[0] * dims[1]
    if not 1 <= rank <= d:
        raise ValueError(f"rank must lie in [1, {d}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return DensityMatrix(rho, dims)
