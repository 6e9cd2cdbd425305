"""Positivity of Hermiticity-preserving maps on restricted state sets.

A map is positive with respect to a source Schmidt vector when its
identity extension stays positive on every state reachable exactly from
that source.  Positivity on a convex set is determined by its extreme
points, which here are the pure states whose Schmidt vector majorizes
the source's, so the checker samples such states directly.  A found
violation is a re-validating witness; a pass is a semi-decision.

The same machinery cross-checks the implication between source-restricted
positivity and positivity on all states of bounded Schmidt rank.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .majorization import SchmidtVector, VectorLike, as_schmidt_vector, majorizes
from .states import DensityMatrix, PureState, _matrix_to_json, _vector_from_json, schmidt_decompose
from .tolerances import TOL


@dataclass(frozen=True)
class HermitianPreservingMap:
    """Linear map on n x n matrices stored through its action on matrix
    units: block (i, j) of ``choi`` is the image of E_ij.  The map
    preserves Hermiticity exactly when ``choi`` is Hermitian."""

    choi: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.choi, dtype=complex)
        n2 = mat.shape[0]
        n = int(round(np.sqrt(n2)))
        if mat.shape != (n2, n2) or n * n != n2:
            raise ValueError(f"Choi matrix must be square of size n^2, got {mat.shape}")
        if np.max(np.abs(mat - mat.conj().T)) > TOL:
            raise ValueError("Choi matrix must be Hermitian")
        mat.flags.writeable = False
        object.__setattr__(self, "choi", mat)

    @property
    def dim(self) -> int:
        return int(round(np.sqrt(self.choi.shape[0])))

    def blocks(self) -> np.ndarray:
        n = self.dim
        return self.choi.reshape(n, n, n, n)

    def to_json(self) -> dict:
        n = self.dim
        return {"dims": [n, n], "matrix": _matrix_to_json(self.choi)}

    @classmethod
    def from_json(cls, data: dict) -> "HermitianPreservingMap":
        return cls(_vector_from_json(data["matrix"]))


def identity_map(n: int) -> HermitianPreservingMap:
    c = np.zeros((n, n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            c[i, i, j, j] = 1.0
    return HermitianPreservingMap(c.reshape(n * n, n * n))


def transpose_map(n: int) -> HermitianPreservingMap:
    c = np.zeros((n, n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            c[i, j, j, i] = 1.0
    return HermitianPreservingMap(c.reshape(n * n, n * n))


def trace_map(n: int) -> HermitianPreservingMap:
    """X -> Tr(X) I / n."""
    c = np.zeros((n, n, n, n), dtype=complex)
    for i in range(n):
        for k in range(n):
            c[i, k, i, k] = 1.0 / n
    return HermitianPreservingMap(c.reshape(n * n, n * n))


def reduction_like_map(n: int, factor: float = 2.0) -> HermitianPreservingMap:
    """X -> factor Tr(X) I / n - X."""
    ident = identity_map(n).choi
    trace = trace_map(n).choi
    return HermitianPreservingMap(factor * trace - ident)


def averaged_map(n: int) -> HermitianPreservingMap:
    """X -> (X + Tr(X) I / n) / 2 (completely positive mixture)."""
    ident = identity_map(n).choi
    trace = trace_map(n).choi
    return HermitianPreservingMap((ident + trace) / 2.0)


def apply_map(m: HermitianPreservingMap, x: np.ndarray) -> np.ndarray:
    """Image of a square matrix under the map."""
    x = np.asarray(x, dtype=complex)
    n = m.dim
    if x.shape != (n, n):
        raise ValueError(f"operand shape {x.shape} does not match map dimension {n}")
    return np.einsum("ij,ikjl->kl", x, m.blocks())


def apply_extended(m: HermitianPreservingMap, rho: DensityMatrix) -> np.ndarray:
    """Image of a bipartite state under the identity extension, acting
    on the second factor."""
    n = m.dim
    d_a, d_b = rho.dims
    if d_b != n:
        raise ValueError(f"second factor dim {d_b} does not match map dimension {n}")
    r = rho.entries.reshape(d_a, d_b, d_a, d_b)
    out = np.einsum("aibj,ikjl->akbl", r, m.blocks())
    return out.reshape(d_a * n, d_a * n)


@dataclass(frozen=True)
class ViolationWitness:
    """Reachable pure state taken negative by the extended map."""

    state: PureState
    eigenvalue: float

    def to_json(self) -> dict:
        return {"state": self.state.to_json(), "eigenvalue": float(self.eigenvalue)}


@dataclass(frozen=True)
class MapPositivityReport:
    passed: bool
    witness: Optional[ViolationWitness]
    samples: int
    min_eigenvalue: float

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "witness": self.witness.to_json() if self.witness else None,
            "samples": int(self.samples),
            "min_eigenvalue": float(self.min_eigenvalue),
        }


def _haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def _sample_majorizing(rng: np.random.Generator, mu: np.ndarray) -> np.ndarray:
    """Random Schmidt vector majorizing ``mu``.

    Built constructively by repeatedly transferring random mass from a
    smaller entry to a larger one (each transfer moves the vector up in
    the majorization order), which covers the whole reachable polytope's
    interior and stays exact even when the polytope is degenerate.
    """
    nu = mu.copy()
    n = nu.size
    if n < 2:
        return nu
    for _ in range(int(rng.integers(0, 2 * n + 1))):
        i, j = sorted(rng.choice(n, size=2, replace=False))
        delta = rng.random() * nu[j]
        nu[i] += delta
        nu[j] -= delta
        nu = np.sort(nu)[::-1]
    return nu


def _schmidt_pure(nu: np.ndarray, u: np.ndarray, v: np.ndarray) -> PureState:
    n = nu.size
    mat = (u * np.sqrt(np.clip(nu, 0.0, None))) @ v.T
    return PureState(mat.reshape(-1), (n, n))


def mu_positivity_check(
    m: HermitianPreservingMap, mu: VectorLike, samples: int, seed
) -> MapPositivityReport:
    """Sample extreme points of the source-reachable set and test the
    extended map for positivity on them.

    The sampled Schmidt vectors always majorize ``mu`` (the first two
    samples probe the boundary cases: the source vector itself and a
    product state).  Any violation is re-validated before being
    reported; its witness carries the state and the negative eigenvalue.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    n = m.dim
    mu_vals = as_schmidt_vector(mu).padded(n)
    rng = np.random.default_rng(seed)
    min_eig = np.inf
    for idx in range(samples):
        if idx == 0:
            nu = mu_vals.copy()
        elif idx == 1:
            nu = np.zeros(n)
            nu[0] = 1.0
        else:
            nu = _sample_majorizing(rng, mu_vals)
        u = _haar_unitary(rng, n)
        v = _haar_unitary(rng, n)
        psi = _schmidt_pure(nu, u, v)
        extended = apply_extended(m, psi.density())
        eig = float(np.linalg.eigvalsh(extended).min())
        min_eig = min(min_eig, eig)
        if eig < -TOL:
            coeffs = schmidt_decompose(psi).coefficients
            if not majorizes(coeffs, mu):
                continue  # re-validation failed; keep sampling
            recheck = float(np.linalg.eigvalsh(apply_extended(m, psi.density())).min())
            if recheck < -TOL:
                return MapPositivityReport(
                    False, ViolationWitness(psi, recheck), idx + 1, recheck
                )
    return MapPositivityReport(True, None, samples, min_eig)


def rank_positivity_check(
    m: HermitianPreservingMap, k: int, samples: int, seed
) -> MapPositivityReport:
    """Sample pure states of Schmidt rank at most ``k`` and test the
    extended map on them (the rank-limited positivity notion).

    The first sample probes the maximally entangled rank-k state, which
    is the decisive test point for rank-k positivity.
    """
    n = m.dim
    if not 1 <= k <= n:
        raise ValueError(f"rank must lie in [1, {n}], got {k}")
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = np.random.default_rng(seed)
    min_eig = np.inf
    for idx in range(samples):
        nu = np.zeros(n)
        if idx == 0:
            nu[:k] = 1.0 / k
        else:
            raw = rng.dirichlet(np.ones(k))
            nu[:k] = np.sort(raw)[::-1]
        u = _haar_unitary(rng, n)
        v = _haar_unitary(rng, n)
        psi = _schmidt_pure(nu, u, v)
        extended = apply_extended(m, psi.density())
        eig = float(np.linalg.eigvalsh(extended).min())
        min_eig = min(min_eig, eig)
        if eig < -TOL:
            return MapPositivityReport(
                False, ViolationWitness(psi, eig), idx + 1, eig
            )
    return MapPositivityReport(True, None, samples, min_eig)


@dataclass(frozen=True)
class ImplicationReport:
    """Joint report: source-restricted positivity, rank-k positivity at
    the source's Schmidt rank, and their consistency.

    Source-restricted positivity implies rank-k positivity, so a run
    that passes the source check while finding a rank-k violation is
    flagged inconsistent (possible only through sampling slack)."""

    schmidt_rank: int
    mu_report: MapPositivityReport
    rank_report: MapPositivityReport

    @property
    def consistent(self) -> bool:
        return not (self.mu_report.passed and not self.rank_report.passed)

    def to_json(self) -> dict:
        return {
            "schmidt_rank": int(self.schmidt_rank),
            "mu_positivity": self.mu_report.to_json(),
            "rank_positivity": self.rank_report.to_json(),
            "consistent": self.consistent,
        }


def k_positivity_implication_check(
    m: HermitianPreservingMap, mu: VectorLike, samples: int, seed
) -> ImplicationReport:
    """Run both positivity samplers at the same budget and report
    whether their verdicts respect the implication."""
    mu_vec = as_schmidt_vector(mu)
    k = int(np.sum(mu_vec.values > TOL))
    mu_report = mu_positivity_check(m, mu_vec, samples, seed)
    rank_report = rank_positivity_check(m, k, samples, seed)
    return ImplicationReport(k, mu_report, rank_report)
