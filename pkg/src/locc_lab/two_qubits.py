"""Closed-form two-qubit machinery.

Concurrence, entanglement of formation, and exact, probabilistic, and
approximate reachable-set membership for two-qubit states.  Everything
here is decidable analytically, which makes this module the oracle
against which the generic decomposition search is cross-checked.

For two qubits the majorization order on pure states is total and the
source is characterized by its smaller Schmidt coefficient alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .majorization import SchmidtVector
from .states import DensityMatrix
from .tolerances import TOL

_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SPIN_FLIP = np.kron(_SIGMA_Y, _SIGMA_Y)


@dataclass(frozen=True)
class TwoQubitMu:
    """Two-qubit source Schmidt vector, parameterized by its smaller
    coefficient ``mu2`` in [0, 1/2]."""

    mu2: float

    def __post_init__(self):
        if not 0.0 <= self.mu2 <= 0.5 + TOL:
            raise ValueError(f"mu2 must lie in [0, 1/2], got {self.mu2}")
        object.__setattr__(self, "mu2", float(min(self.mu2, 0.5)))

    @property
    def mu1(self) -> float:
        return 1.0 - self.mu2

    def vector(self) -> SchmidtVector:
        return SchmidtVector(np.array([self.mu1, self.mu2]))


def _as_mu2(mu) -> float:
    if isinstance(mu, TwoQubitMu):
        return mu.mu2
    return TwoQubitMu(float(mu)).mu2


def _require_two_qubits(rho: DensityMatrix):
    if rho.dims != (2, 2):
        raise ValueError(f"expected a two-qubit state, got dims {rho.dims}")


def concurrence(rho: DensityMatrix) -> float:
    """Concurrence of a two-qubit state from the spin-flip spectrum.

    The spectrum is computed from the eigenvalues of rho times its
    spin-flipped conjugate, which is numerically stabler than nesting
    matrix square roots and yields the same values.
    """
    _require_two_qubits(rho)
    flipped = _SPIN_FLIP @ rho.entries.conj() @ _SPIN_FLIP
    evals = np.linalg.eigvals(rho.entries @ flipped)
    svals = np.sqrt(np.clip(evals.real, 0.0, None))
    svals = np.sort(svals)[::-1]
    c = svals[0] - svals[1] - svals[2] - svals[3]
    return float(min(1.0, max(0.0, c)))


def min_mu2(rho: DensityMatrix) -> float:
    """Smallest source parameter mu2 from which ``rho`` is reachable
    exactly: (1 - sqrt(1 - C^2)) / 2 with C the concurrence."""
    c = concurrence(rho)
    return float((1.0 - np.sqrt(max(0.0, 1.0 - c * c))) / 2.0)


def binary_entropy(x: float) -> float:
    """H2(x) in bits with the 0 log 0 = 0 convention."""
    if not -TOL <= x <= 1.0 + TOL:
        raise ValueError(f"argument must lie in [0, 1], got {x}")
    x = min(1.0, max(0.0, x))
    out = 0.0
    for v in (x, 1.0 - x):
        if v > 0.0:
            out -= v * np.log2(v)
    return float(out)


def eof(rho: DensityMatrix) -> float:
    """Entanglement of formation in bits: the binary entropy of the
    smallest reachable source parameter."""
    return binary_entropy(min_mu2(rho))


def membership_exact_2q(rho: DensityMatrix, mu) -> bool:
    """Whether ``rho`` is reachable exactly from the two-qubit source
    with smaller Schmidt coefficient ``mu``."""
    _require_two_qubits(rho)
    return min_mu2(rho) <= _as_mu2(mu) + TOL


def membership_prob_2q(rho: DensityMatrix, mu, q: float) -> bool:
    """Whether ``rho`` is reachable with probability at least ``q``.

    For two qubits the probabilistic sets collapse: any success
    probability up to twice the source parameter reaches every state,
    and beyond that threshold the set coincides with the exact set of
    the rescaled source parameter mu2 / q.
    """
    _require_two_qubits(rho)
    if not 0.0 < q <= 1.0:
        raise ValueError(f"probability must lie in (0, 1], got {q}")
    mu2 = _as_mu2(mu)
    if q <= 2.0 * mu2 + TOL:
        return True
    return membership_exact_2q(rho, mu2 / q)


def approx_threshold_alpha(mu, f: float) -> float:
    """Largest Schmidt coefficient alpha at which a pure two-qubit
    target becomes approximable with fidelity ``f`` from the source
    ``mu``.

    The achievable fidelity sqrt(alpha mu1) + sqrt((1 - alpha) mu2) is
    strictly increasing in alpha on [1/2, mu1] and reaches 1 at mu1;
    the threshold is found by bisection to 1e-12.  Values of ``f`` at or
    below the fidelity of the balanced target give 1/2 (every state
    qualifies); f = 1 gives mu1 (the exact set).
    """
    if not 0.0 <= f <= 1.0 + TOL:
        raise ValueError(f"fidelity must lie in [0, 1], got {f}")
    mu2 = _as_mu2(mu)
    mu1 = 1.0 - mu2

    def fmax(alpha: float) -> float:
        return float(np.sqrt(alpha * mu1) + np.sqrt((1.0 - alpha) * mu2))

    if f >= 1.0 - 1e-12:
        return mu1
    if f <= fmax(0.5):
        return 0.5
    lo, hi = 0.5, mu1
    while hi - lo > 1e-12:
        mid = (lo + hi) / 2.0
        if fmax(mid) < f:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def membership_approx_2q(rho: DensityMatrix, mu, f: float) -> bool:
    """Whether ``rho`` is approximable with fidelity at least ``f`` from
    the two-qubit source ``mu``.

    The approximate set equals the exact set of a relaxed source whose
    larger coefficient is the approximation threshold."""
    _require_two_qubits(rho)
    alpha = approx_threshold_alpha(mu, f)
    return membership_exact_2q(rho, 1.0 - alpha)
