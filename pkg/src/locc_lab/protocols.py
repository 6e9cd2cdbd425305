"""Pure-to-pure LOCC conversions.

Feasibility tests, explicit protocol synthesis for exact and optimal
probabilistic conversions, the optimal approximation fidelity with its
maximizing Schmidt vector, fine-graining of measurement steps, and a
deterministic executor that enumerates or samples protocol outcomes.

A protocol is a sequence of one-party measurement steps; each step
carries Kraus operators for the acting party plus per-outcome local
unitary corrections on both sides.  Synthesized protocols are always
independently checkable by the executor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .majorization import (
    NotMajorizedError,
    SchmidtVector,
    VectorLike,
    as_schmidt_vector,
    majorizes,
    max_probability,
    t_transform_chain,
)
from .states import Ensemble, PureState, overlap, schmidt_decompose
from .tolerances import OVERLAP_TOL, TOL


@dataclass(frozen=True)
class LocalProtocolStep:
    """One measurement round by a single party.

    ``kraus`` lists the measurement operators acting on ``party``'s
    space; they must satisfy the completeness relation.  ``corrections``
    holds the per-outcome local unitaries (one for each party) applied
    after the outcome is known, and ``labels`` names the outcomes.
    """

    party: str
    kraus: tuple[np.ndarray, ...]
    corrections: tuple[tuple[np.ndarray, np.ndarray], ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if self.party not in ("A", "B"):
            raise ValueError(f"party must be 'A' or 'B', got {self.party!r}")
        kraus = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not kraus:
            raise ValueError("step must have at least one outcome")
        d = kraus[0].shape[0]
        if any(k.shape != (d, d) for k in kraus):
            raise ValueError("Kraus operators must be square and equally sized")
        if not (len(kraus) == len(self.corrections) == len(self.labels)):
            raise ValueError("kraus, corrections and labels must have equal length")
        total = sum(k.conj().T @ k for k in kraus)
        if np.max(np.abs(total - np.eye(d))) > TOL:
            raise ValueError("Kraus operators do not satisfy completeness")
        corrections = []
        for u, v in self.corrections:
            u = np.asarray(u, dtype=complex)
            v = np.asarray(v, dtype=complex)
            for mat in (u, v):
                if np.max(np.abs(mat @ mat.conj().T - np.eye(mat.shape[0]))) > 1e-8:
                    raise ValueError("correction operators must be unitary")
            corrections.append((u, v))
        for arrs in kraus:
            arrs.flags.writeable = False
        for u, v in corrections:
            u.flags.writeable = False
            v.flags.writeable = False
        object.__setattr__(self, "kraus", kraus)
        object.__setattr__(self, "corrections", tuple(corrections))
        object.__setattr__(self, "labels", tuple(str(l) for l in self.labels))

    def kraus_commute(self, tol: float = TOL) -> bool:
        """Whether all Kraus operators pairwise commute (one-round
        one-way certification)."""
        for i in range(len(self.kraus)):
            for j in range(i + 1, len(self.kraus)):
                comm = self.kraus[i] @ self.kraus[j] - self.kraus[j] @ self.kraus[i]
                if np.max(np.abs(comm)) > tol:
                    return False
        return True

    def to_json(self) -> dict:
        from .states import _matrix_to_json

        return {
            "party": self.party,
            "kraus": [_matrix_to_json(k) for k in self.kraus],
            "corrections": [
                {"U": _matrix_to_json(u), "V": _matrix_to_json(v)}
                for u, v in self.corrections
            ],
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, data: dict) -> "LocalProtocolStep":
        from .states import _vector_from_json

        return cls(
            party=data["party"],
            kraus=tuple(_vector_from_json(k) for k in data["kraus"]),
            corrections=tuple(
                (_vector_from_json(c["U"]), _vector_from_json(c["V"]))
                for c in data["corrections"]
            ),
            labels=tuple(data["labels"]),
        )


@dataclass(frozen=True)
class DeclaredOutcome:
    """Claimed aggregate outcome: all leaves whose label sequence ends
    with ``labels`` (empty tuple matches every leaf) must carry this
    state and total probability."""

    labels: tuple[str, ...]
    probability: float
    state: PureState

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "probability": float(self.probability),
            "state": self.state.to_json(),
        }


@dataclass(frozen=True)
class Protocol:
    """Ordered measurement steps with a declared source and outcome map."""

    source: PureState
    steps: tuple[LocalProtocolStep, ...]
    declared: tuple[DeclaredOutcome, ...] = ()

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "steps": [s.to_json() for s in self.steps],
            "declared_outcomes": [d.to_json() for d in self.declared],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Protocol":
        return cls(
            source=PureState.from_json(data["source"]),
            steps=tuple(LocalProtocolStep.from_json(s) for s in data["steps"]),
            declared=tuple(
                DeclaredOutcome(
                    tuple(d["labels"]),
                    d["probability"],
                    PureState.from_json(d["state"]),
                )
                for d in data.get("declared_outcomes", [])
            ),
        )


@dataclass(frozen=True)
class OutcomeLeaf:
    """Terminal branch of an executed protocol."""

    labels: tuple[str, ...]
    probability: float
    state: PureState

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "probability": float(self.probability),
            "state": self.state.to_json(),
        }


def _full_operators(step: LocalProtocolStep, dims: tuple[int, int]):
    """Kraus and correction operators lifted to the product space."""
    d_a, d_b = dims
    ops = []
    for k, (u, v) in zip(step.kraus, step.corrections):
        if step.party == "A":
            if k.shape[0] != d_a:
                raise ValueError(
                    f"Kraus dimension {k.shape[0]} does not match party A dim {d_a}"
                )
            full = np.kron(k, np.eye(d_b))
        else:
            if k.shape[0] != d_b:
                raise ValueError(
                    f"Kraus dimension {k.shape[0]} does not match party B dim {d_b}"
                )
            full = np.kron(np.eye(d_a), k)
        corr = np.kron(u, v)
        if corr.shape != full.shape:
            raise ValueError("correction dimensions do not match state dimensions")
        ops.append((full, corr))
    return ops


def execute(
    protocol: Protocol,
    source: Optional[PureState] = None,
    prune: float = 1e-14,
) -> tuple[OutcomeLeaf, ...]:
    """Exhaustively enumerate the protocol's outcome tree.

    Returns one leaf per surviving branch; branch probabilities sum to 1
    to working precision (branches below ``prune`` are dropped).
    """
    state = (source if source is not None else protocol.source).normalized()
    dims = state.dims
    step_ops = [_full_operators(s, dims) for s in protocol.steps]

    leaves: list[OutcomeLeaf] = []

    def recurse(vec: np.ndarray, idx: int, prob: float, labels: tuple[str, ...]):
        if idx == len(protocol.steps):
            leaves.append(OutcomeLeaf(labels, prob, PureState(vec, dims)))
            return
        step = protocol.steps[idx]
        for (full, corr), label in zip(step_ops[idx], step.labels):
            branch = full @ vec
            q = float(np.vdot(branch, branch).real)
            if prob * q <= prune:
                continue
            branch = corr @ (branch / np.sqrt(q))
            recurse(branch, idx + 1, prob * q, labels + (label,))

    recurse(state.amplitudes, 0, 1.0, ())
    total = sum(l.probability for l in leaves)
    if abs(total - 1.0) > 1e-9:
        raise RuntimeError(f"branch probabilities sum to {total}, expected 1")
    return tuple(leaves)


def verify_declared(
    protocol: Protocol,
    leaves: Optional[tuple[OutcomeLeaf, ...]] = None,
    overlap_tol: float = OVERLAP_TOL,
) -> bool:
    """Check the declared outcome map against the executed tree."""
    if leaves is None:
        leaves = execute(protocol)
    for decl in protocol.declared:
        k = len(decl.labels)
        matching = [
            l for l in leaves if k == 0 or l.labels[len(l.labels) - k :] == decl.labels
        ]
        total = sum(l.probability for l in matching)
        if abs(total - decl.probability) > 1e-9:
            return False
        target = decl.state.normalized()
        for leaf in matching:
            if overlap(leaf.state.normalized(), target) < 1.0 - overlap_tol:
                return False
    return True


def sample(protocol: Protocol, source: Optional[PureState], seed) -> OutcomeLeaf:
    """Simulate a single trajectory through the protocol."""
    state = (source if source is not None else protocol.source).normalized()
    rng = np.random.default_rng(seed)
    vec = state.amplitudes
    labels: tuple[str, ...] = ()
    prob = 1.0
    for step in protocol.steps:
        ops = _full_operators(step, state.dims)
        branches = [full @ vec for full, _ in ops]
        probs = np.array([float(np.vdot(b, b).real) for b in branches])
        probs = np.clip(probs, 0.0, None)
        probs /= probs.sum()
        idx = int(rng.choice(len(ops), p=probs))
        vec = ops[idx][1] @ (branches[idx] / np.linalg.norm(branches[idx]))
        labels += (step.labels[idx],)
        prob *= probs[idx]
    return OutcomeLeaf(labels, prob, PureState(vec, state.dims))


def sample_frequencies(
    protocol: Protocol, source: Optional[PureState], n_samples: int, seed
) -> dict[tuple[str, ...], int]:
    """Monte-Carlo outcome counts over ``n_samples`` trajectories.

    Vectorized over trajectories; statistically identical to calling
    :func:`sample` repeatedly with independent draws.
    """
    state = (source if source is not None else protocol.source).normalized()
    rng = np.random.default_rng(seed)
    d = state.amplitudes.size
    vecs = np.tile(state.amplitudes, (n_samples, 1))
    picks = np.zeros((n_samples, len(protocol.steps)), dtype=int)
    for s_idx, step in enumerate(protocol.steps):
        ops = _full_operators(step, state.dims)
        fulls = np.stack([f for f, _ in ops])
        corrs = np.stack([c for _, c in ops])
        branches = np.einsum("okd,nd->nok", fulls, vecs)
        probs = np.einsum("nok,nok->no", branches.conj(), branches).real
        probs = np.clip(probs, 0.0, None)
        probs /= probs.sum(axis=1, keepdims=True)
        u = rng.random(n_samples)
        idx = (u[:, None] > np.cumsum(probs, axis=1)).sum(axis=1)
        idx = np.minimum(idx, len(ops) - 1)
        chosen = branches[np.arange(n_samples), idx]
        norms = np.sqrt(
            np.einsum("nk,nk->n", chosen.conj(), chosen).real
        )
        chosen /= norms[:, None]
        vecs = np.einsum("nkd,nd->nk", corrs[idx], chosen)
        picks[:, s_idx] = idx
    counts: dict[tuple[str, ...], int] = {}
    uniq, cnt = np.unique(picks, axis=0, return_counts=True)
    for row, c in zip(uniq, cnt):
        labels = tuple(
            protocol.steps[i].labels[int(row[i])] for i in range(len(protocol.steps))
        )
        counts[labels] = counts.get(labels, 0) + int(c)
    return counts


def can_convert_exact(source_mu: VectorLike, target_lambda: VectorLike) -> bool:
    """Whether a deterministic conversion from a pure state with Schmidt
    vector ``source_mu`` to one with ``target_lambda`` exists."""
    return majorizes(target_lambda, source_mu)


def _swap_unitary(basis: np.ndarray, i: int, j: int) -> np.ndarray:
    """Unitary exchanging basis columns i and j, identity elsewhere."""
    d = basis.shape[0]
    perm = np.eye(d, dtype=complex)
    perm[[i, j]] = perm[[j, i]]
    return basis @ perm @ basis.conj().T


def synthesize_exact(source: PureState, target: PureState) -> Protocol:
    """Build a deterministic LOCC protocol carrying ``source`` to
    ``target``.

    The Schmidt-vector passage from target down to source is factored
    into T-transforms; each becomes a two-outcome measurement by Alice
    supported on a two-dimensional Schmidt subspace, with outcome-
    conditioned swap corrections on both sides.  The final local basis
    rotation is folded into the last step, so the protocol has at most
    n - 1 steps.  Every branch ends in ``target``.
    """
    if source.dims != target.dims:
        raise ValueError(f"dimension mismatch: {source.dims} vs {target.dims}")
    src = source.normalized()
    tgt = target.normalized()
    if overlap(src, tgt) >= 1.0 - 1e-12:
        return Protocol(src, (), (DeclaredOutcome((), 1.0, tgt),))

    sd_s = schmidt_decompose(src)
    sd_t = schmidt_decompose(tgt)
    mu = sd_s.coefficients
    lam = sd_t.coefficients
    try:
        chain = t_transform_chain(lam, mu)
    except NotMajorizedError as err:
        raise NotMajorizedError(
            err.prefix_index,
            f"exact conversion infeasible: target Schmidt prefix "
            f"{err.prefix_index} falls short of the source's",
        ) from None

    vectors = [lam.values]
    for step in chain.steps:
        vectors.append(step.apply(vectors[-1]))

    d_a, d_b = src.dims
    n = len(mu)
    basis_a, basis_b = sd_s.basis_a, sd_s.basis_b
    steps: list[LocalProtocolStep] = []
    for m in reversed(range(len(chain.steps))):
        tstep = chain.steps[m]
        w = vectors[m + 1]
        w_next = vectors[m]
        i, j = tstep.i, tstep.j
        span = w_next[i] - w_next[j]
        ratio = (w[i] - w[j]) / span
        p_keep = (1.0 + ratio) / 2.0
        p_swap = (1.0 - ratio) / 2.0
        diag_keep = np.full(d_a, np.sqrt(p_keep))
        diag_swap = np.full(d_a, np.sqrt(p_swap))
        diag_keep[i] = np.sqrt(p_keep * w_next[i] / w[i])
        diag_keep[j] = np.sqrt(p_keep * w_next[j] / w[j])
        diag_swap[i] = np.sqrt(p_swap * w_next[j] / w[i])
        diag_swap[j] = np.sqrt(p_swap * w_next[i] / w[j])
        k_keep = (basis_a * diag_keep) @ basis_a.conj().T
        k_swap = (basis_a * diag_swap) @ basis_a.conj().T
        u_swap = _swap_unitary(basis_a, i, j)
        v_swap = _swap_unitary(basis_b, i, j)
        eye_a = np.eye(d_a, dtype=complex)
        eye_b = np.eye(d_b, dtype=complex)
        steps.append(
            LocalProtocolStep(
                party="A",
                kraus=(k_keep, k_swap),
                corrections=((eye_a, eye_b), (u_swap, v_swap)),
                labels=("keep", "swap"),
            )
        )

    rot_a = sd_t.basis_a @ basis_a.conj().T
    rot_b = sd_t.basis_b @ basis_b.conj().T
    if steps:
        last = steps[-1]
        steps[-1] = LocalProtocolStep(
            party=last.party,
            kraus=last.kraus,
            corrections=tuple((rot_a @ u, rot_b @ v) for u, v in last.corrections),
            labels=last.labels,
        )
    else:
        steps.append(
            LocalProtocolStep(
                party="A",
                kraus=(rot_a,),
                corrections=((np.eye(d_a, dtype=complex), rot_b),),
                labels=("rotate",),
            )
        )
    return Protocol(src, tuple(steps), (DeclaredOutcome((), 1.0, tgt),))


def _fidelity_envelope(beta: np.ndarray, mu: np.ndarray) -> tuple[float, np.ndarray]:
    """Maximize sum_k sqrt(nu_k beta_k) over Schmidt vectors nu
    majorizing mu.

    The optimum is block-proportional: plotting the cumulative sums of
    beta against those of mu, the maximizer follows the least concave
    majorant of the resulting points, with nu proportional to beta
    inside each envelope segment and the cumulative constraints tight at
    the segment boundaries.  Returns the optimal value and vector.
    """
    n = beta.size
    x = np.concatenate([[0.0], np.cumsum(beta)])
    y = np.concatenate([[0.0], np.cumsum(mu)])
    x[n] = 1.0
    y[n] = 1.0
    hull = [0]
    for a in range(1, n + 1):
        while len(hull) >= 2:
            left, mid = hull[-2], hull[-1]
            above = (y[mid] - y[left]) * (x[a] - x[left]) > (y[a] - y[left]) * (
                x[mid] - x[left]
            )
            if above:
                break
            hull.pop()
        hull.append(a)
    nu = np.zeros(n)
    for left, right in zip(hull[:-1], hull[1:]):
        dx = x[right] - x[left]
        dy = y[right] - y[left]
        slope = dy / dx if dx > 0.0 else 0.0
        nu[left:right] = slope * beta[left:right]
    nu = np.clip(nu, 0.0, None)
    f = float(np.sqrt(nu * beta).sum())
    return f, nu


def optimal_pure_fidelity(target, source_mu: VectorLike) -> tuple[float, SchmidtVector]:
    """Best overlap between ``target`` and any pure state reachable
    deterministically from a source with Schmidt vector ``source_mu``.

    Returns the fidelity and the Schmidt vector of the maximizing
    reachable state.  ``target`` may be a :class:`PureState` or a
    Schmidt vector.
    """
    if isinstance(target, PureState):
        beta_vec = schmidt_decompose(target).coefficients
    else:
        beta_vec = as_schmidt_vector(target)
    mu_vec = as_schmidt_vector(source_mu)
    n = max(len(beta_vec), len(mu_vec))
    f, nu = _fidelity_envelope(beta_vec.padded(n), mu_vec.padded(n))
    return f, SchmidtVector(nu)


def _intermediate_parts(source: PureState, target: PureState):
    """Shared construction for the probabilistic conversion: optimal
    probability, envelope vector, target Schmidt data, and the
    intermediate state built in the target's Schmidt bases."""
    if source.dims != target.dims:
        raise ValueError(f"dimension mismatch: {source.dims} vs {target.dims}")
    sd_t = schmidt_decompose(target.normalized())
    mu = schmidt_decompose(source.normalized()).coefficients
    beta = sd_t.coefficients
    p = max_probability(beta, mu)
    n = len(beta)
    _, nu = _fidelity_envelope(beta.padded(n), mu.padded(n))
    d_a, d_b = target.dims
    mat = np.zeros((d_a, d_b), dtype=complex)
    for k in range(n):
        if nu[k] <= 0.0:
            continue
        mat += np.sqrt(nu[k]) * np.outer(sd_t.basis_a[:, k], sd_t.basis_b[:, k])
    xi = PureState(mat.reshape(-1), target.dims)
    return p, nu, sd_t, xi


def optimal_probability(
    source: PureState, target: PureState
) -> tuple[float, PureState]:
    """Optimal conversion probability and the intermediate state.

    The returned state is reachable deterministically from ``source``
    and reaches ``target`` through a single two-outcome measurement by
    Alice succeeding with the returned probability.  It doubles as the
    best deterministic approximation to ``target`` (its overlap with the
    target equals the optimal approximation fidelity), and is returned
    even when the probability is zero.
    """
    p, _, _, xi = _intermediate_parts(source, target)
    return p, xi


def synthesize_probabilistic(source: PureState, target: PureState) -> Protocol:
    """Two-stage protocol: exact conversion to the intermediate state,
    then a single two-outcome filter by Alice succeeding with the
    optimal probability."""
    src = source.normalized()
    tgt = target.normalized()
    p, nu, sd_t, xi = _intermediate_parts(src, tgt)
    beta = sd_t.coefficients.values
    d_a, d_b = tgt.dims
    n = len(beta)

    ratios = np.zeros(d_a)
    for k in range(n):
        if nu[k] > 0.0:
            ratios[k] = min(1.0, p * beta[k] / nu[k])
    basis_a = sd_t.basis_a
    m_succ = (basis_a * np.sqrt(ratios)) @ basis_a.conj().T
    m_fail = (basis_a * np.sqrt(1.0 - ratios)) @ basis_a.conj().T
    eye_a = np.eye(d_a, dtype=complex)
    eye_b = np.eye(d_b, dtype=complex)
    filter_step = LocalProtocolStep(
        party="A",
        kraus=(m_succ, m_fail),
        corrections=((eye_a, eye_b), (eye_a, eye_b)),
        labels=("success", "failure"),
    )

    exact = synthesize_exact(src, xi)
    declared = [DeclaredOutcome(("success",), p, tgt)]
    if 1.0 - p > 1e-12:
        fail_vec = np.kron(m_fail, eye_b) @ xi.amplitudes
        fail_vec /= np.linalg.norm(fail_vec)
        declared.append(
            DeclaredOutcome(("failure",), 1.0 - p, PureState(fail_vec, tgt.dims))
        )
    return Protocol(src, exact.steps + (filter_step,), tuple(declared))


def fine_grain(step: LocalProtocolStep, state: PureState) -> Ensemble:
    """Resolve a measurement step on a pure state into its ensemble of
    pure outcome branches.

    The branch weights are the outcome probabilities; assembling the
    ensemble reproduces the step's mixed output on the state.
    """
    if abs(state.squared_norm - 1.0) > TOL:
        raise ValueError("fine-graining requires a unit-norm state")
    members = []
    for full, corr in _full_operators(step, state.dims):
        branch = full @ state.amplitudes
        q = float(np.vdot(branch, branch).real)
        if q <= 1e-14:
            continue
        branch = corr @ (branch / np.sqrt(q))
        members.append((q, PureState(branch, state.dims)))
    return Ensemble(tuple(members))
