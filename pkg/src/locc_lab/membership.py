"""Decomposition-space search for mixed-state conversion questions.

Whether a density matrix is reachable from a given pure source exactly,
with some probability, or within some approximation fidelity reduces to
the existence of a decomposition whose member Schmidt vectors satisfy a
weighted majorization condition.  Existence is only semi-decidable
numerically: a certificate ensemble proves membership, while failure to
find one is reported honestly as ``not_found`` together with the best
violation seen, never as a proof of non-membership.

The search parameterizes decompositions by isometric mixers applied to
the eigendecomposition (every decomposition of bounded size arises this
way).  Each restart starts from a seeded random isometry and descends by
cyclic two-member rotation sweeps: for every member pair, a multi-stage
grid line search over a one-parameter unitary mixing family, which is
gradient-free and updates only the two affected members per candidate.
Restart results merge deterministically, so verdicts are reproducible
for a fixed seed, restart count and iteration budget regardless of
execution order.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .majorization import (
    SchmidtVector,
    VectorLike,
    as_schmidt_vector,
    average_schmidt_vector,
    majorizes,
    weakly_supermajorized,
)
from .protocols import _fidelity_envelope
from .states import (
    DensityMatrix,
    Ensemble,
    PureState,
    assemble,
    enumerate_decompositions,
    schmidt_decompose,
    sqrt_fidelity,
)
from .tolerances import TOL

_WEIGHT_CUT = 1e-12
_SMOOTH_TAU = 1e-3


@dataclass(frozen=True)
class SearchConfig:
    """Budget and seeding for the decomposition search.

    ``max_ensemble_size`` defaults to the squared rank of the state,
    which is ample for convex-roof optima at the dimensions this package
    targets.  ``max_iterations`` caps objective evaluations per restart.
    ``tolerance`` is the search-phase convergence slack; certificates are
    always re-validated against the defining inequality at the global
    tolerance before a member verdict is issued.  Restarts may be spread
    over ``threads``; the merged verdict does not depend on the thread
    count.
    """

    max_ensemble_size: Optional[int] = None
    restarts: int = 32
    max_iterations: int = 20000
    tolerance: float = 1e-7
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1:
            raise ValueError("restarts and max_iterations must be positive")
        if self.threads < 1:
            raise ValueError("threads must be positive")
        if self.max_ensemble_size is not None and self.max_ensemble_size < 1:
            raise ValueError("max_ensemble_size must be positive")


@dataclass(frozen=True)
class MembershipVerdict:
    """Result of a certificate search.

    ``member`` verdicts carry a witness ensemble that re-validates
    against the defining condition.  ``not_found`` is a semi-decision:
    ``violation`` is the smallest condition violation encountered
    (clipped below at zero) and never proves non-membership.
    """

    status: str
    certificate: Optional[Ensemble]
    violation: float
    evaluations: int

    @property
    def is_member(self) -> bool:
        return self.status == "member"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "violation": float(self.violation),
            "evaluations": int(self.evaluations),
        }


def _smooth_max(deficits: np.ndarray, axis=None):
    """Softmax-smoothed maximum, stable for arbitrary magnitudes."""
    m = deficits.max(axis=axis, keepdims=True)
    out = m + _SMOOTH_TAU * np.log(
        np.exp((deficits - m) / _SMOOTH_TAU).sum(axis=axis, keepdims=True)
    )
    if axis is None:
        return float(out.reshape(-1)[0])
    return out.squeeze(axis)


class _AverageDeficitObjective:
    """Smoothed worst prefix deficit of the decomposition average
    against the source vector (exact reachability)."""

    def __init__(self, mu_pad: np.ndarray, n: int):
        self.cum_mu = np.cumsum(mu_pad)
        self.width = mu_pad.size
        self.n = n

    def _deficit(self, avgs: np.ndarray) -> np.ndarray:
        cums = np.cumsum(avgs, axis=-1)
        if self.width > self.n:
            pad = np.broadcast_to(
                cums[..., -1:], cums.shape[:-1] + (self.width - self.n,)
            )
            cums = np.concatenate([cums, pad], axis=-1)
        return self.cum_mu - cums

    def evaluate(self, lam: np.ndarray) -> tuple[float, float]:
        deficit = self._deficit(lam.sum(axis=0))
        return float(_smooth_max(deficit)), float(deficit.max())

    def pair_merits(
        self, lam: np.ndarray, i: int, j: int, lam_pair: np.ndarray
    ) -> np.ndarray:
        rest = lam.sum(axis=0) - lam[i] - lam[j]
        avgs = rest[None, :] + lam_pair.sum(axis=1)
        return _smooth_max(self._deficit(avgs), axis=-1)


class _TailDeficitObjective:
    """Smoothed worst tail excess of the scaled average over the source
    vector (probabilistic reachability)."""

    def __init__(self, mu_pad: np.ndarray, p: float, n: int):
        self.tail_mu = np.cumsum(mu_pad[::-1])[::-1]
        self.p = p
        self.width = mu_pad.size
        self.n = n

    def _deficit(self, avgs: np.ndarray) -> np.ndarray:
        if self.width > self.n:
            zeros = np.zeros(avgs.shape[:-1] + (self.width - self.n,))
            avgs = np.concatenate([avgs, zeros], axis=-1)
        tails = np.cumsum(avgs[..., ::-1], axis=-1)[..., ::-1]
        return self.p * tails - self.tail_mu

    def evaluate(self, lam: np.ndarray) -> tuple[float, float]:
        deficit = self._deficit(lam.sum(axis=0))
        return float(_smooth_max(deficit)), float(deficit.max())

    def pair_merits(
        self, lam: np.ndarray, i: int, j: int, lam_pair: np.ndarray
    ) -> np.ndarray:
        rest = lam.sum(axis=0) - lam[i] - lam[j]
        avgs = rest[None, :] + lam_pair.sum(axis=1)
        return _smooth_max(self._deficit(avgs), axis=-1)


class _HullObjective:
    """Smoothed worst prefix deficit over every individual member with
    nonnegligible weight (hull membership)."""

    def __init__(self, mu_pad: np.ndarray, n: int):
        self.cum_mu = np.cumsum(mu_pad)
        self.width = mu_pad.size
        self.n = n

    def _member_deficits(self, lam: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        q = lam.sum(axis=-1)
        safe_q = np.where(q > _WEIGHT_CUT, q, 1.0)
        cums = np.cumsum(lam / safe_q[..., None], axis=-1)
        if self.width > self.n:
            pad = np.broadcast_to(
                cums[..., -1:], cums.shape[:-1] + (self.width - self.n,)
            )
            cums = np.concatenate([cums, pad], axis=-1)
        deficits = self.cum_mu - cums
        return deficits, q

    def evaluate(self, lam: np.ndarray) -> tuple[float, float]:
        deficits, q = self._member_deficits(lam)
        active = q > _WEIGHT_CUT
        flat = deficits[active].reshape(-1)
        return float(_smooth_max(flat)), float(flat.max())

    def pair_merits(
        self, lam: np.ndarray, i: int, j: int, lam_pair: np.ndarray
    ) -> np.ndarray:
        deficits, q = self._member_deficits(lam)
        active = q > _WEIGHT_CUT
        active[i] = active[j] = False
        rest = deficits[active].reshape(-1)
        pair_deficits, pair_q = self._member_deficits(lam_pair)
        pair_deficits = np.where(
            (pair_q > _WEIGHT_CUT)[..., None], pair_deficits, -np.inf
        )
        if rest.size:
            rest_max = rest.max()
            rest_sum = np.exp((rest - rest_max) / _SMOOTH_TAU).sum()
        else:
            rest_max, rest_sum = -np.inf, 0.0
        pair_flat = pair_deficits.reshape(lam_pair.shape[0], -1)
        m = np.maximum(pair_flat.max(axis=1), rest_max)
        total = rest_sum * np.exp((rest_max - m) / _SMOOTH_TAU) + np.exp(
            (pair_flat - m[:, None]) / _SMOOTH_TAU
        ).sum(axis=1)
        return m + _SMOOTH_TAU * np.log(total)


class _TailSumObjective:
    """Weighted tail mass from a fixed position (convex-roof monotone)."""

    def __init__(self, start: int):
        self.start = start  # 0-based column

    def evaluate(self, lam: np.ndarray) -> tuple[float, float]:
        v = float(lam[:, self.start :].sum())
        return v, v

    def pair_merits(
        self, lam: np.ndarray, i: int, j: int, lam_pair: np.ndarray
    ) -> np.ndarray:
        rest = float(lam[:, self.start :].sum()) - float(
            lam[i, self.start :].sum() + lam[j, self.start :].sum()
        )
        return rest + lam_pair[:, :, self.start :].sum(axis=(1, 2))


class _EnvelopeObjective:
    """Negated optimal pairing fidelity of the decomposition average
    against the source vector (approximation fidelity)."""

    def __init__(self, mu_pad: np.ndarray, n: int):
        self.mu_pad = mu_pad
        self.width = mu_pad.size
        self.n = n
        # rank-1 source: the only reachable vector is (1, 0, ...), so the
        # fidelity reduces to the root of the leading average entry
        self.rank_one = bool(mu_pad[0] >= 1.0 - TOL)

    def _value(self, avg: np.ndarray) -> float:
        if self.width > self.n:
            avg = np.concatenate([avg, np.zeros(self.width - self.n)])
        f, _ = _fidelity_envelope(avg, self.mu_pad)
        return f

    def evaluate(self, lam: np.ndarray) -> tuple[float, float]:
        if self.rank_one:
            f = float(np.sqrt(lam[:, 0].sum()))
        else:
            f = self._value(lam.sum(axis=0))
        return -f, 1.0 - f

    def pair_merits(
        self, lam: np.ndarray, i: int, j: int, lam_pair: np.ndarray
    ) -> np.ndarray:
        if self.rank_one:
            rest = float(lam[:, 0].sum() - lam[i, 0] - lam[j, 0])
            return -np.sqrt(rest + lam_pair[:, :, 0].sum(axis=1))
        rest = lam.sum(axis=0) - lam[i] - lam[j]
        avgs = rest[None, :] + lam_pair.sum(axis=1)
        return np.array([-self._value(avg) for avg in avgs])


class _Accepted(Exception):
    pass


class _DecompositionSearch:
    """Search engine over isometric mixers of the eigendecomposition."""

    _GRID = 9
    _STAGES = 6
    _MAX_SWEEPS = 60
    _SWEEP_TOL = 1e-12

    def __init__(self, rho: DensityMatrix, cfg: SearchConfig):
        self.rho = rho
        self.cfg = cfg
        evals, evecs = np.linalg.eigh(rho.entries)
        order = np.argsort(evals)[::-1]
        evals = np.clip(evals[order], 0.0, None)
        evecs = evecs[:, order]
        self.rank = max(1, int(np.sum(evals > TOL)))
        self.size = cfg.max_ensemble_size or self.rank**2
        if self.size < self.rank:
            raise ValueError(
                f"max_ensemble_size {self.size} is below rank {self.rank}"
            )
        self.basis = (evecs[:, : self.rank] * np.sqrt(evals[: self.rank])).T
        self.dims = rho.dims
        self.n = min(rho.dims)

    def rows_lam(self, vectors: np.ndarray) -> np.ndarray:
        mats = vectors.reshape(-1, *self.dims)
        if self.n == 2:
            # closed-form singular values through the 2x2 Gram matrix,
            # much cheaper than per-matrix SVD in the inner loop
            if self.dims[0] == 2:
                rows = mats
            else:
                rows = mats.transpose(0, 2, 1)
            g00 = np.einsum("nk,nk->n", rows[:, 0].conj(), rows[:, 0]).real
            g11 = np.einsum("nk,nk->n", rows[:, 1].conj(), rows[:, 1]).real
            g01 = np.einsum("nk,nk->n", rows[:, 0].conj(), rows[:, 1])
            tr = g00 + g11
            det = np.clip(g00 * g11 - np.abs(g01) ** 2, 0.0, None)
            disc = np.sqrt(np.clip(tr * tr - 4.0 * det, 0.0, None))
            hi = (tr + disc) / 2.0
            lo = np.clip((tr - disc) / 2.0, 0.0, None)
            return np.stack([hi, lo], axis=1)
        svals = np.linalg.svd(mats, compute_uv=False)
        return svals**2

    def random_mixer(self, rng: np.random.Generator) -> np.ndarray:
        a = rng.standard_normal((self.size, self.rank)) + 1j * rng.standard_normal(
            (self.size, self.rank)
        )
        q, _ = np.linalg.qr(a)
        return q

    def identity_mixer(self) -> np.ndarray:
        m = np.zeros((self.size, self.rank), dtype=complex)
        m[: self.rank, : self.rank] = np.eye(self.rank)
        return m

    def _pair_candidates(
        self, rows: np.ndarray, family: int, thetas: np.ndarray
    ) -> np.ndarray:
        c = np.cos(thetas)
        s = np.sin(thetas)
        if family == 0:
            g = np.stack(
                [np.stack([c, -s], axis=-1), np.stack([s, c], axis=-1)], axis=1
            ).astype(complex)
        else:
            g = np.stack(
                [
                    np.stack([c + 0j, -1j * s], axis=-1),
                    np.stack([-1j * s, c + 0j], axis=-1),
                ],
                axis=1,
            )
        return g, np.einsum("gab,bd->gad", g, rows)

    def _restart(self, mixer: np.ndarray, objective, accept: Optional[float]):
        """Cyclic pair-rotation descent from one starting isometry."""
        budget = self.cfg.max_iterations
        mixer = np.array(mixer)
        vectors = mixer @ self.basis
        lam = self.rows_lam(vectors)
        merit, report = objective.evaluate(lam)
        evaluations = 1
        if accept is not None and report <= accept:
            return merit, report, mixer, evaluations, True
        for _ in range(self._MAX_SWEEPS):
            sweep_start = merit
            for i in range(self.size - 1):
                for j in range(i + 1, self.size):
                    for family in (0, 1):
                        base_rows = vectors[[i, j]]
                        base_mix = mixer[[i, j]]
                        center, halfwidth = 0.0, np.pi / 2
                        best_merit = merit
                        chosen = None
                        for _stage in range(self._STAGES):
                            thetas = center + np.linspace(
                                -halfwidth, halfwidth, self._GRID
                            )
                            g, cand = self._pair_candidates(
                                base_rows, family, thetas
                            )
                            lam_pair = self.rows_lam(
                                cand.reshape(-1, cand.shape[-1])
                            ).reshape(self._GRID, 2, -1)
                            merits = objective.pair_merits(lam, i, j, lam_pair)
                            evaluations += self._GRID
                            g_best = int(np.argmin(merits))
                            if merits[g_best] < best_merit - 1e-16:
                                best_merit = float(merits[g_best])
                                chosen = (g[g_best], cand[g_best], lam_pair[g_best])
                                center = float(thetas[g_best])
                            halfwidth = 2.0 * halfwidth / (self._GRID - 1)
                        if chosen is not None and best_merit < merit - 1e-15:
                            rot, rows_new, lam_new = chosen
                            vectors[[i, j]] = rows_new
                            mixer[[i, j]] = rot @ base_mix
                            lam[[i, j]] = lam_new
                            merit, report = objective.evaluate(lam)
                            evaluations += 1
                            if accept is not None and report <= accept:
                                return merit, report, mixer, evaluations, True
                    if evaluations >= budget:
                        return merit, report, mixer, evaluations, False
            if sweep_start - merit <= self._SWEEP_TOL:
                break
        return merit, report, mixer, evaluations, False

    def run(self, objective, accept: Optional[float] = None):
        """Minimize the objective over mixers with seeded restarts.

        Restart 0 starts from the eigendecomposition; the rest start
        from seeded Haar-random isometries.  Results merge by best merit
        (ties to the lower restart index); when ``accept`` is given, the
        first restart (by index) whose exact report reaches it wins
        outright and later restarts are skipped.  Returns
        ``(merit, mixer, report, evaluations)``.
        """
        cfg = self.cfg
        children = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)

        def one_restart(idx: int):
            if idx == 0:
                mixer = self.identity_mixer()
            else:
                mixer = self.random_mixer(np.random.default_rng(children[idx]))
            merit, report, out, evaluations, hit = self._restart(
                mixer, objective, accept
            )
            return idx, merit, out, report, evaluations, hit

        results = []
        if cfg.threads > 1:
            with concurrent.futures.ThreadPoolExecutor(cfg.threads) as pool:
                results = list(pool.map(one_restart, range(cfg.restarts)))
        else:
            for idx in range(cfg.restarts):
                res = one_restart(idx)
                results.append(res)
                if res[5]:
                    break

        evaluations = sum(r[4] for r in results)
        hits = [r for r in results if r[5]]
        if hits:
            # first certifying restart by index wins, independent of
            # execution order or thread count
            best = min(hits, key=lambda r: r[0])
        else:
            best = min(results, key=lambda r: (r[1], r[0]))
        return best[1], best[2], best[3], evaluations

    def certificate(self, mixer: np.ndarray) -> Ensemble:
        return enumerate_decompositions(self.rho, self.size, mixer)


def _pad_mu(mu: VectorLike, n: int) -> np.ndarray:
    vec = as_schmidt_vector(mu)
    return vec.padded(max(n, len(vec)))


def membership_splus(
    rho: DensityMatrix, mu: VectorLike, cfg: Optional[SearchConfig] = None
) -> MembershipVerdict:
    """Search for a decomposition whose average Schmidt vector majorizes
    ``mu`` (reachability of ``rho`` by exact LOCC from the pure source
    with Schmidt vector ``mu``)."""
    cfg = cfg or SearchConfig()
    search = _DecompositionSearch(rho, cfg)
    mu_pad = _pad_mu(mu, search.n)
    objective = _AverageDeficitObjective(mu_pad, search.n)
    merit, mixer, report, evaluations = search.run(objective, accept=TOL)
    if report <= TOL:
        cert = search.certificate(mixer)
        if majorizes(average_schmidt_vector(cert), mu):
            return MembershipVerdict("member", cert, 0.0, evaluations)
    return MembershipVerdict("not_found", None, max(0.0, report), evaluations)


def membership_hull(
    rho: DensityMatrix, mu: VectorLike, cfg: Optional[SearchConfig] = None
) -> MembershipVerdict:
    """Search for a decomposition in which every member individually
    majorizes ``mu`` (membership in the convex hull of such states)."""
    cfg = cfg or SearchConfig()
    search = _DecompositionSearch(rho, cfg)
    mu_pad = _pad_mu(mu, search.n)
    objective = _HullObjective(mu_pad, search.n)
    merit, mixer, report, evaluations = search.run(objective, accept=TOL)
    if report <= TOL:
        cert = search.certificate(mixer)
        if all(
            majorizes(schmidt_decompose(state).coefficients, mu)
            for _, state in cert.members
        ):
            return MembershipVerdict("member", cert, 0.0, evaluations)
    return MembershipVerdict("not_found", None, max(0.0, report), evaluations)


def membership_prob(
    rho: DensityMatrix,
    mu: VectorLike,
    p: float,
    cfg: Optional[SearchConfig] = None,
) -> MembershipVerdict:
    """Search for a decomposition whose scaled average Schmidt vector is
    weakly supermajorized by ``mu`` (reachability with probability at
    least ``p``)."""
    if not 0.0 < p <= 1.0:
        raise ValueError(f"probability must lie in (0, 1], got {p}")
    cfg = cfg or SearchConfig()
    search = _DecompositionSearch(rho, cfg)
    mu_pad = _pad_mu(mu, search.n)
    objective = _TailDeficitObjective(mu_pad, p, search.n)
    merit, mixer, report, evaluations = search.run(objective, accept=TOL)
    if report <= TOL:
        cert = search.certificate(mixer)
        if weakly_supermajorized(p, average_schmidt_vector(cert), mu):
            return MembershipVerdict("member", cert, 0.0, evaluations)
    return MembershipVerdict("not_found", None, max(0.0, report), evaluations)


def vidal_monotone(
    rho: DensityMatrix, l: int, cfg: Optional[SearchConfig] = None
) -> float:
    """Convex-roof minimum of the Schmidt tail sums from position ``l``
    (1-based) over decompositions of ``rho``.

    The returned value is the best found, an upper bound on the true
    minimum; it never exceeds the tail mass of any tested decomposition.
    """
    n = min(rho.dims)
    if not 1 <= l <= n + 1:
        raise IndexError(f"tail start must lie in [1, {n + 1}], got {l}")
    if l == 1:
        return 1.0
    if l == n + 1:
        return 0.0
    cfg = cfg or SearchConfig()
    search = _DecompositionSearch(rho, cfg)
    objective = _TailSumObjective(l - 1)
    merit, _, report, _ = search.run(objective)
    return max(0.0, report)


def approx_fidelity_fmax(
    rho: DensityMatrix, mu: VectorLike, cfg: Optional[SearchConfig] = None
) -> tuple[float, Ensemble]:
    """Best approximation fidelity of ``rho`` from the pure source with
    Schmidt vector ``mu``, with the achieving decomposition.

    For each decomposition of ``rho`` the optimal pairing fidelity
    equals the best overlap between the decomposition's precursor state
    and a reachable pure state; this maximizes that quantity over
    decompositions.  The value is 1 exactly when an average-majorizing
    decomposition exists.
    """
    cfg = cfg or SearchConfig()
    search = _DecompositionSearch(rho, cfg)
    mu_pad = _pad_mu(mu, search.n)
    objective = _EnvelopeObjective(mu_pad, search.n)
    merit, mixer, report, evaluations = search.run(objective, accept=TOL)
    f = min(1.0, max(0.0, 1.0 - report))
    return f, search.certificate(mixer)


def fmax_from_maxent(
    rho: DensityMatrix, m: int, cfg: Optional[SearchConfig] = None
) -> float:
    """Best approximation fidelity from a maximally entangled source of
    Schmidt rank ``m``, via the tail-sum monotone: sqrt(1 - E_{m+1})."""
    n = min(rho.dims)
    if not 1 <= m <= n:
        raise IndexError(f"source rank must lie in [1, {n}], got {m}")
    return float(np.sqrt(max(0.0, 1.0 - vidal_monotone(rho, m + 1, cfg))))


def approximating_decomposition(
    certificate: Ensemble, mu: VectorLike
) -> tuple[list[PureState], list[PureState], float]:
    """Paired subnormalized decompositions realizing the certificate's
    approximation fidelity.

    Returns the subnormalized members of the certificate, the matching
    approximating states (whose weighted Schmidt average majorizes
    ``mu`` and whose squared norms sum to one), and the summed overlap.
    The assembled approximating density matrix is reachable exactly from
    the pure source with Schmidt vector ``mu``.
    """
    pairs = certificate.weighted_schmidt_vectors()
    n = min(certificate.dims)
    avg = np.zeros(n)
    member_vecs = []
    for w, vec in pairs:
        padded = vec.padded(n)
        member_vecs.append(padded)
        avg += w * padded
    mu_pad = _pad_mu(mu, n)
    avg_pad = avg
    if mu_pad.size > n:
        avg_pad = np.concatenate([avg, np.zeros(mu_pad.size - n)])
    _, nu = _fidelity_envelope(avg_pad, mu_pad)
    nu = nu[:n]

    rho_side = []
    approx_side = []
    total_overlap = 0.0
    dims = certificate.dims
    ratio = np.zeros(n)
    mask = avg > TOL
    ratio[mask] = nu[mask] / avg[mask]
    for (w, state), member_vec in zip(certificate.members, member_vecs):
        sd = schmidt_decompose(state)
        rho_side.append(PureState(np.sqrt(w) * state.amplitudes, dims))
        coeffs = w * member_vec * ratio
        mat = np.zeros(dims, dtype=complex)
        for k in range(n):
            if coeffs[k] <= 0.0:
                continue
            mat += np.sqrt(coeffs[k]) * np.outer(sd.basis_a[:, k], sd.basis_b[:, k])
        approx_side.append(PureState(mat.reshape(-1), dims))
        total_overlap += float(
            abs(np.vdot(rho_side[-1].amplitudes, approx_side[-1].amplitudes))
        )
    return rho_side, approx_side, total_overlap


def sqrt_fidelity_lower_bound(
    rho: DensityMatrix, mu: VectorLike, cfg: Optional[SearchConfig] = None
) -> float:
    """Lower bound on the best square-root fidelity between ``rho`` and
    any state reachable exactly from the source with Schmidt vector
    ``mu``.

    Assembles the approximating set of the best decomposition found by
    :func:`approx_fidelity_fmax` into a reachable density matrix and
    evaluates the fidelity directly; by strong concavity the result is
    never below the summed-overlap fidelity.
    """
    f, certificate = approx_fidelity_fmax(rho, mu, cfg)
    _, approx_side, _ = approximating_decomposition(certificate, mu)
    d = rho.dims[0] * rho.dims[1]
    sigma = np.zeros((d, d), dtype=complex)
    for state in approx_side:
        sigma += np.outer(state.amplitudes, state.amplitudes.conj())
    sigma_dm = DensityMatrix(sigma, rho.dims)
    return max(f, sqrt_fidelity(rho, sigma_dm))


def probability_bound(p: float, p1: float) -> float:
    """Strict upper bound ``p / p1`` on the success probability of a
    follow-on conversion: if the first state is reachable with
    probability ``p1`` but the second requires more than ``p``, no
    protocol converts the first into the second with probability
    ``p / p1`` or better."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if not 0.0 < p1 <= 1.0:
        raise ValueError(f"p1 must lie in (0, 1], got {p1}")
    return p / p1


def two_level_mixture_case(epsilon: float) -> tuple[DensityMatrix, SchmidtVector]:
    """Mixture of a product state with a two-level maximally entangled
    state on a 3x3 system, with the Schmidt average of its defining
    decomposition.

    The pair (rho, mu) separates average-based reachability from hull
    membership: the defining decomposition's average equals mu, yet no
    decomposition consists of states individually majorizing mu.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    dims = (3, 3)
    product = np.zeros(9, dtype=complex)
    product[0] = 1.0
    entangled = np.zeros(9, dtype=complex)
    entangled[4] = entangled[8] = 1.0 / np.sqrt(2.0)
    ensemble = Ensemble(
        (
            (1.0 - epsilon, PureState(product, dims)),
            (epsilon, PureState(entangled, dims)),
        )
    )
    mu = SchmidtVector(np.array([1.0 - epsilon / 2.0, epsilon / 2.0, 0.0]))
    return assemble(ensemble), mu


def structural_hull_obstruction(epsilon: float) -> bool:
    """Analytic certificate that the two-level mixture admits no
    decomposition into states individually majorizing its average
    vector.

    Every pure state in the mixture's support is a superposition of the
    product component and the entangled pair, so its Schmidt vector has
    the form (1 - s, s/2, s/2) for an entangled weight s in [0, 1].
    Majorizing (1 - eps/2, eps/2, 0) requires s <= eps/2 for each
    element, but the mixture forces the weighted average of s to equal
    eps, which no convex combination of values at most eps/2 can reach.
    Returns True when the obstruction is certified.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    max_entangled_weight_per_element = epsilon / 2.0
    required_average_entangled_weight = epsilon
    return required_average_entangled_weight > max_entangled_weight_per_element
