"""Order-theoretic machinery on Schmidt vectors.

Majorization and weak supermajorization comparisons, optimal conversion
probability, tail sums (the pure-state monotones), weighted averages,
Shannon entropy, and constructive T-transform factorization witnessing
that one vector majorizes another.

Vectors of different lengths are always compared after zero-padding the
shorter one, so a rank-2 vector can be compared inside a rank-3 system.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .tolerances import TOL

VectorLike = Union["SchmidtVector", Sequence[float], np.ndarray]


class NotMajorizedError(ValueError):
    """Raised when a majorization precondition fails.

    ``prefix_index`` is the 1-based length of the first prefix whose sum
    falls short.
    """

    def __init__(self, prefix_index: int, message: str):
        super().__init__(message)
        self.prefix_index = prefix_index


@dataclass(frozen=True)
class SchmidtVector:
    """Descending, nonnegative, unit-sum vector of Schmidt coefficients."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).reshape(-1)
        if vals.size == 0:
            raise ValueError("Schmidt vector must be nonempty")
        if np.any(vals < -TOL):
            raise ValueError(f"Schmidt vector has negative entry: {vals.min()}")
        if np.any(np.diff(vals) > TOL):
            raise ValueError("Schmidt vector entries must be in decreasing order")
        total = vals.sum()
        if abs(total - 1.0) > TOL:
            raise ValueError(f"Schmidt vector entries must sum to 1, got {total}")
        vals = np.clip(vals, 0.0, None)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.size

    def padded(self, length: int) -> np.ndarray:
        """Entries zero-padded to the requested length."""
        if length < len(self):
            raise ValueError("cannot pad to a shorter length")
        return np.concatenate([self.values, np.zeros(length - len(self))])

    def to_json(self) -> dict:
        return {"values": [float(v) for v in self.values]}

    @classmethod
    def from_json(cls, data: dict) -> "SchmidtVector":
        return cls(np.asarray(data["values"], dtype=float))


def as_schmidt_vector(values: VectorLike) -> SchmidtVector:
    """Coerce an array-like into a validated :class:`SchmidtVector`."""
    if isinstance(values, SchmidtVector):
        return values
    return SchmidtVector(np.asarray(values, dtype=float))


def _padded_pair(x: VectorLike, y: VectorLike) -> tuple[np.ndarray, np.ndarray]:
    xv = as_schmidt_vector(x)
    yv = as_schmidt_vector(y)
    n = max(len(xv), len(yv))
    return xv.padded(n), yv.padded(n)


def majorizes(x: VectorLike, y: VectorLike) -> bool:
    """True iff every prefix sum of ``x`` dominates that of ``y`` (x >- y).

    An inequality failing by less than the global tolerance counts as
    satisfied.
    """
    xs, ys = _padded_pair(x, y)
    return bool(np.all(np.cumsum(xs) - np.cumsum(ys) >= -TOL))


def weakly_supermajorized(p: float, x: VectorLike, y: VectorLike) -> bool:
    """True iff every tail sum of ``p * x`` is dominated by that of ``y``.

    This is the condition governing conversion with probability ``p``
    from a source with Schmidt vector ``y`` to a target with Schmidt
    vector ``x``.
    """
    if not 0.0 <= p <= 1.0 + TOL:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    xs, ys = _padded_pair(x, y)
    tx = np.cumsum(xs[::-1])[::-1]
    ty = np.cumsum(ys[::-1])[::-1]
    return bool(np.all(p * tx <= ty + TOL))


def max_probability(target: VectorLike, source: VectorLike) -> float:
    """Largest p with ``weakly_supermajorized(p, target, source)``.

    Computed as the minimum over tail positions of the ratio
    tail(source) / tail(target).  Positions where the target tail
    vanishes impose no constraint; a positive target tail over a zero
    source tail forces 0 (Schmidt rank cannot increase).
    """
    lam, mu = _padded_pair(target, source)
    if majorizes(lam, mu):
        return 1.0
    t_lam = np.cumsum(lam[::-1])[::-1]
    t_mu = np.cumsum(mu[::-1])[::-1]
    p = 1.0
    for tl, tm in zip(t_lam, t_mu):
        if tl <= 0.0:
            continue
        if tm <= 0.0:
            return 0.0
        p = min(p, tm / tl)
    return max(0.0, min(1.0, p))


def tail_sum(values: VectorLike, start: int) -> float:
    """Sum of entries from 1-based position ``start`` to the end.

    ``tail_sum(v, 1)`` is 1 and ``tail_sum(v, n + 1)`` is 0; the family
    of tail sums indexed by ``start`` is the standard entanglement
    monotone for pure states.
    """
    v = as_schmidt_vector(values)
    n = len(v)
    if not 1 <= start <= n + 1:
        raise IndexError(f"tail start must lie in [1, {n + 1}], got {start}")
    return float(v.values[start - 1 :].sum())


def average_schmidt_vector(ensemble) -> SchmidtVector:
    """Weight-averaged Schmidt vector of an ensemble.

    Accepts either an :class:`locc_lab.states.Ensemble` or an iterable of
    ``(weight, vector)`` pairs.  Member vectors are zero-padded to a
    common length and averaged position by position; the result is
    automatically descending and unit-sum.
    """
    if hasattr(ensemble, "weighted_schmidt_vectors"):
        pairs = ensemble.weighted_schmidt_vectors()
    else:
        pairs = [(w, as_schmidt_vector(v)) for w, v in ensemble]
    if not pairs:
        raise ValueError("ensemble must be nonempty")
    n = max(len(v) for _, v in pairs)
    avg = np.zeros(n)
    total = 0.0
    for w, v in pairs:
        if w < -TOL:
            raise ValueError(f"negative ensemble weight: {w}")
        avg += w * v.padded(n)
        total += w
    if abs(total - 1.0) > TOL:
        raise ValueError(f"ensemble weights must sum to 1, got {total}")
    return SchmidtVector(np.clip(avg, 0.0, None))


def shannon_entropy(values: VectorLike) -> float:
    """Shannon entropy in bits, with the 0 log 0 = 0 convention."""
    v = as_schmidt_vector(values).values
    pos = v[v > 0.0]
    return float(-(pos * np.log2(pos)).sum())


@dataclass(frozen=True)
class TTransformStep:
    """One two-entry mixing step: entries ``i`` and ``j`` (0-based, i < j)
    are replaced by their (1 - t, t) convex mixtures."""

    i: int
    j: int
    t: float

    def apply(self, values: np.ndarray) -> np.ndarray:
        out = np.array(values, dtype=float)
        vi, vj = out[self.i], out[self.j]
        out[self.i] = (1.0 - self.t) * vi + self.t * vj
        out[self.j] = self.t * vi + (1.0 - self.t) * vj
        return out


@dataclass(frozen=True)
class TTransformChain:
    """Sequence of T-transforms carrying ``start`` onto ``goal``.

    The chain is a constructive witness that ``start`` majorizes
    ``goal``: each step is doubly stochastic, so every intermediate
    vector sits between the two endpoints in the majorization order.
    """

    steps: tuple[TTransformStep, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def apply(self, values: VectorLike) -> np.ndarray:
        out = as_schmidt_vector(values).values.copy()
        for step in self.steps:
            out = step.apply(out)
        return out

    def to_json(self) -> dict:
        return {
            "steps": [
                {"i": s.i, "j": s.j, "t": float(s.t)} for s in self.steps
            ]
        }


def t_transform_chain(start: VectorLike, goal: VectorLike) -> TTransformChain:
    """Factor the passage from ``start`` down to ``goal`` into at most
    n - 1 T-transforms.

    Classical pairing: repeatedly take the largest index j where the
    current vector still exceeds the goal and the smallest index k > j
    where it falls short, then transfer the smaller of the two gaps from
    j to k.  Each step resolves at least one index, the intermediate
    vectors stay descending, and the chain applied to ``start``
    reproduces ``goal`` to working precision.

    Raises :class:`NotMajorizedError` when ``start`` does not majorize
    ``goal``.
    """
    xs, gs = _padded_pair(start, goal)
    deficits = np.cumsum(xs) - np.cumsum(gs)
    if deficits.min() < -TOL:
        k = int(np.argmax(deficits < -TOL)) + 1
        raise NotMajorizedError(
            k, f"start does not majorize goal: prefix {k} falls short by {-deficits[k - 1]:.3e}"
        )

    eps = 1e-12
    n = xs.size
    x = xs.copy()
    steps: list[TTransformStep] = []
    for _ in range(n + 1):
        diff = x - gs
        if np.max(np.abs(diff)) <= eps:
            break
        over = np.nonzero(diff > eps)[0]
        j = int(over[-1])
        under = np.nonzero(diff[j + 1 :] < -eps)[0]
        if under.size == 0:
            break
        k = j + 1 + int(under[0])
        delta = min(x[j] - gs[j], gs[k] - x[k])
        t = delta / (x[j] - x[k])
        step = TTransformStep(j, k, float(t))
        x = step.apply(x)
        steps.append(step)
    if np.max(np.abs(x - gs)) > 1e-9:
        raise RuntimeError("T-transform factorization failed to converge")
    return TTransformChain(tuple(steps))
