"""Pure-to-ensemble LOCC conversion.

Feasibility of realizing a target ensemble of pure states from a pure
source, construction of the precursor state whose Schmidt vector is the
ensemble's weighted average, and synthesis of the single one-party
measurement (commuting diagonal Kraus operators plus per-outcome local
unitaries) that scatters the precursor into the ensemble members.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .majorization import (
    NotMajorizedError,
    VectorLike,
    as_schmidt_vector,
    average_schmidt_vector,
    majorizes,
)
from .protocols import DeclaredOutcome, LocalProtocolStep, Protocol, synthesize_exact
from .states import Ensemble, PureState, schmidt_decompose, schmidt_form_state
from .tolerances import TOL


def ensemble_reachable(mu: VectorLike, ensemble: Ensemble) -> bool:
    """Whether the ensemble can be produced by LOCC from a pure source
    with Schmidt vector ``mu`` (the weighted average of the member
    Schmidt vectors must majorize ``mu``)."""
    return majorizes(average_schmidt_vector(ensemble), mu)


def precursor_state(ensemble: Ensemble) -> PureState:
    """Pure state whose Schmidt vector is the ensemble's weighted
    average, written in Schmidt form in the standard product basis."""
    avg = average_schmidt_vector(ensemble)
    return schmidt_form_state(avg, ensemble.dims)


def synthesize_locc1a(
    psibar: PureState, ensemble: Ensemble, party: str = "A"
) -> LocalProtocolStep:
    """One measurement round scattering ``psibar`` into the ensemble.

    Requires the Schmidt vector of ``psibar`` to equal the ensemble's
    average exactly (not merely majorize it).  The Kraus operators are
    all diagonal in ``psibar``'s Schmidt basis of the acting party, hence
    mutually commuting; outcome ``j`` occurs with the ensemble weight and
    its correction unitaries rotate the branch onto member ``j``.

    The mirrored construction with ``party="B"`` is identical with the
    roles of the two local spaces exchanged.
    """
    if party not in ("A", "B"):
        raise ValueError(f"party must be 'A' or 'B', got {party!r}")
    if psibar.dims != ensemble.dims:
        raise ValueError(f"dimension mismatch: {psibar.dims} vs {ensemble.dims}")
    sd_bar = schmidt_decompose(psibar.normalized())
    avg_bar = sd_bar.coefficients.values
    pairs = ensemble.weighted_schmidt_vectors()
    n = len(avg_bar)
    target_avg = np.zeros(n)
    member_vectors = []
    for w, vec in pairs:
        padded = vec.padded(n)
        member_vectors.append(padded)
        target_avg += w * padded
    residual = avg_bar - target_avg
    if np.max(np.abs(residual)) > max(TOL, 1e-8):
        worst = int(np.argmax(np.abs(residual)))
        raise ValueError(
            "precursor Schmidt vector does not equal the ensemble average; "
            f"residuals per index: {np.array2string(residual, precision=3)} "
            f"(largest at index {worst})"
        )

    d_a, d_b = psibar.dims
    d_party = d_a if party == "A" else d_b
    basis_party = sd_bar.basis_a if party == "A" else sd_bar.basis_b
    support = avg_bar > TOL

    kraus = []
    corrections = []
    labels = []
    for j, ((w, _), member_vec) in enumerate(zip(pairs, member_vectors)):
        diag = np.zeros(d_party)
        for k in range(n):
            if support[k]:
                diag[k] = np.sqrt(w * member_vec[k] / avg_bar[k])
        if j == 0:
            # completeness off the precursor's support
            for k in range(n):
                if not support[k]:
                    diag[k] = 1.0
            diag[n:] = 1.0
        op = (basis_party * diag) @ basis_party.conj().T
        member_state = ensemble.members[j][1]
        sd_member = schmidt_decompose(member_state)
        corr_a = sd_member.basis_a @ sd_bar.basis_a.conj().T
        corr_b = sd_member.basis_b @ sd_bar.basis_b.conj().T
        kraus.append(op)
        corrections.append((corr_a, corr_b))
        labels.append(f"member-{j}")
    return LocalProtocolStep(
        party=party,
        kraus=tuple(kraus),
        corrections=tuple(corrections),
        labels=tuple(labels),
    )


def convert_to_ensemble(
    source: PureState, ensemble: Ensemble, party: str = "A"
) -> Protocol:
    """Full protocol carrying ``source`` to the target ensemble: an exact
    conversion to the precursor state followed by the single scattering
    measurement."""
    if source.dims != ensemble.dims:
        raise ValueError(f"dimension mismatch: {source.dims} vs {ensemble.dims}")
    src = source.normalized()
    mu = schmidt_decompose(src).coefficients
    avg = average_schmidt_vector(ensemble)
    if not majorizes(avg, mu):
        prefixes = np.cumsum(avg.padded(max(len(avg), len(mu)))) - np.cumsum(
            mu.padded(max(len(avg), len(mu)))
        )
        k = int(np.argmax(prefixes < -TOL)) + 1
        raise NotMajorizedError(
            k,
            f"ensemble not reachable: average Schmidt prefix {k} falls short "
            f"of the source's by {-prefixes[k - 1]:.3e}",
        )
    psibar = precursor_state(ensemble)
    exact = synthesize_exact(src, psibar)
    scatter = synthesize_locc1a(psibar, ensemble, party=party)
    declared = tuple(
        DeclaredOutcome((f"member-{j}",), float(w), state)
        for j, (w, state) in enumerate(ensemble.members)
    )
    return Protocol(src, exact.steps + (scatter,), declared)
