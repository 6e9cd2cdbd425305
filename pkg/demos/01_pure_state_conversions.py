"""Pure-to-pure conversions, end to end.

Walks through the single-copy conversion questions for two pure states:
is an exact conversion possible, with what probability can it be done,
and how well can the target be approximated when it cannot be reached.
Every answer comes with an executable protocol that the executor
verifies branch by branch.
"""

import numpy as np

from locc_lab import (
    can_convert_exact,
    execute,
    max_probability,
    optimal_probability,
    optimal_pure_fidelity,
    overlap,
    sample_frequencies,
    schmidt_decompose,
    schmidt_form_state,
    synthesize_exact,
    synthesize_probabilistic,
)

source = schmidt_form_state([0.5, 0.3, 0.2], (3, 3))
easy_target = schmidt_form_state([0.7, 0.2, 0.1], (3, 3))
hard_target = schmidt_form_state([0.4, 0.35, 0.25], (3, 3))

mu = schmidt_decompose(source).coefficients
print("source Schmidt vector:", mu.values)

# --- exact conversion -------------------------------------------------
lam = schmidt_decompose(easy_target).coefficients
print("\ntarget", lam.values, "reachable exactly?", can_convert_exact(mu, lam))

protocol = synthesize_exact(source, easy_target)
print(f"synthesized protocol with {len(protocol.steps)} measurement step(s)")
for leaf in execute(protocol):
    print(
        f"  branch {leaf.labels}: probability {leaf.probability:.4f}, "
        f"overlap with target {overlap(leaf.state, easy_target):.12f}"
    )

# --- probabilistic conversion ----------------------------------------
lam = schmidt_decompose(hard_target).coefficients
print("\ntarget", lam.values, "reachable exactly?", can_convert_exact(mu, lam))
p = max_probability(lam, mu)
print(f"optimal success probability: {p:.6f}")

p2, xi = optimal_probability(source, hard_target)
print("intermediate state Schmidt vector:", schmidt_decompose(xi).coefficients.values)

protocol = synthesize_probabilistic(source, hard_target)
counts = sample_frequencies(protocol, None, 100_000, seed=1)
succ = sum(c for labels, c in counts.items() if labels[-1] == "success")
print(f"Monte-Carlo success rate over 100k runs: {succ / 100_000:.4f}")

# --- approximation when exact conversion fails ------------------------
f, nu = optimal_pure_fidelity(hard_target, mu)
print(f"\nbest deterministic approximation fidelity: {f:.6f}")
print("achieved by the reachable vector:", nu.values)
print(
    "identity check, fidelity equals overlap with the intermediate:",
    f"{overlap(hard_target, xi):.6f}",
)
