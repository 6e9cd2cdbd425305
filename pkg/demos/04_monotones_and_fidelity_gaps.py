"""Tail-sum monotones and the two notions of approximation fidelity.

Estimates the convex-roof tail monotones, reproduces the closed-form
fidelity from maximally entangled sources, and logs the numbers behind
two questions this package deliberately leaves open rather than
asserting:

- whether the summed-overlap fidelity equals the density-matrix
  square-root fidelity optimum (we report both and their gap), and
- whether a single decomposition can attain every tail monotone at once
  (we compare the per-index optima with the best single decomposition).
"""

import numpy as np

from locc_lab import (
    SearchConfig,
    approx_fidelity_fmax,
    concurrence,
    fmax_from_maxent,
    random_density,
    schmidt_decompose,
    sqrt_fidelity_lower_bound,
    vidal_monotone,
)

cfg = SearchConfig(max_ensemble_size=4, restarts=4, seed=2)

print("two-qubit tail monotone vs the concurrence closed form:")
for seed in range(5):
    rho = random_density((2, 2), 4, seed)
    e2 = vidal_monotone(rho, 2, cfg)
    c = concurrence(rho)
    closed = (1 - np.sqrt(1 - c * c)) / 2
    print(f"  seed {seed}: E_2 estimate {e2:.6f}, closed form {closed:.6f}")

print("\nfidelity from maximally entangled sources (rank m):")
rho = random_density((3, 3), 3, 11)
for m in (1, 2, 3):
    print(f"  m={m}: f = {fmax_from_maxent(rho, m, cfg):.6f}")

print("\nsummed-overlap fidelity vs square-root-fidelity lower bound")
print("(equality of the two optima is an open question; gaps logged only):")
for seed in range(5):
    rho = random_density((2, 2), 3, 100 + seed)
    mu = [0.75, 0.25]
    f_overlap, _ = approx_fidelity_fmax(rho, mu, cfg)
    f_sqrt = sqrt_fidelity_lower_bound(rho, mu, cfg)
    print(
        f"  seed {seed}: f_overlap {f_overlap:.8f}  "
        f"F_sqrt >= {f_sqrt:.8f}  gap {f_sqrt - f_overlap:+.2e}"
    )

print("\nper-index tail optima vs one shared decomposition")
print("(whether one decomposition attains all indices is not asserted):")
rho = random_density((3, 3), 3, 21)
per_index = [vidal_monotone(rho, l, cfg) for l in (2, 3)]
print(f"  independent optima: E_2 {per_index[0]:.6f}, E_3 {per_index[1]:.6f}")
_, cert = approx_fidelity_fmax(rho, [1.0, 0.0, 0.0], cfg)
joint = [0.0, 0.0]
for w, state in cert.members:
    vec = schmidt_decompose(state).coefficients.values
    joint[0] += w * vec[1:].sum()
    joint[1] += w * vec[2:].sum()
print(f"  one shared decomposition: E_2 {joint[0]:.6f}, E_3 {joint[1]:.6f}")
