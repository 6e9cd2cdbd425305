"""Two-qubit closed forms against the generic search.

For a pair of qubits everything is decidable analytically: the
concurrence fixes the smallest reachable source, the probabilistic sets
collapse onto exact sets, and approximate sets are exact sets of a
relaxed source.  The generic decomposition search must never contradict
these answers.
"""

import numpy as np

from locc_lab import (
    DensityMatrix,
    SearchConfig,
    approx_threshold_alpha,
    concurrence,
    eof,
    membership_exact_2q,
    membership_prob_2q,
    membership_splus,
    min_mu2,
    random_density,
)


def werner(w):
    bell = np.zeros((4, 4), dtype=complex)
    bell[0, 0] = bell[0, 3] = bell[3, 0] = bell[3, 3] = 0.5
    return DensityMatrix(w * bell + (1 - w) * np.eye(4) / 4, (2, 2))


print("Werner family:")
for w in (0.2, 0.5, 0.8, 1.0):
    rho = werner(w)
    print(
        f"  w={w:.1f}: concurrence {concurrence(rho):.4f}, "
        f"EoF {eof(rho):.4f} bits, smallest source mu2 {min_mu2(rho):.5f}"
    )

rho = werner(0.8)
print("\nprobabilistic collapse for w=0.8 (min_mu2 = %.4f):" % min_mu2(rho))
for mu2 in (0.1, 0.25):
    for q in (0.2, 0.5, 0.9):
        verdict = membership_prob_2q(rho, mu2, q)
        regime = "collapsed" if q <= 2 * mu2 else f"exact at {mu2 / q:.3f}"
        print(f"  mu2={mu2}, q={q}: {verdict}  ({regime})")

print("\napproximate threshold: source mu2=0.2")
for f in (0.96, 0.99, 0.999):
    alpha = approx_threshold_alpha(0.2, f)
    print(f"  fidelity {f}: pure targets qualify when alpha >= {alpha:.6f}")

print("\ngeneric optimizer vs closed form on 10 random states:")
cfg = SearchConfig(max_ensemble_size=4, restarts=3, seed=1)
for seed in range(10):
    rho = random_density((2, 2), 4, seed)
    mu2 = 0.25
    closed = membership_exact_2q(rho, mu2)
    verdict = membership_splus(rho, [1 - mu2, mu2], cfg)
    marker = "agree" if verdict.is_member == closed else (
        "search missed (semi-decision slack)" if closed else "CONTRADICTION"
    )
    print(
        f"  seed {seed}: closed-form {str(closed):5s} "
        f"search {verdict.status:9s} -> {marker}"
    )
