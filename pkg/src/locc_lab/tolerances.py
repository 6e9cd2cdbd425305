"""Shared numerical tolerances.

All eigenvalue, normalization and majorization comparisons in the package
use the same slack so verdicts stay stable under round-off introduced by
upstream SVD/eigendecompositions (double-precision noise at the dimensions
this package targets stays below 1e-12).
"""

# Global comparison tolerance: an inequality failing by less than this
# counts as satisfied.
TOL = 1e-9

# Overlap threshold for "same state up to global phase" checks on
# protocol outputs.
OVERLAP_TOL = 1e-8
