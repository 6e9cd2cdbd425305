"""locc_lab: deciding and synthesizing single-copy LOCC conversions
between bipartite quantum states.

The library answers, with explicit certificates, when a bipartite pure
state can be converted by local operations and classical communication
into another pure state, an ensemble, or a mixed state - exactly, with
some probability, or within some approximation fidelity - and builds the
measurement protocols that realize feasible conversions.  Brute-force
oracles and closed-form two-qubit results back every numerical verdict
at small dimension.
"""

from .majorization import (
    NotMajorizedError,
    SchmidtVector,
    TTransformChain,
    TTransformStep,
    as_schmidt_vector,
    average_schmidt_vector,
    majorizes,
    max_probability,
    shannon_entropy,
    t_transform_chain,
    tail_sum,
    weakly_supermajorized,
)
from .states import (
    DensityMatrix,
    Ensemble,
    PureState,
    SchmidtDecomposition,
    assemble,
    enumerate_decompositions,
    overlap,
    random_density,
    random_pure,
    reduced_state,
    schmidt_decompose,
    schmidt_form_state,
    sqrt_fidelity,
)
from .protocols import (
    DeclaredOutcome,
    LocalProtocolStep,
    OutcomeLeaf,
    Protocol,
    can_convert_exact,
    execute,
    fine_grain,
    optimal_probability,
    optimal_pure_fidelity,
    sample,
    sample_frequencies,
    synthesize_exact,
    synthesize_probabilistic,
    verify_declared,
)
from .ensembles import (
    convert_to_ensemble,
    ensemble_reachable,
    precursor_state,
    synthesize_locc1a,
)
from .membership import (
    MembershipVerdict,
    SearchConfig,
    approx_fidelity_fmax,
    approximating_decomposition,
    fmax_from_maxent,
    membership_hull,
    membership_prob,
    membership_splus,
    probability_bound,
    sqrt_fidelity_lower_bound,
    structural_hull_obstruction,
    two_level_mixture_case,
    vidal_monotone,
)
from .two_qubits import (
    TwoQubitMu,
    approx_threshold_alpha,
    binary_entropy,
    concurrence,
    eof,
    membership_approx_2q,
    membership_exact_2q,
    membership_prob_2q,
    min_mu2,
)
from .positive_maps import (
    HermitianPreservingMap,
    ImplicationReport,
    MapPositivityReport,
    ViolationWitness,
    apply_extended,
    apply_map,
    averaged_map,
    identity_map,
    k_positivity_implication_check,
    mu_positivity_check,
    rank_positivity_check,
    reduction_like_map,
    trace_map,
    transpose_map,
)
from .tolerances import OVERLAP_TOL, TOL

__version__ = "0.1.0"
