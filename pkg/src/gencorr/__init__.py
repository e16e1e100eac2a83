"""Genuine multipartite correlation quantifiers and decoherence sweeps."""

__version__ = "0.1.0"

from .linalg import (
    DEFAULT_TOL,
    CompositeDims,
    DensityMatrix,
    PureState,
    Tolerances,
    density,
    eig_hermitian,
    kron_all,
    load_state,
    matrix_log2_on_support,
    partial_trace,
    permute_subsystems,
    save_state,
    state_from_json,
    state_to_json,
    tensor,
)
from .entropy import (
    INF_RELATIVE_ENTROPY,
    relative_entropy,
    shannon,
    total_correlation,
    von_neumann_entropy,
)
from .classical_search import (
    LocalBasisSet,
    SearchConfig,
    basis_from_params,
    closest_classical_state,
    dephase,
    quantumness_in_basis,
)
from .genuine_correlations import (
    Bipartition,
    CorrelationReport,
    SubsetSelection,
    all_bipartitions,
    degree_of,
    genuine_classical_Ck,
    genuine_classical_Cn,
    genuine_quantum_Qk,
    genuine_quantum_Qn,
    genuine_total_Ik,
    genuine_total_In,
    multipartite_quantum_Q,
)
from .channels import (
    DilationMap,
    KrausChannel,
    amplitude_damping_kraus,
    appendix_golden_state,
    dilation,
    evolve_global,
    phase_damping_kraus,
    psi_minus,
    werner_state,
)
from .states import (
    classical_state,
    fidelity,
    ghz,
    ppt_min_eigenvalue,
    random_classical_state,
    random_density_matrix,
    random_pure_state,
    random_unitary,
    separable_quantum_mixture,
    w4,
)
from .experiments import (
    SUPPORTED_MEASURES,
    SWAP_SYMMETRY,
    SuddenChangeReport,
    SweepSpec,
    detect_sudden_change,
    run_sweep,
    verify_anchors,
)
