"""Grover search on explicit state vectors, for arbitrary initial states.

Simulation (oracle, diffusion, all-subsets averaging), exact closed-form
analytics built on the coherence fraction, a parameterized product-state
ansatz, and quantum threshold-descent minimization.
"""
from .analytics import (
    MeasureCounterexampleReport,
    SmallDensityMatrix,
    closed_form_average,
    closed_form_average_mixture,
    coherence_fraction,
    coherence_fraction_density,
    coherence_fraction_mixture,
    l1_coherence,
    measure_counterexample_report,
    mixing_angle,
    optimal_average,
    optimal_iterations,
    rewritten_optimal_average,
)
from .ansatz import (
    LocalGateParams,
    ansatz_coherence_fraction,
    build_gate,
    optimal_success_vs_mixing,
    optimal_success_vs_phases,
    prepare_ansatz_state,
)
from .minimize import (
    MinimizationReport,
    ObjectiveTable,
    SearchOutcome,
    SearchSchedule,
    exponential_search,
    make_objective,
    minimization_success_closed_form,
    run_minimization,
    sample_measurement,
    threshold_marked_set,
)
from .search import (
    ENUMERATION_CAP,
    EnumerationCapError,
    MarkedSet,
    RunReport,
    SearchConfig,
    SubspaceBasis,
    SubspaceCoords,
    apply_diffusion,
    apply_oracle,
    average_over_all_sets,
    average_trajectory_over_all_sets,
    evolve_subspace,
    grover_iterate,
    run_search,
    subspace_basis,
    subspace_decompose,
    subspace_reconstruct,
    success_probability,
)
from .states import (
    MAX_QUBITS,
    PureState,
    SingleQubitGate,
    StateMixture,
    apply_product_unitary,
    basis_state,
    equal_superposition,
    fidelity_with,
    success_mass,
)

__version__ = "0.1.0"

__all__ = [
    "MAX_QUBITS",
    "ENUMERATION_CAP",
    "PureState",
    "SingleQubitGate",
    "StateMixture",
    "MarkedSet",
    "SearchConfig",
    "SubspaceCoords",
    "SubspaceBasis",
    "RunReport",
    "SmallDensityMatrix",
    "MeasureCounterexampleReport",
    "LocalGateParams",
    "ObjectiveTable",
    "SearchSchedule",
    "SearchOutcome",
    "MinimizationReport",
    "EnumerationCapError",
    "basis_state",
    "equal_superposition",
    "apply_product_unitary",
    "fidelity_with",
    "success_mass",
    "apply_oracle",
    "apply_diffusion",
    "grover_iterate",
    "success_probability",
    "run_search",
    "average_over_all_sets",
    "average_trajectory_over_all_sets",
    "subspace_decompose",
    "subspace_basis",
    "subspace_reconstruct",
    "evolve_subspace",
    "mixing_angle",
    "coherence_fraction",
    "coherence_fraction_mixture",
    "closed_form_average",
    "optimal_iterations",
    "optimal_average",
    "closed_form_average_mixture",
    "l1_coherence",
    "coherence_fraction_density",
    "rewritten_optimal_average",
    "measure_counterexample_report",
    "build_gate",
    "prepare_ansatz_state",
    "ansatz_coherence_fraction",
    "optimal_success_vs_phases",
    "optimal_success_vs_mixing",
    "threshold_marked_set",
    "sample_measurement",
    "exponential_search",
    "run_minimization",
    "make_objective",
    "minimization_success_closed_form",
]
