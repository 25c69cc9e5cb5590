"""Exact statevector laboratory for the HHL linear-system algorithm.

The package pairs a dense simulation of the eigenvalue-inversion circuit
(input register in the eigenbasis, sine-windowed clock register, flag qutrit)
with a closed-form engine for the clock amplitudes, the inversion filters,
and the distance bounds between the finite-clock circuit and its exact-readout
idealization — every analytic expression is cross-checked against the
simulated statevector.
"""

__version__ = "0.1.0"

from .amplitudes import (
    AmplitudeTable,
    HHLConfig,
    alpha_closed,
    alpha_direct,
    amplitude_table,
    analytic_config,
    approx_eigenvalue,
    figure_sweep,
    make_config,
    tail_sum_bound,
    verify_alpha_tail_bound,
    verify_polynomial_inequality,
)
from .analysis import (
    ErrorReport,
    ExpectationContext,
    claim1_report,
    claim2_report,
    claim3_report,
    delta_moment_check,
    expectation_context,
    expectation_j,
    expectation_kj,
    full_report,
    full_state_bound,
    inner_product_final,
    lipschitz_c,
    loglog_slope,
    term_decomposition,
    well_conditioned_projection,
)
from .circuit import (
    CircuitState,
    ExtractedSolution,
    PostSelectionResult,
    clock_qft,
    clock_sine_prepare,
    conditioned_hamiltonian,
    extract_solution,
    flag_rotation,
    init_state,
    post_select_well,
    post_select_well_ill,
    qpe,
    qpe_inverse,
    run_ideal,
    run_practical,
)
from .errors import HHLLabError
from .filters import (
    FilterParams,
    FlagState,
    filter_difference_bound_check,
    filter_f,
    filter_g,
    h_state,
    lipschitz_bound,
    verify_lipschitz,
)
from .linalg import (
    HermitianSystem,
    eigh,
    random_system,
    state_distance,
    system_from_spectrum,
)

__all__ = [
    "__version__",
    "AmplitudeTable",
    "CircuitState",
    "ErrorReport",
    "ExpectationContext",
    "ExtractedSolution",
    "FilterParams",
    "FlagState",
    "HHLConfig",
    "HHLLabError",
    "HermitianSystem",
    "PostSelectionResult",
    "alpha_closed",
    "alpha_direct",
    "amplitude_table",
    "analytic_config",
    "approx_eigenvalue",
    "claim1_report",
    "claim2_report",
    "claim3_report",
    "clock_qft",
    "clock_sine_prepare",
    "conditioned_hamiltonian",
    "delta_moment_check",
    "eigh",
    "expectation_context",
    "expectation_j",
    "expectation_kj",
    "extract_solution",
    "figure_sweep",
    "filter_difference_bound_check",
    "filter_f",
    "filter_g",
    "flag_rotation",
    "full_report",
    "full_state_bound",
    "h_state",
    "init_state",
    "inner_product_final",
    "lipschitz_bound",
    "lipschitz_c",
    "loglog_slope",
    "make_config",
    "post_select_well",
    "post_select_well_ill",
    "qpe",
    "qpe_inverse",
    "random_system",
    "run_ideal",
    "run_practical",
    "state_distance",
    "system_from_spectrum",
    "tail_sum_bound",
    "term_decomposition",
    "verify_alpha_tail_bound",
    "verify_lipschitz",
    "verify_polynomial_inequality",
    "well_conditioned_projection",
]
