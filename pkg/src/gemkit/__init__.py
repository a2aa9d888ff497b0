"""Geometric measure of entanglement for multiqubit pure states.

Closed forms for every solvable three-qubit family and for arbitrary n-qubit
W states, a multi-start variational oracle, local-unitary invariants, and
generalized Schmidt decomposition tools.
"""

from .dispatch import EntanglementReport, classify_report, compute_report
from .errors import (
    BranchError,
    ConvergenceError,
    GemkitError,
    InputError,
    MethodUnavailableError,
)
from .invariants import (
    Lambda0Candidates,
    LuInvariants,
    NewTypeStandardForm,
    StateType,
    acin_params_from_invariants,
    classify_from_invariants,
    classify_type,
    invariants_from_acin,
    invariants_from_state,
    lambda0_candidates,
    newtype_invariants,
    newtype_standard_form,
    pmax_by_type,
    pmax_newtype_invariant_form,
    two_qubit_pmax,
)
from .schmidt import (
    GsdLabel,
    GsdVerdict,
    SchmidtForm,
    SecondVariationMatrix,
    gsd_from_stationary,
    schmidt_inequality,
    second_variation_matrix,
    simple_case_bound,
    validate_gsd,
    wtype_canonical_forms,
)
from .states import (
    BlochDecomposition3,
    BlochVector,
    DensityMatrix,
    ProductState,
    PureState,
    Qubit,
    apply_local_unitaries,
    bloch_decomposition3,
    bloch_vector,
    correlation_matrix,
    dump_state_json,
    from_acin_params,
    from_gsd_coefficients,
    ghz_state,
    load_state_json,
    partial_trace,
    permute_qubits,
    product_overlap,
    qubit_from_bloch,
    rotation_from_unitary,
    states_close,
    w_state,
)
from .sweeps import SweepSpec, run_sweep, write_csv
from .three_qubit import (
    FourTerm,
    FourTermQuantities,
    RegionLabel3,
    SymState,
    WType3,
    fourterm_bloch_solution,
    fourterm_quantities,
    lambda_sq_fourterm,
    lambda_sq_symmetric,
    lambda_sq_wtype,
    ww_superposition_cubic,
)
from .variational import (
    LagrangeSolution,
    OracleConfig,
    StationaryPoint,
    oracle_lambda_max,
    oracle_scan,
    pmax_from_reduced,
    solve_lagrange_general,
    stationary_iterate,
)
from .wduality import (
    DiameterBranch,
    DiameterSolution,
    InterpolationInput,
    PyramidGeometry,
    WRegion,
    WRegionLabel,
    WStateN,
    critical_values,
    lambda_max_w,
    largeN_lambda_sq,
    pyramid_geometry,
    solve_diameter,
    two_block_closed_form,
    two_block_wstate,
)

__version__ = "0.1.0"
