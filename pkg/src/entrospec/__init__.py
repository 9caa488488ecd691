"""entrospec: unitary equivalence and spectrum recovery from entropy curves.

The library decides whether two density matrices are unitarily equivalent
using only von Neumann entropy values along the line that mixes each state
toward maximal mixedness, and reconstructs a state's full eigenvalue
spectrum from black-box access to that entropy curve.
"""

from .entropy import (
    DeterminantPolynomial,
    EntropyCurve,
    curve_for_state,
    determinant_polynomial,
    entropy_of_spectrum,
    second_derivative_times_determinant,
    von_neumann_entropy,
)
from .equivalence import (
    EquivalenceConfig,
    EquivalenceReport,
    decide_grid,
    decide_nodes,
    decide_spectral,
    default_nodes,
    equal_entropy_pair,
    spectral_equivalent,
    unitary_witness,
)
from .errors import (
    BadNodeCount,
    ComplexRoots,
    DegreeDeficit,
    DimensionMismatch,
    EntrospecError,
    IllConditioned,
    LambdaOutOfRange,
    NoConvergence,
    NotHermitian,
    NotPositiveSemidefinite,
    OracleDomain,
    ParseError,
    SingularEndpoint,
    SingularSample,
    SpectraMismatch,
    TraceNotOne,
    ValidationError,
    WitnessInconsistency,
)
from .matrixio import MatrixFile, load_matrix, parse_matrix_file, save_matrix
from .recovery import (
    EntropyOracle,
    RecoveredSpectrum,
    RecoveryConfig,
    default_recovery_config,
    fit_determinant_polynomial,
    oracle_from_spectrum,
    oracle_from_state,
    recover_spectrum,
    recovered_as_spectrum,
    sample_log2_determinant,
)
from .selftest import PropertyResult, property_names, run_selftest
from .states import (
    DEFAULT_TOLERANCES,
    ComplexMatrix,
    QuantumState,
    Spectrum,
    ToleranceConfig,
    as_complex_matrix,
    check_same_dimension,
    depolarize,
    hermitian_eigensystem,
    hermitian_spectrum,
    jacobi_eigh,
    random_state,
    random_unitary,
    validate_state,
)

__version__ = "0.1.0"

__all__ = [
    "BadNodeCount",
    "ComplexMatrix",
    "ComplexRoots",
    "DEFAULT_TOLERANCES",
    "DegreeDeficit",
    "DeterminantPolynomial",
    "DimensionMismatch",
    "EntropyCurve",
    "EntropyOracle",
    "EntrospecError",
    "EquivalenceConfig",
    "EquivalenceReport",
    "IllConditioned",
    "LambdaOutOfRange",
    "MatrixFile",
    "NoConvergence",
    "NotHermitian",
    "NotPositiveSemidefinite",
    "OracleDomain",
    "ParseError",
    "PropertyResult",
    "QuantumState",
    "RecoveredSpectrum",
    "RecoveryConfig",
    "SingularEndpoint",
    "SingularSample",
    "SpectraMismatch",
    "Spectrum",
    "ToleranceConfig",
    "TraceNotOne",
    "ValidationError",
    "WitnessInconsistency",
    "as_complex_matrix",
    "check_same_dimension",
    "curve_for_state",
    "decide_grid",
    "decide_nodes",
    "decide_spectral",
    "default_nodes",
    "default_recovery_config",
    "depolarize",
    "determinant_polynomial",
    "entropy_of_spectrum",
    "equal_entropy_pair",
    "fit_determinant_polynomial",
    "hermitian_eigensystem",
    "hermitian_spectrum",
    "jacobi_eigh",
    "load_matrix",
    "oracle_from_spectrum",
    "oracle_from_state",
    "parse_matrix_file",
    "property_names",
    "random_state",
    "random_unitary",
    "recover_spectrum",
    "recovered_as_spectrum",
    "run_selftest",
    "sample_log2_determinant",
    "save_matrix",
    "second_derivative_times_determinant",
    "spectral_equivalent",
    "unitary_witness",
    "validate_state",
    "von_neumann_entropy",
]
