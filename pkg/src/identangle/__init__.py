"""Identical-particle entanglement toolkit.

Symmetrized states of identical bosons and fermions, permanent-based
transition amplitudes, detector projection with particle-number
superselection, symmetrized partial traces, and entanglement measures,
with brute-force expansion oracles for validation at small particle
numbers.
"""

from .algebra import (
    DensityMatrix,
    contract_single,
    convex_mixture,
    overlap_matrix,
    pure_to_density,
    symmetrized_partial_trace,
    transition_amplitude,
)
from .detection import (
    DetectionMatrixSpec,
    ParticleEnsemble,
    Sector,
    SectorDecomposition,
    SeparabilityVerdict,
    build_detection_matrix,
    coherence,
    detection_key,
    entanglement_of_particles,
    project_onto_detectors,
    sector_entanglement,
    sector_reduced_density,
    theorem1_separability_check,
)
from .errors import (
    BipartitionError,
    BoundsError,
    CompletenessError,
    ConfigError,
    ConsistencyError,
    DimensionError,
    IdentangleError,
    NormalizationError,
    NullStateError,
    SectorError,
    SizeLimitError,
)
from .measures import (
    LabelSplit,
    ModeSplit,
    SchmidtEquivalenceReport,
    SchmidtResult,
    concurrence_pure,
    dicke_state,
    schmidt_decompose,
    three_boson_average_concurrence,
    three_boson_average_concurrence_coherences,
    three_boson_projected_norm_sq,
    two_boson_average_concurrence,
    verify_schmidt_equivalence,
    von_neumann_entropy,
)
from .permanent import determinant, permanent_naive, permanent_ryser
from .states import (
    OccupationKey,
    SingleParticleKet,
    SpatialMode,
    Spin,
    Statistics,
    SymmetricKet,
    expand_first_quantized,
    make_product_state,
    mode_ket,
    normalization_subsystem,
    normalization_total,
    occupation_key,
    symmetrize_product,
)
from .tolerances import DEFAULT_TOLERANCES, TOLERANCE_ENV_VAR, Tolerances, tolerances_from_env

__version__ = "0.1.0"

__all__ = [
    "BipartitionError",
    "BoundsError",
    "CompletenessError",
    "ConfigError",
    "ConsistencyError",
    "DEFAULT_TOLERANCES",
    "DensityMatrix",
    "DetectionMatrixSpec",
    "DimensionError",
    "IdentangleError",
    "LabelSplit",
    "ModeSplit",
    "NormalizationError",
    "NullStateError",
    "OccupationKey",
    "ParticleEnsemble",
    "SchmidtEquivalenceReport",
    "SchmidtResult",
    "Sector",
    "SectorDecomposition",
    "SectorError",
    "SeparabilityVerdict",
    "SingleParticleKet",
    "SizeLimitError",
    "SpatialMode",
    "Spin",
    "Statistics",
    "SymmetricKet",
    "TOLERANCE_ENV_VAR",
    "Tolerances",
    "build_detection_matrix",
    "coherence",
    "concurrence_pure",
    "contract_single",
    "convex_mixture",
    "detection_key",
    "determinant",
    "dicke_state",
    "entanglement_of_particles",
    "expand_first_quantized",
    "make_product_state",
    "mode_ket",
    "normalization_subsystem",
    "normalization_total",
    "occupation_key",
    "overlap_matrix",
    "permanent_naive",
    "permanent_ryser",
    "project_onto_detectors",
    "pure_to_density",
    "schmidt_decompose",
    "sector_entanglement",
    "sector_reduced_density",
    "symmetrize_product",
    "symmetrized_partial_trace",
    "theorem1_separability_check",
    "three_boson_average_concurrence",
    "three_boson_average_concurrence_coherences",
    "three_boson_projected_norm_sq",
    "tolerances_from_env",
    "transition_amplitude",
    "two_boson_average_concurrence",
    "verify_schmidt_equivalence",
    "von_neumann_entropy",
]
