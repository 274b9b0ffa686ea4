"""Realignment-based separability criteria for bipartite and multipartite states."""

from .criteria import (
    CriterionParams,
    CriterionResult,
    ccnr,
    corollary_preset,
    multipartite_eval,
    ppt,
    theorem21,
    zr,
)
from .qmat import (
    DensityMatrix,
    InvalidStateError,
    kron,
    partial_trace,
    partial_transpose,
    permute_systems,
    purity,
    trace_norm,
    validate_density,
    vec,
)
from .realign import GSpec, PairMapKind, apply_pair_map, build_augmented, check_g_condition, omega, realign
from .states import (
    NoiseFamily,
    bell_state,
    noise_mix,
    perturbed_ghz,
    random_density,
    random_separable,
    shifts_state,
    tiles_state,
)
from .sweep import ThresholdReport, find_threshold, reproduce_table

__version__ = "0.1.0"
