"""Toolkit for approximately monotone and approximately Hölder functions.

Library plus CLI for real functions sampled on uniform grids: membership
checks with violation witnesses, subadditive and absolutely subadditive
minorants of error tables, monotone/Hölder envelopes and sandwiches,
two-sided brackets, tolerance-discounted total variation with a Jordan-type
decomposition, and per-function optimal error tables.
"""
from .grid import (
    DEFAULT_TOL,
    ConfigurationError,
    DimensionMismatchError,
    ErrorFn,
    Grid,
    GridError,
    IngestionError,
    PreconditionError,
    SampledFn,
    Witness,
    WitnessKind,
    cone_combine,
    ingest_samples,
    is_phi_holder,
    is_phi_monotone,
    make_grid,
    pointwise_extrema,
)
from .error_envelopes import (
    AlphaConfig,
    PowerErrorSpec,
    absolutely_subadditive_envelope,
    default_mass_radius,
    is_absolutely_subadditive,
    is_subadditive,
    power_error,
    subadditive_envelope,
)
from .function_envelopes import (
    BracketPair,
    holder_bracket,
    holder_lower_envelope,
    holder_sandwich,
    holder_upper_envelope,
    monotone_bracket,
    monotone_lower_envelope,
    monotone_sandwich,
    monotone_upper_envelope,
)
from .variation import (
    JordanPair,
    Partition,
    VariationTable,
    delta_variation_bound,
    is_holder_via_variation,
    jordan_decompose,
    phi_variation,
    total_phi_variation,
)
from .individual import individual_alpha, individual_sigma, positive_part

__all__ = [
    "DEFAULT_TOL",
    "AlphaConfig",
    "BracketPair",
    "ConfigurationError",
    "DimensionMismatchError",
    "ErrorFn",
    "Grid",
    "GridError",
    "IngestionError",
    "JordanPair",
    "Partition",
    "PowerErrorSpec",
    "PreconditionError",
    "SampledFn",
    "VariationTable",
    "Witness",
    "WitnessKind",
    "absolutely_subadditive_envelope",
    "cone_combine",
    "default_mass_radius",
    "delta_variation_bound",
    "holder_bracket",
    "holder_lower_envelope",
    "holder_sandwich",
    "holder_upper_envelope",
    "individual_alpha",
    "individual_sigma",
    "ingest_samples",
    "is_absolutely_subadditive",
    "is_holder_via_variation",
    "is_phi_holder",
    "is_phi_monotone",
    "is_subadditive",
    "jordan_decompose",
    "make_grid",
    "monotone_bracket",
    "monotone_lower_envelope",
    "monotone_sandwich",
    "monotone_upper_envelope",
    "phi_variation",
    "pointwise_extrema",
    "positive_part",
    "power_error",
    "subadditive_envelope",
    "total_phi_variation",
]
