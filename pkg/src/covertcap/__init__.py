"""Rate bounds and simulations for covert communication under mismatched decoding.

The library computes, for a binary-input channel pair (receiver, adversary)
and a fixed decoding metric: the achievable covert rate (lower_bound), the
converse bound (upper_bound), closed forms where the two meet, and a seeded
simulator of position-modulated codes.  All rates are in nats per sqrt(n).
"""

from .closed_forms import (
    DichotomyCase,
    DichotomyResult,
    binary_dichotomy,
    covert_capacity,
    erasures_only_capacity,
    erasures_only_metric,
)
from .converse import (
    JointConditional,
    MaximalSetTable,
    UpperBoundResult,
    diagonal_coupling,
    fw_linear_oracle,
    maximal_sets,
    objective_kl,
    upper_bound,
    upper_bound_grid_oracle,
    verify_maximal,
)
from .core import (
    Bdmc,
    ChannelSpecError,
    CovertInstance,
    DecodingMetric,
    DimensionError,
    DomainError,
    ProbVector,
    ResourceLimitError,
    ValidationError,
    ValidationReport,
    WeightParam,
    chi2_divergence,
    innocent_only_set,
    kl_divergence,
    load_channel_spec,
    require_valid,
    validate_instance,
    weight_parameter,
)
from .lower_bound import (
    AT_INFINITY,
    LowerBoundResult,
    TiltFunction,
    binary_f_derivative,
    binary_s0,
    f_s,
    key_rate_threshold,
    lower_bound,
    slope_at_infinity,
    tilt_function,
)
from .ppm import (
    METHOD_EXACT,
    METHOD_MC,
    TIE,
    CovertnessReport,
    ErrorReport,
    PpmCodebook,
    PpmParams,
    SStatReport,
    covertness_exact,
    covertness_mc,
    estimate_error,
    expurgate,
    generate_codebook,
    ppm_output_kl,
    ppm_params,
    prescribed_log_sizes,
    q_decode,
    sample_codeword,
    sample_s_statistic,
)

__all__ = [
    "AT_INFINITY",
    "Bdmc",
    "ChannelSpecError",
    "CovertInstance",
    "CovertnessReport",
    "DecodingMetric",
    "DichotomyCase",
    "DichotomyResult",
    "DimensionError",
    "DomainError",
    "ErrorReport",
    "JointConditional",
    "LowerBoundResult",
    "MaximalSetTable",
    "METHOD_EXACT",
    "METHOD_MC",
    "PpmCodebook",
    "PpmParams",
    "ProbVector",
    "ResourceLimitError",
    "SStatReport",
    "TIE",
    "TiltFunction",
    "UpperBoundResult",
    "ValidationError",
    "ValidationReport",
    "WeightParam",
    "binary_dichotomy",
    "binary_f_derivative",
    "binary_s0",
    "chi2_divergence",
    "covert_capacity",
    "covertness_exact",
    "covertness_mc",
    "diagonal_coupling",
    "erasures_only_capacity",
    "erasures_only_metric",
    "estimate_error",
    "expurgate",
    "f_s",
    "fw_linear_oracle",
    "generate_codebook",
    "innocent_only_set",
    "key_rate_threshold",
    "kl_divergence",
    "load_channel_spec",
    "lower_bound",
    "maximal_sets",
    "objective_kl",
    "ppm_output_kl",
    "ppm_params",
    "prescribed_log_sizes",
    "q_decode",
    "require_valid",
    "sample_codeword",
    "sample_s_statistic",
    "slope_at_infinity",
    "tilt_function",
    "upper_bound",
    "upper_bound_grid_oracle",
    "validate_instance",
    "verify_maximal",
    "weight_parameter",
]

__version__ = "0.1.0"
