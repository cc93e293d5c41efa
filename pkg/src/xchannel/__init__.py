"""Sum-capacity bounds for the two-user Gaussian X channel in mixed interference."""
from xchannel.bounds import (
    BoundEvaluation,
    BoundKind,
    ChannelParams,
    DeltaCertificate,
    Receiver,
    Region,
    RegionLabel,
    best_bound,
    bound_a,
    bound_b,
    bound_c,
    classify_region,
    delta_threshold_a,
    delta_threshold_b,
    delta_threshold_c,
    dominance_predicates,
    evaluate_side,
    in_r_delta,
    mac_sum_rate,
    mirror,
)
from xchannel.kernel import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"
