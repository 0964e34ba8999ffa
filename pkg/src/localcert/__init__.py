"""Local (LOCC) and global certification of unitary channels."""

from .certification import (
    CertificationPlan,
    CertificationProblem,
    MeasurementBound,
    OneWayProtocol,
    ProtocolSearchError,
    ProtocolTranscript,
    certify_global,
    certify_local,
    measurement_lower_bound,
    one_way_protocol,
    pii_from_distance,
    simulate_protocol,
)
from .linalg import (
    DimensionError,
    NotHermitianError,
    NotUnitaryError,
    eig_hermitian,
    eig_unitary,
    haar_unitary,
    kron,
    multiply,
    random_state,
    reflection_example,
    t_alpha_family,
    unitary_power,
)
from .numrange import (
    NumRangePolygon,
    NumRangeResult,
    boundary,
    contains_zero,
    dist_origin,
    support_value,
    v_unitary,
    zero_achiever,
)
from .pnr import (
    ArcConditionError,
    PnrResult,
    ShadowSampleSet,
    compress_left,
    compress_right,
    grid_oracle,
    shadow_sample,
    trace_upper_bound,
    z_diagonal_quadruples,
    z_distance,
    z_product_case,
    zero_fraction_study,
)

__version__ = "0.1.0"
