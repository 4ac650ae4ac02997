"""Far-field emission of entangled two-level atom chains and its quantum-path picture."""

from .geometry import ChainGeometry, apply_detection, apply_lowering, detection_phase
from .engine import (
    AngularIntensityProfile,
    ConsistencyError,
    angular_profile,
    appendix_constants,
    correlation,
    correlation_matrix,
    correlation_sum,
    dicke_rate,
    dipole_moment,
    enhancement,
    fringe_width,
    grating_factor,
    intensity,
    intensity_closed_w,
    intensity_coherent_drive,
    max_intensity_w,
    scan_visibility,
    visibility_closed,
    visibility_report,
)
from .paths import (
    PathLedger,
    QuantumPath,
    UnsupportedStateError,
    build_ledger,
    enumerate_paths,
    group_by_final,
    intensity_via_paths,
    ledger_extremum,
    single_paths_per_final,
)
from .states import (
    BasisConfiguration,
    PureState,
    RawStateSpec,
    excitation_count,
    integer_spec,
    make_from_spec,
    make_separable,
    make_symmetric_w,
    parse_state_spec,
    separable_spec,
    symmetric_w_spec,
    uniform_excitation,
    w_minus_21,
    w_tilde_minus_21,
)

__version__ = "0.1.0"
