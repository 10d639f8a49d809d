"""Frequency-bin single-photon qubit components as scattering networks."""

from .devices import (
    DeviceConfig,
    extract_rotation,
    frequency_beamsplitter,
    mz_backward,
    mz_closed_form,
    mz_forward,
    rf_hwp,
    rf_qwp,
    target_rotation,
)
from .elements import (
    AomParams,
    ScatteringElement,
    aom_pass,
    apply,
    beamsplitter,
    compose,
    delay_arm,
    identity_element,
    isometry_defect,
    loss_element,
    relabel,
    with_identity_on,
)
from .errors import (
    GridMismatchError,
    GridTooNarrowError,
    NetlistError,
    NormalizationError,
    ParameterError,
    PortMismatchError,
    RfqubitError,
    TuningError,
)
from .grid import FrequencyGrid
from .loss import LossBudget, apply_device_loss, effective_transmission
from .netlist import Netlist, ResultRecord, parse_netlist, pretty_print, run_netlist
from .state import (
    LogicalQubit,
    ModeId,
    PhotonState,
    WavepacketParams,
    inner_product,
    make_gaussian_qubit,
    make_monochromatic_state,
    project_computational,
    single_mode_state,
    state_fidelity,
)
from .wavepacket import (
    FidelityResult,
    analytic_Q,
    expected_output,
    fidelity,
    fidelity_sweep,
    propagate_gaussian,
)

__version__ = "0.1.0"
