"""Supermode squeezing and entanglement of broadband type-II PDC states."""

__version__ = "0.1.0"

from twinbeam.channel import (  # noqa: E402
    ChannelParams,
    TwoModeCM,
    apply_loss,
    log_negativity,
    nu_minus,
    oracle_symplectic_spectrum,
    tmsv_cm,
    total_lognegativity_lossy,
)
from twinbeam.grid import FrequencyGrid, UnitConvention, build_custom_grid, build_default_grid  # noqa: E402
from twinbeam.homodyne import LoPulse, captured_squeezing, delta_lo, supermode_lo, unshaped_lo  # noqa: E402
from twinbeam.jsa import JsaMatrix, PdcModel, build_jsa, phase_matching, pump_envelope  # noqa: E402
from twinbeam.schmidt import (  # noqa: E402
    SchmidtSpectrum,
    decompose,
    leading_fraction,
    squeezing_db,
    total_lognegativity_pure,
    total_squeezing,
)
