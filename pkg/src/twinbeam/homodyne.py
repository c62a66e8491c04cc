"""Local-oscillator pulses and the squeezing captured by homodyne detection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from twinbeam.errors import (
    DegeneratePulseError,
    IncompatibleGridError,
    InvalidParameterError,
)
from twinbeam.grid import FrequencyGrid
from twinbeam.jsa import JsaMatrix, PdcModel
from twinbeam.schmidt import SchmidtSpectrum

NORM_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class LoPulse:
    """Unit-norm LO spectral amplitudes sampled on ``grid``."""

    amplitudes: np.ndarray
    grid: FrequencyGrid
    label: str = "custom"

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=float)
        if amps.shape != (self.grid.n,):
            raise InvalidParameterError(
                f"LO has {amps.shape} samples, grid has {self.grid.n} bins"
            )
        norm = np.linalg.norm(amps)
        if not np.isfinite(norm) or abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidParameterError(f"LO amplitudes must have unit norm, got {norm}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amplitudes, grid: FrequencyGrid, label: str = "custom") -> LoPulse:
        amps = np.asarray(amplitudes, dtype=float)
        norm = np.linalg.norm(amps)
        if norm == 0.0 or not np.isfinite(norm):
            raise DegeneratePulseError(f"{label} pulse has zero or non-finite norm")
        return cls(amps / norm, grid, label)


def unshaped_lo(model: PdcModel, grid: FrequencyGrid, sigma: float | None = None) -> LoPulse:
    """Gaussian LO centered at the pump frequency.

    Args:
        model: supplies ``omega_p`` and, unless overridden, the bandwidth.
        grid: sampling grid.
        sigma: optional LO bandwidth in Hz replacing ``model.sigma_p``.
    """
    sigma = model.sigma_p if sigma is None else sigma
    if not sigma > 0:
        raise InvalidParameterError(f"LO bandwidth must be positive, got {sigma}")
    amps = np.exp(-((grid.centers - model.omega_p) ** 2) / (2.0 * sigma**2))
    if amps.max() <= 1e-300:
        raise DegeneratePulseError(
            f"unshaped LO at {model.omega_p:g} Hz vanishes on the grid"
        )
    return LoPulse.normalized(amps, grid, "unshaped-gaussian")


def supermode_lo(s: SchmidtSpectrum, k: int, beam: str = "signal") -> LoPulse:
    """LO shaped as supermode ``k`` (1-based) of the signal or idler beam."""
    if not 1 <= k <= s.n_modes:
        raise InvalidParameterError(f"k must lie in [1, {s.n_modes}], got {k}")
    if beam == "signal":
        vec = s.psi[k - 1]
    elif beam == "idler":
        vec = s.phi[k - 1]
    else:
        raise InvalidParameterError(f"beam must be 'signal' or 'idler', got {beam!r}")
    return LoPulse(vec, s.grid, f"supermode-{k}")


def delta_lo(grid: FrequencyGrid, omega0: float) -> LoPulse:
    amps = np.zeros(grid.n)
    amps[grid.bin_index(omega0)] = 1.0
    return LoPulse(amps, grid, "delta")


def captured_squeezing(g_s: LoPulse, g_i: LoPulse, jsa: JsaMatrix, zeta: float) -> float:
    """Signed squeezing ``zeta * g_s^T f g_i`` seen by LOs ``g_s`` and ``g_i``."""
    if g_s.grid != jsa.grid_s or g_i.grid != jsa.grid_i:
        raise IncompatibleGridError("LO pulses and JSA are sampled on different grids")
    return float(zeta * (g_s.amplitudes @ jsa.values @ g_i.amplitudes))
