"""Pump envelope, phase matching and the discretized joint spectral amplitude."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from twinbeam.errors import DegenerateKernelError, InvalidParameterError
from twinbeam.grid import FrequencyGrid, UnitConvention

PAPER_LAMBDA_P_NM = 795.0
PAPER_FWHM_HZ = 2.8480e12
PAPER_K_S = 0.061e-12
PAPER_K_I = 0.213e-12

_SERIES_CUTOFF = 1e-4


def wavelength_to_frequency(lambda_nm: float) -> float:
    """Ordinary frequency (Hz) of light with vacuum wavelength ``lambda_nm``."""
    if not lambda_nm > 0:
        raise InvalidParameterError(f"wavelength must be positive, got {lambda_nm}")
    return SPEED_OF_LIGHT / (lambda_nm * 1e-9)


def fwhm_to_sigma(fwhm: float) -> float:
    # Paired values 2.8480e12 FWHM <-> 1.4240e12 sigma are reproduced literally.
    return fwhm / 2.0


def sinc(x):
    """Unnormalized ``sin(x)/x`` with a series branch near zero."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    x2 = x * x
    out = np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class PdcModel:
    """Pump and crystal parameters of the type-II down-conversion source.

    ``k_s`` and ``k_i`` are group-delay coefficients in seconds; the crystal
    length enters only through ``length_scale``, which multiplies both.
    """

    omega_p: float
    sigma_p: float
    k_s: float = PAPER_K_S
    k_i: float = PAPER_K_I
    length_scale: float = 1.0
    zeta: float = 1.0
    units: UnitConvention = field(default_factory=UnitConvention)

    def __post_init__(self):
        for name in ("omega_p", "sigma_p", "k_s", "k_i", "length_scale", "zeta"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise InvalidParameterError(f"{name} must be finite, got {value}")
        if self.omega_p <= 0:
            raise InvalidParameterError(f"omega_p must be > 0, got {self.omega_p}")
        if self.sigma_p <= 0:
            raise InvalidParameterError(f"sigma_p must be > 0, got {self.sigma_p}")
        if self.zeta < 0:
            raise InvalidParameterError(f"zeta must be >= 0, got {self.zeta}")
        if self.length_scale <= 0:
            raise InvalidParameterError(f"length_scale must be > 0, got {self.length_scale}")
        if self.k_s < 0 or self.k_i < 0:
            raise InvalidParameterError("k_s and k_i must be non-negative")

    @classmethod
    def paper_defaults(cls, **overrides) -> PdcModel:
        """795 nm pump, 2.848 THz FWHM, 0.8 mm crystal, unit efficiency."""
        params = dict(
            omega_p=wavelength_to_frequency(PAPER_LAMBDA_P_NM),
            sigma_p=fwhm_to_sigma(PAPER_FWHM_HZ),
        )
        params.update(overrides)
        return cls(**params)

    def with_(self, **changes) -> PdcModel:
        return replace(self, **changes)


@dataclass(frozen=True, eq=False)
class JsaMatrix:
    """Sampled JSA, ``values[i, j] = f(centers_s[i], centers_i[j])``."""

    grid_s: FrequencyGrid
    grid_i: FrequencyGrid
    values: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid_s.n, self.grid_i.n):
            raise InvalidParameterError(
                f"values shape {values.shape} does not match grids "
                f"({self.grid_s.n}, {self.grid_i.n})"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidParameterError("JSA values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.grid_s.n

    def normalize(self) -> JsaMatrix:
        # fsum is correctly rounded, so the norm is independent of element order
        norm = math.sqrt(math.fsum((self.values * self.values).ravel()))
        if norm == 0.0:
            raise DegenerateKernelError("JSA is identically zero on the grid")
        return JsaMatrix(self.grid_s, self.grid_i, self.values / norm, normalized=True)


def pump_envelope(model: PdcModel, omega_s, omega_i):
    """Gaussian spectral amplitude of the frequency-doubled pump at ``omega_s + omega_i``."""
    detuning = np.asarray(omega_s, dtype=float) + np.asarray(omega_i, dtype=float)
    detuning = detuning - 2.0 * model.omega_p
    out = np.exp(-(detuning**2) / (2.0 * model.sigma_p**2))
    return out if out.ndim else float(out)


def phase_matching_argument(model: PdcModel, omega_s, omega_i):
    u = 2.0 * np.pi if model.units.phase_matching_angular else 1.0
    ks = model.k_s * model.length_scale * u
    ki = model.k_i * model.length_scale * u
    ds = np.asarray(omega_s, dtype=float) - model.omega_p
    di = np.asarray(omega_i, dtype=float) - model.omega_p
    return -(ks * ds + ki * di) / 2.0


def phase_matching(model: PdcModel, omega_s, omega_i):
    x = phase_matching_argument(model, omega_s, omega_i)
    if model.units.sinc_normalized:
        x = np.pi * x
    return sinc(x)


def build_jsa(model: PdcModel, grid: FrequencyGrid) -> JsaMatrix:
    """Sample ``pump * phase matching`` on ``grid`` (both axes) and normalize.

    Raises:
        DegenerateKernelError: if the samples are all zero.
    """
    ws = grid.centers[:, None]
    wi = grid.centers[None, :]
    raw = pump_envelope(model, ws, wi) * phase_matching(model, ws, wi)
    try:
        return JsaMatrix(grid, grid, raw).normalize()
    except DegenerateKernelError:
        raise DegenerateKernelError(
            f"JSA vanishes on grid [{grid.omega_min:g}, {grid.omega_max:g}] Hz "
            f"(sigma_p={model.sigma_p:g} Hz)"
        ) from None
