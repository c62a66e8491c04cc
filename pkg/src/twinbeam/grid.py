"""Uniform frequency grids and the phase-matching unit convention.

All frequencies are ordinary frequencies in Hz. Bins are sampled at their
centers (midpoint rule).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from twinbeam.errors import InvalidParameterError


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform discretization of ``[omega_min, omega_max]`` into ``n`` bins."""

    omega_min: float
    omega_max: float
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise InvalidParameterError(f"n must be an integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "omega_min", float(self.omega_min))
        object.__setattr__(self, "omega_max", float(self.omega_max))
        if self.n < 2:
            raise InvalidParameterError(f"n must be >= 2, got {self.n}")
        if not (np.isfinite(self.omega_min) and np.isfinite(self.omega_max)):
            raise InvalidParameterError("grid bounds must be finite")
        if self.omega_min < 0:
            raise InvalidParameterError(f"omega_min must be >= 0, got {self.omega_min}")
        if not self.omega_max > self.omega_min:
            raise InvalidParameterError(
                f"omega_max ({self.omega_max}) must exceed omega_min ({self.omega_min})"
            )

    @property
    def bin_width(self) -> float:
        return (self.omega_max - self.omega_min) / self.n

    @cached_property
    def centers(self) -> np.ndarray:
        c = self.omega_min + (np.arange(self.n) + 0.5) * self.bin_width
        c.setflags(write=False)
        return c

    def bin_index(self, omega: float) -> int:
        """Index of the bin containing ``omega``.

        A frequency on an interior bin edge belongs to the upper bin;
        ``omega_max`` itself belongs to the last bin.
        """
        if not self.omega_min <= omega <= self.omega_max:
            raise InvalidParameterError(
                f"frequency {omega} outside grid [{self.omega_min}, {self.omega_max}]"
            )
        return min(int(np.floor((omega - self.omega_min) / self.bin_width)), self.n - 1)

    def as_dict(self) -> dict:
        return {"omega_min": self.omega_min, "omega_max": self.omega_max, "n": self.n}


def build_default_grid(omega_p: float, sigma_p: float, n: int) -> FrequencyGrid:
    """Grid over ``[0, 2*omega_p + 3*sigma_p]`` used by default."""
    if not omega_p > 0 or not sigma_p > 0:
        raise InvalidParameterError(
            f"omega_p and sigma_p must be positive, got {omega_p}, {sigma_p}"
        )
    return FrequencyGrid(0.0, 2.0 * omega_p + 3.0 * sigma_p, n)


def build_custom_grid(omega_min: float, omega_max: float, n: int) -> FrequencyGrid:
    return FrequencyGrid(omega_min, omega_max, n)


@dataclass(frozen=True)
class UnitConvention:
    """How the phase-matching argument is formed from detunings in Hz.

    Attributes:
        phase_matching_angular: multiply detunings by 2*pi before applying the
            group-delay coefficients.
        sinc_normalized: use ``sin(pi x)/(pi x)`` instead of ``sin(x)/x``.
    """

    phase_matching_angular: bool = False
    sinc_normalized: bool = False

    @property
    def tag(self) -> str:
        freq = "angular" if self.phase_matching_angular else "ordinary"
        sinc = "normalized-sinc" if self.sinc_normalized else "sinc"
        return f"{freq}/{sinc}"

    @classmethod
    def from_tag(cls, tag: str) -> UnitConvention:
        for conv in all_conventions():
            if conv.tag == tag:
                return conv
        raise InvalidParameterError(f"unknown unit convention tag {tag!r}")


def all_conventions() -> list[UnitConvention]:
    return [UnitConvention(a, s) for a in (False, True) for s in (False, True)]
