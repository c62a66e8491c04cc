"""Schmidt (singular value) decomposition of a normalized JSA matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from twinbeam.errors import ContractViolationError, InvalidParameterError, UndefinedFractionError
from twinbeam.grid import FrequencyGrid
from twinbeam.jsa import JsaMatrix

NORM_TOLERANCE = 1e-10
LOG2E = 1.0 / np.log(2.0)
DB_PER_NEPER = 20.0 / np.log(10.0)


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    """Supermode decomposition ``f = sum_k c_k psi_k phi_k^T``.

    ``psi`` and ``phi`` hold one supermode per row.
    """

    c: np.ndarray
    psi: np.ndarray
    phi: np.ndarray
    zeta: float
    grid: FrequencyGrid

    @property
    def r(self) -> np.ndarray:
        return self.zeta * self.c

    @property
    def n_modes(self) -> int:
        return len(self.c)

    def reconstruct(self) -> np.ndarray:
        return (self.psi.T * self.c) @ self.phi


def _check_normalized(jsa: JsaMatrix):
    if not jsa.normalized:
        raise ContractViolationError("decompose requires a normalized JsaMatrix")
    norm = np.linalg.norm(jsa.values)
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise ContractViolationError(f"JSA flagged normalized but has norm {norm!r}")


def decompose(jsa: JsaMatrix, zeta: float) -> SchmidtSpectrum:
    """Full SVD of the JSA matrix.

    Each (psi_k, phi_k) pair is sign-flipped so that the largest-magnitude
    entry of psi_k is positive.
    """
    _check_normalized(jsa)
    if zeta < 0:
        raise InvalidParameterError(f"zeta must be >= 0, got {zeta}")
    u, s, vt = np.linalg.svd(jsa.values)
    psi = u.T.copy()
    phi = vt.copy()
    pivot = np.abs(psi).argmax(axis=1)
    signs = np.where(psi[np.arange(len(s)), pivot] < 0, -1.0, 1.0)
    psi *= signs[:, None]
    phi *= signs[:, None]
    for arr in (s, psi, phi):
        arr.setflags(write=False)
    return SchmidtSpectrum(c=s, psi=psi, phi=phi, zeta=float(zeta), grid=jsa.grid_s)


def schmidt_amplitudes(jsa: JsaMatrix) -> np.ndarray:
    """Singular values only; the fast path used by parameter sweeps."""
    _check_normalized(jsa)
    return np.linalg.svd(jsa.values, compute_uv=False)


def total_squeezing(s: SchmidtSpectrum) -> float:
    return float(np.sum(s.r))


def total_lognegativity_pure(s: SchmidtSpectrum) -> float:
    """Summed log-negativity (bits) of the undisturbed twin-beam supermodes."""
    return float(np.sum(2.0 * s.r) * LOG2E)


def squeezing_db(r):
    return DB_PER_NEPER * np.asarray(r) if np.ndim(r) else DB_PER_NEPER * float(r)


def leading_fraction(s: SchmidtSpectrum, m: int) -> float:
    return leading_fraction_of(s.r, m)


def leading_fraction_of(r: np.ndarray, m: int) -> float:
    if not 1 <= m <= len(r):
        raise InvalidParameterError(f"m must lie in [1, {len(r)}], got {m}")
    total = float(np.sum(r))
    if total == 0.0:
        raise UndefinedFractionError("total squeezing is zero")
    return float(np.sum(r[:m])) / total


def tail_mass(c: np.ndarray, k: int) -> float:
    """Weight ``sum_{j>k} c_j^2`` left outside the leading ``k`` modes."""
    return float(np.sum(np.asarray(c)[k:] ** 2))
