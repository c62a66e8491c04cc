"""Two-mode covariance matrices, pure-loss evolution and log-negativity.

Quadrature order is (Q_a, P_a, Q_b, P_b) and the vacuum covariance matrix is
the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from twinbeam.errors import ContractViolationError, InvalidParameterError, NumericDomainError
from twinbeam.schmidt import SchmidtSpectrum

PHYSICALITY_TOLERANCE = 1e-9

Z = np.diag([1.0, -1.0])
OMEGA = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))
PARTIAL_TRANSPOSE = np.diag([1.0, 1.0, 1.0, -1.0])


def _min_symplectic_eigenvalue(a: float, b: float, c: float) -> float:
    # Symplectic eigenvalues of [[aI, cZ], [cZ, bI]] are
    # (sqrt((a+b)^2 - 4c^2) +- (b - a)) / 2; factored to avoid cancellation.
    c = abs(c)
    disc = (a + b - 2.0 * c) * (a + b + 2.0 * c)
    if disc < 0:
        return -np.inf
    return (np.sqrt(disc) - abs(b - a)) / 2.0


@dataclass(frozen=True)
class TwoModeCM:
    """Covariance matrix ``[[a I, c Z], [c Z, b I]]`` of one twin-beam pair."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            if not np.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")
        if self.a < 1.0 - PHYSICALITY_TOLERANCE or self.b < 1.0 - PHYSICALITY_TOLERANCE:
            raise InvalidParameterError(
                f"diagonal blocks must be >= vacuum level, got a={self.a}, b={self.b}"
            )
        if _min_symplectic_eigenvalue(self.a, self.b, self.c) < 1.0 - PHYSICALITY_TOLERANCE:
            raise InvalidParameterError(f"unphysical covariance matrix {self}")

    @property
    def matrix(self) -> np.ndarray:
        i2 = np.eye(2)
        return np.block([[self.a * i2, self.c * Z], [self.c * Z, self.b * i2]])

    def partial_transpose(self) -> np.ndarray:
        """Full 4x4 matrix with the second mode's momentum sign flipped."""
        return PARTIAL_TRANSPOSE @ self.matrix @ PARTIAL_TRANSPOSE

    @property
    def is_physical(self) -> bool:
        return _min_symplectic_eigenvalue(self.a, self.b, self.c) >= 1.0 - PHYSICALITY_TOLERANCE


@dataclass(frozen=True)
class ChannelParams:
    """Fixed-attenuation channel with transmissivity ``tau``."""

    tau: float

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise InvalidParameterError(f"tau must be in [0,1], got {self.tau}")


def tmsv_cm(r: float) -> TwoModeCM:
    """Two-mode squeezed vacuum with squeezing parameter ``r``."""
    if not np.isfinite(r) or r < 0:
        raise InvalidParameterError(f"squeezing must be finite and >= 0, got {r}")
    a = float(np.cosh(2.0 * r))
    return TwoModeCM(a, a, float(np.sinh(2.0 * r)))


def apply_loss(m: TwoModeCM, ch: ChannelParams) -> TwoModeCM:
    """Send the second mode through the pure-loss channel ``ch``."""
    tau = ch.tau
    return TwoModeCM(m.a, tau * m.b + (1.0 - tau), float(np.sqrt(tau)) * m.c)


def nu_minus(m: TwoModeCM) -> float:
    """Smallest symplectic eigenvalue of the partially transposed CM.

    Evaluates ``sqrt((D - sqrt(D^2 - 4 det M)) / 2)`` with
    ``D = det A + det B - 2 det C``. The discriminant factors exactly as
    ``((a - b)^2 + 4 c^2) (a + b)^2`` and the root is taken in the equivalent
    form ``sqrt(2 det M / (D + sqrt(D^2 - 4 det M)))``; neither step cancels.
    """
    if m.c == 0.0:
        # product state: the transpose leaves the symplectic spectrum {a, b}
        return float(min(m.a, m.b))
    delta = m.a**2 + m.b**2 + 2.0 * m.c**2
    det_m = (m.a * m.b - m.c**2) ** 2
    root_disc = (m.a + m.b) * np.sqrt((m.a - m.b) ** 2 + 4.0 * m.c**2)
    if not (np.isfinite(delta) and np.isfinite(root_disc)) or det_m < 0:
        raise NumericDomainError(f"cannot evaluate symplectic eigenvalue for {m}")
    return float(np.sqrt(2.0 * det_m / (delta + root_disc)))


def log_negativity(m: TwoModeCM) -> float:
    """Logarithmic negativity in bits."""
    return max(0.0, -float(np.log2(nu_minus(m))))


def total_lognegativity_lossy(s: SchmidtSpectrum, ch: ChannelParams) -> float:
    """Sum of per-supermode log-negativities after the signal passes ``ch``."""
    return lognegativity_lossy_from_r(s.r, ch)


def lognegativity_lossy_from_r(r, ch: ChannelParams) -> float:
    total = 0.0
    for rk in r:
        total += log_negativity(apply_loss(tmsv_cm(float(rk)), ch))
    return total


def oracle_symplectic_spectrum(m) -> tuple[float, float]:
    """Symplectic eigenvalues (larger, smaller) of a 4x4 CM by brute force.

    Uses the Hermitian matrix ``sqrt(M) (i Omega) sqrt(M)``, which is similar
    to ``i Omega M`` and has eigenvalues ``+-nu_1, +-nu_2``.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (4, 4):
        raise ContractViolationError(f"expected a 4x4 matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.T)) > 1e-12 * max(1.0, np.max(np.abs(m))):
        raise ContractViolationError("covariance matrix is not symmetric")
    m = (m + m.T) / 2.0
    w, v = np.linalg.eigh(m)
    if w.min() <= 0:
        raise ContractViolationError("covariance matrix is not positive definite")
    root = (v * np.sqrt(w)) @ v.T
    h = root @ (1j * OMEGA) @ root
    ev = np.sort(np.abs(np.linalg.eigvalsh(h)))
    return float(ev[3]), float(ev[0])
