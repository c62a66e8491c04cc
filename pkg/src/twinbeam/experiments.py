"""Parameter sweeps over pump bandwidth, crystal length and channel loss."""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from twinbeam.calibration import calibrated_convention
from twinbeam.channel import ChannelParams, lognegativity_lossy_from_r
from twinbeam.errors import (
    DegenerateKernelError,
    DegeneratePulseError,
    InvalidParameterError,
    NoInteriorPeakError,
)
from twinbeam.grid import FrequencyGrid, build_custom_grid, build_default_grid
from twinbeam.homodyne import captured_squeezing, unshaped_lo
from twinbeam.jsa import PdcModel, build_jsa
from twinbeam.schmidt import leading_fraction_of, schmidt_amplitudes

KINDS = ("supermode-spectrum", "rtot-vs-sigma", "rg-vs-sigma", "negativity-surface")

DEFAULT_SIGMA_MIN = 0.5e12
DEFAULT_SIGMA_MAX = 10e12
DEFAULT_SIGMA_COUNT = 40
DEFAULT_LENGTH_SCALES = (0.5, 1.0, 2.0)
DEFAULT_PEAK_TOLERANCE = 1e10


def default_sigma_values(
    lo: float = DEFAULT_SIGMA_MIN, hi: float = DEFAULT_SIGMA_MAX, count: int = DEFAULT_SIGMA_COUNT
) -> tuple[float, ...]:
    return tuple(float(s) for s in np.geomspace(lo, hi, count))


def _default_model() -> PdcModel:
    return PdcModel.paper_defaults(units=calibrated_convention())


@dataclass(frozen=True)
class SweepSpec:
    """Axes and fixed parameters of one sweep.

    ``grid`` pins a custom frequency grid; when ``None`` every point rebuilds
    the default ``[0, 2 omega_p + 3 sigma_p]`` grid with ``n`` bins.
    """

    kind: str
    sigma_values: tuple[float, ...] = field(default_factory=default_sigma_values)
    tau_values: tuple[float, ...] = (1.0,)
    length_scales: tuple[float, ...] = DEFAULT_LENGTH_SCALES
    base_model: PdcModel = field(default_factory=_default_model)
    grid: FrequencyGrid | None = None
    n: int = 1000
    mode_count_display: int = 20
    lo_sigma: float | None = None
    workers: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameterError(f"unknown sweep kind {self.kind!r}; expected one of {KINDS}")
        for name in ("sigma_values", "tau_values", "length_scales"):
            values = tuple(float(v) for v in getattr(self, name))
            if not values:
                raise InvalidParameterError(f"{name} must not be empty")
            object.__setattr__(self, name, values)
        if any(not s > 0 for s in self.sigma_values):
            raise InvalidParameterError("all sigma values must be > 0")
        if any(not 0.0 <= t <= 1.0 for t in self.tau_values):
            raise InvalidParameterError("tau must be in [0,1]")
        if any(not L > 0 for L in self.length_scales):
            raise InvalidParameterError("length scales must be > 0")
        if self.mode_count_display < 1:
            raise InvalidParameterError("mode_count_display must be >= 1")

    @property
    def grid_policy(self) -> str:
        return "default-paper" if self.grid is None else "custom"


@dataclass(frozen=True)
class SweepRow:
    sigma_p: float
    tau: float
    length_scale: float
    r_tot: float
    r_g: float
    e_tot: float
    leading20_fraction: float
    unit_convention: str
    grid: FrequencyGrid | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SpectrumRow:
    sigma_p: float
    length_scale: float
    k: int
    r_k: float
    unit_convention: str


@dataclass(frozen=True)
class PointResult:
    """Everything computed for one (sigma_p, length_scale) source setting."""

    sigma_p: float
    length_scale: float
    r: np.ndarray
    r_tot: float
    r_g: float
    leading20_fraction: float
    grid: FrequencyGrid


def point_grid(model: PdcModel, n: int, grid: FrequencyGrid | None = None) -> FrequencyGrid:
    if grid is not None:
        return grid
    return build_default_grid(model.omega_p, model.sigma_p, n)


def evaluate_point(
    model: PdcModel, n: int = 1000, grid: FrequencyGrid | None = None, lo_sigma: float | None = None
) -> PointResult:
    """Schmidt amplitudes, total squeezing and unshaped-LO squeezing for ``model``."""
    g = point_grid(model, n, grid)
    try:
        jsa = build_jsa(model, g)
        lo = unshaped_lo(model, g, lo_sigma)
    except (DegenerateKernelError, DegeneratePulseError) as exc:
        raise type(exc)(f"sigma_p={model.sigma_p:g} Hz: {exc}") from None
    r = model.zeta * schmidt_amplitudes(jsa)
    r_tot = float(np.sum(r))
    frac = leading_fraction_of(r, min(20, len(r))) if r_tot > 0 else 0.0
    r_g = captured_squeezing(lo, lo, jsa, model.zeta)
    return PointResult(model.sigma_p, model.length_scale, r, r_tot, r_g, frac, g)


def _evaluate(args) -> PointResult:
    model, n, grid, lo_sigma = args
    return evaluate_point(model, n, grid, lo_sigma)


def _map(func, items, workers: int):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def evaluate_points(spec: SweepSpec) -> list[PointResult]:
    """One result per (sigma_p, length_scale), ordered by sigma then length."""
    jobs = [
        (spec.base_model.with_(sigma_p=s, length_scale=L), spec.n, spec.grid, spec.lo_sigma)
        for s in sorted(spec.sigma_values)
        for L in sorted(spec.length_scales)
    ]
    return _map(_evaluate, jobs, spec.workers)


def _row(p: PointResult, tau: float, tag: str) -> SweepRow:
    e_tot = lognegativity_lossy_from_r(p.r, ChannelParams(tau))
    return SweepRow(p.sigma_p, tau, p.length_scale, p.r_tot, p.r_g, e_tot,
                    p.leading20_fraction, tag, p.grid)


def _sorted(rows: list[SweepRow]) -> list[SweepRow]:
    return sorted(rows, key=lambda row: (row.sigma_p, row.tau, row.length_scale))


def _require(spec: SweepSpec, kind: str):
    if spec.kind != kind:
        raise InvalidParameterError(f"expected a {kind} spec, got {spec.kind}")


def run_supermode_spectrum(spec: SweepSpec) -> list[SpectrumRow]:
    _require(spec, "supermode-spectrum")
    tag = spec.base_model.units.tag
    rows = []
    for p in evaluate_points(spec):
        m = min(spec.mode_count_display, len(p.r))
        rows.extend(
            SpectrumRow(p.sigma_p, p.length_scale, k + 1, float(p.r[k]), tag) for k in range(m)
        )
    return rows


def run_rtot_sweep(spec: SweepSpec) -> list[SweepRow]:
    _require(spec, "rtot-vs-sigma")
    tag = spec.base_model.units.tag
    return _sorted([_row(p, 1.0, tag) for p in evaluate_points(spec)])


def run_rg_sweep(spec: SweepSpec) -> list[SweepRow]:
    _require(spec, "rg-vs-sigma")
    tag = spec.base_model.units.tag
    return _sorted([_row(p, 1.0, tag) for p in evaluate_points(spec)])


def run_negativity_surface(spec: SweepSpec) -> list[SweepRow]:
    _require(spec, "negativity-surface")
    tag = spec.base_model.units.tag
    points = evaluate_points(spec)
    return _sorted([_row(p, tau, tag) for p in points for tau in spec.tau_values])


def run_sweep(spec: SweepSpec) -> list:
    runner = {
        "supermode-spectrum": run_supermode_spectrum,
        "rtot-vs-sigma": run_rtot_sweep,
        "rg-vs-sigma": run_rg_sweep,
        "negativity-surface": run_negativity_surface,
    }[spec.kind]
    return runner(spec)


def fit_decay_rate(r) -> float:
    """Rate ``b`` of the least-squares fit ``log r_k ~ a - b k``."""
    r = np.asarray(r, dtype=float)
    if len(r) < 2 or np.any(r <= 0):
        raise InvalidParameterError("decay fit needs at least two positive amplitudes")
    k = np.arange(1, len(r) + 1)
    slope, _ = np.polyfit(k, np.log(r), 1)
    return float(-slope)


def golden_peak(objective, samples, tolerance: float) -> tuple[float, float]:
    """Maximize ``objective`` near the best of ``samples`` by golden-section search.

    Raises:
        NoInteriorPeakError: if the best sample is at either end of ``samples``.
    """
    xs = np.sort(np.asarray(samples, dtype=float))
    if len(xs) < 3:
        raise InvalidParameterError("peak search needs at least three samples")
    ys = np.array([objective(x) for x in xs])
    j = int(np.argmax(ys))
    if j == 0 or j == len(xs) - 1:
        raise NoInteriorPeakError(
            f"maximum at boundary sample {xs[j]:g}; widen the sampled interval"
        )
    a, b, c = xs[j - 1], xs[j], xs[j + 1]
    if tolerance >= c - a:
        warnings.warn(
            f"tolerance {tolerance:g} exceeds bracket width {c - a:g}; returning best sample",
            stacklevel=2,
        )
        return float(b), float(ys[j])
    res = minimize_scalar(
        lambda x: -objective(x),
        bracket=(a, b, c),
        method="golden",
        options={"xtol": tolerance / (2.0 * b)},
    )
    x_star, y_star = float(res.x), float(-res.fun)
    if y_star < ys[j]:
        return float(b), float(ys[j])
    return x_star, y_star


def find_rg_peak(
    spec: SweepSpec, tolerance: float = DEFAULT_PEAK_TOLERANCE, length_scale: float | None = None
) -> tuple[float, float]:
    """Pump bandwidth maximizing the unshaped-LO squeezing, and that maximum."""
    _require(spec, "rg-vs-sigma")
    if length_scale is None:
        if len(spec.length_scales) != 1:
            raise InvalidParameterError("spec has several length scales; pass length_scale")
        length_scale = spec.length_scales[0]
    base = spec.base_model.with_(length_scale=length_scale)

    def r_g(sigma):
        model = base.with_(sigma_p=float(sigma))
        g = point_grid(model, spec.n, spec.grid)
        jsa = build_jsa(model, g)
        lo = unshaped_lo(model, g, spec.lo_sigma)
        return captured_squeezing(lo, lo, jsa, model.zeta)

    return golden_peak(r_g, spec.sigma_values, tolerance)


def refinement_change(model: PdcModel, omega_min: float, omega_max: float, n: int, k: int = 10) -> float:
    """Largest relative change of the leading ``k`` amplitudes when ``n`` doubles."""
    coarse = schmidt_amplitudes(build_jsa(model, build_custom_grid(omega_min, omega_max, n)))[:k]
    fine = schmidt_amplitudes(build_jsa(model, build_custom_grid(omega_min, omega_max, 2 * n)))[:k]
    return float(np.max(np.abs(coarse - fine) / fine))
