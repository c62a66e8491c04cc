"""Flat ``key = value`` run configuration.

Every key can also be given on the command line as ``--key value``.
"""

from __future__ import annotations

import difflib
import hashlib
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from twinbeam.calibration import calibrated_convention
from twinbeam.errors import ConfigError, InvalidParameterError
from twinbeam.experiments import (
    DEFAULT_LENGTH_SCALES,
    DEFAULT_PEAK_TOLERANCE,
    DEFAULT_SIGMA_COUNT,
    DEFAULT_SIGMA_MAX,
    DEFAULT_SIGMA_MIN,
    KINDS,
    SweepSpec,
    default_sigma_values,
)
from twinbeam.grid import FrequencyGrid, UnitConvention, build_custom_grid, build_default_grid
from twinbeam.jsa import (
    PAPER_FWHM_HZ,
    PAPER_LAMBDA_P_NM,
    PdcModel,
    fwhm_to_sigma,
    wavelength_to_frequency,
)

DEFAULT_SURFACE_TAUS = 10
OUTPUT_FORMATS = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    # source; exactly one of each pair is set after parsing
    lambda_p_nm: float | None = None
    omega_p_hz: float | None = None
    fwhm_hz: float | None = None
    sigma_p_hz: float | None = None
    k_s_ps: float = 0.061
    k_i_ps: float = 0.213
    length_scale: float = 1.0
    zeta: float = 1.0
    # provenance only, never used in a computation
    repetition_rate_hz: float | None = None
    pulse_duration_fs: float | None = None
    # grid
    n: int = 1000
    omega_min_hz: float | None = None
    omega_max_hz: float | None = None
    phase_matching_angular: bool | None = None
    sinc_normalized: bool | None = None
    lo_sigma_hz: float | None = None
    # channel
    tau: float = 1.0
    # sweeps
    sigma_values_hz: tuple[float, ...] | None = None
    sigma_min_hz: float = DEFAULT_SIGMA_MIN
    sigma_max_hz: float = DEFAULT_SIGMA_MAX
    sigma_count: int = DEFAULT_SIGMA_COUNT
    tau_values: tuple[float, ...] | None = None
    length_scales: tuple[float, ...] = DEFAULT_LENGTH_SCALES
    mode_count_display: int = 20
    peak_tolerance_hz: float = DEFAULT_PEAK_TOLERANCE
    workers: int = 1
    # output
    output_dir: str = "."
    output_format: str = "csv"
    export_supermodes: int = 0
    export_jsa: bool = False
    check_convergence: bool = False

    @property
    def units(self) -> UnitConvention:
        return UnitConvention(bool(self.phase_matching_angular), bool(self.sinc_normalized))

    def model(self) -> PdcModel:
        omega_p = self.omega_p_hz if self.omega_p_hz is not None else wavelength_to_frequency(self.lambda_p_nm)
        sigma_p = self.sigma_p_hz if self.sigma_p_hz is not None else fwhm_to_sigma(self.fwhm_hz)
        return PdcModel(
            omega_p=omega_p,
            sigma_p=sigma_p,
            k_s=self.k_s_ps * 1e-12,
            k_i=self.k_i_ps * 1e-12,
            length_scale=self.length_scale,
            zeta=self.zeta,
            units=self.units,
        )

    def custom_grid(self) -> FrequencyGrid | None:
        if self.omega_min_hz is None and self.omega_max_hz is None:
            return None
        return build_custom_grid(self.omega_min_hz, self.omega_max_hz, self.n)

    def grid(self) -> FrequencyGrid:
        custom = self.custom_grid()
        if custom is not None:
            return custom
        model = self.model()
        return build_default_grid(model.omega_p, model.sigma_p, self.n)

    def sweep_spec(self, kind: str) -> SweepSpec:
        if self.sigma_values_hz is not None:
            sigmas = self.sigma_values_hz
        else:
            sigmas = default_sigma_values(self.sigma_min_hz, self.sigma_max_hz, self.sigma_count)
        if self.tau_values is not None:
            taus = self.tau_values
        elif kind == "negativity-surface":
            taus = tuple(float(t) for t in np.linspace(0.0, 1.0, DEFAULT_SURFACE_TAUS))
        else:
            taus = (1.0,)
        return SweepSpec(
            kind=kind,
            sigma_values=sigmas,
            tau_values=taus,
            length_scales=self.length_scales,
            base_model=self.model(),
            grid=self.custom_grid(),
            n=self.n,
            mode_count_display=self.mode_count_display,
            lo_sigma=self.lo_sigma_hz,
            workers=self.workers,
        )

    def digest(self) -> str:
        return hashlib.sha256(write_config(self).encode()).hexdigest()[:16]


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.replace(",", " ").split())


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    return str(value)


_PARSERS = {}
for _f in fields(RunConfig):
    _t = str(_f.type)
    if _t.startswith("bool"):
        _PARSERS[_f.name] = _parse_bool
    elif _t.startswith("int"):
        _PARSERS[_f.name] = int
    elif _t.startswith("tuple"):
        _PARSERS[_f.name] = _parse_floats
    elif _t.startswith("str"):
        _PARSERS[_f.name] = str
    else:
        _PARSERS[_f.name] = float

CONFIG_KEYS = tuple(_PARSERS)


def _unknown_key(key: str) -> ConfigError:
    near = difflib.get_close_matches(key, CONFIG_KEYS, n=1)
    hint = f"; did you mean {near[0]!r}?" if near else ""
    return ConfigError(f"unknown config key {key!r}{hint}")


def read_pairs(text: str) -> dict[str, str]:
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        pairs[key] = value
    return pairs


def parse_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Load, merge overrides into, fill and validate a configuration.

    Args:
        path: optional config file; ``None`` starts from the defaults.
        overrides: ``key -> value`` pairs (strings or already-typed values)
            applied on top of the file.

    Raises:
        ConfigError: unknown keys, mutually exclusive keys, bad values.
    """
    raw = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        raw.update(read_pairs(text))
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})

    values = {}
    for key, value in raw.items():
        if key not in _PARSERS:
            raise _unknown_key(key)
        if isinstance(value, str):
            try:
                value = _PARSERS[key](value)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {exc}") from None
        values[key] = value
    return validate(fill_defaults(RunConfig(**values)))


def fill_defaults(cfg: RunConfig) -> RunConfig:
    for a, b in (("lambda_p_nm", "omega_p_hz"), ("fwhm_hz", "sigma_p_hz")):
        if getattr(cfg, a) is not None and getattr(cfg, b) is not None:
            raise ConfigError(f"{a} and {b} are mutually exclusive")
    changes = {}
    if cfg.lambda_p_nm is None and cfg.omega_p_hz is None:
        changes["lambda_p_nm"] = PAPER_LAMBDA_P_NM
    if cfg.fwhm_hz is None and cfg.sigma_p_hz is None:
        changes["fwhm_hz"] = PAPER_FWHM_HZ
    if cfg.phase_matching_angular is None or cfg.sinc_normalized is None:
        frozen = calibrated_convention()
        if cfg.phase_matching_angular is None:
            changes["phase_matching_angular"] = frozen.phase_matching_angular
        if cfg.sinc_normalized is None:
            changes["sinc_normalized"] = frozen.sinc_normalized
    return replace(cfg, **changes)


def validate(cfg: RunConfig) -> RunConfig:
    if not 0.0 <= cfg.tau <= 1.0:
        raise ConfigError("tau must be in [0,1]")
    if cfg.tau_values is not None and any(not 0.0 <= t <= 1.0 for t in cfg.tau_values):
        raise ConfigError("tau_values must be in [0,1]")
    if cfg.n < 2:
        raise ConfigError(f"n must be >= 2, got {cfg.n}")
    if (cfg.omega_min_hz is None) != (cfg.omega_max_hz is None):
        raise ConfigError("omega_min_hz and omega_max_hz must be given together")
    if cfg.sigma_count < 1:
        raise ConfigError("sigma_count must be >= 1")
    if cfg.workers < 1:
        raise ConfigError("workers must be >= 1")
    if cfg.mode_count_display < 1:
        raise ConfigError("mode_count_display must be >= 1")
    if cfg.export_supermodes < 0:
        raise ConfigError("export_supermodes must be >= 0")
    if cfg.output_format not in OUTPUT_FORMATS:
        raise ConfigError(f"output_format must be one of {OUTPUT_FORMATS}")
    if cfg.peak_tolerance_hz <= 0:
        raise ConfigError("peak_tolerance_hz must be > 0")
    if cfg.lo_sigma_hz is not None and cfg.lo_sigma_hz <= 0:
        raise ConfigError("lo_sigma_hz must be > 0")
    if cfg.lambda_p_nm is not None and not cfg.lambda_p_nm > 0:
        raise ConfigError("lambda_p_nm must be > 0")
    if cfg.fwhm_hz is not None and not cfg.fwhm_hz > 0:
        raise ConfigError("fwhm_hz must be > 0")
    try:
        cfg.model()
        cfg.custom_grid()
        if not 0 < cfg.sigma_min_hz <= cfg.sigma_max_hz:
            raise InvalidParameterError("need 0 < sigma_min_hz <= sigma_max_hz")
        cfg.sweep_spec("rtot-vs-sigma")
    except InvalidParameterError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def write_config(cfg: RunConfig) -> str:
    """Serialize every set key; ``parse_config`` of the result reproduces ``cfg``."""
    lines = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if value is not None:
            lines.append(f"{f.name} = {_format(value)}")
    return "\n".join(lines) + "\n"


__all__ = ["RunConfig", "parse_config", "write_config", "CONFIG_KEYS", "KINDS"]
