"""Selection and freezing of the phase-matching unit convention.

The group-delay coefficients are quoted in ps while the pump parameters are in
Hz, so the dimensionless phase-matching argument is ambiguous. Each candidate
convention is evaluated at the reference source parameters and the one that
reproduces ``r_tot ~ 6`` with about half the squeezing in the first 20 modes
is frozen in ``calibration.json``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path

from twinbeam.grid import UnitConvention, all_conventions, build_default_grid
from twinbeam.jsa import PdcModel, build_jsa
from twinbeam.schmidt import leading_fraction_of, schmidt_amplitudes

TARGET_R_TOT = 6.0
R_TOT_REL_TOL = 0.15
TARGET_LEADING20 = 0.50
LEADING20_ABS_TOL = 0.08

CALIBRATION_FILE = "calibration.json"


@dataclass(frozen=True)
class CandidateResult:
    convention: str
    r_tot: float
    leading20_fraction: float

    @property
    def passes(self) -> bool:
        return (
            abs(self.r_tot - TARGET_R_TOT) <= R_TOT_REL_TOL * TARGET_R_TOT
            and abs(self.leading20_fraction - TARGET_LEADING20) <= LEADING20_ABS_TOL
        )


def evaluate_convention(units: UnitConvention, n: int = 1000) -> CandidateResult:
    model = PdcModel.paper_defaults(units=units)
    grid = build_default_grid(model.omega_p, model.sigma_p, n)
    r = model.zeta * schmidt_amplitudes(build_jsa(model, grid))
    return CandidateResult(units.tag, float(r.sum()), leading_fraction_of(r, 20))


def calibrate(n: int = 1000) -> dict:
    """Evaluate every convention and pick the passing one closest to the target."""
    candidates = [evaluate_convention(u, n) for u in all_conventions()]
    passing = [c for c in candidates if c.passes]
    chosen = min(passing, key=lambda c: abs(c.r_tot - TARGET_R_TOT)) if passing else None
    return {
        "selected": chosen.convention if chosen else None,
        "n": n,
        "candidates": [dict(asdict(c), passes=c.passes) for c in candidates],
    }


def write_calibration(result: dict, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(result, indent=2) + "\n")
    return path


def load_calibration(path=None) -> dict:
    if path is None:
        text = resources.files("twinbeam").joinpath(CALIBRATION_FILE).read_text()
    else:
        text = Path(path).read_text()
    return json.loads(text)


def calibrated_convention(path=None) -> UnitConvention:
    """Frozen convention used by default in experiments and the CLI."""
    selected = load_calibration(path)["selected"]
    if selected is None:
        raise RuntimeError("calibration did not select a unit convention")
    return UnitConvention.from_tag(selected)
