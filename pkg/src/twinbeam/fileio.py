"""File formats: JSA dumps, spectrum JSON, supermode and sweep CSV, LO import."""

from __future__ import annotations

import csv
import json
import struct
import warnings
from pathlib import Path

import numpy as np

from twinbeam import __version__
from twinbeam.errors import IncompatibleGridError, InvalidParameterError
from twinbeam.grid import FrequencyGrid
from twinbeam.homodyne import LoPulse
from twinbeam.jsa import JsaMatrix
from twinbeam.schmidt import SchmidtSpectrum

JSA_MAGIC = b"JSA1"
_JSA_HEADER = struct.Struct("<4sQdd")

SWEEP_COLUMNS = (
    "sigma_p_hz", "tau", "length_scale", "r_tot", "r_g",
    "e_tot_bits", "leading20_fraction", "unit_convention",
)
SPECTRUM_COLUMNS = ("sigma_p_hz", "length_scale", "k", "r_k", "unit_convention")
LO_RENORM_TOLERANCE = 1e-6


def fmt(x) -> str:
    """17 significant digits: lossless for float64."""
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _metadata_lines(metadata: dict | None) -> list[str]:
    meta = {"artifact_version": __version__}
    meta.update(metadata or {})
    return [f"# {k} = {v}" for k, v in meta.items()]


def _read_metadata(lines) -> dict[str, str]:
    meta = {}
    for line in lines:
        if line.startswith("#") and "=" in line:
            k, v = line[1:].split("=", 1)
            meta[k.strip()] = v.strip()
    return meta


def write_jsa_csv(jsa: JsaMatrix, path) -> Path:
    path = Path(path)
    meta = {
        "omega_min_s": fmt(jsa.grid_s.omega_min), "omega_max_s": fmt(jsa.grid_s.omega_max),
        "n_s": jsa.grid_s.n, "omega_min_i": fmt(jsa.grid_i.omega_min),
        "omega_max_i": fmt(jsa.grid_i.omega_max), "n_i": jsa.grid_i.n,
        "normalized": str(jsa.normalized).lower(),
    }
    with path.open("w", newline="") as fh:
        fh.write("\n".join(_metadata_lines(meta)) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        for row in jsa.values:
            writer.writerow([fmt(v) for v in row])
    return path


def read_jsa_csv(path) -> JsaMatrix:
    lines = Path(path).read_text().splitlines()
    meta = _read_metadata(lines)
    rows = [line for line in lines if line and not line.startswith("#")]
    values = np.array([[float(v) for v in row.split(",")] for row in rows])
    grid_s = FrequencyGrid(float(meta["omega_min_s"]), float(meta["omega_max_s"]), int(meta["n_s"]))
    grid_i = FrequencyGrid(float(meta["omega_min_i"]), float(meta["omega_max_i"]), int(meta["n_i"]))
    return JsaMatrix(grid_s, grid_i, values, normalized=meta.get("normalized") == "true")


def write_jsa_binary(jsa: JsaMatrix, path) -> Path:
    """``JSA1`` | n (u64) | omega_min, omega_max (f64) | n*n f64, all little-endian."""
    if jsa.grid_s != jsa.grid_i:
        raise InvalidParameterError("binary JSA format requires identical signal and idler grids")
    path = Path(path)
    g = jsa.grid_s
    with path.open("wb") as fh:
        fh.write(_JSA_HEADER.pack(JSA_MAGIC, g.n, g.omega_min, g.omega_max))
        fh.write(np.ascontiguousarray(jsa.values, dtype="<f8").tobytes())
    return path


def read_jsa_binary(path, normalized: bool = True) -> JsaMatrix:
    data = Path(path).read_bytes()
    magic, n, lo, hi = _JSA_HEADER.unpack_from(data)
    if magic != JSA_MAGIC:
        raise InvalidParameterError(f"bad magic {magic!r}, expected {JSA_MAGIC!r}")
    body = data[_JSA_HEADER.size:]
    if len(body) != 8 * n * n:
        raise InvalidParameterError(f"expected {n * n} values, found {len(body) // 8}")
    values = np.frombuffer(body, dtype="<f8").reshape(n, n)
    grid = FrequencyGrid(lo, hi, n)
    return JsaMatrix(grid, grid, values, normalized=normalized)


def spectrum_to_dict(s: SchmidtSpectrum, unit_convention: str) -> dict:
    return {
        "c": [float(x) for x in s.c],
        "r": [float(x) for x in s.r],
        "zeta": s.zeta,
        "grid": s.grid.as_dict(),
        "unit_convention": unit_convention,
    }


def write_spectrum_json(s: SchmidtSpectrum, path, unit_convention: str) -> Path:
    path = Path(path)
    path.write_text(json.dumps(spectrum_to_dict(s, unit_convention), indent=1) + "\n")
    return path


def write_supermodes_csv(s: SchmidtSpectrum, path, modes: int = 20, beam: str = "signal") -> Path:
    """First column is the bin-center frequency, then one column per supermode."""
    path = Path(path)
    vectors = s.psi if beam == "signal" else s.phi
    modes = min(modes, s.n_modes)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["frequency_hz"] + [f"{beam}_{k + 1}" for k in range(modes)])
        for i, freq in enumerate(s.grid.centers):
            writer.writerow([fmt(freq)] + [fmt(vectors[k, i]) for k in range(modes)])
    return path


def read_lo_csv(path, grid: FrequencyGrid, label: str = "custom") -> LoPulse:
    """Load an LO from ``frequency_hz,amplitude`` rows sampled at ``grid`` centers.

    Inputs whose norm is off by more than 1e-6 are renormalized with a warning.
    """
    with Path(path).open(newline="") as fh:
        rows = [r for r in csv.reader(line for line in fh if not line.startswith("#")) if r]
    if rows and rows[0][0].strip() == "frequency_hz":
        rows = rows[1:]
    freqs = np.array([float(r[0]) for r in rows])
    amps = np.array([float(r[1]) for r in rows])
    if len(freqs) != grid.n or not np.allclose(freqs, grid.centers, rtol=0, atol=1e-6 * grid.bin_width):
        raise IncompatibleGridError(f"LO file {path} is not sampled on the requested grid")
    norm = np.linalg.norm(amps)
    if abs(norm - 1.0) > LO_RENORM_TOLERANCE:
        warnings.warn(f"LO file {path} has norm {norm:.6g}; renormalizing", stacklevel=2)
    return LoPulse.normalized(amps, grid, label)


def write_lo_csv(pulse: LoPulse, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["frequency_hz", "amplitude"])
        for f, a in zip(pulse.grid.centers, pulse.amplitudes):
            writer.writerow([fmt(f), fmt(a)])
    return path


def _row_values(row, columns):
    names = {
        "sigma_p_hz": "sigma_p", "e_tot_bits": "e_tot",
    }
    return [fmt(getattr(row, names.get(c, c))) for c in columns]


def write_rows_csv(rows, path, metadata: dict | None = None) -> Path:
    """Write sweep or spectrum rows with ``#`` metadata lines before the header."""
    path = Path(path)
    columns = SPECTRUM_COLUMNS if rows and hasattr(rows[0], "r_k") else SWEEP_COLUMNS
    with path.open("w", newline="") as fh:
        fh.write("\n".join(_metadata_lines(metadata)) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(_row_values(row, columns))
    return path


def write_rows_json(rows, path, metadata: dict | None = None) -> Path:
    path = Path(path)
    columns = SPECTRUM_COLUMNS if rows and hasattr(rows[0], "r_k") else SWEEP_COLUMNS
    records = []
    for row in rows:
        rec = {}
        for c, v in zip(columns, _row_values(row, columns)):
            rec[c] = v if c == "unit_convention" else (int(v) if c == "k" else float(v))
        records.append(rec)
    meta = {"artifact_version": __version__, **(metadata or {})}
    path.write_text(json.dumps({"metadata": meta, "rows": records}, indent=1) + "\n")
    return path


def read_rows_csv(path) -> tuple[dict[str, str], list[dict]]:
    """Metadata and typed records from a file written by ``write_rows_csv``."""
    lines = Path(path).read_text().splitlines()
    meta = _read_metadata(lines)
    body = [line for line in lines if not line.startswith("#")]
    records = []
    for rec in csv.DictReader(body):
        records.append({
            k: (v if k == "unit_convention" else (int(v) if k == "k" else float(v)))
            for k, v in rec.items()
        })
    return meta, records

