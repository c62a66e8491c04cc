"""Command-line entry point.

Exit codes: 0 success, 1 computation or I/O failure, 2 configuration/usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from twinbeam import __version__
from twinbeam.calibration import calibrate, write_calibration
from twinbeam.channel import (
    ChannelParams,
    apply_loss,
    log_negativity,
    nu_minus,
    oracle_symplectic_spectrum,
    tmsv_cm,
)
from twinbeam.config import CONFIG_KEYS, RunConfig, parse_config
from twinbeam.errors import ConfigError, InvalidParameterError, NoInteriorPeakError, TwinbeamError
from twinbeam.experiments import KINDS, find_rg_peak, refinement_change, run_sweep
from twinbeam.fileio import (
    write_jsa_binary,
    write_jsa_csv,
    write_rows_csv,
    write_rows_json,
    write_spectrum_json,
    write_supermodes_csv,
)
from twinbeam.jsa import build_jsa
from twinbeam.schmidt import (
    decompose,
    leading_fraction,
    tail_mass,
    total_lognegativity_pure,
    total_squeezing,
)

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_config_options(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat key = value config file")
    group = p.add_argument_group("config overrides")
    for key in CONFIG_KEYS:
        flags = [f"--{key}"]
        if "_" in key:
            flags.append(f"--{key.replace('_', '-')}")
        group.add_argument(*flags, dest=key, metavar="VALUE", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twinbeam", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _add_config_options(sub.add_parser("decompose", help="Schmidt decomposition at one setting"))

    sweep = sub.add_parser("sweep", help="parameter sweep written as a table")
    sweep.add_argument("--kind", required=True, choices=KINDS)
    _add_config_options(sweep)

    _add_config_options(sub.add_parser("peak", help="pump bandwidth maximizing unshaped-LO squeezing"))

    neg = sub.add_parser("negativity", help="log-negativity of one lossy twin-beam mode")
    neg.add_argument("--r", dest="r_value", type=float, required=True)
    _add_config_options(neg)

    cal = sub.add_parser("calibrate", help="re-run the unit-convention calibration")
    cal.add_argument("--n", type=int, default=1000)
    cal.add_argument("--output", help="write the calibration JSON here")
    return parser


def _config_from_args(args) -> RunConfig:
    overrides = {key: getattr(args, key) for key in CONFIG_KEYS if getattr(args, key, None) is not None}
    return parse_config(args.config, overrides)


def _output_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from None
    return out


def _metadata(cfg: RunConfig, **extra) -> dict:
    meta = {"config_sha256": cfg.digest(), "unit_convention": cfg.units.tag}
    if cfg.repetition_rate_hz is not None:
        meta["repetition_rate_hz"] = cfg.repetition_rate_hz
    if cfg.pulse_duration_fs is not None:
        meta["pulse_duration_fs"] = cfg.pulse_duration_fs
    meta.update(extra)
    return meta


def cmd_decompose(cfg: RunConfig) -> dict:
    model = cfg.model()
    grid = cfg.grid()
    jsa = build_jsa(model, grid)
    spectrum = decompose(jsa, model.zeta)
    out = _output_dir(cfg)
    files = [str(write_spectrum_json(spectrum, out / "spectrum.json", cfg.units.tag))]
    if cfg.export_supermodes:
        files.append(str(write_supermodes_csv(spectrum, out / "supermodes_signal.csv", cfg.export_supermodes)))
        files.append(str(write_supermodes_csv(spectrum, out / "supermodes_idler.csv",
                                              cfg.export_supermodes, beam="idler")))
    if cfg.export_jsa:
        files.append(str(write_jsa_csv(jsa, out / "jsa.csv")))
        files.append(str(write_jsa_binary(jsa, out / "jsa.bin")))
    r_tot = total_squeezing(spectrum)
    summary = {
        "r_tot": r_tot,
        "e_tot_pure_bits": total_lognegativity_pure(spectrum),
        "leading20_fraction": leading_fraction(spectrum, min(20, spectrum.n_modes)) if r_tot > 0 else None,
        "tail_mass_20": tail_mass(spectrum.c, 20),
        "c_1": float(spectrum.c[0]),
        "n": grid.n,
        "sigma_p_hz": model.sigma_p,
        "grid": grid.as_dict(),
        "unit_convention": cfg.units.tag,
        "files": files,
    }
    if cfg.check_convergence:
        summary["refinement_change_10"] = refinement_change(model, grid.omega_min, grid.omega_max, grid.n)
    return summary


def cmd_sweep(cfg: RunConfig, kind: str) -> dict:
    spec = cfg.sweep_spec(kind)
    rows = run_sweep(spec)
    out = _output_dir(cfg)
    meta = _metadata(cfg, kind=kind, grid_policy=spec.grid_policy)
    if cfg.output_format == "json":
        path = write_rows_json(rows, out / f"sweep_{kind}.json", meta)
    else:
        path = write_rows_csv(rows, out / f"sweep_{kind}.csv", meta)
    summary = {"kind": kind, "rows": len(rows), "path": str(path), "unit_convention": cfg.units.tag}
    if kind == "rg-vs-sigma":
        best = max(rows, key=lambda row: row.r_g)
        summary["max_row"] = {"sigma_p_hz": best.sigma_p, "length_scale": best.length_scale, "r_g": best.r_g}
    return summary


def cmd_peak(cfg: RunConfig) -> dict:
    spec = cfg.sweep_spec("rg-vs-sigma")
    peaks = []
    for L in spec.length_scales:
        try:
            sigma_star, rg_star = find_rg_peak(spec, cfg.peak_tolerance_hz, length_scale=L)
        except NoInteriorPeakError as exc:
            peaks.append({"length_scale": L, "error": str(exc)})
            continue
        peaks.append({"length_scale": L, "sigma_star_hz": sigma_star, "r_g_star": rg_star})
    if all("error" in p for p in peaks):
        raise NoInteriorPeakError("; ".join(f"length_scale={p['length_scale']}: {p['error']}" for p in peaks))
    return {"peaks": peaks, "tolerance_hz": cfg.peak_tolerance_hz, "unit_convention": cfg.units.tag}


def cmd_negativity(r: float, cfg: RunConfig) -> dict:
    m = apply_loss(tmsv_cm(r), ChannelParams(cfg.tau))
    return {
        "r": r,
        "tau": cfg.tau,
        "cm": {"a": m.a, "b": m.b, "c": m.c},
        "nu_minus": nu_minus(m),
        "nu_minus_oracle": oracle_symplectic_spectrum(m.partial_transpose())[1],
        "log_negativity_bits": log_negativity(m),
    }


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "calibrate":
            result = calibrate(args.n)
            if args.output:
                write_calibration(result, args.output)
            print(json.dumps(result))
            return EXIT_OK if result["selected"] else EXIT_RUNTIME
        cfg = _config_from_args(args)
    except (ConfigError, InvalidParameterError) as exc:
        print(f"twinbeam: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "decompose":
            result = cmd_decompose(cfg)
        elif args.command == "sweep":
            result = cmd_sweep(cfg, args.kind)
        elif args.command == "peak":
            result = cmd_peak(cfg)
        else:
            if not np.isfinite(args.r_value) or args.r_value < 0:
                print("twinbeam: configuration error: r must be finite and >= 0", file=sys.stderr)
                return EXIT_CONFIG
            result = cmd_negativity(args.r_value, cfg)
    except OSError as exc:
        print(f"twinbeam: I/O error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except TwinbeamError as exc:
        print(f"twinbeam: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(json.dumps(result))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
