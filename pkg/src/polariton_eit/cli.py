"""Command-line front end for batch polariton / EIT analysis runs.

Six subcommands: ``polariton`` derives the dressed-level picture from a
config, ``simulate`` sweeps probe transmission per control strength,
``fit`` runs the EIT/ATS line fits on a trace file, ``discriminate`` maps
AIC weights over a control series, ``groupdelay`` turns a fit report into
delay and group-velocity numbers, ``fidelity`` evaluates the dark-state
overlap.  Every run writes JSON reports plus plot-ready CSVs into --out.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np
from scipy.constants import c as _C_LIGHT

from . import __version__
from .config import WorkbenchConfig, build_lambda, load_config
from .errors import (
    ConfigError,
    MissingFitError,
    WorkbenchError,
)
from .fitting import (
    BaselineParams,
    EitModelParams,
    aic_weights,
    eval_ln_s21,
    fit_model,
    group_velocity,
    model_group_delay,
)
from .lindblad import dark_state_fidelity, fidelity_scan, probe_sweep, steady_state
from .polariton import build_polaritons, eit_condition, transition_curves
from .report import load_report, make_report, write_report
from .spectrum_io import (
    add_noise,
    read_manifest,
    read_spectrum,
    remove_electric_delay,
    write_spectrum,
    write_table,
)
from .units import from_angular

_MODELS = ("eit", "ats")


def _hz(value):
    return from_angular(float(value))


def _write(report, out_dir: Path, name: str) -> Path:
    path = out_dir / name
    write_report(report, path)
    return path


def _probe_grid(cfg: WorkbenchConfig, omega_13: float) -> np.ndarray:
    p = cfg.probe
    return omega_13 + np.linspace(p.start_offset, p.stop_offset, p.points)


# ------------------------------------------------------------ polariton

def cmd_polariton(args) -> int:
    cfg = load_config(args.config)
    system = build_polaritons(cfg.device, cfg.drive)
    a = system.angles
    results = {
        "delta0_hz": _hz(a.delta0),
        "delta1_hz": _hz(a.delta1),
        "theta0_rad": a.theta0,
        "theta1_rad": a.theta1,
        "energies_hz": [_hz(e) for e in system.energies],
        "amplitudes": system.amplitudes,
        "gamma_31_hz": _hz(system.gamma_31),
        "gamma_32_hz": _hz(system.gamma_32),
        "gamma_21_hz": _hz(system.gamma_21),
        "omega_23_hz": _hz(system.omega_23),
        "omega_13_hz": _hz(system.omega_13),
        "omega_24_hz": _hz(system.omega_24),
        "omega_14_hz": _hz(system.omega_14),
        "nested": system.nested,
        "cavity_linewidth_hz": _hz(cfg.device.gamma_c),
        "eit_regime_per_control": [
            {"control_rabi_hz": _hz(v),
             "within_eit_boundary": eit_condition(v, cfg.device)}
            for v in cfg.control_values
        ],
    }
    out = Path(args.out)
    if cfg.drive_grid is not None:
        curves = transition_curves(cfg.device, cfg.drive.omega_d, cfg.drive_grid)
        rows = zip(
            from_angular(curves.rabi),
            from_angular(curves.omega_23),
            from_angular(curves.omega_13),
            from_angular(curves.omega_24),
            from_angular(curves.omega_14),
            from_angular(curves.omega_13 - curves.omega_23),
            from_angular(curves.omega_24 - curves.omega_23),
        )
        write_table(out / "transition_curves.csv",
                    ("rabi_hz", "omega_23_hz", "omega_13_hz", "omega_24_hz",
                     "omega_14_hz", "splitting_zero_hz", "splitting_one_hz"),
                    rows)
        results["transition_curves_csv"] = "transition_curves.csv"
    report = make_report(
        "polariton", config_hash=cfg.config_hash,
        inputs={"config": str(args.config)}, results=results,
        version=__version__,
    )
    _write(report, out, "polariton_report.json")
    return 0


# ------------------------------------------------------------- simulate

def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    if cfg.probe is None:
        raise ConfigError("simulate needs a [probe] section")
    if cfg.mapping is None:
        raise ConfigError("simulate needs a [mapping] section")
    seed = cfg.noise_seed if args.seed is None else args.seed
    out = Path(args.out)
    files = []
    for i, control in enumerate(cfg.control_values):
        lam = build_lambda(cfg, probe_rabi=cfg.probe.rabi, control_rabi=control)
        grid = _probe_grid(cfg, lam.omega_13)
        spectrum = probe_sweep(lam, grid, cfg.mapping)
        file_seed = None
        if cfg.noise_snr_db is not None:
            file_seed = seed + i  # distinct stream per file, still replayable
            spectrum = add_noise(spectrum, cfg.noise_snr_db, file_seed)
        name = f"s21_control_{i}.csv"
        write_spectrum(spectrum, out / name)
        files.append({
            "path": name,
            "control_rabi_hz": _hz(control),
            "points": len(spectrum),
            "snr_db": cfg.noise_snr_db,
            "seed": file_seed,
        })
    report = make_report(
        "simulate", config_hash=cfg.config_hash,
        inputs={"config": str(args.config), "seed": seed},
        results={
            "files": files,
            "probe_rabi_hz": _hz(cfg.probe.rabi),
            "mapping": cfg.mapping,
        },
        version=__version__,
    )
    _write(report, out, "simulate_report.json")
    return 0


# ------------------------------------------------------------------ fit

def _fit_one(spectrum, model: str, out: Path):
    result = fit_model(spectrum, model)
    ln_model, phase_model = eval_ln_s21(result.params, result.baseline,
                                        spectrum.omega_p)
    rows = zip(
        from_angular(spectrum.omega_p),
        spectrum.ln_mag, ln_model, spectrum.ln_mag - ln_model,
        spectrum.phase, phase_model, spectrum.phase - phase_model,
    )
    write_table(out / f"residuals_{model}.csv",
                ("frequency_hz", "ln_mag_data", "ln_mag_model", "ln_mag_residual",
                 "phase_data", "phase_model", "phase_residual"),
                rows)
    return result


def cmd_fit(args) -> int:
    spectrum = read_spectrum(args.input)
    if args.remove_delay:
        spectrum = remove_electric_delay(spectrum)
    models = _MODELS if args.model == "both" else (args.model,)
    out = Path(args.out)
    fits = {}
    for model in models:
        fits[model] = _fit_one(spectrum, model, out)
    results = {"fits": fits, "points": len(spectrum)}
    if len(fits) == 2:
        aic = aic_weights([fits["eit"], fits["ats"]])
        results["aic"] = aic
    report = make_report(
        "fit", config_hash=None,
        inputs={"input": str(args.input), "model": args.model,
                "remove_delay": bool(args.remove_delay)},
        results=results, version=__version__,
    )
    _write(report, out, "fit_report.json")
    return 0


# --------------------------------------------------------- discriminate

def cmd_discriminate(args) -> int:
    entries = read_manifest(args.input)
    out = Path(args.out)
    per_file = []
    table_rows = []
    for control, path in entries:
        record = {"path": str(path), "control_rabi_hz": _hz(control)}
        try:
            spectrum = read_spectrum(path)
            results = [fit_model(spectrum, m) for m in _MODELS]
            aic = aic_weights(results)
        except (WorkbenchError, OSError) as exc:
            record["status"] = f"error: {exc}"
            per_file.append(record)
            continue
        record.update({
            "status": "ok",
            "weight_eit": float(aic.weights[0]),
            "weight_ats": float(aic.weights[1]),
            "rss_eit": results[0].rss,
            "rss_ats": results[1].rss,
            "converged_eit": results[0].converged,
            "converged_ats": results[1].converged,
        })
        per_file.append(record)
        table_rows.append((_hz(control), float(aic.weights[0]),
                           float(aic.weights[1])))
    write_table(out / "weights_vs_control.csv",
                ("control_rabi_hz", "weight_eit", "weight_ats"), table_rows)
    report = make_report(
        "discriminate", config_hash=None,
        inputs={"input": str(args.input), "entries": len(entries)},
        results={"per_file": per_file,
                 "weights_csv": "weights_vs_control.csv"},
        version=__version__,
    )
    _write(report, out, "discriminate_report.json")
    return 0


# ----------------------------------------------------------- groupdelay

def _eit_fit_from_report(doc: dict, source: str):
    candidates = []
    results = doc.get("results", {})
    fits = results.get("fits", {})
    if isinstance(fits, dict):
        candidates.extend(fits.values())
    if "model" in doc:
        candidates.append(doc)
    for fit in candidates:
        if fit.get("model") == "eit" and fit.get("converged"):
            return fit
    raise MissingFitError(f"{source}: no converged EIT fit found")


def cmd_groupdelay(args) -> int:
    doc = load_report(args.input)
    fit = _eit_fit_from_report(doc, str(args.input))
    params = EitModelParams(**fit["params"])
    baseline = BaselineParams(**fit["baseline"])
    lo, hi = fit["omega_range"]
    grid = np.linspace(lo, hi, 801)
    tau = model_group_delay(params, baseline, grid)

    # window center: strongest delay within one width of the suppression lobe
    near = np.abs(grid - params.omega_plus) <= params.gamma_plus
    if not near.any():
        near = np.ones_like(grid, dtype=bool)
    idx = np.flatnonzero(near)[np.argmax(np.abs(tau[near]))]
    tau_center = float(tau[idx])
    v_g = group_velocity(tau_center, args.length)

    out = Path(args.out)
    write_table(out / "groupdelay_table.csv", ("frequency_hz", "tau_g_s"),
                zip(from_angular(grid), tau))
    report = make_report(
        "groupdelay", config_hash=None,
        inputs={"input": str(args.input), "length_m": args.length},
        results={
            "window_center_hz": _hz(grid[idx]),
            "tau_g_center_s": tau_center,
            "group_velocity_m_per_s": v_g,
            "baseline_delay_s": -baseline.l_eff / _C_LIGHT,
            "table_csv": "groupdelay_table.csv",
        },
        version=__version__,
    )
    _write(report, out, "groupdelay_report.json")
    return 0


# ------------------------------------------------------------- fidelity

def cmd_fidelity(args) -> int:
    cfg = load_config(args.config)
    if cfg.fidelity_probe is None:
        raise ConfigError("fidelity needs a [fidelity] section")
    lam = build_lambda(cfg, probe_rabi=cfg.fidelity_probe,
                       control_rabi=cfg.fidelity_control)
    rho = steady_state(lam)
    fid = dark_state_fidelity(rho, lam.probe_rabi, lam.control_rabi)
    results = {
        "fidelity": fid,
        "fidelity_percent": 100.0 * fid,
        "dark_angle_rad": float(np.arctan2(lam.probe_rabi, lam.control_rabi)),
        "populations": rho.populations,
        "rho_31": rho.rho_31,
        "probe_rabi_hz": _hz(lam.probe_rabi),
        "control_rabi_hz": _hz(lam.control_rabi),
    }
    out = Path(args.out)
    if cfg.fidelity_scan is not None:
        strengths, fids = fidelity_scan(lam, np.array(cfg.fidelity_scan),
                                        swap_roles=cfg.fidelity_swap_roles)
        write_table(out / "fidelity_scan.csv",
                    ("scanned_rabi_hz", "fidelity"),
                    zip(from_angular(strengths), fids))
        results["scan_csv"] = "fidelity_scan.csv"
        results["scan_swaps_roles"] = cfg.fidelity_swap_roles
    report = make_report(
        "fidelity", config_hash=cfg.config_hash,
        inputs={"config": str(args.config)}, results=results,
        version=__version__,
    )
    _write(report, out, "fidelity_report.json")
    return 0


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polariton-eit",
        description="Nested-polariton EIT analysis workbench",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, *, config=False, input_=False):
        p.add_argument("--out", default=".", help="output directory")
        if config:
            p.add_argument("--config", required=True, help="TOML config file")
        if input_:
            p.add_argument("--input", required=True)

    p = sub.add_parser("polariton", help="derive the dressed-level picture")
    common(p, config=True)
    p.set_defaults(func=cmd_polariton)

    p = sub.add_parser("simulate", help="sweep probe transmission per control")
    common(p, config=True)
    p.add_argument("--seed", type=int, default=None,
                   help="noise seed override")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="fit EIT/ATS models to a trace CSV")
    common(p, input_=True)
    p.add_argument("--model", choices=("eit", "ats", "both"), default="both")
    p.add_argument("--remove-delay", action="store_true",
                   help="subtract the linear phase slope before fitting")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("discriminate",
                       help="AIC weights over a control-strength series")
    common(p, input_=True)
    p.set_defaults(func=cmd_discriminate)

    p = sub.add_parser("groupdelay",
                       help="delay and group velocity from a fit report")
    common(p, input_=True)
    p.add_argument("--length", type=float, required=True,
                   help="sample length in meters")
    p.set_defaults(func=cmd_groupdelay)

    p = sub.add_parser("fidelity", help="dark-state fidelity at a drive point")
    common(p, config=True)
    p.set_defaults(func=cmd_fidelity)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except WorkbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
