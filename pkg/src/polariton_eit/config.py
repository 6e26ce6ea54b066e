"""Workbench configuration: one TOML file drives every subcommand.

Sections: [device] and [drive] describe the dressed qubit and its pump;
[lambda] optionally overrides the derived three-level rates; [probe],
[control], [mapping], [noise] shape transmission sweeps; [fidelity] sets
the dark-state evaluation point.  Frequency keys carry explicit unit
suffixes (see units.py) and are normalized to rad/s on load.  Unknown keys
and unknown sections are rejected, not ignored.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import ConfigError
from .lindblad import LambdaConfig, TransmissionMapping
from .polariton import DeviceParams, PolaritonDrive, build_polaritons
from .units import split_frequency_key

_SECTIONS = {
    "device": {"freq": {"omega_q", "zero_photon_transition", "chi", "omega_r",
                        "gamma_c", "gamma_q", "coupling_g", "anharmonicity"},
               "plain": {"t1_s", "line_length_l_m"}},
    "drive": {"freq": {"omega_d", "rabi", "rabi_grid_start", "rabi_grid_stop"},
              "plain": {"rabi_grid_points"}},
    "lambda": {"freq": {"gamma_31", "gamma_32", "gamma_21", "gamma_phi2",
                        "gamma_phi3", "omega_13", "omega_23"},
               "plain": set()},
    "probe": {"freq": {"rabi", "start_offset", "stop_offset"},
              "plain": {"points"}},
    "control": {"freq": {"rabi", "values", "omega_c"}, "plain": set()},
    "mapping": {"freq": {"scale"}, "plain": {"l_eff_m", "alpha0", "phi0_rad"}},
    "noise": {"freq": set(), "plain": {"snr_db", "seed"}},
    "fidelity": {"freq": {"probe_rabi", "control_rabi", "scan_values"},
                 "plain": {"swap_roles"}},
}

_LAMBDA_OVERRIDE_KEYS = ("gamma_31", "gamma_32", "gamma_21",
                         "gamma_phi2", "gamma_phi3", "omega_13", "omega_23")


@dataclass(frozen=True)
class ProbeSweep:
    """Probe grid: offsets are relative to the |1>-|3> resonance."""

    rabi: float
    start_offset: float
    stop_offset: float
    points: int

    def __post_init__(self):
        if self.rabi <= 0:
            raise ConfigError("probe.rabi: must be > 0")
        if not self.stop_offset > self.start_offset:
            raise ConfigError("probe: stop_offset must exceed start_offset")
        if self.points < 16:
            raise ConfigError(f"probe.points: need >= 16, got {self.points}")


@dataclass(frozen=True, eq=False)
class WorkbenchConfig:
    """Everything a run needs, in rad/s, plus the hash of the raw file."""

    device: DeviceParams
    drive: PolaritonDrive
    drive_grid: np.ndarray | None
    lambda_overrides: dict
    probe: ProbeSweep | None
    control_values: tuple
    omega_c: float | None
    mapping: TransmissionMapping | None
    noise_snr_db: float | None
    noise_seed: int
    fidelity_probe: float | None
    fidelity_control: float | None
    fidelity_scan: tuple | None
    fidelity_swap_roles: bool
    raw: dict = field(repr=False)
    config_hash: str = ""


def _check_keys(section: str, data: dict) -> None:
    allowed = _SECTIONS[section]
    for key in data:
        if key in allowed["plain"]:
            continue
        hit = split_frequency_key(key)
        if hit is not None and hit[0] in allowed["freq"]:
            continue
        raise ConfigError(f"{section}.{key}: unknown key")


def _to_float(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    value = float(value)
    if not np.isfinite(value):
        raise ConfigError(f"{where}: value must be finite")
    return value


def _freq(section_name: str, data: dict, base: str, default=None, required=False):
    hits = []
    for key in data:
        pair = split_frequency_key(key)
        if pair is not None and pair[0] == base:
            hits.append((key, pair[1]))
    if len(hits) > 1:
        keys = sorted(k for k, _ in hits)
        raise ConfigError(f"{section_name}.{base}: given twice as {keys}")
    if not hits:
        if required:
            raise ConfigError(
                f"{section_name}.{base}: missing (expected {base}_hz, "
                f"{base}_mhz_2pi, or {base}_rads)"
            )
        return default
    key, scale = hits[0]
    where = f"{section_name}.{key}"
    value = data[key]
    if isinstance(value, list):
        return tuple(_to_float(v, where) * scale for v in value)
    return _to_float(value, where) * scale


def _scalar_freq(section: str, data: dict, base: str, default=None, required=False):
    value = _freq(section, data, base, default=default, required=required)
    if isinstance(value, tuple):
        raise ConfigError(f"{section}.{base}: expected a scalar, got a list")
    return value


def _list_freq(section: str, data: dict, base: str):
    value = _freq(section, data, base)
    if value is None:
        return None
    if not isinstance(value, tuple):
        raise ConfigError(f"{section}.{base}: expected a list")
    if not value:
        raise ConfigError(f"{section}.{base}: list is empty")
    return value


def _int(data: dict, key: str, where: str, default=None, required=False):
    if key not in data:
        if required:
            raise ConfigError(f"{where}.{key}: missing")
        return default
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}.{key}: expected an integer, got {value!r}")
    return value


def config_hash(raw: dict) -> str:
    """sha256 of the canonical JSON form of the parsed file."""
    blob = json.dumps(raw, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def _build_device(data: dict) -> DeviceParams:
    chi = _scalar_freq("device", data, "chi", required=True)
    omega_r = _scalar_freq("device", data, "omega_r", required=True)
    gamma_c = _scalar_freq("device", data, "gamma_c", required=True)
    omega_q = _scalar_freq("device", data, "omega_q")
    omega_01 = _scalar_freq("device", data, "zero_photon_transition")
    if (omega_q is None) == (omega_01 is None):
        raise ConfigError(
            "device: give exactly one of omega_q_* or zero_photon_transition_*"
        )
    gamma_q = _scalar_freq("device", data, "gamma_q")
    t1 = data.get("t1_s")
    if (gamma_q is None) == (t1 is None):
        raise ConfigError("device: give exactly one of gamma_q_* or t1_s")
    if t1 is not None:
        t1 = _to_float(t1, "device.t1_s")
        if t1 <= 0:
            raise ConfigError("device.t1_s: must be > 0")
        gamma_q = 1.0 / t1
    length = data.get("line_length_l_m")
    if length is not None:
        length = _to_float(length, "device.line_length_l_m")
    kwargs = dict(
        omega_r=omega_r, chi=chi, gamma_q=gamma_q, gamma_c=gamma_c,
        line_length_l=length,
        coupling_g=_scalar_freq("device", data, "coupling_g"),
        anharmonicity=_scalar_freq("device", data, "anharmonicity"),
    )
    try:
        if omega_q is not None:
            return DeviceParams(omega_q=omega_q, **kwargs)
        return DeviceParams.from_zero_photon_transition(omega_01, **kwargs)
    except ValueError as exc:
        raise ConfigError(f"device: {exc}") from None


def load_config(path) -> WorkbenchConfig:
    """Parse and validate a workbench TOML file.

    Raises
    ------
    ConfigError
        With a section.key path for every diagnosable problem.
    """
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None

    for section, data in raw.items():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
        if not isinstance(data, dict):
            raise ConfigError(f"{section}: expected a section, got {data!r}")
        _check_keys(section, data)
    for required in ("device", "drive"):
        if required not in raw:
            raise ConfigError(f"missing required section [{required}]")

    device = _build_device(raw["device"])

    drv = raw["drive"]
    try:
        drive = PolaritonDrive(
            omega_d=_scalar_freq("drive", drv, "omega_d", required=True),
            rabi=_scalar_freq("drive", drv, "rabi", required=True),
        )
    except ValueError as exc:
        raise ConfigError(f"drive: {exc}") from None
    grid_start = _scalar_freq("drive", drv, "rabi_grid_start")
    grid_stop = _scalar_freq("drive", drv, "rabi_grid_stop")
    grid_points = _int(drv, "rabi_grid_points", "drive")
    drive_grid = None
    if any(v is not None for v in (grid_start, grid_stop, grid_points)):
        if None in (grid_start, grid_stop, grid_points):
            raise ConfigError(
                "drive: rabi_grid_start/stop/points must appear together"
            )
        if grid_points < 2:
            raise ConfigError("drive.rabi_grid_points: need >= 2")
        if grid_stop <= grid_start or grid_start < 0:
            raise ConfigError("drive: need 0 <= rabi_grid_start < rabi_grid_stop")
        drive_grid = np.linspace(grid_start, grid_stop, grid_points)

    overrides = {}
    for base in _LAMBDA_OVERRIDE_KEYS:
        value = _scalar_freq("lambda", raw.get("lambda", {}), base)
        if value is not None:
            if value < 0 and base.startswith("gamma"):
                raise ConfigError(f"lambda.{base}: must be >= 0")
            overrides[base] = value

    probe = None
    if "probe" in raw:
        probe = ProbeSweep(
            rabi=_scalar_freq("probe", raw["probe"], "rabi", required=True),
            start_offset=_scalar_freq("probe", raw["probe"], "start_offset",
                                      required=True),
            stop_offset=_scalar_freq("probe", raw["probe"], "stop_offset",
                                     required=True),
            points=_int(raw["probe"], "points", "probe", default=201),
        )

    ctl = raw.get("control", {})
    values = _list_freq("control", ctl, "values")
    scalar = _scalar_freq("control", ctl, "rabi")
    if values is not None and scalar is not None:
        raise ConfigError("control: give either rabi_* or values_*, not both")
    if values is None:
        values = (scalar,) if scalar is not None else (0.0,)
    if any(v < 0 for v in values):
        raise ConfigError("control: strengths must be >= 0")
    omega_c = _scalar_freq("control", ctl, "omega_c")

    mapping = None
    if "mapping" in raw:
        mp = raw["mapping"]
        try:
            mapping = TransmissionMapping(
                scale=_scalar_freq("mapping", mp, "scale", required=True),
                l_eff=_to_float(mp.get("l_eff_m", 0.01), "mapping.l_eff_m"),
                alpha0=_to_float(mp.get("alpha0", 0.0), "mapping.alpha0"),
                phi0=_to_float(mp.get("phi0_rad", 0.0), "mapping.phi0_rad"),
            )
        except ValueError as exc:
            raise ConfigError(f"mapping: {exc}") from None

    snr_db = None
    seed = 0
    if "noise" in raw:
        nz = raw["noise"]
        if "snr_db" in nz:
            snr_db = _to_float(nz["snr_db"], "noise.snr_db")
        seed = _int(nz, "seed", "noise", default=0)

    fid_probe = fid_control = fid_scan = None
    fid_swap = False
    if "fidelity" in raw:
        fd = raw["fidelity"]
        fid_probe = _scalar_freq("fidelity", fd, "probe_rabi", required=True)
        fid_control = _scalar_freq("fidelity", fd, "control_rabi", required=True)
        fid_scan = _list_freq("fidelity", fd, "scan_values")
        fid_swap = fd.get("swap_roles", False)
        if not isinstance(fid_swap, bool):
            raise ConfigError("fidelity.swap_roles: expected a boolean")

    return WorkbenchConfig(
        device=device, drive=drive, drive_grid=drive_grid,
        lambda_overrides=overrides, probe=probe, control_values=values,
        omega_c=omega_c, mapping=mapping, noise_snr_db=snr_db,
        noise_seed=seed, fidelity_probe=fid_probe,
        fidelity_control=fid_control, fidelity_scan=fid_scan,
        fidelity_swap_roles=fid_swap, raw=raw, config_hash=config_hash(raw),
    )


def build_lambda(cfg: WorkbenchConfig, *, probe_rabi: float,
                 control_rabi: float) -> LambdaConfig:
    """Three-level config from the device point plus any [lambda] overrides."""
    system = build_polaritons(cfg.device, cfg.drive)
    over = cfg.lambda_overrides
    omega_13 = over.get("omega_13", system.omega_13)
    omega_23 = over.get("omega_23", system.omega_23)
    return LambdaConfig(
        omega_13=omega_13,
        omega_23=omega_23,
        gamma_31=over.get("gamma_31", system.gamma_31),
        gamma_32=over.get("gamma_32", system.gamma_32),
        gamma_21=over.get("gamma_21", system.gamma_21),
        gamma_phi2=over.get("gamma_phi2", 0.0),
        gamma_phi3=over.get("gamma_phi3", 0.0),
        probe_rabi=probe_rabi,
        control_rabi=control_rabi,
        omega_p=omega_13,
        omega_c=cfg.omega_c if cfg.omega_c is not None else omega_23,
    )
