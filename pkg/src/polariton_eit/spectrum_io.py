"""CSV ingestion and emission for transmission traces.

Two interchangeable on-disk layouts, chosen by header row:

    frequency_hz, s21_real, s21_imag
    frequency_hz, s21_mag_db, s21_phase_rad

Files carry ordinary frequency in Hz; in memory everything is rad/s.  A
trace file needs at least 16 rows with strictly increasing frequency, and
every malformed cell is reported with its 1-based row number.  All writes
go through a write-then-rename so readers never see half a file.
"""

from __future__ import annotations

import csv
import math
import os
from pathlib import Path

import numpy as np

from .errors import SpectrumFormatError
from .lindblad import ComplexSpectrum
from .units import from_angular, parse_frequency, to_angular

REAL_IMAG_HEADER = ("frequency_hz", "s21_real", "s21_imag")
MAG_PHASE_HEADER = ("frequency_hz", "s21_mag_db", "s21_phase_rad")
MANIFEST_HEADER = ("control_rabi_hz", "path")
MIN_ROWS = 16


def _atomic_write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_table(path, header, rows) -> None:
    """Write a plot-ready CSV atomically; floats keep full precision."""
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _atomic_write_text(path, "\n".join(lines) + "\n")


def _parse_float(cell: str, row_no: int, col: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise SpectrumFormatError(
            f"row {row_no}: column {col!r} is not a number: {cell!r}"
        ) from None
    if not math.isfinite(value):
        raise SpectrumFormatError(f"row {row_no}: column {col!r} is not finite")
    return value


def _read_rows(path: Path, expected_headers):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            raw_header = next(reader)
        except StopIteration:
            raise SpectrumFormatError(f"{path}: empty file") from None
        header = tuple(cell.strip().lower() for cell in raw_header)
        for candidate in expected_headers:
            if header == candidate:
                break
        else:
            raise SpectrumFormatError(
                f"{path}: unrecognized header {list(header)}; expected one of "
                f"{[list(h) for h in expected_headers]}"
            )
        rows = []
        for row_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise SpectrumFormatError(
                    f"row {row_no}: expected {len(header)} columns, got {len(row)}"
                )
            rows.append((row_no, [cell.strip() for cell in row]))
    return header, rows


def read_spectrum(path) -> ComplexSpectrum:
    """Load a trace file into a rad/s ComplexSpectrum.

    Phase from a magnitude/phase file is unwrapped on ingestion; doing so
    twice changes nothing.

    Raises
    ------
    SpectrumFormatError
        On header mismatch, malformed or non-finite cells, fewer than 16
        rows, or non-increasing frequencies, with row numbers.
    """
    path = Path(path)
    header, rows = _read_rows(path, (REAL_IMAG_HEADER, MAG_PHASE_HEADER))
    if len(rows) < MIN_ROWS:
        raise SpectrumFormatError(
            f"{path}: {len(rows)} data rows, need at least {MIN_ROWS}"
        )
    freq = np.empty(len(rows))
    col_b = np.empty(len(rows))
    col_c = np.empty(len(rows))
    prev = -math.inf
    for i, (row_no, cells) in enumerate(rows):
        f = _parse_float(cells[0], row_no, header[0])
        if f == prev:
            raise SpectrumFormatError(f"row {row_no}: duplicate frequency {f!r}")
        if f < prev:
            raise SpectrumFormatError(
                f"row {row_no}: frequency {f!r} breaks ascending order"
            )
        prev = f
        freq[i] = f
        col_b[i] = _parse_float(cells[1], row_no, header[1])
        col_c[i] = _parse_float(cells[2], row_no, header[2])
    omega = to_angular(freq)
    if header == REAL_IMAG_HEADER:
        return ComplexSpectrum.from_s21(omega, col_b + 1j * col_c)
    mag = 10.0 ** (col_b / 20.0)
    phase = np.unwrap(col_c)
    return ComplexSpectrum(omega_p=omega, s21=mag * np.exp(1j * phase),
                           phase=phase)


def write_spectrum(spectrum: ComplexSpectrum, path, style: str = "real_imag") -> None:
    """Write a trace in either CSV layout (``real_imag`` or ``mag_phase``)."""
    if len(spectrum) < MIN_ROWS:
        raise ValueError(f"trace files need >= {MIN_ROWS} points, got {len(spectrum)}")
    freq = from_angular(spectrum.omega_p)
    if style == "real_imag":
        header = REAL_IMAG_HEADER
        cols = (freq, spectrum.s21.real, spectrum.s21.imag)
    elif style == "mag_phase":
        header = MAG_PHASE_HEADER
        cols = (freq, 20.0 * np.log10(np.abs(spectrum.s21)), spectrum.phase)
    else:
        raise ValueError(f"unknown style {style!r}")
    write_table(path, header, zip(*cols))


def remove_electric_delay(spectrum: ComplexSpectrum) -> ComplexSpectrum:
    """Subtract the fitted linear phase slope (cable delay) from a trace.

    The phase intercept is kept; later fits absorb what remains into their
    own baseline.
    """
    slope = np.polyfit(spectrum.omega_p, spectrum.phase, 1)[0]
    phase = spectrum.phase - slope * spectrum.omega_p
    s21 = np.abs(spectrum.s21) * np.exp(1j * phase)
    return ComplexSpectrum(omega_p=spectrum.omega_p.copy(), s21=s21,
                           phase=phase, rho_31=spectrum.rho_31)


def add_noise(spectrum: ComplexSpectrum, snr_db: float, seed) -> ComplexSpectrum:
    """Add complex Gaussian noise at a given SNR (dB, rms-power sense).

    ``seed`` may be an int or an already-built numpy Generator; a fixed int
    gives a bit-identical trace on every call.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n = len(spectrum)
    rms = float(np.sqrt(np.mean(np.abs(spectrum.s21) ** 2)))
    sigma_quad = rms * 10.0 ** (-snr_db / 20.0) / math.sqrt(2.0)
    noise = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * sigma_quad
    return ComplexSpectrum.from_s21(spectrum.omega_p.copy(), spectrum.s21 + noise)


def read_manifest(path):
    """Parse a discrimination manifest: CSV (control_rabi_hz, path).

    Relative paths resolve against the manifest's own directory.  Returns a
    list of (control_rabi rad/s, Path) pairs.

    Raises
    ------
    SpectrumFormatError
        On bad header, bad cells, or an empty manifest.
    """
    path = Path(path)
    header, rows = _read_rows(path, (MANIFEST_HEADER,))
    if not rows:
        raise SpectrumFormatError(f"{path}: manifest has no entries")
    entries = []
    for row_no, cells in rows:
        rabi_hz = _parse_float(cells[0], row_no, header[0])
        if rabi_hz < 0:
            raise SpectrumFormatError(f"row {row_no}: negative control strength")
        rabi = parse_frequency("control_rabi_hz", rabi_hz)
        target = Path(cells[1])
        if not target.is_absolute():
            target = path.parent / target
        entries.append((rabi, target))
    return entries
