"""The one place ordinary frequencies become angular ones.

Config files and CSV headers speak Hz; everything downstream speaks rad/s.
Keeping the 2 pi in a single module means a factor-of-2pi bug can only live
here.  Frequency-valued config keys must end in a unit suffix:

    _hz        ordinary frequency in Hz
    _mhz_2pi   omega/2pi in MHz (the unit device sheets quote)
    _rads      already angular, rad/s
"""

from __future__ import annotations

import math

from .errors import ConfigError

TWO_PI = 2.0 * math.pi

# longest suffix first so _mhz_2pi is not swallowed by a bare match
FREQUENCY_SUFFIXES = (
    ("_mhz_2pi", TWO_PI * 1e6),
    ("_rads", 1.0),
    ("_hz", TWO_PI),
)


def to_angular(frequency_hz):
    """Hz -> rad/s. Works elementwise on arrays."""
    return TWO_PI * frequency_hz


def from_angular(omega_rads):
    """rad/s -> Hz. Works elementwise on arrays."""
    return omega_rads / TWO_PI


def split_frequency_key(key: str):
    """('rabi_mhz_2pi' -> ('rabi', scale)) or None if no frequency suffix."""
    for suffix, scale in FREQUENCY_SUFFIXES:
        if key.endswith(suffix):
            return key[: -len(suffix)], scale
    return None


def parse_frequency(key: str, value, *, where: str = "") -> float:
    """Convert one suffixed config value to rad/s.

    Raises
    ------
    ConfigError
        If the key has no recognized unit suffix or the value is not a
        finite number.
    """
    ctx = f"{where}.{key}" if where else key
    hit = split_frequency_key(key)
    if hit is None:
        raise ConfigError(
            f"{ctx}: frequency keys need a unit suffix "
            "(_hz, _mhz_2pi, or _rads)"
        )
    try:
        num = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{ctx}: expected a number, got {value!r}") from None
    if not math.isfinite(num):
        raise ConfigError(f"{ctx}: value must be finite, got {num}")
    return num * hit[1]
