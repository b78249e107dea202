"""Configuration parsing for the CLI.

Config files are TOML: flat keys for the physical parameters plus one
optional ``[sweep]`` table. All frequencies are given in Hz and converted to
angular units (x 2 pi) internally; every report echoes the resolved rad/s
values so outputs are reproducible from their sidecars alone.
"""

from __future__ import annotations

import math

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from dataclasses import dataclass
from typing import Optional

from .errors import ConfigError
from .model import MODES, ROOT_METHODS, SystemParams

TWO_PI = 2.0 * math.pi

_PARAM_KEYS = {
    "omega_m_hz",
    "kappa_m_hz",
    "q_m",
    "kappa_f_hz",
    "kappa_s_hz",
    "g_f_hz",
    "chi_hz",
    "delta_hz",
    "t_env_k",
    "lambda_f_m",
    "p_in_w",
}
_TOP_KEYS = _PARAM_KEYS | {"detector_bandwidth_hz", "mode", "root_method", "sweep"}
_SWEEP_KEYS = {
    "delta_min_hz",
    "delta_max_hz",
    "n_delta",
    "y_axis",
    "y_min",
    "y_max",
    "n_y",
}


@dataclass(frozen=True)
class SweepSpec:
    delta_min: float  # rad/s
    delta_max: float  # rad/s
    n_delta: int
    y_axis: str       # "p_in" (W, log-spaced) | "chi" (multiples of chi, linear)
    y_min: float
    y_max: float
    n_y: int


@dataclass(frozen=True)
class Config:
    params: SystemParams
    detector_bandwidth_hz: float
    mode: str
    root_method: str
    sweep: Optional[SweepSpec]


def _number(raw: dict, key: str, minimum: float | None = None) -> float:
    if key not in raw:
        raise ConfigError(f"missing required key {key!r}")
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{key} must be finite, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{key} must be >= {minimum}, got {value!r}")
    return value


def parse_config(raw: dict) -> Config:
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    omega_m = TWO_PI * _number(raw, "omega_m_hz", minimum=0.0)
    has_km = "kappa_m_hz" in raw
    has_qm = "q_m" in raw
    if has_km == has_qm:
        raise ConfigError("exactly one of kappa_m_hz and q_m must be given")
    if has_km:
        kappa_m = TWO_PI * _number(raw, "kappa_m_hz", minimum=0.0)
    else:
        q_m = _number(raw, "q_m", minimum=0.0)
        if q_m <= 0.0:
            raise ConfigError(f"q_m must be positive, got {q_m!r}")
        kappa_m = omega_m / (2.0 * q_m)

    params = SystemParams(
        omega_m=omega_m,
        kappa_m=kappa_m,
        kappa_F=TWO_PI * _number(raw, "kappa_f_hz", minimum=0.0),
        kappa_S=TWO_PI * _number(raw, "kappa_s_hz", minimum=0.0),
        g_F=TWO_PI * _number(raw, "g_f_hz", minimum=0.0),
        chi=TWO_PI * _number(raw, "chi_hz", minimum=0.0),
        Delta=TWO_PI * _number(raw, "delta_hz"),
        T_env=_number(raw, "t_env_k", minimum=0.0),
        lambda_F=_number(raw, "lambda_f_m", minimum=0.0),
        P_in=_number(raw, "p_in_w", minimum=0.0),
    )

    bandwidth = 500e6
    if "detector_bandwidth_hz" in raw:
        bandwidth = _number(raw, "detector_bandwidth_hz", minimum=0.0)
        if bandwidth <= 0.0:
            raise ConfigError("detector_bandwidth_hz must be positive")

    mode = raw.get("mode", "paper")
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")
    root_method = raw.get("root_method", "linear")
    if root_method not in ROOT_METHODS:
        raise ConfigError(
            f"root_method must be one of {ROOT_METHODS}, got {root_method!r}"
        )

    sweep = None
    if "sweep" in raw:
        sraw = raw["sweep"]
        if not isinstance(sraw, dict):
            raise ConfigError("sweep must be a table")
        unknown = set(sraw) - _SWEEP_KEYS
        if unknown:
            raise ConfigError(f"unknown sweep keys: {sorted(unknown)}")
        y_axis = sraw.get("y_axis")
        if y_axis not in ("p_in", "chi"):
            raise ConfigError(f"sweep.y_axis must be 'p_in' or 'chi', got {y_axis!r}")
        n_delta = sraw.get("n_delta", 201)
        n_y = sraw.get("n_y", 201)
        if not isinstance(n_delta, int) or not isinstance(n_y, int):
            raise ConfigError("sweep.n_delta and sweep.n_y must be integers")
        if n_delta < 2 or n_y < 2:
            raise ConfigError("sweep grid needs at least 2 points per axis")
        sweep = SweepSpec(
            delta_min=TWO_PI * _number(sraw, "delta_min_hz"),
            delta_max=TWO_PI * _number(sraw, "delta_max_hz"),
            n_delta=n_delta,
            y_axis=y_axis,
            y_min=_number(sraw, "y_min"),
            y_max=_number(sraw, "y_max"),
            n_y=n_y,
        )
        if sweep.y_axis == "p_in" and (sweep.y_min <= 0.0 or sweep.y_max <= 0.0):
            raise ConfigError("sweep power range must be strictly positive")

    return Config(
        params=params,
        detector_bandwidth_hz=bandwidth,
        mode=mode,
        root_method=root_method,
        sweep=sweep,
    )


def load_config(path: str) -> Config:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    return parse_config(raw)


def resolved_params_dict(params: SystemParams) -> dict:
    """Internal angular-frequency parameter snapshot for output sidecars."""
    return {
        "omega_m_rad_s": params.omega_m,
        "kappa_m_rad_s": params.kappa_m,
        "kappa_F_rad_s": params.kappa_F,
        "kappa_S_rad_s": params.kappa_S,
        "g_F_rad_s": params.g_F,
        "g_S_rad_s": params.g_S,
        "chi_rad_s": params.chi,
        "Delta_rad_s": params.Delta,
        "T_env_K": params.T_env,
        "lambda_F_m": params.lambda_F,
        "P_in_W": params.P_in,
        "Q_m": params.Q_m,
    }
