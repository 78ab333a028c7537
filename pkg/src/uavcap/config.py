"""Scenario configuration: parsing, validation, canonical serialization.

Config documents are plain ``key = value`` lines; blank lines and ``#``
comments are ignored. Every key has a default, so the empty document is a
valid scenario (the reference operating point). Unknown keys and
out-of-range values raise ConfigError naming the key and the bound.

Noise can be given either directly (``noise_power_dbm``) or as a pair
(``noise_density_dbm_hz``, ``bandwidth_mhz``), not both; the resolved
config always stores the total noise power, and document_items() emits
that canonical form, so a dumped config re-parses to an equal one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from .capacity import CapacityQuery
from .detection import DetectionSpec, SURROGATE_MODES
from .geometry import SensingRegion
from .link import RadarLinkParams, SNR_MODES, noise_power_dbm_from_density
from .montecarlo import TrialPlan

DEFAULT_SEED = 20260816

_DEFAULT_NOISE_DENSITY_DBM_HZ = -174.0
_DEFAULT_BANDWIDTH_MHZ = 100.0


class ConfigError(ValueError):
    """Invalid config document, key, or value."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully resolved scenario; field defaults are the reference operating point."""

    tx_power_dbm: float = 58.0
    combined_gain_db: float = 22.5
    noise_power_dbm: float = noise_power_dbm_from_density(
        _DEFAULT_NOISE_DENSITY_DBM_HZ, _DEFAULT_BANDWIDTH_MHZ
    )
    carrier_freq_mhz: float = 4900.0
    rcs_m2: float = 0.01
    uavs_per_symbol: int = 1
    cpi_symbols: int = 3
    radius_km: float = 1.0
    radius_ratio: float = 10.0
    max_elevation_rad: float = math.pi / 5.0
    pfa: float = 0.05
    pd_threshold: float = 0.95
    snr_threshold_db: float = 13.0
    frames: int = 1
    symbols_per_frame: int = 14
    snr_mode: str = "normalized"
    surrogate_mode: str = "exact"
    trials: int = 100_000
    seed: int = DEFAULT_SEED
    confidence: float = 0.99
    workers: int = 1
    sweep_start: float | None = None
    sweep_stop: float | None = None
    sweep_step: float | None = None
    # True when `frames` appeared explicitly; uav-count sweeps then plot
    # that single frame count instead of the default {1, 3, 5} curves.
    frames_explicit: bool = False

    @property
    def total_symbols(self) -> int:
        return self.frames * self.symbols_per_frame

    @property
    def frame_curves(self) -> tuple[int, ...]:
        return (self.frames,) if self.frames_explicit else (1, 3, 5)

    def region(self) -> SensingRegion:
        return SensingRegion(self.radius_km, self.radius_ratio, self.max_elevation_rad)

    def link(self) -> RadarLinkParams:
        return RadarLinkParams(
            tx_power_dbm=self.tx_power_dbm,
            combined_gain_db=self.combined_gain_db,
            noise_power_dbm=self.noise_power_dbm,
            carrier_freq_mhz=self.carrier_freq_mhz,
            rcs_m2=self.rcs_m2,
            cpi_symbols=self.cpi_symbols,
            uavs_per_symbol=self.uavs_per_symbol,
        )

    def detection(self) -> DetectionSpec:
        return DetectionSpec(
            pfa=self.pfa,
            pd_threshold=self.pd_threshold,
            snr_threshold_db=self.snr_threshold_db,
        )

    def plan(self) -> TrialPlan:
        return TrialPlan(
            trials=self.trials, master_seed=self.seed, confidence=self.confidence
        )

    def query(self, frames: int | None = None) -> CapacityQuery:
        n_frames = self.frames if frames is None else frames
        return CapacityQuery(
            link=self.link(),
            region=self.region(),
            spec=self.detection(),
            total_symbols=n_frames * self.symbols_per_frame,
            snr_mode=self.snr_mode,
            surrogate_mode=self.surrogate_mode,
        )

    def document_items(self) -> list[tuple[str, str]]:
        """Canonical (key, value) pairs; parsing them back yields this config."""
        items: list[tuple[str, str]] = [
            ("tx_power_dbm", repr(self.tx_power_dbm)),
            ("combined_gain_db", repr(self.combined_gain_db)),
            ("noise_power_dbm", repr(self.noise_power_dbm)),
            ("carrier_freq_mhz", repr(self.carrier_freq_mhz)),
            ("rcs_m2", repr(self.rcs_m2)),
            ("uavs_per_symbol", str(self.uavs_per_symbol)),
            ("cpi_symbols", str(self.cpi_symbols)),
            ("radius_km", repr(self.radius_km)),
            ("radius_ratio", repr(self.radius_ratio)),
            ("max_elevation_rad", repr(self.max_elevation_rad)),
            ("pfa", repr(self.pfa)),
            ("pd_threshold", repr(self.pd_threshold)),
            ("snr_threshold_db", repr(self.snr_threshold_db)),
            ("symbols_per_frame", str(self.symbols_per_frame)),
            ("snr_mode", self.snr_mode),
            ("surrogate_mode", self.surrogate_mode),
            ("trials", str(self.trials)),
            ("seed", str(self.seed)),
            ("confidence", repr(self.confidence)),
            ("workers", str(self.workers)),
        ]
        if self.frames_explicit:
            items.append(("frames", str(self.frames)))
        for key in ("sweep_start", "sweep_stop", "sweep_step"):
            value = getattr(self, key)
            if value is not None:
                items.append((key, repr(value)))
        return items


_INT_KEYS = {
    "uavs_per_symbol",
    "cpi_symbols",
    "frames",
    "symbols_per_frame",
    "trials",
    "seed",
    "workers",
}
_FLOAT_KEYS = {
    "tx_power_dbm",
    "combined_gain_db",
    "noise_power_dbm",
    "noise_density_dbm_hz",
    "bandwidth_mhz",
    "carrier_freq_mhz",
    "rcs_m2",
    "radius_km",
    "radius_ratio",
    "max_elevation_rad",
    "pfa",
    "pd_threshold",
    "snr_threshold_db",
    "confidence",
    "sweep_start",
    "sweep_stop",
    "sweep_step",
}
_STR_KEYS = {"snr_mode", "surrogate_mode"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS

# (low, high, low_open, high_open); None = unbounded on that side.
_RANGES: dict[str, tuple[float | None, float | None, bool, bool]] = {
    "carrier_freq_mhz": (0.0, None, True, False),
    "rcs_m2": (0.0, None, True, False),
    "bandwidth_mhz": (0.0, None, True, False),
    "uavs_per_symbol": (1, None, False, False),
    "cpi_symbols": (1, None, False, False),
    "frames": (1, None, False, False),
    "symbols_per_frame": (1, None, False, False),
    "radius_km": (0.0, None, True, False),
    "radius_ratio": (1.0, None, True, False),
    "max_elevation_rad": (0.0, math.pi / 2.0, True, False),
    "pfa": (0.0, 0.5, True, True),
    "pd_threshold": (0.0, 1.0, True, True),
    "trials": (0, None, False, False),
    "seed": (0, None, False, False),
    "confidence": (0.0, 1.0, True, True),
    "workers": (1, None, False, False),
    "sweep_step": (0.0, None, True, False),
}
_CHOICES = {"snr_mode": SNR_MODES, "surrogate_mode": SURROGATE_MODES}


def _range_text(key: str) -> str:
    low, high, low_open, high_open = _RANGES[key]
    left = "(" if low_open else "["
    right = ")" if high_open else "]"
    low_s = "-inf" if low is None else f"{low:g}"
    high_s = "inf" if high is None else f"{high:g}"
    return f"{left}{low_s}, {high_s}{right}"


def _check_range(key: str, value: float) -> None:
    if key not in _RANGES:
        return
    low, high, low_open, high_open = _RANGES[key]
    ok = True
    if low is not None:
        ok = ok and (value > low if low_open else value >= low)
    if high is not None:
        ok = ok and (value < high if high_open else value <= high)
    if not ok:
        raise ConfigError(f"{key}: must be in {_range_text(key)}, got {value:g}")


def _parse_value(key: str, raw: str) -> int | float | str:
    if key in _INT_KEYS:
        try:
            value: int | float = int(raw)
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {raw!r}") from None
    elif key in _FLOAT_KEYS:
        try:
            value = float(raw)
        except ValueError:
            raise ConfigError(f"{key}: expected a number, got {raw!r}") from None
        if not math.isfinite(value):
            raise ConfigError(f"{key}: must be finite, got {raw!r}")
    else:
        choices = _CHOICES[key]
        if raw not in choices:
            raise ConfigError(f"{key}: must be one of {choices}, got {raw!r}")
        return raw
    _check_range(key, value)
    return value


def _parse_lines(lines: Iterable[str]) -> dict[str, int | float | str]:
    values: dict[str, int | float | str] = {}
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {text!r}")
        key, _, raw = text.partition("=")
        key = key.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _parse_value(key, raw.strip())
    return values


def parse_config(
    text: str = "", overrides: Mapping[str, str] | None = None
) -> ScenarioConfig:
    """Build a ScenarioConfig from a document plus command-line overrides.

    Overrides (e.g. from repeated ``--set key=value``) go through the same
    per-key validation and replace document values.
    """
    values = _parse_lines(text.splitlines())
    for key, raw in (overrides or {}).items():
        if key not in _ALL_KEYS:
            raise ConfigError(f"unknown key {key!r}")
        values[key] = _parse_value(key, raw)

    direct_noise = "noise_power_dbm" in values
    density_given = "noise_density_dbm_hz" in values or "bandwidth_mhz" in values
    if direct_noise and density_given:
        raise ConfigError(
            "give either noise_power_dbm or noise_density_dbm_hz/bandwidth_mhz, not both"
        )
    if not direct_noise:
        density = float(
            values.pop("noise_density_dbm_hz", _DEFAULT_NOISE_DENSITY_DBM_HZ)
        )
        bandwidth = float(values.pop("bandwidth_mhz", _DEFAULT_BANDWIDTH_MHZ))
        values["noise_power_dbm"] = noise_power_dbm_from_density(density, bandwidth)

    frames_explicit = "frames" in values
    config = ScenarioConfig(**values, frames_explicit=frames_explicit)  # type: ignore[arg-type]

    # Cross-field checks that single-key ranges cannot express.
    if config.sweep_start is not None and config.sweep_stop is not None:
        if config.sweep_stop < config.sweep_start:
            raise ConfigError(
                f"sweep_stop: must be >= sweep_start, got {config.sweep_stop:g} < "
                f"{config.sweep_start:g}"
            )
    return config


def with_overrides(config: ScenarioConfig, **changes: object) -> ScenarioConfig:
    """dataclasses.replace with the frames-explicit bookkeeping applied."""
    if "frames" in changes:
        changes.setdefault("frames_explicit", True)
    return replace(config, **changes)  # type: ignore[arg-type]
