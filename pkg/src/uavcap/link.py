"""Radar link budget: path loss, pathloss constant, per-target and mean SNR.

Unit conventions (strict): frequency in MHz, distance in km, RCS in m^2,
powers in linear mW internally. dB and dBm appear only at the boundary of
this module (dataclass fields, conversion helpers). The monostatic path
loss model is

    PL_dB(d) = 103.4 + 20 log10(f_MHz) + 40 log10(d_km) - 10 log10(rcs_m2)

equivalently beta^2(d) = 1 / (eps_pl * d^4) with the pathloss constant
eps_pl = 10^10.34 * f_MHz^2 / rcs_m2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import SensingRegion, expected_inverse_quartic_range

SNR_MODES = ("normalized", "unnormalized")


def db_to_linear(db: float) -> float:
    """Power ratio from dB."""
    return 10.0 ** (db / 10.0)


def linear_to_db(value: float) -> float:
    """dB from a positive power ratio."""
    if not value > 0.0:
        raise ValueError(f"value must be > 0, got {value}")
    return 10.0 * math.log10(value)


def dbm_to_mw(dbm: float) -> float:
    """Power in mW from dBm."""
    return 10.0 ** (dbm / 10.0)


def noise_power_dbm_from_density(density_dbm_hz: float, bandwidth_mhz: float) -> float:
    """Total noise power over the band: density + 10 log10(bandwidth in Hz)."""
    if not bandwidth_mhz > 0.0:
        raise ValueError(f"bandwidth_mhz must be > 0, got {bandwidth_mhz}")
    return density_dbm_hz + 10.0 * math.log10(bandwidth_mhz * 1e6)


@dataclass(frozen=True)
class RadarLinkParams:
    """Scenario-level link parameters.

    combined_gain_db is the lumped array plus beamforming gain kappa in dB;
    its linear amplitude value is 10^(dB/10) and kappa^2 multiplies SNR.
    cpi_symbols is the number of coherently integrated sensing symbols N;
    uavs_per_symbol is the number of targets K served per symbol (the
    per-target transmit power share is tx_power / K).
    """

    tx_power_dbm: float = 58.0
    combined_gain_db: float = 22.5
    noise_power_dbm: float = -94.0
    carrier_freq_mhz: float = 4900.0
    rcs_m2: float = 0.01
    cpi_symbols: int = 3
    uavs_per_symbol: int = 1

    def __post_init__(self) -> None:
        if not self.carrier_freq_mhz > 0.0:
            raise ValueError(f"carrier_freq_mhz must be > 0, got {self.carrier_freq_mhz}")
        if not self.rcs_m2 > 0.0:
            raise ValueError(f"rcs_m2 must be > 0, got {self.rcs_m2}")
        if self.cpi_symbols < 1:
            raise ValueError(f"cpi_symbols must be >= 1, got {self.cpi_symbols}")
        if self.uavs_per_symbol < 1:
            raise ValueError(f"uavs_per_symbol must be >= 1, got {self.uavs_per_symbol}")

    @property
    def tx_power_mw(self) -> float:
        return dbm_to_mw(self.tx_power_dbm)

    @property
    def noise_power_mw(self) -> float:
        return dbm_to_mw(self.noise_power_dbm)

    @property
    def gain_amplitude(self) -> float:
        """Linear amplitude kappa."""
        return db_to_linear(self.combined_gain_db)


@dataclass(frozen=True)
class PathlossConstant:
    """eps_pl with the units it was derived under pinned alongside the value."""

    value: float
    freq_unit: str = "MHz"
    distance_unit: str = "km"
    rcs_unit: str = "m^2"


def path_loss_db(freq_mhz: float, distance_km: float, rcs_m2: float) -> float:
    """Monostatic (two-way) path loss in dB; rejects non-positive arguments."""
    if not freq_mhz > 0.0:
        raise ValueError(f"freq_mhz must be > 0, got {freq_mhz}")
    if not distance_km > 0.0:
        raise ValueError(f"distance_km must be > 0, got {distance_km}")
    if not rcs_m2 > 0.0:
        raise ValueError(f"rcs_m2 must be > 0, got {rcs_m2}")
    return (
        103.4
        + 20.0 * math.log10(freq_mhz)
        + 40.0 * math.log10(distance_km)
        - 10.0 * math.log10(rcs_m2)
    )


def pathloss_constant(freq_mhz: float, rcs_m2: float) -> PathlossConstant:
    """eps_pl = 10^10.34 * f^2 / rcs so that beta^2(d) = 1/(eps_pl d^4).

    Consistency with path_loss_db: 10 log10(value * d^4) == path_loss_db(f, d, rcs)
    for every d.
    """
    if not freq_mhz > 0.0:
        raise ValueError(f"freq_mhz must be > 0, got {freq_mhz}")
    if not rcs_m2 > 0.0:
        raise ValueError(f"rcs_m2 must be > 0, got {rcs_m2}")
    return PathlossConstant(10.0**10.34 * freq_mhz**2 / rcs_m2)


def path_gain_squared(params: RadarLinkParams, distance_km: float) -> float:
    """beta^2(d), the two-way linear power gain at range d."""
    eps_pl = pathloss_constant(params.carrier_freq_mhz, params.rcs_m2).value
    if not distance_km > 0.0:
        raise ValueError(f"distance_km must be > 0, got {distance_km}")
    return 1.0 / (eps_pl * distance_km**4)


def per_uav_snr(params: RadarLinkParams, distance_km: float) -> float:
    """Post-integration SNR of one target at fixed range d (linear).

    kappa^2 N (P_T / K) beta^2(d) / sigma^2 with beta^2 from the pathloss
    constant; coherent integration over N symbols contributes the factor N.
    """
    kappa = params.gain_amplitude
    return (
        kappa
        * kappa
        * params.cpi_symbols
        * (params.tx_power_mw / params.uavs_per_symbol)
        * path_gain_squared(params, distance_km)
        / params.noise_power_mw
    )


def _check_snr_mode(mode: str) -> None:
    if mode not in SNR_MODES:
        raise ValueError(f"mode must be one of {SNR_MODES}, got {mode!r}")


def mean_single_uav_snr(
    params: RadarLinkParams, region: SensingRegion, mode: str = "normalized"
) -> float:
    """Mean over the region of per_uav_snr for one target (linear).

    Closed form: kappa^2 N P_T E[d^-4] / (K eps_pl sigma^2). In
    ``"unnormalized"`` mode the value carries the extra sin(max_elevation)
    factor of the unnormalized density, i.e. it is the integral of
    per_uav_snr against that density rather than a true expectation.

    eps_pl is written out inline rather than routed through
    pathloss_constant so that this closed form and the sampling route stay
    independent (a unit defect on either side shows up as a mismatch).
    """
    _check_snr_mode(mode)
    kappa = params.gain_amplitude
    eps_pl = 10.0**10.34 * params.carrier_freq_mhz**2 / params.rcs_m2
    value = (
        kappa
        * kappa
        * params.cpi_symbols
        * (params.tx_power_mw / params.uavs_per_symbol)
        * expected_inverse_quartic_range(region)
        / (eps_pl * params.noise_power_mw)
    )
    if mode == "unnormalized":
        value *= math.sin(region.max_elevation)
    return value


def mean_multi_uav_snr(
    params: RadarLinkParams,
    region: SensingRegion,
    total_symbols: int,
    num_uavs: int,
    mode: str = "normalized",
) -> float:
    """Mean per-target SNR when total_symbols sensing symbols are split evenly
    across num_uavs targets (linear).

    Each target gets N = total_symbols * K / num_uavs coherent symbols at
    power P_T / K, so K cancels and the value is
    kappa^2 T P_T E[d^-4] / (L eps_pl sigma^2) (times sin(max_elevation)
    in ``"unnormalized"`` mode). Reduces to mean_single_uav_snr when
    total_symbols * K == cpi_symbols * num_uavs.
    """
    _check_snr_mode(mode)
    if total_symbols < 1:
        raise ValueError(f"total_symbols must be >= 1, got {total_symbols}")
    if num_uavs < 1:
        raise ValueError(f"num_uavs must be >= 1, got {num_uavs}")
    kappa = params.gain_amplitude
    eps_pl = 10.0**10.34 * params.carrier_freq_mhz**2 / params.rcs_m2
    value = (
        kappa
        * kappa
        * (total_symbols / num_uavs)
        * params.tx_power_mw
        * expected_inverse_quartic_range(region)
        / (eps_pl * params.noise_power_mw)
    )
    if mode == "unnormalized":
        value *= math.sin(region.max_elevation)
    return value
