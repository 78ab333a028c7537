import math

import pytest

from uavcap.config import (
    DEFAULT_SEED,
    ConfigError,
    ScenarioConfig,
    parse_config,
    with_overrides,
)


def test_empty_document_is_reference_scenario() -> None:
    config = parse_config("")
    assert config == ScenarioConfig()
    assert config.tx_power_dbm == 58.0
    assert config.noise_power_dbm == pytest.approx(-94.0)
    assert config.seed == DEFAULT_SEED
    assert config.total_symbols == 14
    assert config.frame_curves == (1, 3, 5)


def test_document_round_trip() -> None:
    config = parse_config(
        "tx_power_dbm = 56\nradius_km = 1.3\nsnr_mode = unnormalized\n"
        "frames = 4\nsweep_start = 1\nsweep_stop = 9\nsweep_step = 2\n"
    )
    dumped = "\n".join(f"{key} = {value}" for key, value in config.document_items())
    assert parse_config(dumped) == config


def test_comments_and_blank_lines_ignored() -> None:
    text = "# scenario notes\n\n  # indented comment\npfa = 0.01\n"
    assert parse_config(text).pfa == 0.01


def test_unknown_key_rejected() -> None:
    with pytest.raises(ConfigError, match="line 1: unknown key 'bogus'"):
        parse_config("bogus = 3\n")


def test_duplicate_key_rejected() -> None:
    with pytest.raises(ConfigError, match="line 2: duplicate key 'pfa'"):
        parse_config("pfa = 0.05\npfa = 0.01\n")


def test_malformed_line_rejected() -> None:
    with pytest.raises(ConfigError, match="expected 'key = value'"):
        parse_config("tx_power_dbm 58\n")


def test_out_of_range_value_names_key_and_bound() -> None:
    with pytest.raises(ConfigError, match=r"pfa: must be in \(0, 0.5\), got 1.5"):
        parse_config("pfa = 1.5\n")
    with pytest.raises(ConfigError, match=r"radius_ratio: must be in \(1, inf\]"):
        parse_config("radius_ratio = 1.0\n")
    with pytest.raises(ConfigError, match=r"frames: must be in \[1, inf\]"):
        parse_config("frames = 0\n")


def test_non_numeric_value_rejected() -> None:
    with pytest.raises(ConfigError, match="trials: expected an integer"):
        parse_config("trials = many\n")
    with pytest.raises(ConfigError, match="pfa: expected a number"):
        parse_config("pfa = tiny\n")
    with pytest.raises(ConfigError, match="pfa: must be finite"):
        parse_config("pfa = nan\n")


def test_mode_choices_validated() -> None:
    with pytest.raises(ConfigError, match="snr_mode: must be one of"):
        parse_config("snr_mode = literal\n")
    with pytest.raises(ConfigError, match="surrogate_mode: must be one of"):
        parse_config("surrogate_mode = taylor\n")


def test_noise_forms_mutually_exclusive() -> None:
    with pytest.raises(ConfigError, match="not both"):
        parse_config("noise_power_dbm = -90\nnoise_density_dbm_hz = -170\n")
    with pytest.raises(ConfigError, match="not both"):
        parse_config("noise_power_dbm = -90\nbandwidth_mhz = 50\n")


def test_noise_density_resolves_to_total_power() -> None:
    config = parse_config("noise_density_dbm_hz = -174\nbandwidth_mhz = 100\n")
    assert config.noise_power_dbm == pytest.approx(-94.0)
    # 10 MHz: 10*log10(1e7) = 70 dB over the density
    narrow = parse_config("noise_density_dbm_hz = -174\nbandwidth_mhz = 10\n")
    assert narrow.noise_power_dbm == pytest.approx(-104.0)


def test_explicit_frames_collapses_curves() -> None:
    config = parse_config("frames = 5\n")
    assert config.frames_explicit
    assert config.frame_curves == (5,)
    assert config.total_symbols == 70
    assert ("frames", "5") in config.document_items()


def test_default_frames_not_serialized() -> None:
    keys = [key for key, _ in parse_config("").document_items()]
    assert "frames" not in keys
    assert "noise_power_dbm" in keys
    assert "noise_density_dbm_hz" not in keys


def test_overrides_replace_document_values() -> None:
    config = parse_config("pfa = 0.05\n", overrides={"pfa": "0.02", "frames": "3"})
    assert config.pfa == 0.02
    assert config.frames == 3
    assert config.frames_explicit


def test_override_validation() -> None:
    with pytest.raises(ConfigError, match="unknown key 'power'"):
        parse_config("", overrides={"power": "58"})
    with pytest.raises(ConfigError, match="pd_threshold"):
        parse_config("", overrides={"pd_threshold": "1.0"})


def test_sweep_bounds_ordering() -> None:
    with pytest.raises(ConfigError, match="sweep_stop: must be >= sweep_start"):
        parse_config("sweep_start = 5\nsweep_stop = 2\n")
    config = parse_config("sweep_start = 2\nsweep_stop = 2\n")
    assert config.sweep_start == config.sweep_stop == 2.0


def test_with_overrides_tracks_explicit_frames() -> None:
    base = parse_config("")
    assert with_overrides(base, frames=2).frame_curves == (2,)
    assert with_overrides(base, trials=10).frame_curves == (1, 3, 5)


def test_scenario_factories_consistent() -> None:
    config = parse_config("radius_km = 1.5\nframes = 2\n")
    assert config.region().max_range == 1.5
    assert config.link().tx_power_dbm == 58.0
    assert config.detection().pfa == 0.05
    assert config.plan().master_seed == DEFAULT_SEED
    assert config.query().total_symbols == 28
    assert config.query(frames=1).total_symbols == 14
    assert config.max_elevation_rad == pytest.approx(math.pi / 5.0)
