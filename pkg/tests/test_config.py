import math
import textwrap
from pathlib import Path

import pytest

from kapitza.config import get_settings
from kapitza.errors import ParseError, ValidationError
from kapitza.models import Command, DriveShape, OutputFormat, PotentialKind, ReflectivityMirrors
from kapitza.runner import parse_config, serialize_config


def _write(tmp_path, text: str, name: str = "run.toml"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text), encoding="utf-8")
    return path


# =============================================================================
# Settings
# =============================================================================

def test_settings_defaults():
    settings = get_settings()
    assert settings.grid_half_width == 40.0
    assert settings.grid_points == 401
    assert settings.harmonic_cutoff == 2
    assert settings.bound_localization_threshold == 0.6


def test_settings_read_environment(monkeypatch):
    monkeypatch.setenv("KAPITZA_GRID_POINTS", "101")
    monkeypatch.setenv("KAPITZA_SCAN_WORKERS", "2")
    settings = get_settings()
    assert settings.grid_points == 101
    assert settings.scan_workers == 2


# =============================================================================
# Parsing
# =============================================================================

def test_minimal_floquet_config_gets_defaults(tmp_path):
    path = _write(
        tmp_path,
        """
        command = "floquet"

        [potential]
        v0 = 9.0
        beta = 0.02
        omega = 10.0
        """,
    )
    config = parse_config(path)
    assert config.command == Command.FLOQUET
    assert config.grid.half_width == 40.0
    assert config.grid.point_count == 401
    assert config.floquet.harmonic_cutoff == 2
    assert config.format == OutputFormat.CSV
    assert config.potential.kind == PotentialKind.IMAGINARY


def test_environment_changes_grid_default(tmp_path, monkeypatch):
    monkeypatch.setenv("KAPITZA_GRID_POINTS", "101")
    path = _write(tmp_path, 'command = "veff"\nv0 = 1.0\nbeta = 0.1\nomega = 5.0\n')
    assert parse_config(path).grid.point_count == 101


def test_flat_potential_keys_and_cli_command(tmp_path):
    path = _write(tmp_path, "v0 = 9.0\nbeta = 0.02\nomega = 10.0\n")
    config = parse_config(path, "veff")
    assert config.command == Command.VEFF
    assert config.potential.v0 == 9.0


def test_conflicting_command(tmp_path):
    path = _write(tmp_path, 'command = "veff"\nv0 = 9.0\nbeta = 0.02\nomega = 10.0\n')
    with pytest.raises(ParseError, match="declares command"):
        parse_config(path, "floquet")


def test_potential_keys_in_two_places(tmp_path):
    path = _write(
        tmp_path,
        """
        command = "veff"
        v0 = 9.0

        [potential]
        v0 = 9.0
        beta = 0.02
        omega = 10.0
        """,
    )
    with pytest.raises(ParseError):
        parse_config(path)


def test_square_wave_period_sets_omega(tmp_path):
    path = _write(
        tmp_path,
        """
        command = "evolve"

        [potential]
        v0 = 9.0
        beta = 0.02
        period = 0.5
        """,
    )
    spec = parse_config(path).potential
    assert spec.drive == DriveShape.SQUARE_WAVE
    assert spec.omega == pytest.approx(4 * math.pi)
    assert spec.period == pytest.approx(0.5)


def test_wavelength_sets_wavenumber(tmp_path):
    path = _write(
        tmp_path,
        """
        command = "resonator"

        [resonator]
        spacing = 1.0
        wavelength = 0.5

        [resonator.mirrors]
        model = "reflectivity"
        loss_depth = 0.5
        beta = 0.02
        gain_length = 0.5
        """,
    )
    config = parse_config(path)
    assert config.resonator.wavenumber == pytest.approx(4 * math.pi)
    spec = config.resonator_spec()
    assert isinstance(spec.mirrors, ReflectivityMirrors)
    assert spec.grid == config.grid


def test_json_config(tmp_path):
    path = _write(
        tmp_path,
        '{"command": "scan", "potential": {"v0": 9.0, "beta": 0.02, "omega": 10.0},'
        ' "scan": {"omega_lo": 2.0, "omega_hi": 4.0, "step": 0.5}}',
        name="run.json",
    )
    config = parse_config(path)
    assert config.scan.step == 0.5


def test_serialized_config_reads_back_equal(tmp_path):
    path = _write(
        tmp_path,
        """
        command = "evolve"
        format = "json"

        [potential]
        v0 = 9.0
        beta = 0.02
        period = 0.6
        kind = "real"

        [grid]
        half_width = 20.0
        point_count = 81

        [evolve]
        periods = 3
        initial = "gaussian"
        width = 2.5
        """,
    )
    config = parse_config(path)
    again = parse_config(serialize_config(config, tmp_path / "echo" / "config.json"))
    assert again == config


# =============================================================================
# Rejected Files
# =============================================================================

def test_unknown_key(tmp_path):
    path = _write(tmp_path, 'command = "veff"\nv0 = 9.0\nbeta = 0.02\nomega = 10.0\ncolour = "red"\n')
    with pytest.raises(ParseError, match="unknown key 'colour'"):
        parse_config(path)


def test_unknown_key_in_section(tmp_path):
    path = _write(
        tmp_path,
        """
        command = "veff"
        v0 = 9.0
        beta = 0.02
        omega = 10.0

        [grid]
        points = 11
        """,
    )
    with pytest.raises(ParseError, match="unknown key 'points'") as info:
        parse_config(path)
    assert info.value.details["key"] == "grid.points"


def test_negative_beta(tmp_path):
    path = _write(tmp_path, 'command = "veff"\nv0 = 9.0\nbeta = -1.0\nomega = 10.0\n')
    with pytest.raises(ValidationError, match="beta must be positive"):
        parse_config(path)


def test_negative_amplitude(tmp_path):
    path = _write(tmp_path, 'command = "veff"\nv0 = -9.0\nbeta = 0.02\nomega = 10.0\n')
    with pytest.raises(ValidationError, match="v0 must not be negative"):
        parse_config(path)


def test_missing_section(tmp_path):
    path = _write(tmp_path, 'command = "floquet"\n')
    with pytest.raises(ValidationError, match=r"requires a \[potential\] section"):
        parse_config(path)


def test_both_omega_and_period(tmp_path):
    path = _write(tmp_path, 'command = "evolve"\nv0 = 9.0\nbeta = 0.02\nomega = 10.0\nperiod = 0.5\n')
    with pytest.raises(ValidationError, match="either omega or period"):
        parse_config(path)


def test_reversed_scan_window(tmp_path):
    path = _write(
        tmp_path,
        """
        command = "scan"
        v0 = 9.0
        beta = 0.02
        omega = 10.0

        [scan]
        omega_lo = 8.0
        omega_hi = 2.0
        step = 0.5
        """,
    )
    with pytest.raises(ValidationError, match="omega_hi must not be below omega_lo"):
        parse_config(path)


def test_floquet_dimension_is_checked_at_parse_time(tmp_path, monkeypatch):
    monkeypatch.setenv("KAPITZA_EIG_MAX_DIMENSION", "1000")
    path = _write(tmp_path, 'command = "floquet"\nv0 = 9.0\nbeta = 0.02\nomega = 10.0\n')
    with pytest.raises(ValidationError, match="exceeds eig_max_dimension"):
        parse_config(path)


def test_square_wave_floquet_is_rejected(tmp_path):
    path = _write(tmp_path, 'command = "floquet"\nv0 = 9.0\nbeta = 0.02\nperiod = 0.5\n')
    with pytest.raises(ValidationError, match="sinusoidal drive"):
        parse_config(path)


def test_malformed_files(tmp_path):
    with pytest.raises(ParseError, match="invalid TOML"):
        parse_config(_write(tmp_path, "command = \n"))

    with pytest.raises(ParseError) as info:
        parse_config(_write(tmp_path, '{"command": "veff",\n  "v0": }', name="run.json"))
    assert info.value.details["line"] == 2

    with pytest.raises(ParseError, match="unsupported config format"):
        parse_config(_write(tmp_path, "command: veff\n", name="run.yaml"))

    with pytest.raises(ParseError, match="cannot read config"):
        parse_config(tmp_path / "missing.toml")


# =============================================================================
# Shipped Configs
# =============================================================================

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


@pytest.mark.parametrize("path", sorted(CONFIG_DIR.glob("*.toml")), ids=lambda p: p.stem)
def test_shipped_config_parses(path):
    assert parse_config(path).command is not None


def test_optical_resonator_config_matches_drive_period():
    config = parse_config(CONFIG_DIR / "resonator_optical.toml")
    spec = config.resonator_spec()
    assert spec.wavenumber == pytest.approx(2 * math.pi / 1.064e-3)
    assert spec.spacing / (2 * spec.wavenumber) == pytest.approx(math.pi / 10, rel=1e-6)
    assert spec.grid.half_width == 120.0
