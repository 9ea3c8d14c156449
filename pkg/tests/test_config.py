"""Config resolution: defaults, key=value files, environment, flag overrides."""

from __future__ import annotations

import pytest

from goldbach_short.config import (
    DEFAULT_CONSTANTS,
    ZEROS_ENV_VAR,
    RunConfig,
    parse_config_file,
    resolve_config,
)
from goldbach_short.errors import UsageError


def write_config(tmp_path, text: str):
    path = tmp_path / "run.conf"
    path.write_text(text)
    return path


def test_defaults_are_complete() -> None:
    """Every gate the package applies has a named entry with a sane value."""
    cfg = resolve_config()
    assert cfg.constants == DEFAULT_CONSTANTS
    assert cfg.seedless is True
    assert cfg.threads >= 1
    assert set(cfg.formats) <= {"csv", "json"}
    for name, value in DEFAULT_CONSTANTS.items():
        assert value > 0, name


def test_file_overrides_defaults(tmp_path) -> None:
    """A key=value file replaces the touched entries and nothing else."""
    path = write_config(
        tmp_path,
        "max_zeros = 500\nconstant.ratio.main = 0.33\n# comment line\nthreads=2\n",
    )
    cfg = resolve_config(config_path=path)
    assert cfg.max_zeros == 500
    assert cfg.threads == 2
    assert cfg.constants["ratio.main"] == 0.33
    assert cfg.constants["ratio.long-cesaro"] == DEFAULT_CONSTANTS["ratio.long-cesaro"]


def test_env_beats_file_for_zeros(tmp_path) -> None:
    """The environment variable outranks the file's zeros entry."""
    path = write_config(tmp_path, "zeros = /from/file.txt\n")
    cfg = resolve_config(config_path=path, env={ZEROS_ENV_VAR: "/from/env.txt"})
    assert str(cfg.zeros_path) == "/from/env.txt"


def test_flags_beat_everything(tmp_path) -> None:
    """Flag values win over both the file and the environment."""
    path = write_config(tmp_path, "zeros = /from/file.txt\nthreads = 2\n")
    cfg = resolve_config(
        config_path=path,
        flag_values={"zeros": "/from/flag.txt", "threads": 5},
        env={ZEROS_ENV_VAR: "/from/env.txt"},
    )
    assert str(cfg.zeros_path) == "/from/flag.txt"
    assert cfg.threads == 5


def test_unknown_file_key_rejected(tmp_path) -> None:
    """Misspelled keys are refused with the offending name."""
    path = write_config(tmp_path, "max_zeroes = 10\n")
    with pytest.raises(UsageError, match="max_zeroes"):
        parse_config_file(path)


def test_unknown_constant_rejected(tmp_path) -> None:
    """Constants must exist in the registry to be overridden."""
    path = write_config(tmp_path, "constant.ratio.mian = 0.5\n")
    with pytest.raises(UsageError, match="ratio.mian"):
        resolve_config(config_path=path)


def test_malformed_line_rejected(tmp_path) -> None:
    """Lines without '=' are refused, not skipped."""
    path = write_config(tmp_path, "threads\n")
    with pytest.raises(UsageError):
        parse_config_file(path)


def test_pairs_parsing(tmp_path) -> None:
    """Explicit N:H pairs parse into integer tuples in order."""
    path = write_config(tmp_path, "pairs = 100:10, 2000:45\n")
    cfg = resolve_config(config_path=path)
    assert cfg.pairs == ((100, 10), (2000, 45))


def test_bad_pair_rejected(tmp_path) -> None:
    """Pairs with missing halves are refused."""
    path = write_config(tmp_path, "pairs = 100\n")
    with pytest.raises(UsageError, match="pair"):
        resolve_config(config_path=path)


def test_formats_validated(tmp_path) -> None:
    """Only the documented report formats are accepted."""
    path = write_config(tmp_path, "formats = csv,xml\n")
    with pytest.raises(UsageError, match="xml"):
        resolve_config(config_path=path)


def test_campaign_grid_expansion() -> None:
    """The grid is theta pairs when no explicit pairs are given."""
    cfg = resolve_config(
        flag_values={"n_values": "100,400", "thetas": "0.5"}
    )
    grid = cfg.campaign_grid()
    assert (100, 10, "theta=0.5") in grid
    assert (400, 20, "theta=0.5") in grid


def test_campaign_grid_explicit_pairs_win() -> None:
    """Explicit pairs suppress the theta expansion."""
    cfg = resolve_config(flag_values={"pairs": "123:11"})
    grid = cfg.campaign_grid()
    assert len(grid) == 1
    assert grid[0][:2] == (123, 11)


def test_run_config_is_frozen() -> None:
    """Resolved settings are immutable snapshots."""
    cfg = resolve_config()
    with pytest.raises(Exception):
        cfg.threads = 99  # type: ignore[misc]
    assert isinstance(cfg, RunConfig)
