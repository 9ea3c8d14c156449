"""Run configuration: threshold registry, key=value config files, and
defaults < file < environment < flags precedence.

Every pass/fail threshold in the package lives in DEFAULT_CONSTANTS so
no check carries a silent number: reports print the resolved registry,
and a config file or flag can override any entry by name.  Ratio
constants were calibrated once against the bundled zero data and the
derived oracle values, then frozen; they are artifact calibration, not
claims about the underlying mathematics.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

from .errors import UsageError

ZEROS_ENV_VAR = "GBSHORT_ZEROS"

# Calibrated thresholds.  "ratio.*" entries gate theorem-level checks
# at roughly 5x the worst ratio observed on the frozen grids, so a
# disabled zero term or a sign slip fails while honest numerical noise
# never does.  The rest are lemma-level scan constants and identity
# tolerances with the values the module contracts document.
DEFAULT_CONSTANTS: dict[str, float] = {
    # Worst genuine ratio on the 9-point reference grid with the
    # 100000-ordinate table is 0.0088; dropping the zero term pushes
    # every H >= N^(2/3) row past 0.03.  0.02 separates the two.
    "ratio.main": 0.02,
    "ratio.average-max": 5.0,
    "ratio.average-endpoint": 5.0,
    "ratio.long-interval": 5.0,
    "ratio.long-cesaro": 5.0,
    # Trend slopes come from 3-point log-log fits of oscillating
    # quantities; +-0.3 is regression noise there, while a wrong power
    # in a bound or a dropped normalization shifts the slope by >= 1.
    "slope.tolerance": 0.5,
    "psi-formula.constant": 2.5,
    "pesato.constant": 5.0,
    "pesato.slope-factor": 1.15,
    "order.constant": 5.0,
    "order.slope-cap": 0.05,
    "t-scan.constant": 2.0,
    "t-scan.sharpness-floor": 0.1,
    "residue.constant": 2.0,
    "mean-square.constant": 5.0,
    "lp.constant": 5.0,
    "split.main-constant": 2.0,
    "split.cross-constant": 2.0,
    "split.remainder-constant": 2.0,
    "identity.rel-tol": 1e-9,
}

_FORMATS = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings for one command dispatch.

    No RNG exists anywhere in the pipeline, so runs are seedless by
    construction; the field is kept to make that an explicit, checked
    property rather than an accident.
    """

    zeros_path: Path | None = None
    max_zeros: int | None = None
    out_dir: Path = Path(".")
    formats: tuple[str, ...] = ("json",)
    threads: int = 1
    seedless: bool = True
    n_values: tuple[int, ...] = ()
    thetas: tuple[float, ...] = ()
    pairs: tuple[tuple[int, int], ...] = ()
    checks: tuple[str, ...] = ("main",)
    constants: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_CONSTANTS))

    def __post_init__(self) -> None:
        for name, value in self.constants.items():
            if name not in DEFAULT_CONSTANTS:
                raise UsageError(f"unknown threshold constant {name!r}")
            if not value > 0:
                raise UsageError(f"threshold constant {name} must be > 0, got {value}")
        for fmt in self.formats:
            if fmt not in _FORMATS:
                raise UsageError(f"unknown output format {fmt!r}; expected csv or json")
        if self.threads < 1:
            raise UsageError(f"threads must be >= 1, got {self.threads}")
        if not self.seedless:
            raise UsageError("randomized runs are not supported; seedless must stay true")
        if self.max_zeros is not None and self.max_zeros < 1:
            raise UsageError(f"max_zeros must be >= 1, got {self.max_zeros}")

    def constant(self, name: str) -> float:
        try:
            return self.constants[name]
        except KeyError:
            raise UsageError(f"unknown threshold constant {name!r}") from None

    def campaign_grid(self) -> list[tuple[int, int, str]]:
        """Explicit pairs plus theta-generated families; must be nonempty."""
        grid: list[tuple[int, int, str]] = [
            (n, h, "explicit") for n, h in self.pairs
        ]
        for theta in self.thetas:
            label = f"theta={theta:g}"
            for n in self.n_values:
                grid.append((n, max(1, int(n**theta)), label))
        if not grid:
            raise UsageError(
                "campaign grid is empty: give explicit pairs or n_values with thetas"
            )
        return grid


_KNOWN_KEYS = {
    "zeros", "max_zeros", "out", "formats", "threads", "seedless",
    "n_values", "thetas", "pairs", "checks",
}


def parse_config_file(path: Path) -> dict[str, str]:
    """Read key=value lines; # starts a comment; unknown keys rejected."""
    values: dict[str, str] = {}
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not (key in _KNOWN_KEYS or key.startswith("constant.")):
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value
    return values


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"config key {key}: expected integer, got {value!r}") from None


def _parse_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise UsageError(f"config key {key}: expected number, got {value!r}") from None


def _parse_list(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def _parse_pairs(key: str, value: str) -> tuple[tuple[int, int], ...]:
    pairs = []
    for item in _parse_list(value):
        if ":" not in item:
            raise UsageError(f"config key {key}: expected N:H pairs, got {item!r}")
        n_text, h_text = item.split(":", 1)
        pairs.append((_parse_int(key, n_text), _parse_int(key, h_text)))
    return tuple(pairs)


def _parse_bool(key: str, value: str) -> bool:
    lowered = value.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise UsageError(f"config key {key}: expected boolean, got {value!r}")


def _apply(base: RunConfig, values: Mapping[str, Any], source: str) -> RunConfig:
    updates: dict[str, Any] = {}
    constants = dict(base.constants)
    touched_constants = False
    for key, value in values.items():
        if value is None:
            continue
        if key.startswith("constant."):
            name = key[len("constant."):]
            if name not in DEFAULT_CONSTANTS:
                raise UsageError(f"{source}: unknown threshold constant {name!r}")
            constants[name] = _parse_float(key, str(value))
            touched_constants = True
        elif key == "zeros":
            updates["zeros_path"] = Path(str(value)).expanduser().resolve()
        elif key == "max_zeros":
            updates["max_zeros"] = _parse_int(key, str(value))
        elif key == "out":
            updates["out_dir"] = Path(str(value)).expanduser().resolve()
        elif key == "formats":
            items = _parse_list(str(value))
            updates["formats"] = tuple(items)
        elif key == "threads":
            updates["threads"] = _parse_int(key, str(value))
        elif key == "seedless":
            updates["seedless"] = _parse_bool(key, str(value))
        elif key == "n_values":
            updates["n_values"] = tuple(
                _parse_int(key, item) for item in _parse_list(str(value))
            )
        elif key == "thetas":
            updates["thetas"] = tuple(
                _parse_float(key, item) for item in _parse_list(str(value))
            )
        elif key == "pairs":
            updates["pairs"] = _parse_pairs(key, str(value))
        elif key == "checks":
            updates["checks"] = tuple(_parse_list(str(value)))
        else:
            raise UsageError(f"{source}: unknown config key {key!r}")
    if touched_constants:
        updates["constants"] = constants
    return replace(base, **updates) if updates else base


def resolve_config(
    config_path: Path | None = None,
    flag_values: Mapping[str, Any] | None = None,
    env: Mapping[str, str] | None = None,
) -> RunConfig:
    """Defaults, then config file, then environment, then flags."""
    env = os.environ if env is None else env
    cfg = RunConfig()
    if config_path is not None:
        cfg = _apply(cfg, parse_config_file(config_path), str(config_path))
    env_zeros = env.get(ZEROS_ENV_VAR)
    if env_zeros:
        cfg = _apply(cfg, {"zeros": env_zeros}, f"${ZEROS_ENV_VAR}")
    if flag_values:
        cfg = _apply(cfg, flag_values, "command line")
    return cfg
