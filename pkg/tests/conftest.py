"""Shared fixtures: zero tables and the reproducible hypothesis profile."""

from __future__ import annotations

from pathlib import Path

import pytest

from goldbach_short.zeros import ZeroSet, bundled_table_path, load_zeros

try:
    from hypothesis import HealthCheck, settings

    # Derandomized so repeated runs exercise identical cases and the suite
    # output stays byte-stable; deadlines off because the numeric paths
    # have cold-start sieve costs that would trip per-example timers.
    settings.register_profile(
        "reproducible",
        derandomize=True,
        deadline=None,
        suppress_health_check=[HealthCheck.too_slow],
    )
    settings.load_profile("reproducible")
except ModuleNotFoundError:  # pragma: no cover - property tests skip themselves
    pass

REPO_ROOT = Path(__file__).resolve().parent.parent
ZEROS_100K = REPO_ROOT / "data" / "zeros_100k.txt"


@pytest.fixture(scope="session")
def zeros100() -> ZeroSet:
    """The packaged 100-ordinate table (precision 5e-9)."""
    return load_zeros(str(bundled_table_path()))


@pytest.fixture(scope="session")
def zeros100k() -> ZeroSet:
    """The working 100000-ordinate table; required, not optional."""
    if not ZEROS_100K.exists():
        pytest.fail(
            f"{ZEROS_100K} is missing; regenerate with "
            "`python3 scripts/generate_zero_table.py` (about 5 minutes)"
        )
    return load_zeros(str(ZEROS_100K))
