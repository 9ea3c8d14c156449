"""Zero tables, the half-line evaluator, and low-height zero finding."""

from __future__ import annotations

import numpy as np
import pytest

from goldbach_short.errors import (
    EmptyZeroSetError,
    OrderingViolationError,
    SpecViolationError,
    ZeroTableError,
)
from goldbach_short.zeros import (
    Computed,
    DEFAULT_TABLE_PRECISION,
    FileTable,
    ZeroSet,
    bundled_table_path,
    count_check,
    count_estimate,
    count_sweep,
    find_zeros_low,
    hardy_z,
    load_zeros,
    zeta_half_line,
)

from oracles import mp_zeta_half

GAMMA_1 = 14.134725142
GAMMA_2 = 21.022039639


def write_table(tmp_path, lines: list[str], name: str = "table.txt") -> str:
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def test_bundled_table_loads() -> None:
    """The packaged fixture: 100 ascending ordinates at declared 5e-9."""
    zs = load_zeros(str(bundled_table_path()))
    assert len(zs) == 100
    assert zs.gammas[0] == pytest.approx(GAMMA_1, abs=1e-6)
    assert zs.gammas[1] == pytest.approx(GAMMA_2, abs=1e-6)
    assert zs.declared_precision == 5e-9
    assert np.all(np.diff(zs.gammas) > 0)


def test_load_parses_precision_header(tmp_path) -> None:
    """A '# precision:' comment becomes the declared accuracy."""
    path = write_table(tmp_path, ["# precision: 2.5e-8", "14.134725142", "21.022039639"])
    zs = load_zeros(path)
    assert zs.declared_precision == 2.5e-8
    assert isinstance(zs.source, FileTable)


def test_load_defaults_precision_when_absent(tmp_path) -> None:
    """Tables without a declaration get the documented default."""
    path = write_table(tmp_path, ["14.134725142", "21.022039639"])
    assert load_zeros(path).declared_precision == DEFAULT_TABLE_PRECISION


def test_load_rejects_disorder_with_line_number(tmp_path) -> None:
    """Out-of-order ordinates name the offending line."""
    path = write_table(tmp_path, ["14.134725142", "25.0", "21.022039639"])
    with pytest.raises(OrderingViolationError, match="line 3"):
        load_zeros(path)


def test_load_rejects_garbage_with_line_number(tmp_path) -> None:
    """Non-numeric content names the offending line."""
    path = write_table(tmp_path, ["14.134725142", "twenty-one"])
    with pytest.raises(ZeroTableError) as err:
        load_zeros(path)
    assert err.value.line_number == 2


def test_load_rejects_empty_table(tmp_path) -> None:
    """A comments-only file is an empty table, which is refused."""
    path = write_table(tmp_path, ["# nothing here"])
    with pytest.raises(EmptyZeroSetError):
        load_zeros(path)


def test_load_missing_file() -> None:
    """A missing path is a table error, not a bare OSError."""
    with pytest.raises(ZeroTableError, match="no-such-table"):
        load_zeros("/nonexistent/no-such-table.txt")


def test_zero_set_validation() -> None:
    """Shape, positivity, ordering, and the no-zero-below-14 floor."""
    with pytest.raises(SpecViolationError):
        ZeroSet(np.array([[14.5]]), Computed("test"))
    with pytest.raises(SpecViolationError):
        ZeroSet(np.array([-3.0, 14.5]), Computed("test"))
    with pytest.raises(OrderingViolationError):
        ZeroSet(np.array([15.0, 14.9]), Computed("test"))
    with pytest.raises(SpecViolationError, match="no zero lies that low"):
        ZeroSet(np.array([2.0, 15.0]), Computed("test"))
    zs = ZeroSet(np.array([14.5, 21.5]), Computed("test"))
    with pytest.raises(ValueError):
        zs.gammas[0] = 99.0  # ordinates are frozen after validation


def test_zero_set_slicing_helpers() -> None:
    """count_below / below / first agree with each other."""
    zs = load_zeros(str(bundled_table_path()))
    assert zs.count_below(100.0) == 29
    assert len(zs.below(100.0)) == 29
    assert zs.below(100.0).height < 100.0
    assert len(zs.first(7)) == 7
    assert zs.first(7).gammas[-1] == zs.gammas[6]
    empty = ZeroSet(np.array([]), Computed("test"))
    assert len(empty) == 0 and empty.height == 0.0
    with pytest.raises(EmptyZeroSetError):
        empty.require_nonempty()


def test_half_line_evaluator_against_reference() -> None:
    """zeta(1/2 + it) matches the 50-digit referee at scattered heights."""
    ts = np.array([2.0, 14.0, 33.3, 77.7, 150.0, 512.5])
    values = zeta_half_line(ts)
    for t, got in zip(ts, values):
        want = mp_zeta_half(float(t))
        assert got == pytest.approx(want, rel=1e-9, abs=1e-11)


def test_hardy_z_is_real_rotation() -> None:
    """Z(t) is real with |Z| = |zeta(1/2 + it)|."""
    ts = np.array([15.0, 40.0, 99.5, 300.25])
    z = hardy_z(ts)
    assert np.all(np.isreal(z))
    np.testing.assert_allclose(np.abs(z), np.abs(zeta_half_line(ts)), rtol=1e-9)


def test_find_zeros_low_reproduces_first_ordinates() -> None:
    """Sign-scan zeros match the packaged table through height 100."""
    found = find_zeros_low(100.0)
    assert len(found) == 29
    assert isinstance(found.source, Computed)
    table = load_zeros(str(bundled_table_path()))
    np.testing.assert_allclose(found.gammas, table.gammas[:29], atol=1e-6)


def test_find_zeros_low_input_caps() -> None:
    """Height and step caps hold the scan inside its validated regime."""
    with pytest.raises(SpecViolationError, match="T <= 500"):
        find_zeros_low(10_000.0)
    with pytest.raises(SpecViolationError, match="grid step"):
        find_zeros_low(50.0, grid_step=0.5)


def test_count_estimate_tracks_table() -> None:
    """The smooth count stays within its stated slack along the fixture."""
    zs = load_zeros(str(bundled_table_path()))
    check = count_check(zs, zs.height)
    assert check.passed
    assert check.name == "zero-count"
    # every sweep checkpoint obeys the same envelope
    assert all(c.passed for c in count_sweep(zs, points=32))
    # the estimate is increasing in T
    ts = np.linspace(20.0, zs.height, 40)
    est = [count_estimate(float(t)) for t in ts]
    assert all(b > a for a, b in zip(est, est[1:]))


def test_working_table_count_check(zeros100k) -> None:
    """The full generated table passes the count comparison end to end."""
    check = count_check(zeros100k, zeros100k.height)
    assert check.passed
    assert len(zeros100k) == 100_000
    assert zeros100k.gammas[0] == pytest.approx(GAMMA_1, abs=1e-6)
