"""Arc-integral checks: residues, mean squares, and the window decomposition."""

from __future__ import annotations

import math

import numpy as np
import pytest

from goldbach_short.errors import SpecViolationError
from goldbach_short.circle import (
    IntegralCheck,
    i_decomposition_check,
    lp_bound_check,
    mean_square_check,
    residue_check,
)
from goldbach_short.lambda_core import lambda_values_upto


def test_integral_check_shape() -> None:
    """Discrepancy and pass flag derive from value/reference/bound."""
    good = IntegralCheck(
        name="probe", value=1.0000004, reference=1.0, bound=1e-6, method="test"
    )
    assert good.discrepancy == pytest.approx(4e-7)
    assert good.passed
    bad = IntegralCheck(name="probe", value=1.1, reference=1.0, bound=1e-6, method="test")
    assert not bad.passed
    d = good.to_dict()
    assert set(d) >= {"name", "value", "reference", "discrepancy", "bound", "passed"}


def test_residue_comparison_passes_midrange() -> None:
    """Quadrature around the damped singularity matches the extraction."""
    for n in (50, 128, 333):
        check = residue_check(n, 400)
        assert check.passed, check.to_dict()


def test_mean_square_is_parseval() -> None:
    """The computed value is the literal diagonal sum (Lambda(n)-1)^2 e^{-2n/N}."""
    n = 600
    check = mean_square_check(n)
    assert check.passed
    # rebuild the diagonal independently over the same term count
    terms = check.details["terms"]
    lam = lambda_values_upto(terms)
    m = np.arange(1, terms + 1)
    diagonal = float(np.sum((lam[1:] - 1.0) ** 2 * np.exp(-2.0 * m / n)))
    assert check.value == pytest.approx(diagonal, rel=1e-9)
    assert check.reference == pytest.approx(0.5 * n * math.log(n))


def test_mean_square_synthetic_weights() -> None:
    """Identical coefficient streams leave a mean-square difference of zero."""
    n = 200
    lam = np.ones(30 * n)  # matches the damping profile exactly
    check = mean_square_check(n, lam=lam)
    assert check.value == 0.0
    assert check.passed


def test_short_arc_mean_square_bound() -> None:
    """The arc-restricted mean square sits under N xi (1 + ln 2N xi)^2."""
    for xi in (0.02, 0.2, 0.5):
        check = lp_bound_check(500, xi)
        assert check.passed
        assert f"xi={xi}" in check.name
        assert check.details["arc_points"] >= 2


def test_short_arc_rejects_bad_width() -> None:
    """Arc widths outside (0, 1/2] are refused."""
    with pytest.raises(SpecViolationError, match="xi"):
        lp_bound_check(500, 2.5)
    with pytest.raises(SpecViolationError, match="xi"):
        lp_bound_check(500, 0.0)


def test_window_decomposition_reassembles() -> None:
    """The three arc pieces rebuild the weighted window sum exactly."""
    checks = i_decomposition_check(1200, 34)
    by_name = {c.name: c for c in checks}
    assert set(by_name) == {"split-main", "split-cross", "split-remainder", "split-identity"}
    for c in checks:
        assert c.passed, c.to_dict()
    identity = by_name["split-identity"]
    # the identity piece is a strict numerical statement, not an envelope
    assert identity.discrepancy <= identity.bound <= 1.0


def test_window_decomposition_scales() -> None:
    """Same structure at the larger reference size used by the check suite."""
    checks = i_decomposition_check(2000, 45)
    assert all(c.passed for c in checks)
