"""Compensated accumulation: Neumaier running sums and ordered reductions."""

from __future__ import annotations

import math

import numpy as np
import pytest

from goldbach_short.summation import (
    NeumaierSum,
    fsum_ascending,
    prefix_sums,
    reduce_terms,
)

try:
    from hypothesis import given
    from hypothesis import strategies as st
except ModuleNotFoundError:  # pragma: no cover - environment-specific fallback
    pytest.skip("hypothesis is required for property-based tests", allow_module_level=True)


# Mixed magnitudes are the whole point of compensation; keep clear of
# overflow so failures mean lost low-order bits, not inf arithmetic.
MIXED_FLOATS = st.floats(
    min_value=-1e12, max_value=1e12, allow_nan=False, allow_infinity=False, width=64
)
FLOAT_LISTS = st.lists(MIXED_FLOATS, min_size=1, max_size=200)


def test_neumaier_recovers_cancelled_small_term() -> None:
    """The textbook case plain accumulation gets wrong."""
    acc = NeumaierSum()
    for x in (1.0, 1e100, 1.0, -1e100):
        acc.add(x)
    assert acc.value == 2.0  # naive left-to-right float addition gives 0.0


def test_neumaier_matches_fsum_on_alternating_series() -> None:
    """Running compensation tracks math.fsum through heavy cancellation."""
    terms = [(-1.0) ** n / (n + 1) * 10.0**(n % 17) for n in range(300)]
    acc = NeumaierSum()
    for t in terms:
        acc.add(t)
    assert acc.value == pytest.approx(math.fsum(terms), rel=1e-15, abs=1e-300)


def test_fsum_ascending_orders_by_magnitude() -> None:
    """Ascending-magnitude fsum equals exact fsum on a hard mix."""
    data = np.array([1e16, 3.0, -1e16, 2.0**-40, 7.5, -3.0])
    assert fsum_ascending(data) == math.fsum(data.tolist())


def test_reduce_terms_empty_and_single() -> None:
    """Degenerate inputs reduce to the obvious values."""
    assert reduce_terms(np.array([])) == 0.0
    assert reduce_terms(np.array([42.5])) == 42.5


def test_prefix_sums_consistency() -> None:
    """Prefix array ends at the full reduction and steps by the terms."""
    data = np.array([0.1, -0.7, 1e9, -1e9, 0.3, 2.0**-30])
    prefix = prefix_sums(data)
    assert len(prefix) == len(data)
    assert prefix[-1] == pytest.approx(reduce_terms(data), rel=1e-15)
    np.testing.assert_allclose(np.diff(prefix), data[1:], rtol=1e-9, atol=1e-12)


@given(xs=FLOAT_LISTS)
def test_neumaier_tracks_fsum(xs: list[float]) -> None:
    """Running Neumaier sums stay within an ulp-scale band of math.fsum."""
    acc = NeumaierSum()
    for x in xs:
        acc.add(x)
    exact = math.fsum(xs)
    scale = max(1.0, max(abs(x) for x in xs))
    assert abs(acc.value - exact) <= 16 * np.spacing(scale)


@given(xs=FLOAT_LISTS)
def test_reduce_terms_tracks_fsum(xs: list[float]) -> None:
    """Array reduction agrees with math.fsum at compensation accuracy."""
    exact = math.fsum(xs)
    scale = max(1.0, max(abs(x) for x in xs))
    assert abs(reduce_terms(np.array(xs)) - exact) <= 16 * np.spacing(scale)


@given(xs=FLOAT_LISTS)
def test_reduction_is_permutation_stable(xs: list[float]) -> None:
    """Reversing the input must not move the compensated result."""
    forward = reduce_terms(np.array(xs))
    backward = reduce_terms(np.array(xs[::-1]))
    scale = max(1.0, max(abs(x) for x in xs))
    assert abs(forward - backward) <= 16 * np.spacing(scale)
