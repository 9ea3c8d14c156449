"""Theorem-level assembly: main window check, exact averages, long intervals."""

from __future__ import annotations

import math

import numpy as np
import pytest

from goldbach_short.errors import SpecViolationError
from goldbach_short.goldbach import RWindow, WindowSpec, r_values_upto
from goldbach_short.lambda_core import PsiTable, sieve_window
from goldbach_short.report import json_bytes, payload
from goldbach_short.verify import (
    consistency_chain,
    grid_campaign,
    long_interval_sums,
    main_bound_shape,
    theta_pairs,
    verify_average,
    verify_long_interval,
    verify_main,
)
from goldbach_short.zeros import Computed, ZeroSet

from oracles import mp_psi_sum


def test_long_interval_sums_match_direct_r() -> None:
    """The psi-rearranged accumulation equals literal double sums over R."""
    n = 900
    r = r_values_upto(n)
    plain_direct = float(np.sum(r[: n + 1]))
    weights = 1.0 - np.arange(n + 1) / n
    weighted_direct = float(np.sum(r[: n + 1] * weights))
    plain, weighted = long_interval_sums(n)
    assert plain == pytest.approx(plain_direct, rel=1e-11)
    assert weighted == pytest.approx(weighted_direct, rel=1e-11)


def test_main_bound_shape_dimensions() -> None:
    """N ln^2(2N/H) + H ln^2 N ln 2H, growing with N at fixed H."""
    base = main_bound_shape(10_000, 100)
    assert base == pytest.approx(
        10_000 * math.log(2 * 10_000 / 100) ** 2
        + 100 * math.log(10_000) ** 2 * math.log(200),
        rel=1e-12,
    )
    assert main_bound_shape(20_000, 100) > base
    # in H the two terms pull opposite ways; both stay positive
    assert main_bound_shape(10_000, 200) > 0.0


def test_verify_main_reference_point(zeros100) -> None:
    """The (1e4, 1e2) window verifies against the packaged table."""
    report = verify_main(10_000, 100, zeros100)
    assert report.passed
    assert report.check_id == "main"
    assert report.ratio <= 0.02
    assert report.main_term == pytest.approx(100.0 * 10_000)
    assert "zero_term_uncertainty" in report.notes
    assert report.notes["r_method"] == "fft"
    d = report.to_dict()
    assert d["inputs"]["N"] == 10_000 and d["inputs"]["H"] == 100


def test_verify_main_better_table_tightens_zero_term(zeros100, zeros100k) -> None:
    """More zeros shrink the truncation uncertainty, not just shift it."""
    small = verify_main(10_000, 100, zeros100)
    big = verify_main(10_000, 100, zeros100k)
    assert big.notes["zero_term_uncertainty"] < small.notes["zero_term_uncertainty"]
    assert big.passed


def test_verify_main_rejects_bad_window(zeros100) -> None:
    """H above N violates the window contract before any computation."""
    with pytest.raises(SpecViolationError):
        verify_main(100, 101, zeros100)


def test_synthetic_average_summand_vanishes() -> None:
    """If R were exactly 2 psi - n on the window, both averages are zero."""
    spec = WindowSpec(3000, 60)
    table = PsiTable.from_window(sieve_window(1, spec.hi))
    xs = np.arange(spec.lo, spec.hi + 1)
    synthetic = RWindow(
        spec, values=2.0 * table.values(xs) - xs, method="synthetic"
    )
    rep_max, rep_end = verify_average(spec.N, spec.H, rwin=synthetic, psi_table=table)
    assert rep_max.lhs == 0.0
    assert rep_end.lhs == 0.0
    assert rep_max.passed and rep_end.passed


def test_verify_average_real_window() -> None:
    """Genuine R data stays far inside both damped-average envelopes."""
    rep_max, rep_end = verify_average(20_000, 141)
    assert rep_max.passed and rep_end.passed
    assert rep_max.ratio < 0.1 and rep_end.ratio < 0.1
    assert rep_max.inputs["argmax_y"] in range(-141, 141)


def test_verify_long_interval_zero_terms(zeros100) -> None:
    """Both long-interval reports carry the oracle-checked zero sums."""
    plain, weighted = verify_long_interval(5000, zeros100)
    assert plain.passed and weighted.passed
    assert plain.zero_term == pytest.approx(
        -2.0 * mp_psi_sum(zeros100.gammas, 5000.0, order=2), rel=1e-9
    )
    assert weighted.zero_term == pytest.approx(
        -2.0 * mp_psi_sum(zeros100.gammas, 5000.0, order=3), rel=1e-9
    )
    assert plain.main_term == pytest.approx(0.5 * 5000**2)
    assert weighted.main_term == pytest.approx(5000**2 / 6.0)


def test_consistency_chain_closes() -> None:
    """The three window accountings of t_H-weighted mass reconcile exactly."""
    check = consistency_chain(2000, 50)
    assert check.passed, check.describe()
    assert check.observed <= check.bound


def test_theta_pairs_layout() -> None:
    """(N, floor(N^theta), label) triples in deterministic order."""
    pairs = theta_pairs([100, 400], [0.5, 1.0])
    assert (100, 10, "theta=0.5") in pairs
    assert (400, 20, "theta=0.5") in pairs
    assert (400, 400, "theta=1") in pairs
    assert len(pairs) == 4


def test_campaign_rows_and_slopes(zeros100) -> None:
    """A small campaign produces ordered rows and per-family trend slopes."""
    # N values picked where the 100-ordinate table's truncation noise
    # stays inside ratio.main; 2000 would fail on truncation alone
    pairs = theta_pairs([1000, 4000, 8000], [0.5])
    campaign = grid_campaign(["main", "long-interval"], pairs, zeros100)
    assert len(campaign.rows) == 6
    checks = [row.check_id for row in campaign.rows]
    assert checks == sorted(checks)  # grouped by check, then N ascending
    assert "main@theta=0.5" in campaign.slopes
    assert "main@theta=0.5:error" in campaign.slopes
    assert "main@theta=0.5:bound" in campaign.slopes
    assert campaign.passed


def test_campaign_isolation_records_failures(zeros100) -> None:
    """A row that raises is recorded as an error; the rest still run."""
    pairs = [(1000, 100, "ok"), (50, 100, "broken")]  # H > N in the second
    campaign = grid_campaign(["main"], pairs, zeros100)
    errors = [row for row in campaign.rows if row.error]
    fine = [row for row in campaign.rows if row.report is not None]
    assert len(errors) == 1 and "H=100" in errors[0].error
    assert len(fine) == 1 and fine[0].report.passed
    assert not campaign.passed  # an errored row fails the campaign


def test_campaign_rejects_unknown_check(zeros100) -> None:
    """Unknown check names fail fast instead of silently dropping."""
    with pytest.raises(SpecViolationError, match="unknown campaign check"):
        grid_campaign(["nonsense"], [(100, 10, "x")], zeros100)


def test_campaign_payload_is_deterministic(zeros100) -> None:
    """Identical campaigns serialize to identical bytes."""
    pairs = theta_pairs([500, 1000], [0.5])
    meta = {"threads": 1, "constants": {}, "zeros": {"count": len(zeros100)}}
    a = json_bytes(payload(grid_campaign(["main"], pairs, zeros100), meta))
    b = json_bytes(payload(grid_campaign(["main"], pairs, zeros100), meta))
    assert a == b


def test_empty_zero_set_ablation_fails_settled_grid(zeros100k) -> None:
    """Removing the zero term breaks the main check where it matters."""
    empty = ZeroSet(np.array([]), Computed("ablation"))
    pairs = [(100_000, 2154, "theta=0.666667")]
    genuine = grid_campaign(["main"], pairs, zeros100k)
    ablated = grid_campaign(["main"], pairs, empty)
    assert genuine.passed
    assert not ablated.passed