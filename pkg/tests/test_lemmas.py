"""Lemma dispatch table: ids, zero-table requirements, parameter overrides."""

from __future__ import annotations

import pytest

from goldbach_short.errors import UsageError
from goldbach_short.lemmas import LEMMAS, lemma_needs_zeros, run_lemma

EXPECTED_IDS = {
    "chain", "lp", "mean-square", "order", "pesato",
    "psi-formula", "residue", "split", "t-scan",
}

RECORD_KEYS = {"name", "passed", "observed", "bound", "details"}


def test_registry_ids() -> None:
    """The dispatch table is exactly the documented set of lemma ids."""
    assert set(LEMMAS) == EXPECTED_IDS


def test_needs_zeros_flags() -> None:
    """Only the zero-sum lemmas demand a table."""
    with_zeros = {lid for lid in LEMMAS if lemma_needs_zeros(lid)}
    assert with_zeros == {"psi-formula", "pesato", "order"}


def test_unknown_id_rejected() -> None:
    """Typos list the known ids instead of KeyError."""
    with pytest.raises(UsageError, match="pesato"):
        run_lemma("pesatto")
    with pytest.raises(UsageError, match="unknown lemma id"):
        lemma_needs_zeros("nope")


def test_zeros_required_up_front() -> None:
    """A zero-sum lemma without a table fails before any computation."""
    with pytest.raises(UsageError, match="zero table"):
        run_lemma("psi-formula")


def test_t_scan_default_sweeps_offsets() -> None:
    """Default kernel scan covers the four canonical window offsets."""
    records = run_lemma("t-scan", {"N": 2000, "H": 16})
    assert len(records) == 4
    for record in records:
        assert RECORD_KEYS <= set(record)
        assert record["passed"] is True
    offsets = [record["details"]["y"] for record in records]
    assert offsets == [-8, 0, 8, 16]


def test_t_scan_single_offset_param() -> None:
    """An explicit y runs just that offset."""
    records = run_lemma("t-scan", {"N": 2000, "H": 16, "y": 0})
    assert len(records) == 1
    assert records[0]["details"]["y"] == 0


def test_split_returns_four_checks() -> None:
    """The integral decomposition reports all three pieces plus the
    reassembly identity in the shared record shape."""
    records = run_lemma("split", {"N": 600, "H": 24})
    assert len(records) == 4
    names = {record["name"] for record in records}
    assert names == {"split-main", "split-cross", "split-remainder", "split-identity"}
    for record in records:
        assert RECORD_KEYS <= set(record)
        assert record["passed"] is True
        assert "value" in record["details"]
        assert "method" in record["details"]


def test_chain_runs_without_zeros() -> None:
    """The window consistency chain is zero-free."""
    records = run_lemma("chain", {"N": 2000, "H": 50})
    assert len(records) == 1
    assert records[0]["name"] == "window-chain"
    assert records[0]["passed"] is True


def test_residue_param_override() -> None:
    """Parameters reach the runner; the instance shows up in the name."""
    records = run_lemma("residue", {"n": 128, "N": 400})
    assert len(records) == 1
    assert "n=128" in records[0]["name"]
    assert records[0]["passed"] is True


def test_lp_xi_override() -> None:
    """The arc width parameter is forwarded and validated downstream."""
    records = run_lemma("lp", {"N": 3000, "xi": 0.2})
    assert "xi=0.2" in records[0]["name"]
    with pytest.raises(Exception, match="xi"):
        run_lemma("lp", {"N": 3000, "xi": 0.7})


def test_bad_param_type_rejected() -> None:
    """Non-integer sizes are a usage error, not a traceback."""
    with pytest.raises(UsageError, match="must be an integer"):
        run_lemma("chain", {"N": "many"})


def test_constants_override_flips_verdict() -> None:
    """A vanishing threshold forces a failure through the registry."""
    records = run_lemma(
        "mean-square", {"N": 2000}, constants={"mean-square.constant": 1e-12}
    )
    assert records[0]["passed"] is False


def test_psi_formula_with_bundled_table(zeros100) -> None:
    """The dispatch path matches calling the check directly."""
    records = run_lemma(
        "psi-formula", {"m_values": [1000, 10_000]}, zs=zeros100
    )
    assert len(records) == 1
    assert records[0]["passed"] is True
    assert records[0]["name"].startswith("psi-formula")
