"""HTTP API: endpoint correctness, error mapping, determinism."""

from __future__ import annotations

import math

import pytest
from fastapi.testclient import TestClient

from goldbach_short import __version__
from goldbach_short.service import create_app
from goldbach_short.zero_sums import psi_zero_sum

from oracles import PSI_10, R_6


@pytest.fixture(scope="module")
def client() -> TestClient:
    return TestClient(create_app())


def test_health(client: TestClient) -> None:
    """Liveness plus the schema identifier clients should expect."""
    resp = client.get("/health")
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "ok"
    assert body["version"] == __version__
    assert body["report_schema"] == "gbshort-report/1"


def test_sieve_small_range(client: TestClient) -> None:
    """Prime powers and psi over [1, 10] match the closed forms."""
    resp = client.post(
        "/sieve", json={"start": 1, "end": 10, "include_values": True}
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["positions"] == [2, 3, 4, 5, 7, 8, 9]
    assert body["psi_end"] == pytest.approx(PSI_10, rel=1e-12)
    assert body["log_values"][0] == pytest.approx(math.log(2), rel=1e-12)
    # 4 = 2^2 contributes log 2 again
    assert body["log_values"][2] == pytest.approx(math.log(2), rel=1e-12)


def test_sieve_values_cap(client: TestClient) -> None:
    """Inline value lists are size-capped with a usage error."""
    resp = client.post(
        "/sieve", json={"start": 1, "end": 200_001, "include_values": True}
    )
    assert resp.status_code == 400
    assert resp.json()["kind"] == "UsageError"


def test_sieve_reversed_range_is_422(client: TestClient) -> None:
    """Model validation failures use FastAPI's own error shape."""
    resp = client.post("/sieve", json={"start": 10, "end": 5})
    assert resp.status_code == 422
    body = resp.json()
    assert "detail" in body
    assert "kind" not in body


def test_r_value_frozen(client: TestClient) -> None:
    resp = client.post("/r/value", json={"n": 6})
    assert resp.status_code == 200
    body = resp.json()
    assert body["value"] == pytest.approx(R_6, rel=1e-12)
    assert body["method"] == "direct"


def test_r_window_methods_agree(client: TestClient) -> None:
    """Both window transports return the same values and geometry."""
    fft = client.post("/r/window", json={"N": 500, "H": 20}).json()
    direct = client.post(
        "/r/window", json={"N": 500, "H": 20, "method": "direct"}
    ).json()
    assert fft["n0"] == 480
    assert fft["method"] == "fft"
    assert direct["method"] == "direct"
    assert len(fft["values"]) == 41
    for a, b in zip(fft["values"], direct["values"]):
        assert a == pytest.approx(b, abs=1e-9)


def test_unknown_field_rejected(client: TestClient) -> None:
    """Requests are strict: misspelled fields cannot pass silently."""
    resp = client.post("/r/value", json={"n": 6, "bogus": 1})
    assert resp.status_code == 422
    assert "detail" in resp.json()


def test_zeros_validate_bundled(client: TestClient) -> None:
    """Default source is the bundled table; count check comes back."""
    resp = client.post("/zeros/validate", json={})
    assert resp.status_code == 200
    body = resp.json()
    assert body["count"] == 100
    assert body["passed"] is True
    assert body["count_check"]["name"] == "zero-count"
    assert body["declared_precision"] is not None


def test_zeros_validate_missing_file(client: TestClient) -> None:
    """A bad path is a data error with its kind spelled out."""
    resp = client.post(
        "/zeros/validate", json={"zeros": {"path": "/no/such/table.txt"}}
    )
    assert resp.status_code == 422
    assert resp.json()["kind"] == "ZeroTableError"


def test_zeros_find_low(client: TestClient) -> None:
    """The self-contained finder reproduces the first ordinates."""
    resp = client.post("/zeros/find", json={"T": 50})
    assert resp.status_code == 200
    body = resp.json()
    assert body["count"] == 10
    assert body["gammas"][0] == pytest.approx(14.134725, abs=1e-6)
    assert body["gammas"][1] == pytest.approx(21.022040, abs=1e-6)


def test_zeros_find_cap(client: TestClient) -> None:
    """Heights beyond the finder's supported range are rejected by the
    request model before reaching the library."""
    resp = client.post("/zeros/find", json={"T": 5000})
    assert resp.status_code == 422
    assert "detail" in resp.json()


def test_zero_sum_psi_matches_library(client: TestClient, zeros100) -> None:
    """The endpoint mirrors the library result field for field."""
    resp = client.post("/zero-sum/psi", json={"M": 1000})
    assert resp.status_code == 200
    body = resp.json()
    direct = psi_zero_sum(1000.0, zeros100)
    assert body["value"] == pytest.approx(direct.value, rel=1e-12)
    assert body["terms_used"] == direct.terms_used
    assert body["evaluation_path"] == direct.evaluation_path


def test_zero_sum_second_diff_integral_referee(client: TestClient) -> None:
    """The optional integral cross-check agrees to reporting tolerance."""
    resp = client.post(
        "/zero-sum/second-diff",
        json={"N": 10_000, "H": 100, "integral_check": True},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["integral_rel_diff"] is not None
    assert body["integral_rel_diff"] <= 1e-8
    assert body["terms_used"] == 100


def test_verify_main_passes(client: TestClient) -> None:
    resp = client.post("/verify/main", json={"N": 1000, "H": 31})
    assert resp.status_code == 200
    body = resp.json()
    assert body["check_id"] == "main"
    assert body["passed"] is True
    assert body["ratio"] <= body["constant"]
    assert body["main_term"] == pytest.approx(31 * 1000)


def test_verify_main_bad_geometry(client: TestClient) -> None:
    """H > N is a domain violation, mapped to 422 with its kind."""
    resp = client.post("/verify/main", json={"N": 100, "H": 200})
    assert resp.status_code == 422
    assert resp.json()["kind"] == "SpecViolationError"


def test_verify_main_unknown_constant(client: TestClient) -> None:
    resp = client.post(
        "/verify/main",
        json={"N": 1000, "H": 31, "constants": {"ratio.mian": 0.5}},
    )
    assert resp.status_code == 400
    assert resp.json()["kind"] == "UsageError"


def test_verify_main_constant_override(client: TestClient) -> None:
    """A hostile threshold flips the verdict but not the numbers."""
    resp = client.post(
        "/verify/main",
        json={"N": 1000, "H": 31, "constants": {"ratio.main": 1e-9}},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["passed"] is False
    assert body["constant"] == 1e-9


def test_verify_average(client: TestClient) -> None:
    resp = client.post("/verify/average", json={"N": 2000, "H": 45})
    assert resp.status_code == 200
    body = resp.json()
    assert body["passed"] is True
    assert body["max_report"]["check_id"] == "average-max"
    assert body["endpoint_report"]["check_id"] == "average-endpoint"


def test_verify_long(client: TestClient) -> None:
    resp = client.post("/verify/long", json={"N": 2000})
    assert resp.status_code == 200
    body = resp.json()
    assert body["passed"] is True
    assert body["plain_report"]["check_id"] == "long-interval"
    assert body["cesaro_report"]["check_id"] == "long-cesaro"


def test_lemma_endpoint(client: TestClient) -> None:
    resp = client.post(
        "/verify/lemma/chain", json={"params": {"N": 2000, "H": 50}}
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["lemma_id"] == "chain"
    assert body["passed"] is True
    assert body["results"][0]["name"] == "window-chain"


def test_lemma_unknown_id(client: TestClient) -> None:
    resp = client.post("/verify/lemma/nope", json={})
    assert resp.status_code == 400
    assert resp.json()["kind"] == "UsageError"


def test_campaign_empty_grid_rejected(client: TestClient) -> None:
    resp = client.post("/campaign", json={"checks": ["main"]})
    assert resp.status_code == 422
    assert "detail" in resp.json()


def test_campaign_runs_and_repeats_identically(client: TestClient) -> None:
    """Same request, same bytes: reports carry no timestamps or ids."""
    body = {
        "checks": ["main"],
        "n_values": [1000, 4000, 8000],
        "thetas": [0.5],
    }
    first = client.post("/campaign", json=body)
    second = client.post("/campaign", json=body)
    assert first.status_code == 200
    assert first.content == second.content
    data = first.json()
    assert data["passed"] is True
    assert len(data["reports"]) == 3
    assert data["schema"] == "gbshort-report/1"
    assert "main@theta=0.5" in data["slopes"]
