"""Named lemma-level checks behind one dispatch table.

Each entry runs a statement-scale check (kernel bound scan, identity,
mean square, ...) with parameters defaulting to its canonical instance,
pulling pass/fail thresholds from the resolved constants registry.
Runners return a list of plain dicts so the CLI and the service share
one output shape with the theorem-level reports.
"""

from __future__ import annotations

from typing import Any, Callable, Mapping

from . import circle, exp_sums, verify, zero_sums
from .config import DEFAULT_CONSTANTS
from .errors import UsageError
from .lambda_core import PsiTable, sieve_window
from .zeros import ZeroSet


def _get(params: Mapping[str, Any], key: str, default: Any) -> Any:
    value = params.get(key)
    return default if value is None else value


def _int(params: Mapping[str, Any], key: str, default: int) -> int:
    try:
        return int(_get(params, key, default))
    except (TypeError, ValueError):
        raise UsageError(f"lemma parameter {key} must be an integer") from None


def _float(params: Mapping[str, Any], key: str, default: float) -> float:
    try:
        return float(_get(params, key, default))
    except (TypeError, ValueError):
        raise UsageError(f"lemma parameter {key} must be a number") from None


def _int_list(params: Mapping[str, Any], key: str, default: list[int]) -> list[int]:
    raw = _get(params, key, default)
    if isinstance(raw, str):
        raw = [item for item in raw.split(",") if item.strip()]
    try:
        return [int(item) for item in raw]
    except (TypeError, ValueError):
        raise UsageError(f"lemma parameter {key} must be a list of integers") from None


def _run_psi_formula(
    params: Mapping[str, Any], zs: ZeroSet | None, constants: Mapping[str, float]
) -> list[dict[str, Any]]:
    result = zero_sums.psi_formula_check(
        _int_list(params, "m_values", [1000, 10_000, 100_000, 1_000_000]),
        zs,
        constant=constants["psi-formula.constant"],
    )
    return [result.to_dict()]


def _run_pesato(
    params: Mapping[str, Any], zs: ZeroSet | None, constants: Mapping[str, float]
) -> list[dict[str, Any]]:
    n = _int(params, "N", 10_000)
    h = _int(params, "H", 100)
    psi_table = PsiTable.from_window(sieve_window(1, n + h))
    result = zero_sums.pesato_identity_check(
        n, h, zs, psi_table,
        constant=constants["pesato.constant"],
        slope_factor=constants["pesato.slope-factor"],
    )
    return [result.to_dict()]


def _run_order(
    params: Mapping[str, Any], zs: ZeroSet | None, constants: Mapping[str, float]
) -> list[dict[str, Any]]:
    result = zero_sums.order_of_magnitude_check(
        _int(params, "N", 10_000),
        _int(params, "H", 100),
        zs,
        constant=constants["order.constant"],
        slope_cap=constants["order.slope-cap"],
    )
    return [result.to_dict()]


def _run_t_scan(
    params: Mapping[str, Any], zs: ZeroSet | None, constants: Mapping[str, float]
) -> list[dict[str, Any]]:
    n = _int(params, "N", 10_000)
    h = _int(params, "H", 64)
    y_raw = params.get("y")
    ys = [-(h // 2), 0, h // 2, h] if y_raw is None else [int(y_raw)]
    out = []
    for y in ys:
        result = exp_sums.t_bound_scan(
            n, h, y,
            constant=constants["t-scan.constant"],
            sharpness_floor=constants["t-scan.sharpness-floor"],
        )
        out.append(result.to_dict())
    return out


def _run_residue(
    params: Mapping[str, Any], zs: ZeroSet | None, constants: Mapping[str, float]
) -> list[dict[str, Any]]:
    result = circle.residue_check(
        _int(params, "n", 100),
        _int(params, "N", 100),
        constant=constants["residue.constant"],
    )
    return [result.to_dict()]


def _run_mean_square(
    params: Mapping[str, Any], zs: ZeroSet | None, constants: Mapping[str, float]
) -> list[dict[str, Any]]:
    result = circle.mean_square_check(
        _int(params, "N", 10_000), constant=constants["mean-square.constant"]
    )
    return [result.to_dict()]


def _run_lp(
    params: Mapping[str, Any], zs: ZeroSet | None, constants: Mapping[str, float]
) -> list[dict[str, Any]]:
    result = circle.lp_bound_check(
        _int(params, "N", 10_000),
        _float(params, "xi", 0.01),
        constant=constants["lp.constant"],
    )
    return [result.to_dict()]


def _run_split(
    params: Mapping[str, Any], zs: ZeroSet | None, constants: Mapping[str, float]
) -> list[dict[str, Any]]:
    checks = circle.i_decomposition_check(
        _int(params, "N", 2000),
        _int(params, "H", 40),
        _int(params, "y", _int(params, "H", 40)),
        constant_main=constants["split.main-constant"],
        constant_psi=constants["split.cross-constant"],
        constant_cubic=constants["split.remainder-constant"],
    )
    # fold the integral-comparison shape into the common check record
    return [
        {
            "name": check.name,
            "passed": check.passed,
            "observed": check.discrepancy,
            "bound": check.bound,
            "details": {
                **check.details,
                "value": check.value,
                "reference": check.reference,
                "method": check.method,
            },
        }
        for check in checks
    ]


def _run_chain(
    params: Mapping[str, Any], zs: ZeroSet | None, constants: Mapping[str, float]
) -> list[dict[str, Any]]:
    result = verify.consistency_chain(
        _int(params, "N", 10_000),
        _int(params, "H", 100),
        identity_rel_tol=constants["identity.rel-tol"],
    )
    return [result.to_dict()]


_Runner = Callable[
    [Mapping[str, Any], ZeroSet | None, Mapping[str, float]], list[dict[str, Any]]
]

# id -> (runner, needs a zero table)
LEMMAS: dict[str, tuple[_Runner, bool]] = {
    "psi-formula": (_run_psi_formula, True),
    "pesato": (_run_pesato, True),
    "order": (_run_order, True),
    "t-scan": (_run_t_scan, False),
    "residue": (_run_residue, False),
    "mean-square": (_run_mean_square, False),
    "lp": (_run_lp, False),
    "split": (_run_split, False),
    "chain": (_run_chain, False),
}


def lemma_needs_zeros(lemma_id: str) -> bool:
    if lemma_id not in LEMMAS:
        raise UsageError(
            f"unknown lemma id {lemma_id!r}; known: {', '.join(sorted(LEMMAS))}"
        )
    return LEMMAS[lemma_id][1]


def run_lemma(
    lemma_id: str,
    params: Mapping[str, Any] | None = None,
    zs: ZeroSet | None = None,
    constants: Mapping[str, float] | None = None,
) -> list[dict[str, Any]]:
    runner, needs_zeros = LEMMAS.get(lemma_id, (None, False))
    if runner is None:
        raise UsageError(
            f"unknown lemma id {lemma_id!r}; known: {', '.join(sorted(LEMMAS))}"
        )
    if needs_zeros and zs is None:
        raise UsageError(f"lemma {lemma_id} needs a zero table; give a zeros path")
    merged = {**DEFAULT_CONSTANTS, **(constants or {})}
    return runner(params or {}, zs, merged)
