"""Report emission: canonical JSON, flat CSV, and gnuplot tables.

Schema gbshort-report/1.  A report is first assembled as a plain
payload dict (floats pinned to 12 significant digits, keys sorted, no
timestamps or host details), and every output format renders from that
payload.  The service returns the payload as-is, so a client holding
the payload reproduces the exact bytes of any format locally; repeated
runs with the same configuration are byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .errors import UsageError
from .exp_sums import alpha_norm, t_sum_closed
from .verify import CampaignResult, CampaignRow, VerificationReport
from .zeros import ZeroSet

SCHEMA = "gbshort-report/1"

CSV_COLUMNS = (
    "check_id", "family", "N", "H", "lhs", "main_term", "zero_term",
    "observed_error", "bound", "ratio", "constant", "trend_slope",
    "trend_slope_limit", "passed", "error",
)


def render(value: Any) -> str:
    """12-significant-digit text for numbers; stable text otherwise."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def pin_digits(value: Any) -> Any:
    """Round floats through the 12-digit funnel, recursively.

    Idempotent, so a payload that round-trips through JSON and is
    pinned again comes back unchanged.
    """
    if isinstance(value, bool):
        return value
    if isinstance(value, (float, np.floating)):
        return float(f"{float(value):.12g}")
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, dict):
        return {str(k): pin_digits(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [pin_digits(v) for v in value]
    return value


def report_meta(
    constants: dict[str, float],
    threads: int = 1,
    zeros: ZeroSet | None = None,
    zeros_path: str | None = None,
) -> dict[str, Any]:
    """Header block carried by every emitted report: the resolved
    thresholds (no silent defaults) plus the zero data provenance."""
    meta: dict[str, Any] = {
        "schema": SCHEMA,
        "threads": threads,
        "constants": {k: constants[k] for k in sorted(constants)},
    }
    if zeros is not None:
        meta["zeros"] = {
            "count": len(zeros),
            "height": zeros.height if len(zeros) else None,
            "path": zeros_path,
        }
    else:
        meta["zeros"] = None
    return meta


def _rows_of(result: CampaignResult | Iterable[VerificationReport]) -> list[CampaignRow]:
    if isinstance(result, CampaignResult):
        return list(result.rows)
    rows = []
    for rep in result:
        rows.append(
            CampaignRow(
                check_id=rep.check_id,
                N=int(rep.inputs.get("N", 0)),
                H=int(rep.inputs.get("H", 0)),
                family="single",
                report=rep,
            )
        )
    return rows


def payload(
    result: CampaignResult | Iterable[VerificationReport],
    meta: dict[str, Any],
) -> dict[str, Any]:
    """The canonical report dict all formats render from."""
    rows = _rows_of(result)
    out: dict[str, Any] = dict(meta)
    report_dicts = []
    for row in rows:
        record: dict[str, Any] = {
            "N": row.N, "H": row.H, "family": row.family, "error": row.error,
        }
        if row.report is None:
            record["check_id"] = row.check_id
        else:
            record.update(row.report.to_dict())
        report_dicts.append(record)
    out["reports"] = report_dicts
    if isinstance(result, CampaignResult):
        out["slopes"] = {k: result.slopes[k] for k in sorted(result.slopes)}
        out["passed"] = result.passed
    else:
        out["passed"] = all(
            row.report.passed for row in rows if row.report is not None
        ) and not any(row.error for row in rows)
    return pin_digits(out)


def json_bytes(data: dict[str, Any]) -> str:
    return json.dumps(pin_digits(data), sort_keys=True, indent=2) + "\n"


def to_json(
    result: CampaignResult | Iterable[VerificationReport],
    meta: dict[str, Any],
) -> str:
    return json_bytes(payload(result, meta))


def csv_from_payload(data: dict[str, Any]) -> str:
    lines = [f"# {data['schema']}", f"# threads={data['threads']}"]
    for name in sorted(data["constants"]):
        lines.append(f"# constant.{name}={render(data['constants'][name])}")
    zeros = data.get("zeros")
    if zeros:
        lines.append(
            f"# zeros count={zeros['count']} height={render(zeros['height'])}"
            + (f" path={zeros['path']}" if zeros.get("path") else "")
        )
    lines.append(",".join(CSV_COLUMNS))
    for record in data["reports"]:
        lines.append(",".join(render(record.get(col)) for col in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def to_csv(
    result: CampaignResult | Iterable[VerificationReport],
    meta: dict[str, Any],
) -> str:
    return csv_from_payload(payload(result, meta))


def describe_payload(data: dict[str, Any]) -> str:
    """Terminal summary: one line per row, then the verdict."""
    lines = []
    for record in data["reports"]:
        if record.get("error"):
            lines.append(
                f"{record['check_id']} N={record['N']} H={record['H']}:"
                f" ERROR {record['error']}"
            )
            continue
        verdict = "pass" if record["passed"] else "FAIL"
        extra = ""
        if record.get("trend_slope") is not None:
            extra = (
                f", trend {render(record['trend_slope'])}"
                f" <= {render(record['trend_slope_limit'])}"
            )
        lines.append(
            f"{record['check_id']} N={record['N']} H={record['H']}: {verdict}"
            f" (ratio {render(record['ratio'])} vs {render(record['constant'])}{extra})"
        )
    lines.append("all checks passed" if data["passed"] else "FAILURES present")
    return "\n".join(lines) + "\n"


def describe(result: CampaignResult | Iterable[VerificationReport]) -> str:
    meta = {"schema": SCHEMA, "threads": 1, "constants": {}, "zeros": None}
    return describe_payload(payload(result, meta))


def _slug(text: str) -> str:
    return "".join(c if c.isalnum() or c in "._" else "-" for c in text)


def write_payload_files(
    data: dict[str, Any],
    out_dir: Path,
    formats: tuple[str, ...],
    stem: str = "report",
) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if "json" in formats:
        path = out_dir / f"{stem}.json"
        path.write_text(json_bytes(data), encoding="utf-8")
        written.append(path)
    if "csv" in formats:
        path = out_dir / f"{stem}.csv"
        path.write_text(csv_from_payload(data), encoding="utf-8")
        written.append(path)
    return written


def write_report_files(
    result: CampaignResult | Iterable[VerificationReport],
    meta: dict[str, Any],
    out_dir: Path,
    formats: tuple[str, ...],
    stem: str = "report",
) -> list[Path]:
    return write_payload_files(payload(result, meta), out_dir, formats, stem=stem)


def emit_plotdata_payload(data: dict[str, Any], out_dir: Path) -> list[Path]:
    """One gnuplot table per (check, family): N H |error| bound ratio.

    Filenames derive from check and family only, so reruns overwrite
    in place deterministically.
    """
    records = [r for r in data["reports"] if not r.get("error")]
    if not records:
        raise UsageError("no successful report rows to plot")
    out_dir.mkdir(parents=True, exist_ok=True)
    groups: dict[tuple[str, str], list[dict[str, Any]]] = {}
    for record in records:
        groups.setdefault((record["check_id"], record["family"]), []).append(record)
    written = []
    for (check, family), members in sorted(groups.items()):
        path = out_dir / f"plot_{_slug(check)}_{_slug(family)}.dat"
        lines = ["# N H abs_error bound ratio"]
        for record in sorted(members, key=lambda r: (r["N"], r["H"])):
            lines.append(
                " ".join(
                    render(v)
                    for v in (
                        record["N"], record["H"],
                        abs(record["observed_error"]), record["bound"],
                        record["ratio"],
                    )
                )
            )
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path)
    return written


def emit_plotdata(
    result: CampaignResult | Iterable[VerificationReport],
    out_dir: Path,
) -> list[Path]:
    meta = {"schema": SCHEMA, "threads": 1, "constants": {}, "zeros": None}
    return emit_plotdata_payload(payload(result, meta), out_dir)


def emit_t_overlay(
    N: int,
    H: int,
    y: int,
    out_dir: Path,
    samples: int = 512,
) -> Path:
    """Gnuplot table of |T_H| against both bound shapes over the
    frequency range scanned by the kernel bound check:
    alpha |T| H*min(H,1/||alpha||) min(H^2,1/||alpha||^2)."""
    alphas = np.geomspace(1.0 / (4.0 * H * H), 0.5, samples)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"plot_t_overlay_N{N}_H{H}_y{y}.dat"
    lines = ["# alpha abs_t first_bound second_bound"]
    for alpha in alphas:
        t_val = abs(t_sum_closed(N, H, y, float(alpha)))
        norm = float(alpha_norm(float(alpha)))
        first = H * min(float(H), 1.0 / norm)
        second = min(float(H) ** 2, 1.0 / norm**2)
        lines.append(
            " ".join(render(v) for v in (alpha, t_val, first, second))
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
