"""Command-line front end: a thin client over the verification service.

Every subcommand builds an HTTP request, sends it to the service (an
in-process application by default, a remote one with --server), and
renders the JSON response.  All numeric output goes through the
12-significant-digit funnel, and report files re-render the returned
payload with the same pinning, so repeated runs with the same config
write byte-identical files.

Exit codes: 0 success, 1 a check failed, 2 usage error, 3 data error.
"""

from __future__ import annotations

import argparse
import asyncio
import sys
from pathlib import Path
from typing import Any, Sequence

import httpx

from .config import ZEROS_ENV_VAR, RunConfig, resolve_config
from .errors import UsageError
from .lemmas import LEMMAS
from .report import (
    describe_payload,
    emit_plotdata_payload,
    json_bytes,
    render,
    write_payload_files,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_DATA = 3

_REPORT_FIELDS = (
    "lhs", "main_term", "zero_term", "observed_error", "bound", "ratio",
    "constant",
)


class ServiceClient:
    """POSTs against the verification API.

    Without a server URL the app runs in-process over an ASGI
    transport; the wire format is identical either way, so the CLI
    cannot tell the difference and neither can its tests.
    """

    def __init__(self, server: str | None = None, timeout: float = 3600.0):
        self._loop: asyncio.AbstractEventLoop | None = None
        if server is None:
            from .service.app import create_app

            self._loop = asyncio.new_event_loop()
            self._async_client = httpx.AsyncClient(
                transport=httpx.ASGITransport(app=create_app()),
                base_url="http://gbshort.internal",
                timeout=timeout,
            )
        else:
            self._client = httpx.Client(base_url=server, timeout=timeout)

    def post(self, path: str, body: dict[str, Any]) -> httpx.Response:
        if self._loop is None:
            return self._client.post(path, json=body)
        return self._loop.run_until_complete(self._async_client.post(path, json=body))

    def close(self) -> None:
        if self._loop is None:
            self._client.close()
        else:
            self._loop.run_until_complete(self._async_client.aclose())
            self._loop.close()


def _print_error(status: int, body: Any) -> int:
    """Translate a service error response into stderr text + exit code."""
    if status == 400:
        message = body.get("message", body) if isinstance(body, dict) else body
        print(f"usage error: {message}", file=sys.stderr)
        return EXIT_USAGE
    if status == 422 and isinstance(body, dict) and "kind" in body:
        message = body["message"]
        if body.get("line_number") is not None:
            message = f"{message} (line {body['line_number']})"
        print(f"data error [{body['kind']}]: {message}", file=sys.stderr)
        return EXIT_DATA
    if status == 422:
        # the request model itself rejected the parameters
        detail = body.get("detail", body) if isinstance(body, dict) else body
        print(f"usage error: {detail}", file=sys.stderr)
        return EXIT_USAGE
    print(f"error: HTTP {status}: {body}", file=sys.stderr)
    return EXIT_DATA


def _call(client: ServiceClient, path: str, body: dict[str, Any]) -> dict[str, Any]:
    response = client.post(path, body)
    if response.status_code != 200:
        try:
            parsed = response.json()
        except ValueError:
            parsed = response.text
        raise _ServiceFailure(_print_error(response.status_code, parsed))
    return response.json()


class _ServiceFailure(Exception):
    """Carries the already-printed error's exit code up to main()."""

    def __init__(self, exit_code: int):
        super().__init__(exit_code)
        self.exit_code = exit_code


# ---------------------------------------------------------------------------
# config plumbing


def _flag_values(args: argparse.Namespace) -> dict[str, Any]:
    """Collect explicitly-given global flags in config-file key form."""
    values: dict[str, Any] = {}
    if getattr(args, "zeros", None):
        values["zeros"] = args.zeros
    if getattr(args, "max_zeros", None) is not None:
        values["max_zeros"] = args.max_zeros
    if getattr(args, "out", None):
        values["out"] = args.out
    if getattr(args, "format", None):
        values["formats"] = ",".join(args.format)
    if getattr(args, "threads", None) is not None:
        values["threads"] = args.threads
    for item in getattr(args, "constant", None) or []:
        if "=" not in item:
            raise UsageError(f"--constant expects name=value, got {item!r}")
        name, value = item.split("=", 1)
        values[f"constant.{name.strip()}"] = value.strip()
    for key in ("checks", "n_values", "thetas", "pairs"):
        flag = getattr(args, key, None)
        if flag:
            values[key] = flag
    return values


def _config(args: argparse.Namespace) -> RunConfig:
    config_path = Path(args.config) if getattr(args, "config", None) else None
    return resolve_config(config_path=config_path, flag_values=_flag_values(args))


def _zeros_source(cfg: RunConfig) -> dict[str, Any]:
    return {
        "path": str(cfg.zeros_path) if cfg.zeros_path is not None else None,
        "max_count": cfg.max_zeros,
    }


# ---------------------------------------------------------------------------
# output helpers


def _emit_json(data: dict[str, Any]) -> None:
    sys.stdout.write(json_bytes(data))


def _print_report(record: dict[str, Any]) -> None:
    inputs = " ".join(f"{k}={render(v)}" for k, v in sorted(record["inputs"].items()))
    print(f"{record['check_id']}: {inputs}")
    for key in _REPORT_FIELDS:
        print(f"  {key:<15}= {render(record[key])}")
    for key in sorted(record.get("notes", {})):
        print(f"  note {key}: {render(record['notes'][key])}")
    print(f"  result: {'pass' if record['passed'] else 'FAIL'}")


def _print_check(record: dict[str, Any]) -> None:
    state = "pass" if record["passed"] else "FAIL"
    print(
        f"{record['name']}: {state} (observed {render(record['observed'])},"
        f" bound {render(record['bound'])})"
    )


def _reports_exit(records: Sequence[dict[str, Any]]) -> int:
    return EXIT_OK if all(r["passed"] for r in records) else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# subcommand runners


def _run_sieve(args: argparse.Namespace, client: ServiceClient) -> int:
    body = {"start": args.start, "end": args.end, "include_values": args.values}
    data = _call(client, "/sieve", body)
    if args.json:
        _emit_json(data)
        return EXIT_OK
    print(f"range [{data['start']}, {data['end']}]")
    print(f"prime powers = {data['prime_power_count']}")
    label = "psi(end)" if data["start"] == 1 else "sum Lambda over range"
    print(f"{label} = {render(data['psi_end'])}")
    if data.get("positions"):
        for n, value in zip(data["positions"], data["log_values"]):
            print(f"{n} {render(value)}")
    return EXIT_OK


def _run_r(args: argparse.Namespace, client: ServiceClient) -> int:
    if args.n is not None:
        data = _call(client, "/r/value", {"n": args.n})
        if args.json:
            _emit_json(data)
        else:
            print(render(data["value"]))
        return EXIT_OK
    if args.N is None or args.H is None:
        raise UsageError("r needs either --n, or --N with --H")
    data = _call(
        client, "/r/window", {"N": args.N, "H": args.H, "method": args.method}
    )
    if args.json:
        _emit_json(data)
        return EXIT_OK
    for offset, value in enumerate(data["values"]):
        print(f"{data['n0'] + offset} {render(value)}")
    return EXIT_OK


def _run_zeros_validate(args: argparse.Namespace, client: ServiceClient) -> int:
    cfg = _config(args)
    source = _zeros_source(cfg)
    if args.file:
        source["path"] = args.file
    if args.max is not None:
        source["max_count"] = args.max
    data = _call(
        client, "/zeros/validate", {"zeros": source, "count_slack": args.slack}
    )
    if args.json:
        _emit_json(data)
    else:
        print(f"table {data['path']}")
        print(f"count = {data['count']}")
        print(f"height = {render(data['height'])}")
        print(f"declared precision = {render(data['declared_precision'])}")
        _print_check(data["count_check"])
    return EXIT_OK if data["passed"] else EXIT_CHECK_FAILED


def _run_zeros_find(args: argparse.Namespace, client: ServiceClient) -> int:
    body = {"T": args.T, "grid_step": args.grid_step, "tol": args.tol}
    data = _call(client, "/zeros/find", body)
    if args.json:
        _emit_json(data)
        return EXIT_OK
    print(f"{data['count']} zeros with 0 < gamma <= {render(data['T'])}")
    for gamma in data["gammas"]:
        print(render(gamma))
    return EXIT_OK


def _run_zero_sum_psi(args: argparse.Namespace, client: ServiceClient) -> int:
    cfg = _config(args)
    body = {
        "M": args.M,
        "denominator_order": args.order,
        "zeros": _zeros_source(cfg),
    }
    data = _call(client, "/zero-sum/psi", body)
    if args.json:
        _emit_json(data)
        return EXIT_OK
    print(f"value = {render(data['value'])}")
    print(f"evaluation path = {data['evaluation_path']}")
    print(f"terms used = {data['terms_used']}")
    print(f"truncation height = {render(data['truncation_height'])}")
    print(f"tail estimate = {render(data['tail_estimate'])}")
    return EXIT_OK


def _run_zero_sum_second_diff(args: argparse.Namespace, client: ServiceClient) -> int:
    cfg = _config(args)
    body = {
        "N": args.N,
        "H": args.H,
        "zeros": _zeros_source(cfg),
        "force_path": args.path,
        "integral_check": args.integral_check,
    }
    data = _call(client, "/zero-sum/second-diff", body)
    if args.json:
        _emit_json(data)
        return EXIT_OK
    print(f"value = {render(data['value'])}")
    print(f"evaluation path = {data['evaluation_path']}")
    print(f"terms used = {data['terms_used']}")
    print(f"truncation height = {render(data['truncation_height'])}")
    print(f"tail estimate = {render(data['tail_estimate'])}")
    if data.get("integral_rel_diff") is not None:
        print(f"integral cross-check rel diff = {render(data['integral_rel_diff'])}")
    return EXIT_OK


def _run_verify_main(args: argparse.Namespace, client: ServiceClient) -> int:
    cfg = _config(args)
    body = {
        "N": args.N,
        "H": args.H,
        "zeros": _zeros_source(cfg),
        "constants": cfg.constants,
    }
    data = _call(client, "/verify/main", body)
    if args.json:
        _emit_json(data)
    else:
        _print_report(data)
    return _reports_exit([data])


def _run_verify_average(args: argparse.Namespace, client: ServiceClient) -> int:
    cfg = _config(args)
    body = {"N": args.N, "H": args.H, "constants": cfg.constants}
    data = _call(client, "/verify/average", body)
    records = [data["max_report"], data["endpoint_report"]]
    if args.json:
        _emit_json(data)
    else:
        for record in records:
            _print_report(record)
    return _reports_exit(records)


def _run_verify_long(args: argparse.Namespace, client: ServiceClient) -> int:
    cfg = _config(args)
    body = {"N": args.N, "zeros": _zeros_source(cfg), "constants": cfg.constants}
    data = _call(client, "/verify/long", body)
    records = [data["plain_report"], data["cesaro_report"]]
    if args.json:
        _emit_json(data)
    else:
        for record in records:
            _print_report(record)
    return _reports_exit(records)


def _run_verify_lemma(args: argparse.Namespace, client: ServiceClient) -> int:
    cfg = _config(args)
    params: dict[str, Any] = {}
    for item in args.param or []:
        if "=" not in item:
            raise UsageError(f"--param expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        params[key.strip()] = value.strip()
    body = {
        "params": params,
        "zeros": _zeros_source(cfg),
        "constants": cfg.constants,
    }
    data = _call(client, f"/verify/lemma/{args.lemma_id}", body)
    if args.json:
        _emit_json(data)
    else:
        for record in data["results"]:
            _print_check(record)
    return EXIT_OK if data["passed"] else EXIT_CHECK_FAILED


def _run_campaign(args: argparse.Namespace, client: ServiceClient) -> int:
    cfg = _config(args)
    cfg.campaign_grid()  # fail before the request when the grid is empty
    body = {
        "checks": list(cfg.checks),
        "n_values": list(cfg.n_values),
        "thetas": list(cfg.thetas),
        "pairs": [[n, h] for n, h in cfg.pairs],
        "zeros": _zeros_source(cfg),
        "constants": cfg.constants,
        "threads": cfg.threads,
    }
    data = _call(client, "/campaign", body)
    written = write_payload_files(data, cfg.out_dir, cfg.formats, stem="campaign")
    if args.plotdata:
        written.extend(emit_plotdata_payload(data, cfg.out_dir))
    if args.json:
        _emit_json(data)
    else:
        sys.stdout.write(describe_payload(data))
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK if data["passed"] else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("common options")
    group.add_argument("--config", help="key=value config file")
    group.add_argument(
        "--zeros",
        help=f"zero-table path (overrides config file and ${ZEROS_ENV_VAR})",
    )
    group.add_argument(
        "--max-zeros", type=int, help="use only the first this-many zeros"
    )
    group.add_argument("--out", help="output directory for report files")
    group.add_argument(
        "--format",
        action="append",
        choices=("csv", "json"),
        help="report file format; repeat for both",
    )
    group.add_argument("--threads", type=int, help="worker thread count")
    group.add_argument(
        "--constant",
        action="append",
        metavar="NAME=VALUE",
        help="override a threshold constant; repeatable",
    )
    group.add_argument(
        "--server",
        help="URL of a running gbshort-serve instance (default: in-process)",
    )
    group.add_argument(
        "--json",
        action="store_true",
        help="print the JSON response instead of text lines",
    )

    parser = argparse.ArgumentParser(
        prog="gbshort",
        description=(
            "Numerical checks for a short-interval explicit formula for the "
            "Goldbach counting function R(n), with its supporting lemmas."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser(
        "sieve",
        parents=[common],
        help="sieve Lambda over a range and print psi",
    )
    p.add_argument("--start", type=int, required=True, help="first n, >= 1")
    p.add_argument("--end", type=int, required=True, help="last n")
    p.add_argument(
        "--values", action="store_true", help="print each prime power and Lambda(n)"
    )
    p.set_defaults(run=_run_sieve)

    p = sub.add_parser(
        "r",
        parents=[common],
        help="print R(n) for one n or a window around N",
    )
    p.add_argument("--n", type=int, help="single value R(n)")
    p.add_argument("--N", type=int, help="window center")
    p.add_argument("--H", type=int, help="window half-width")
    p.add_argument(
        "--method",
        choices=("fft", "direct"),
        default="fft",
        help="window convolution route",
    )
    p.set_defaults(run=_run_r)

    zeros_parser = sub.add_parser("zeros", help="zero-table utilities")
    zeros_sub = zeros_parser.add_subparsers(
        dest="zeros_command", required=True, metavar="validate|find"
    )
    p = zeros_sub.add_parser(
        "validate",
        parents=[common],
        help="load a table, check ordering, count vs the density estimate",
    )
    p.add_argument("--file", help="table path (default: resolved zeros path)")
    p.add_argument("--max", type=int, help="validate only the first this-many")
    p.add_argument(
        "--slack", type=float, default=2.0, help="allowed |count - estimate|"
    )
    p.set_defaults(run=_run_zeros_validate)
    p = zeros_sub.add_parser(
        "find",
        parents=[common],
        help="recompute low zeros from scratch (T <= 500)",
    )
    p.add_argument("--T", type=float, required=True, help="search 0 < gamma <= T")
    p.add_argument("--grid-step", type=float, default=0.05, help="scan step")
    p.add_argument("--tol", type=float, default=1e-10, help="bisection tolerance")
    p.set_defaults(run=_run_zeros_find)

    zs_parser = sub.add_parser("zero-sum", help="zero-sum evaluators")
    zs_sub = zs_parser.add_subparsers(
        dest="zero_sum_command", required=True, metavar="psi|second-diff"
    )
    p = zs_sub.add_parser(
        "psi",
        parents=[common],
        help="sum of M^(rho+1)/(rho(rho+1)) over the table",
    )
    p.add_argument("--M", type=float, required=True, help="evaluation point, > 1")
    p.add_argument(
        "--order",
        type=int,
        choices=(2, 3),
        default=2,
        help="denominator factors: 2 for rho(rho+1), 3 adds (rho+2)",
    )
    p.set_defaults(run=_run_zero_sum_psi)
    p = zs_sub.add_parser(
        "second-diff",
        parents=[common],
        help="second-difference sum over zeros at (N, H)",
    )
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--H", type=int, required=True)
    p.add_argument(
        "--path",
        choices=("Direct", "SeriesExpansion"),
        help="force one evaluation route (default: per-zero crossover)",
    )
    p.add_argument(
        "--integral-check",
        action="store_true",
        help="also evaluate the contour-integral form and print the rel diff",
    )
    p.set_defaults(run=_run_zero_sum_second_diff)

    verify_parser = sub.add_parser("verify", help="theorem and lemma checks")
    verify_sub = verify_parser.add_subparsers(
        dest="verify_target", required=True, metavar="main|average|long|lemma:<id>"
    )
    p = verify_sub.add_parser(
        "main",
        parents=[common],
        help="short-interval formula with the zero term",
    )
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--H", type=int, required=True)
    p.set_defaults(run=_run_verify_main)
    p = verify_sub.add_parser(
        "average",
        parents=[common],
        help="zero-free averaged comparison against 2 psi - n",
    )
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--H", type=int, required=True)
    p.set_defaults(run=_run_verify_average)
    p = verify_sub.add_parser(
        "long",
        parents=[common],
        help="full-interval R sums, plain and Cesaro-weighted",
    )
    p.add_argument("--N", type=int, required=True)
    p.set_defaults(run=_run_verify_long)
    for lemma_id in sorted(LEMMAS):
        p = verify_sub.add_parser(
            f"lemma:{lemma_id}",
            parents=[common],
            help=f"lemma-level check {lemma_id}",
        )
        p.add_argument(
            "--param",
            action="append",
            metavar="KEY=VALUE",
            help="lemma parameter; repeatable",
        )
        p.set_defaults(run=_run_verify_lemma, lemma_id=lemma_id)

    p = sub.add_parser(
        "campaign",
        parents=[common],
        help="run checks over an (N, H) grid and write report files",
    )
    p.add_argument("--checks", help="comma list, e.g. main,average-max")
    p.add_argument("--n-values", dest="n_values", help="comma list of N")
    p.add_argument("--thetas", help="comma list; H = floor(N^theta)")
    p.add_argument("--pairs", help="explicit N:H pairs, comma separated")
    p.add_argument(
        "--plotdata",
        action="store_true",
        help="also write gnuplot tables per (check, family)",
    )
    p.set_defaults(run=_run_campaign)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        client = ServiceClient(server=getattr(args, "server", None))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.run(args, client)
    except _ServiceFailure as exc:
        return exc.exit_code
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except httpx.HTTPError as exc:
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    finally:
        client.close()


if __name__ == "__main__":
    sys.exit(main())
