"""HTTP service exposing the verification pipeline.

Thin wrappers over the library: each endpoint validates a request
model, calls the corresponding function, and mirrors its result record
back.  Zero tables are loaded once per (path, max_count) and cached on
app state behind a lock; every computation itself is pure, so cached
data is shared freely across requests.

Domain errors map to status codes the CLI translates into exit codes:
bad parameters 400, bad or missing data 422.
"""

from __future__ import annotations

import threading
from typing import Any

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..config import DEFAULT_CONSTANTS
from ..errors import DataError, UsageError
from ..goldbach import WindowSpec, r_direct, r_window_direct, r_window_fft
from ..lambda_core import PsiTable, sieve_window
from ..lemmas import lemma_needs_zeros, run_lemma
from ..report import SCHEMA, payload, report_meta
from ..summation import reduce_terms
from ..verify import (
    grid_campaign,
    verify_average,
    verify_long_interval,
    verify_main,
)
from ..zero_sums import (
    psi_zero_sum,
    second_difference_term,
    second_difference_term_integral,
)
from ..zeros import bundled_table_path, count_check, find_zeros_low, load_zeros
from . import schemas as sm

_VALUES_CAP = 100_000  # largest range returned inline by /sieve and /r/window


def _resolve_zeros(app: FastAPI, source: sm.ZerosSource):
    """Load (and cache) the requested zero table; bundled table when
    no path is given."""
    path = source.path or str(bundled_table_path())
    key = (path, source.max_count)
    with app.state.lock:
        cached = app.state.zero_cache.get(key)
    if cached is not None:
        return path, cached
    zs = load_zeros(path, max_count=source.max_count)
    with app.state.lock:
        app.state.zero_cache[key] = zs
    return path, zs


def _merged_constants(overrides: dict[str, float]) -> dict[str, float]:
    for name in overrides:
        if name not in DEFAULT_CONSTANTS:
            raise UsageError(f"unknown threshold constant {name!r}")
    return {**DEFAULT_CONSTANTS, **overrides}


def create_app() -> FastAPI:
    app = FastAPI(title="goldbach-short", version=__version__)
    app.state.lock = threading.Lock()
    app.state.zero_cache = {}

    @app.exception_handler(UsageError)
    def _usage(request: Request, exc: UsageError) -> JSONResponse:
        return JSONResponse(
            status_code=400, content={"kind": type(exc).__name__, "message": str(exc)}
        )

    @app.exception_handler(DataError)
    def _data(request: Request, exc: DataError) -> JSONResponse:
        detail: dict[str, Any] = {"kind": type(exc).__name__, "message": str(exc)}
        line = getattr(exc, "line_number", None)
        if line is not None:
            detail["line_number"] = line
        return JSONResponse(status_code=422, content=detail)

    @app.get("/health", response_model=sm.HealthResponse)
    def health() -> sm.HealthResponse:
        return sm.HealthResponse(
            status="ok", version=__version__, report_schema=SCHEMA
        )

    @app.post("/sieve", response_model=sm.SieveResponse)
    def sieve(req: sm.SieveRequest) -> sm.SieveResponse:
        window = sieve_window(req.start, req.end)
        nz = np.flatnonzero(window.k)
        psi_end = None
        if req.start == 1:
            psi_end = PsiTable.from_window(window).value(req.end)
        positions = log_values = None
        if req.include_values:
            if req.end - req.start + 1 > _VALUES_CAP:
                raise UsageError(
                    f"range longer than {_VALUES_CAP} Lambda values; "
                    "narrow it or drop include_values"
                )
            positions = [int(window.lo + i) for i in nz]
            log_values = [float(window.logp[i]) for i in nz]
        return sm.SieveResponse(
            start=req.start,
            end=req.end,
            prime_power_count=int(len(nz)),
            psi_end=psi_end if psi_end is not None
            else float(reduce_terms(window.logp)),
            positions=positions,
            log_values=log_values,
        )

    @app.post("/r/value", response_model=sm.RValueResponse)
    def r_value(req: sm.RValueRequest) -> sm.RValueResponse:
        window = sieve_window(1, max(req.n - 1, 1))
        return sm.RValueResponse(
            n=req.n, value=r_direct(req.n, window), method="direct"
        )

    @app.post("/r/window", response_model=sm.RWindowResponse)
    def r_window(req: sm.RWindowRequest) -> sm.RWindowResponse:
        spec = WindowSpec(req.N, req.H)
        if 2 * req.H + 1 > _VALUES_CAP:
            raise UsageError(
                f"window wider than {_VALUES_CAP} values; reduce H"
            )
        if req.method == "fft":
            rwin = r_window_fft(spec)
        else:
            rwin = r_window_direct(spec, sieve_window(1, spec.hi))
        return sm.RWindowResponse(
            N=req.N, H=req.H, n0=spec.lo,
            values=[float(v) for v in rwin.values], method=rwin.method,
        )

    @app.post("/zeros/validate", response_model=sm.ZerosValidateResponse)
    def zeros_validate(req: sm.ZerosValidateRequest) -> sm.ZerosValidateResponse:
        path, zs = _resolve_zeros(app, req.zeros)
        zs.require_nonempty()
        check = count_check(zs, zs.height, c=req.count_slack)
        return sm.ZerosValidateResponse(
            path=path,
            count=len(zs),
            height=zs.height,
            declared_precision=zs.declared_precision,
            count_check=sm.CheckModel(**check.to_dict()),
            passed=check.passed,
        )

    @app.post("/zeros/find", response_model=sm.ZerosFindResponse)
    def zeros_find(req: sm.ZerosFindRequest) -> sm.ZerosFindResponse:
        zs = find_zeros_low(req.T, grid_step=req.grid_step, tol=req.tol)
        return sm.ZerosFindResponse(
            T=req.T,
            count=len(zs),
            gammas=[float(g) for g in zs.gammas],
            method=zs.source.method,
        )

    @app.post("/zero-sum/psi", response_model=sm.ZeroSumResponse)
    def zero_sum_psi(req: sm.PsiZeroSumRequest) -> sm.ZeroSumResponse:
        _, zs = _resolve_zeros(app, req.zeros)
        result = psi_zero_sum(req.M, zs, denominator_order=req.denominator_order)
        return sm.ZeroSumResponse(**result.to_dict())

    @app.post("/zero-sum/second-diff", response_model=sm.ZeroSumResponse)
    def zero_sum_second_diff(req: sm.SecondDiffRequest) -> sm.ZeroSumResponse:
        _, zs = _resolve_zeros(app, req.zeros)
        result = second_difference_term(
            req.N, req.H, zs, force_path=req.force_path
        )
        integral_rel_diff = None
        if req.integral_check:
            other = second_difference_term_integral(req.N, req.H, zs)
            scale = max(abs(result.value), 1.0)
            integral_rel_diff = abs(result.value - other.value) / scale
        return sm.ZeroSumResponse(
            **result.to_dict(), integral_rel_diff=integral_rel_diff
        )

    @app.post("/verify/main", response_model=sm.ReportModel)
    def verify_main_ep(req: sm.VerifyMainRequest) -> sm.ReportModel:
        _, zs = _resolve_zeros(app, req.zeros)
        constants = _merged_constants(req.constants)
        report = verify_main(req.N, req.H, zs, constant=constants["ratio.main"])
        return sm.ReportModel(**report.to_dict())

    @app.post("/verify/average", response_model=sm.VerifyAverageResponse)
    def verify_average_ep(req: sm.VerifyAverageRequest) -> sm.VerifyAverageResponse:
        constants = _merged_constants(req.constants)
        rep_max, rep_end = verify_average(
            req.N, req.H,
            constant_max=constants["ratio.average-max"],
            constant_endpoint=constants["ratio.average-endpoint"],
        )
        return sm.VerifyAverageResponse(
            max_report=sm.ReportModel(**rep_max.to_dict()),
            endpoint_report=sm.ReportModel(**rep_end.to_dict()),
            passed=rep_max.passed and rep_end.passed,
        )

    @app.post("/verify/long", response_model=sm.VerifyLongResponse)
    def verify_long_ep(req: sm.VerifyLongRequest) -> sm.VerifyLongResponse:
        _, zs = _resolve_zeros(app, req.zeros)
        constants = _merged_constants(req.constants)
        rep_plain, rep_cesaro = verify_long_interval(
            req.N, zs,
            constant=constants["ratio.long-interval"],
            cesaro_constant=constants["ratio.long-cesaro"],
        )
        return sm.VerifyLongResponse(
            plain_report=sm.ReportModel(**rep_plain.to_dict()),
            cesaro_report=sm.ReportModel(**rep_cesaro.to_dict()),
            passed=rep_plain.passed and rep_cesaro.passed,
        )

    @app.post("/verify/lemma/{lemma_id}", response_model=sm.LemmaResponse)
    def verify_lemma_ep(lemma_id: str, req: sm.LemmaRequest) -> sm.LemmaResponse:
        zs = None
        if lemma_needs_zeros(lemma_id):
            _, zs = _resolve_zeros(app, req.zeros)
        results = run_lemma(
            lemma_id, params=req.params, zs=zs,
            constants=_merged_constants(req.constants),
        )
        return sm.LemmaResponse(
            lemma_id=lemma_id,
            results=[sm.CheckModel(**r) for r in results],
            passed=all(r["passed"] for r in results),
        )

    @app.post("/campaign")
    def campaign_ep(req: sm.CampaignRequest) -> JSONResponse:
        path, zs = _resolve_zeros(app, req.zeros)
        constants = _merged_constants(req.constants)
        grid = [(n, h, "explicit") for n, h in req.pairs]
        for theta in req.thetas:
            label = f"theta={theta:g}"
            for n in req.n_values:
                grid.append((n, max(1, int(n**theta)), label))
        result = grid_campaign(req.checks, grid, zs, constants=constants)
        meta = report_meta(
            constants, threads=req.threads, zeros=zs, zeros_path=path
        )
        return JSONResponse(content=payload(result, meta))

    return app


def serve() -> None:
    """Console entry: run the service under uvicorn."""
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(
        prog="gbshort-serve", description="Serve the verification API over HTTP."
    )
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8713)
    args = parser.parse_args()
    uvicorn.run(create_app(), host=args.host, port=args.port)
