"""Truncated sums over zeta zeros: psi remainder sums and the
cancellation-safe second-difference sum.

Every sum runs over stored positive ordinates with conjugate pairing,
so each per-zero term is 2*Re(...) and the total is real by
construction.  Phases gamma*ln(...) are reduced mod 2pi in extended
precision before exponentiation; at gamma ~ 7.5e4 and N ~ 1e6 the raw
double product carries ~1e-10 rad of roundoff, the reduced one ~1e-13.

Tail estimates integrate a per-term envelope against the average zero
density (1/2pi) ln(gamma/2pi).  They are heuristic, reported alongside
values, and never folded into them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import (
    ConvergenceError,
    CoverageError,
    EmptyZeroSetError,
    SpecViolationError,
)
from .lambda_core import PsiTable, lambda_values_upto
from .result import CheckResult
from .summation import fsum_ascending, reduce_terms
from .zeros import ZeroSet

TWO_PI = 2.0 * math.pi

# Path tags recorded on results.
PATH_DIRECT = "Direct"
PATH_SERIES = "SeriesExpansion"
PATH_INTEGRAL = "IntegralForm"
PATH_MIXED = "Mixed"

# Series/direct switch at |rho+2|*h = 0.5: the direct second difference
# then cancels at most ~2x of magnitude, safe in double precision.
SERIES_CROSSOVER = 0.5
_SERIES_STOP = 1e-18
_SERIES_CAP = 200

# Terms whose |rho+2|*h falls in this band get evaluated both ways and
# cross-compared; a mismatch beyond 1e-6 relative is recorded.
_CROSSCHECK_BAND = (0.4, 0.6)
_CROSSCHECK_TOL = 1e-6


@dataclass(frozen=True)
class ZeroSumResult:
    """A truncated zero-sum value with its truncation bookkeeping."""

    value: float
    truncation_height: float
    terms_used: int
    tail_estimate: float
    evaluation_path: str
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise SpecViolationError(f"zero-sum value not finite: {self.value}")
        if self.tail_estimate < 0:
            raise SpecViolationError(f"negative tail estimate {self.tail_estimate}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "truncation_height": self.truncation_height,
            "terms_used": self.terms_used,
            "tail_estimate": self.tail_estimate,
            "evaluation_path": self.evaluation_path,
            "metadata": self.metadata,
        }


def _reduced_phase(gammas: np.ndarray, log_factor: float | np.longdouble) -> np.ndarray:
    """gamma * log_factor mod 2pi, carried out in extended precision."""
    phase = gammas.astype(np.longdouble) * np.longdouble(log_factor)
    return np.asarray(np.mod(phase, np.longdouble(TWO_PI)), dtype=np.float64)


def _density_tail(amplitude: float, power: int, T: float) -> float:
    """integral over (T, inf) of 2*amplitude/gamma^power against zero density.

    Density (1/2pi) ln(gamma/2pi); closed form of the resulting
    ln-times-power-law integral.  Valid for T above the first zero.
    """
    if T <= TWO_PI:
        raise SpecViolationError(f"tail estimate needs T > 2pi, got {T}")
    j = power
    return (
        (amplitude / math.pi)
        * T ** (1 - j)
        / (j - 1)
        * (math.log(T / TWO_PI) + 1.0 / (j - 1))
    )


def _degenerate(path: str) -> ZeroSumResult:
    return ZeroSumResult(
        value=0.0,
        truncation_height=0.0,
        terms_used=0,
        tail_estimate=0.0,
        evaluation_path=path,
        metadata={"degenerate": True},
    )


def psi_zero_sum(
    M: float,
    zs: ZeroSet,
    denominator_order: int = 2,
    allow_empty: bool = False,
) -> ZeroSumResult:
    """Sum over stored gamma of 2 Re[M^{rho+1} / (rho(rho+1)...)].

    denominator_order 2 gives rho(rho+1) (the psi remainder sum);
    3 appends (rho+2) (the Cesaro-averaged variant).  M^{rho+1} is
    M^{3/2} e^{i gamma ln M}; terms are reduced ascending in gamma.
    """
    if M <= 1:
        raise SpecViolationError(f"need M > 1, got {M}")
    if denominator_order not in (2, 3):
        raise SpecViolationError(f"denominator order must be 2 or 3, got {denominator_order}")
    if not len(zs):
        if allow_empty:
            return _degenerate(PATH_DIRECT)
        raise EmptyZeroSetError("psi zero sum needs a nonempty zero set")

    g = zs.gammas
    amp = M**1.5
    phase = _reduced_phase(g, np.log(np.longdouble(M)))
    numer = amp * np.exp(1j * phase)
    rho = 0.5 + 1j * g
    denom = rho * (rho + 1.0)
    if denominator_order == 3:
        denom = denom * (rho + 2.0)
    terms = 2.0 * np.real(numer / denom)
    value = reduce_terms(terms)
    tail = _density_tail(amp, denominator_order, zs.height)
    return ZeroSumResult(
        value=value,
        truncation_height=zs.height,
        terms_used=len(zs),
        tail_estimate=tail,
        evaluation_path=PATH_DIRECT,
        metadata={"M": M, "denominator_order": denominator_order},
    )


# ---------------------------------------------------------------------------
# second differences

def _second_difference_series(s: complex, h: float) -> complex:
    """((1+h)^s - 2 + (1-h)^s) via the even-power binomial series.

    2 * sum_{k>=1} C(s, 2k) h^{2k}; every summand is O(h^2) of its
    predecessor's binomial, so nothing cancels.  Converges fast for
    |s| h < 1/2.
    """
    coeff = complex(1.0)  # C(s, 2k), starting at k=0
    acc = complex(0.0)
    hh = h * h
    h_pow = 1.0
    top = 0.0  # largest |summand| seen
    for k in range(1, _SERIES_CAP + 1):
        coeff = coeff * (s - (2 * k - 2)) * (s - (2 * k - 1)) / ((2 * k - 1) * (2 * k))
        h_pow *= hh
        term = coeff * h_pow
        acc += term
        mag = abs(term)
        top = max(top, mag)
        if mag < _SERIES_STOP * top:
            return 2.0 * acc
    raise ConvergenceError(
        f"second-difference series did not settle in {_SERIES_CAP} terms (|s|h={abs(s) * h:.3g})"
    )


def _second_difference_direct(
    N: float, H: float, gammas: np.ndarray
) -> np.ndarray:
    """Paired direct terms 2 Re[N^s((1+h)^s - 2 + (1-h)^s)/(rho(rho+1)(rho+2))]."""
    s = 2.5 + 1j * gammas
    h = H / N
    amp_n = N**2.5
    phase_n = _reduced_phase(gammas, np.log(np.longdouble(N)))
    n_pow = amp_n * np.exp(1j * phase_n)

    lp = np.log1p(np.longdouble(h))
    plus = (1.0 + h) ** 2.5 * np.exp(1j * _reduced_phase(gammas, lp))
    if H == N:
        minus = np.zeros_like(plus)  # 0^s = 0 since Re s > 0
    else:
        lm = np.log1p(-np.longdouble(h))
        minus = (1.0 - h) ** 2.5 * np.exp(1j * _reduced_phase(gammas, lm))

    rho = 0.5 + 1j * gammas
    denom = rho * (rho + 1.0) * (rho + 2.0)
    return 2.0 * np.real(n_pow * (plus - 2.0 + minus) / denom)


def _second_difference_series_terms(
    N: float, H: float, gammas: np.ndarray
) -> np.ndarray:
    """Paired series-path terms for the given ordinates (scalar loop)."""
    h = H / N
    amp_n = N**2.5
    phase_n = _reduced_phase(gammas, np.log(np.longdouble(N)))
    out = np.empty(len(gammas))
    for i, gamma in enumerate(gammas):
        s = 2.5 + 1j * gamma
        rho = 0.5 + 1j * gamma
        delta = _second_difference_series(s, h)
        n_pow = amp_n * complex(math.cos(phase_n[i]), math.sin(phase_n[i]))
        out[i] = 2.0 * (n_pow * delta / (rho * (rho + 1.0) * (rho + 2.0))).real
    return out


def second_difference_terms(
    N: int, H: int, gammas: np.ndarray, force_path: str | None = None
) -> tuple[np.ndarray, dict[str, Any]]:
    """Per-zero paired terms of the second-difference sum, in input order.

    Path per term by |rho+2|*h against the crossover unless force_path
    pins one.  Returns (terms, metadata) so callers control reduction
    order; metadata counts paths and carries any cross-check warning.
    """
    gammas = np.asarray(gammas, dtype=np.float64)
    h = H / N
    size = np.hypot(2.5, gammas) * h
    if force_path == PATH_SERIES:
        series_mask = np.ones(len(gammas), dtype=bool)
    elif force_path == PATH_DIRECT:
        series_mask = np.zeros(len(gammas), dtype=bool)
    else:
        series_mask = size < SERIES_CROSSOVER

    terms = np.empty(len(gammas))
    n_series = int(series_mask.sum())
    if n_series:
        terms[series_mask] = _second_difference_series_terms(
            float(N), float(H), gammas[series_mask]
        )
    if n_series < len(gammas):
        terms[~series_mask] = _second_difference_direct(
            float(N), float(H), gammas[~series_mask]
        )

    metadata: dict[str, Any] = {
        "series_terms": n_series,
        "direct_terms": int(len(gammas) - n_series),
    }
    if force_path is None:
        band = (size >= _CROSSCHECK_BAND[0]) & (size <= _CROSSCHECK_BAND[1])
        if np.any(band):
            a = _second_difference_series_terms(float(N), float(H), gammas[band])
            b = _second_difference_direct(float(N), float(H), gammas[band])
            scale = np.maximum(np.abs(a), np.abs(b))
            scale[scale == 0.0] = 1.0
            worst = float(np.max(np.abs(a - b) / scale))
            metadata["crossover_checked"] = int(band.sum())
            metadata["crossover_max_rel_diff"] = worst
            if worst > _CROSSCHECK_TOL:
                metadata["precision_warning"] = (
                    f"series/direct disagree by {worst:.3g} relative on crossover band"
                )
    return terms, metadata


def _second_difference_tail(N: int, H: int, T: float) -> float:
    """Envelope min(H^2 (N+H)^{1/2}/g, 4(N+H)^{5/2}/g^3) against density above T."""
    x = float(N + H)
    g_star = 2.0 * x / H  # envelope crossover
    if T >= g_star:
        return _density_tail(4.0 * x**2.5, 3, T)
    # flat-envelope band (T, g_star), then the cubic tail
    band = (
        (H * H * math.sqrt(x))
        / (2.0 * math.pi)
        * (math.log(g_star / TWO_PI) ** 2 - math.log(T / TWO_PI) ** 2)
    )
    return band + _density_tail(4.0 * x**2.5, 3, g_star)


def _window_preconditions(N: int, H: int):
    if N < 2:
        raise SpecViolationError(f"need N >= 2, got {N}")
    if not 1 <= H <= N:
        raise SpecViolationError(f"need 1 <= H <= N, got H={H}")


def second_difference_term(
    N: int,
    H: int,
    zs: ZeroSet,
    allow_empty: bool = False,
    force_path: str | None = None,
) -> ZeroSumResult:
    """S = sum over gamma of 2 Re[Delta^2(rho) / (rho(rho+1)(rho+2))],
    Delta^2(rho) = (N+H)^{rho+2} - 2N^{rho+2} + (N-H)^{rho+2}."""
    _window_preconditions(N, H)
    if not len(zs):
        if allow_empty:
            return _degenerate(PATH_DIRECT)
        raise EmptyZeroSetError("second-difference sum needs a nonempty zero set")
    terms, metadata = second_difference_terms(N, H, zs.gammas, force_path=force_path)
    value = reduce_terms(terms)
    if metadata["series_terms"] == 0:
        path = PATH_DIRECT
    elif metadata["direct_terms"] == 0:
        path = PATH_SERIES
    else:
        path = PATH_MIXED
    metadata.update({"N": N, "H": H})
    return ZeroSumResult(
        value=value,
        truncation_height=zs.height,
        terms_used=len(zs),
        tail_estimate=_second_difference_tail(N, H, zs.height),
        evaluation_path=path,
        metadata=metadata,
    )


# ---------------------------------------------------------------------------
# integral form of the second difference

_GL_NODES = 16
_PANEL_CAP = 4096  # panels of _GL_NODES points each
_INTEGRAL_REL_TOL = 1e-10


def _gl_rule(panels: int, H: float) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(_GL_NODES)
    width = H / panels
    starts = np.arange(panels) * width
    t = (starts[:, None] + 0.5 * width * (nodes[None, :] + 1.0)).ravel()
    w = np.broadcast_to(0.5 * width * weights, (panels, _GL_NODES)).ravel()
    return t, w


def _integral_term(N: float, H: float, gamma: float) -> float:
    """2 Re[ int_0^H ((N+t)^{rho+1} - (N-t)^{rho+1}) dt / (rho(rho+1)) ],
    panel-doubled Gauss-Legendre to 1e-10 relative."""
    rho = 0.5 + 1j * gamma
    p = rho + 1.0

    def evaluate(panels: int) -> complex:
        t, w = _gl_rule(panels, H)
        fp = np.exp(p * np.log(N + t))
        fm = np.exp(p * np.log(N - t)) if H < N else _one_sided_minus(N, t, p)
        return complex(np.sum(w * (fp - fm)))

    # one panel per ~2 radians of phase swing, then double until stable
    swing = gamma * (math.log(N + H) - math.log(max(N - H, 1.0))) + 1.0
    panels = 1
    while panels < swing / 2.0 and panels < _PANEL_CAP:
        panels *= 2
    prev = evaluate(panels)
    while panels <= _PANEL_CAP:
        panels *= 2
        cur = evaluate(panels)
        if abs(cur - prev) <= _INTEGRAL_REL_TOL * max(abs(cur), 1e-300):
            paired = cur / (rho * (rho + 1.0))
            return 2.0 * paired.real
        prev = cur
    raise ConvergenceError(
        f"quadrature for gamma={gamma} did not reach {_INTEGRAL_REL_TOL} relative"
    )


def _one_sided_minus(N: float, t: np.ndarray, p: complex) -> np.ndarray:
    # H = N endpoint: (N-t)^p with the 0^p = 0 convention at t = N
    out = np.zeros(len(t), dtype=complex)
    inside = t < N
    out[inside] = np.exp(p * np.log(N - t[inside]))
    return out


def second_difference_term_integral(
    N: int, H: int, zs: ZeroSet, allow_empty: bool = False
) -> ZeroSumResult:
    """Same S as second_difference_term, via per-zero quadrature of
    int_0^H ((N+t)^{rho+1} - (N-t)^{rho+1}) dt / (rho(rho+1))."""
    _window_preconditions(N, H)
    if not len(zs):
        if allow_empty:
            return _degenerate(PATH_INTEGRAL)
        raise EmptyZeroSetError("second-difference sum needs a nonempty zero set")
    terms = np.array([_integral_term(float(N), float(H), g) for g in zs.gammas])
    return ZeroSumResult(
        value=reduce_terms(terms),
        truncation_height=zs.height,
        terms_used=len(zs),
        tail_estimate=_second_difference_tail(N, H, zs.height),
        evaluation_path=PATH_INTEGRAL,
        metadata={"N": N, "H": H, "panel_nodes": _GL_NODES},
    )


# ---------------------------------------------------------------------------
# report-fragment checks

def _loglog_slope(xs: np.ndarray, ys: np.ndarray) -> float:
    """Least-squares slope of ln y against ln x."""
    lx = np.log(xs)
    ly = np.log(ys)
    lx = lx - lx.mean()
    return float(np.dot(lx, ly - ly.mean()) / np.dot(lx, lx))


def weighted_psi_discrepancy(
    N: int, H: int, zs: ZeroSet, psi_table: PsiTable
) -> float:
    """D = sum over the window of t_H(n-N)(psi(n)-n) + S(truncated)."""
    n = np.arange(N - H, N + H + 1, dtype=np.int64)
    psi_vals = psi_table.values(n)
    weights = (H - np.abs(n - N)).astype(np.float64)
    lhs = reduce_terms(weights * (psi_vals - n))
    s = second_difference_term(N, H, zs, allow_empty=True)
    return lhs + s.value


def psi_formula_check(
    m_values: list[int],
    zs: ZeroSet,
    constant: float = 2.5,
    slope_cap: float = 1.15,
    lam: np.ndarray | None = None,
) -> CheckResult:
    """Summatory psi formula: sum_{n<=M}(psi(n)-n) + zero sum = O(M).

    With the zero sum truncated at the table height, the remainder per
    M should hover near the known -M ln(2pi) secondary term, so the
    gate is |remainder|/M <= constant at every grid M with the log-log
    slope of |remainder| capped at slope_cap (linear growth, noise
    allowance included).
    """
    if not m_values:
        raise SpecViolationError("psi formula check needs a nonempty M grid")
    ms = sorted(set(int(m) for m in m_values))
    if ms[0] < 2:
        raise SpecViolationError(f"need M >= 2, got {ms[0]}")
    top = ms[-1]
    if lam is None:
        lam = lambda_values_upto(top)
    elif len(lam) < top + 1:
        raise SpecViolationError(
            f"Lambda array covers 0..{len(lam) - 1}, need 0..{top}"
        )
    psi_vals = np.cumsum(np.asarray(lam[: top + 1], dtype=np.float64))
    remainders = []
    tails = []
    for m in ms:
        lhs = reduce_terms(
            psi_vals[1 : m + 1] - np.arange(1, m + 1, dtype=np.float64)
        )
        s = psi_zero_sum(float(m), zs, allow_empty=True)
        remainders.append(lhs + s.value)
        tails.append(s.tail_estimate)
    ratios = [abs(r) / m for r, m in zip(remainders, ms)]
    slope = None
    if len(ms) >= 3:
        slope = _loglog_slope(
            np.array(ms, dtype=np.float64),
            np.maximum(np.abs(np.array(remainders)), 1e-300),
        )
    passed = max(ratios) <= constant and (slope is None or slope <= slope_cap)
    return CheckResult(
        name="psi-formula",
        passed=passed,
        observed=max(ratios),
        bound=constant,
        details={
            "M": ms,
            "remainder": remainders,
            "ratio": ratios,
            "tail_estimate": tails,
            "remainder_slope": slope,
            "slope_cap": slope_cap,
            "truncation_height": zs.height if len(zs) else None,
        },
    )


def pesato_identity_check(
    N: int,
    H: int,
    zs: ZeroSet,
    psi_table: PsiTable,
    constant: float = 5.0,
    slope_factor: float = 1.15,
    grid_halvings: int = 3,
) -> CheckResult:
    """|D|/(HN) at (N, H) plus a fixed-ratio N-grid slope comparison.

    The grid holds H/N fixed and halves N grid_halvings times; passing
    needs the top ratio below `constant` and slope(|D|) at most
    slope_factor times slope(HN) in log-log.
    """
    if H < 2:
        raise SpecViolationError(f"weighted psi identity needs H >= 2, got {H}")
    _window_preconditions(N, H)
    psi_table.require_cover(N + H)

    ratio_hn = H / N
    rows = []
    n_i = N
    for _ in range(grid_halvings + 1):
        h_i = max(2, round(ratio_hn * n_i))
        if h_i > n_i:
            h_i = n_i
        d = weighted_psi_discrepancy(n_i, h_i, zs, psi_table)
        rows.append({"N": n_i, "H": h_i, "D": d, "ratio": abs(d) / (h_i * n_i)})
        n_i //= 2
        if n_i < 64:
            break

    top_ratio = rows[0]["ratio"]
    passed = top_ratio <= constant
    slope_d = slope_hn = None
    if len(rows) >= 3:
        ns = np.array([r["N"] for r in rows], dtype=np.float64)
        ds = np.array([max(abs(r["D"]), 1e-300) for r in rows])
        hns = np.array([r["H"] * r["N"] for r in rows], dtype=np.float64)
        slope_d = _loglog_slope(ns, ds)
        slope_hn = _loglog_slope(ns, hns)
        passed = passed and slope_d <= slope_factor * slope_hn
    return CheckResult(
        name="weighted-psi-identity",
        passed=passed,
        observed=top_ratio,
        bound=constant,
        details={
            "rows": rows,
            "slope_D": slope_d,
            "slope_HN": slope_hn,
            "slope_factor": slope_factor,
            "truncation_height": zs.height,
        },
    )


def order_of_magnitude_check(
    N: int,
    H: int,
    zs: ZeroSet,
    constant: float = 5.0,
    slope_cap: float = 0.05,
    grid: list[tuple[int, int]] | None = None,
) -> CheckResult:
    """|S| against H^2 N^{1/2} (ln N)^2 + HN over an N-grid.

    Default grid walks N down by decades keeping H on the same
    H ~ N^{2/3}-style power law as the given pair; pass needs every
    ratio below `constant` and the ratio-vs-lnN slope at most slope_cap.
    """
    _window_preconditions(N, H)
    if grid is None:
        exponent = math.log(H) / math.log(N) if H > 1 else 2.0 / 3.0
        grid = []
        n_i = N
        while n_i >= 1000 and len(grid) < 3:
            grid.append((n_i, max(1, round(n_i**exponent))))
            n_i //= 10
        if not grid:
            grid = [(N, H)]

    rows = []
    for n_i, h_i in grid:
        s = second_difference_term(n_i, h_i, zs, allow_empty=True)
        envelope = h_i * h_i * math.sqrt(n_i) * math.log(n_i) ** 2 + h_i * n_i
        rows.append(
            {"N": n_i, "H": h_i, "S": s.value, "ratio": abs(s.value) / envelope}
        )

    ratios = np.array([r["ratio"] for r in rows])
    passed = bool(np.all(ratios <= constant))
    slope = None
    if len(rows) >= 3 and np.all(ratios > 0):
        lns = np.array([math.log(r["N"]) for r in rows])
        lns_c = lns - lns.mean()
        slope = float(np.dot(lns_c, ratios - ratios.mean()) / np.dot(lns_c, lns_c))
        passed = passed and slope <= slope_cap
    return CheckResult(
        name="zero-term-order",
        passed=passed,
        observed=float(ratios.max()),
        bound=constant,
        details={
            "rows": rows,
            "ratio_slope_vs_lnN": slope,
            "slope_cap": slope_cap,
            "truncation_height": zs.height,
        },
    )
