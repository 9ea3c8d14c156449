"""Nontrivial zeta zero ordinates: tables, low-height finding, count checks.

Ordinates only are stored; every consumer hard-codes beta = 1/2, i.e.
rho = 1/2 + i*gamma with the conjugate implicit.  Low heights (t <= 500)
are covered by an internal Hardy-function root finder built on
Euler-Maclaurin evaluation of zeta(1/2+it); everything above comes from
a table file.

Table format: UTF-8 text, one decimal ordinate per line, ascending,
lines starting with `#` ignored.  A `# precision: <x>` comment line
declares the table's absolute accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import bernoulli

from .errors import (
    ConvergenceError,
    CoverageError,
    EmptyZeroSetError,
    OrderingViolationError,
    SpecViolationError,
    ZeroTableError,
)
from .result import CheckResult

FIND_ZEROS_MAX_T = 500.0

# First ordinate of any genuine zero table exceeds this; a table failing
# it is corrupt or not a zeta table at all.
_GAMMA_ONE_FLOOR = 14.0


@dataclass(frozen=True)
class FileTable:
    path: str
    precision: float  # declared absolute accuracy of the ordinates


@dataclass(frozen=True)
class Computed:
    method: str


@dataclass(frozen=True)
class ZeroSet:
    """Ascending positive ordinates gamma with provenance."""

    gammas: np.ndarray
    source: FileTable | Computed

    def __post_init__(self):
        g = np.asarray(self.gammas, dtype=np.float64)
        if g.ndim != 1:
            raise SpecViolationError("ordinates must form a 1-d array")
        if len(g):
            if g[0] <= 0:
                raise SpecViolationError(f"nonpositive ordinate {g[0]}")
            if np.any(np.diff(g) <= 0):
                i = int(np.argmax(np.diff(g) <= 0))
                raise OrderingViolationError(
                    f"ordinates not strictly ascending at index {i}: "
                    f"{g[i]} -> {g[i + 1]}"
                )
            if g[0] <= _GAMMA_ONE_FLOOR:
                raise SpecViolationError(
                    f"first ordinate {g[0]} <= {_GAMMA_ONE_FLOOR}; no zero lies that low"
                )
        g.setflags(write=False)
        object.__setattr__(self, "gammas", g)

    def __len__(self) -> int:
        return len(self.gammas)

    @property
    def height(self) -> float:
        return float(self.gammas[-1]) if len(self.gammas) else 0.0

    @property
    def declared_precision(self) -> float | None:
        if isinstance(self.source, FileTable):
            return self.source.precision
        return None

    def require_nonempty(self):
        if not len(self.gammas):
            raise EmptyZeroSetError("operation needs at least one ordinate")

    def count_below(self, T: float) -> int:
        return int(np.searchsorted(self.gammas, T, side="right"))

    def below(self, T: float) -> "ZeroSet":
        return ZeroSet(self.gammas[: self.count_below(T)].copy(), self.source)

    def first(self, count: int) -> "ZeroSet":
        return ZeroSet(self.gammas[:count].copy(), self.source)


# Declared accuracy assumed for tables that do not state one.
DEFAULT_TABLE_PRECISION = 1e-6


def bundled_table_path() -> Path:
    """The packaged 100-ordinate table, always available offline."""
    from importlib.resources import files

    return Path(str(files("goldbach_short") / "data" / "zeros_100.txt"))


def load_zeros(path: str | Path, max_count: int | None = None) -> ZeroSet:
    """Read a zero table; reject non-ascending or non-positive entries."""
    path = Path(path)
    if not path.exists():
        raise ZeroTableError(f"zero table not found: {path}")
    precision = DEFAULT_TABLE_PRECISION
    values: list[float] = []
    prev = 0.0
    with open(path, encoding="utf-8") as fh:
        for line_number, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.lower().startswith("precision:"):
                    try:
                        precision = float(body.split(":", 1)[1])
                    except ValueError as exc:
                        raise ZeroTableError(
                            f"bad precision declaration: {body!r}",
                            line_number=line_number,
                        ) from exc
                continue
            try:
                gamma = float(line)
            except ValueError as exc:
                raise ZeroTableError(
                    f"unparsable ordinate {line!r}", line_number=line_number
                ) from exc
            if not math.isfinite(gamma) or gamma <= 0:
                raise ZeroTableError(
                    f"ordinate must be a positive finite number, got {line!r}",
                    line_number=line_number,
                )
            if gamma <= prev:
                raise OrderingViolationError(
                    f"line {line_number}: ordinate {gamma} <= previous {prev}"
                )
            values.append(gamma)
            prev = gamma
            if max_count is not None and len(values) >= max_count:
                break
    if not values:
        raise EmptyZeroSetError(f"no ordinates in {path}")
    return ZeroSet(np.array(values), FileTable(str(path), precision))


# ---------------------------------------------------------------------------
# Hardy function on the critical line, Euler-Maclaurin regime (t <= 500)

_EM_CORRECTION_TERMS = 25

# B_{2k} / (2k)! for k = 1 .. _EM_CORRECTION_TERMS
_BERNOULLI = bernoulli(2 * _EM_CORRECTION_TERMS)
_B2K_OVER_FACT = np.array(
    [
        _BERNOULLI[2 * k] / math.factorial(2 * k)
        for k in range(1, _EM_CORRECTION_TERMS + 1)
    ]
)


def zeta_half_line(t: np.ndarray, terms: int | None = None) -> np.ndarray:
    """zeta(1/2 + it) for an array of heights, Euler-Maclaurin summed.

    terms fixes the cut m of the main sum; by default it is sized from
    max(t) so that the correction series decays below double precision
    well before its asymptotic turnaround.
    """
    t = np.asarray(t, dtype=np.float64)
    s = 0.5 + 1j * t
    if terms is None:
        terms = int(np.max(t, initial=0.0) / math.pi) + 30
    m = max(terms, 16)

    n = np.arange(1, m, dtype=np.float64)
    # n^{-s} = n^{-1/2} e^{-i t ln n}; the outer product is the cost center
    phase = np.exp(-1j * np.outer(t, np.log(n)))
    main = phase @ (n ** -0.5)

    log_m = math.log(m)
    m_pow = np.exp(-s * log_m)  # m^{-s}
    tail = m_pow * m / (s - 1.0)  # m^{1-s}/(s-1)
    half = 0.5 * m_pow

    # correction sum, C_k = s(s+1)...(s+2k-2) * m^{-s-2k+1} by recurrence
    c = s * m_pow / m
    corr = _B2K_OVER_FACT[0] * c
    for k in range(2, _EM_CORRECTION_TERMS + 1):
        c = c * (s + (2 * k - 3)) * (s + (2 * k - 2)) / (m * m)
        corr = corr + _B2K_OVER_FACT[k - 1] * c
    return main + half + tail + corr


def theta_asymptotic(t: np.ndarray) -> np.ndarray:
    """Phase of the Hardy function, asymptotic through the t^{-3} term."""
    t = np.asarray(t, dtype=np.float64)
    return (
        0.5 * t * np.log(t / (2.0 * math.pi))
        - 0.5 * t
        - math.pi / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t**3)
    )


def hardy_z(t: np.ndarray, terms: int | None = None) -> np.ndarray:
    """Re(e^{i theta} zeta(1/2+it)).

    The truncated theta leaves a phase error delta, which multiplies the
    true (real) Hardy function by cos(delta): magnitudes wobble but sign
    changes sit exactly where they should, which is all the finder uses.
    """
    return np.real(np.exp(1j * theta_asymptotic(t)) * zeta_half_line(t, terms=terms))


_GRID_START = 10.0  # below the first ordinate, safely inside the asymptotic regime
_BISECTION_CAP = 200


def find_zeros_low(
    T: float, grid_step: float = 0.05, tol: float = 1e-9
) -> ZeroSet:
    """All ordinates in (0, T] for T <= 500, by sign changes of the Hardy function.

    Grid scan at grid_step (<= 0.05), then simultaneous bisection of all
    brackets down to absolute width tol.
    """
    if T > FIND_ZEROS_MAX_T:
        raise SpecViolationError(
            f"finder supports T <= {FIND_ZEROS_MAX_T}, got {T}; use a table above that"
        )
    if grid_step > 0.05:
        raise SpecViolationError(f"grid step must be <= 0.05, got {grid_step}")
    if T <= _GRID_START:
        return ZeroSet(np.array([]), Computed("hardy-sign-scan"))

    steps = int(math.ceil((T - _GRID_START) / grid_step))
    ts = np.linspace(_GRID_START, T, steps + 1)
    terms = int(T / math.pi) + 30
    z = hardy_z(ts, terms=terms)
    if not np.all(np.isfinite(z)):
        raise ConvergenceError("Hardy function evaluation produced non-finite values")

    flips = np.nonzero(np.sign(z[:-1]) * np.sign(z[1:]) < 0)[0]
    if len(flips) == 0:
        return ZeroSet(np.array([]), Computed("hardy-sign-scan"))
    lo = ts[flips].copy()
    hi = ts[flips + 1].copy()
    flo = z[flips].copy()

    iterations = 0
    while np.max(hi - lo) > tol:
        iterations += 1
        if iterations > _BISECTION_CAP:
            raise ConvergenceError(
                f"bisection failed to reach width {tol} in {_BISECTION_CAP} rounds"
            )
        mid = 0.5 * (lo + hi)
        fmid = hardy_z(mid, terms=terms)
        left = flo * fmid > 0  # root in the right half
        lo = np.where(left, mid, lo)
        flo = np.where(left, fmid, flo)
        hi = np.where(left, hi, mid)

    gammas = 0.5 * (lo + hi)
    gammas = gammas[gammas <= T]
    return ZeroSet(gammas, Computed("hardy-sign-scan"))


def count_estimate(T: float) -> float:
    """Main-term zero count below T: (T/2pi) ln(T/2pi) - T/2pi + 7/8."""
    x = T / (2.0 * math.pi)
    return x * math.log(x) - x + 0.875


def count_check(zs: ZeroSet, T: float, c: float = 2.0) -> CheckResult:
    """Compare |{gamma <= T}| against the counting estimate, slack c ln T."""
    if T > zs.height:
        raise CoverageError(
            f"count check at T={T} needs table height >= T, have {zs.height}"
        )
    count = zs.count_below(T)
    estimate = count_estimate(T)
    diff = abs(count - estimate)
    bound = c * math.log(T)
    return CheckResult(
        name="zero-count",
        passed=diff <= bound,
        observed=diff,
        bound=bound,
        details={"T": T, "count": count, "estimate": estimate, "slack_constant": c},
    )


def count_sweep(zs: ZeroSet, points: int = 64, c: float = 2.0) -> list[CheckResult]:
    """count_check over a log-spaced sweep of T across the set's range."""
    zs.require_nonempty()
    lo = float(zs.gammas[0]) + 0.5
    hi = zs.height
    ts = np.geomspace(lo, hi, points)
    return [count_check(zs, float(T), c=c) for T in ts]
