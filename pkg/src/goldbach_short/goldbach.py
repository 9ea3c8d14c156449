"""Goldbach counting function R(n) and the Cesaro-weighted window sums.

R(n) = sum over h + k = n of Lambda(h) Lambda(k).  Window values come
from one full self-convolution of Lambda(1..N+H); at desk scale a single
real-input transform is simpler and cache-friendlier than any windowed
scheme, and its roundoff is far below every bound being verified.

The transform runs in extended precision (longdouble) by default.  At
length ~2e6 the float64 path already meets the 1e-9 budget empirically,
but the extended path keeps two orders of margin and costs little.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from .errors import CoverageError, MismatchError, ResourceError, SpecViolationError
from .lambda_core import LambdaWindow, PsiTable, lambda_values_upto
from .summation import NeumaierSum, reduce_terms

# Transform lengths above this raise ResourceError (about 1 GiB of
# longdouble scratch); the verification campaigns stay far below it.
MAX_FFT_LEN = 1 << 27

# A convolution coefficient may come out as a tiny negative where the
# true value is 0; anything below this is a bug, not roundoff.
_NEGATIVE_TOL = 1e-6


@dataclass(frozen=True)
class WindowSpec:
    """The window pair (N, H) plus the optional offset y (default H)."""

    N: int
    H: int
    y: int | None = None

    def __post_init__(self):
        if self.N < 2:
            raise SpecViolationError(f"need N >= 2, got N={self.N}")
        if not 1 <= self.H <= self.N:
            raise SpecViolationError(f"need 1 <= H <= N, got H={self.H}, N={self.N}")
        if self.y is None:
            object.__setattr__(self, "y", self.H)
        if not -self.H <= self.y <= self.H:
            raise SpecViolationError(f"need |y| <= H, got y={self.y}, H={self.H}")

    @property
    def lo(self) -> int:
        return self.N - self.H

    @property
    def hi(self) -> int:
        return self.N + self.H


@dataclass(frozen=True)
class CesaroWeight:
    """Triangular weight t_H(m) = H - |m| on [-H, H], integer valued."""

    H: int
    t: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.H < 1:
            raise SpecViolationError(f"need H >= 1, got {self.H}")
        m = np.arange(-self.H, self.H + 1, dtype=np.int64)
        t = self.H - np.abs(m)
        t.setflags(write=False)
        object.__setattr__(self, "t", t)

    def weight(self, m: int) -> int:
        if abs(m) > self.H:
            return 0
        return int(self.t[m + self.H])

    def total(self) -> int:
        # sum of H - |m| over |m| <= H is exactly H^2
        return int(self.t.sum())


@dataclass(frozen=True)
class RWindow:
    """R(n) for n in [N-H, N+H] plus the method that produced it."""

    spec: WindowSpec
    values: np.ndarray
    method: str  # "direct" | "fft"

    def __post_init__(self):
        if len(self.values) != 2 * self.spec.H + 1:
            raise MismatchError(
                f"values length {len(self.values)} != window length {2 * self.spec.H + 1}"
            )
        self.values.setflags(write=False)

    @property
    def n0(self) -> int:
        return self.spec.lo

    def value_at(self, n: int) -> float:
        if not self.spec.lo <= n <= self.spec.hi:
            raise CoverageError(f"n={n} outside window [{self.spec.lo}, {self.spec.hi}]")
        return float(self.values[n - self.n0])


def r_direct(n: int, window: LambdaWindow) -> float:
    """R(n) by direct convolution, h ascending, compensated reduction."""
    if n < 2:
        raise SpecViolationError(f"R(n) needs n >= 2, got {n}")
    if n == 2:
        return 0.0  # only (1,1) and Lambda(1) = 0
    window.require_cover(1, n - 1)
    lam = window.slice(1, n - 1).values()
    terms = lam * lam[::-1]  # h and n-h, h = 1..n-1
    return reduce_terms(terms)


def r_values_upto(
    upto: int,
    lam: np.ndarray | None = None,
    dtype: str = "longdouble",
    max_fft_len: int = MAX_FFT_LEN,
) -> np.ndarray:
    """R(0..upto) via one real-input self-convolution of Lambda.

    lam, when given, must be Lambda(0..L) with L >= upto - 1; only the
    first upto entries feed the transform, so R(n) for n <= upto is the
    complete convolution, never a truncated one.
    """
    if upto < 2:
        raise SpecViolationError(f"need upto >= 2, got {upto}")
    if lam is None:
        lam = lambda_values_upto(upto - 1)
    elif len(lam) < upto:
        raise CoverageError(f"Lambda array covers 0..{len(lam) - 1}, need 0..{upto - 1}")
    a = np.asarray(lam[:upto], dtype=np.longdouble if dtype == "longdouble" else np.float64)
    m = scipy.fft.next_fast_len(2 * len(a) - 1, real=True)
    if m > max_fft_len:
        raise ResourceError(f"transform length {m} exceeds budget {max_fft_len}")
    spec = scipy.fft.rfft(a, m)
    conv = scipy.fft.irfft(spec * spec, m)[: upto + 1]
    out = np.asarray(conv, dtype=np.float64)
    low = float(out.min())
    if low < -_NEGATIVE_TOL:
        raise ResourceError(f"convolution produced {low}, below roundoff tolerance")
    np.maximum(out, 0.0, out=out)
    return out


def r_window_fft(
    spec: WindowSpec,
    lam: np.ndarray | None = None,
    dtype: str = "longdouble",
    max_fft_len: int = MAX_FFT_LEN,
) -> RWindow:
    """RWindow over [N-H, N+H] extracted from the full convolution."""
    window_vals = r_values_upto(spec.hi, lam=lam, dtype=dtype, max_fft_len=max_fft_len)
    vals = window_vals[spec.lo : spec.hi + 1].copy()
    return RWindow(spec, vals, "fft")


def r_window_direct(spec: WindowSpec, window: LambdaWindow) -> RWindow:
    """Direct-summation RWindow; the oracle side of the FFT/direct check."""
    window.require_cover(1, spec.hi - 1)
    vals = np.array(
        [r_direct(n, window) for n in range(spec.lo, spec.hi + 1)], dtype=np.float64
    )
    return RWindow(spec, vals, "direct")


def cesaro_lhs_main(spec: WindowSpec, rwin: RWindow) -> float:
    """(1/H) sum of t_H(n-N) R(n) over the full window.

    Integer weights, ascending n, compensated reduction; the single
    division by H happens last so it adds exactly one rounding.
    """
    if rwin.spec.N != spec.N or rwin.spec.H != spec.H:
        raise MismatchError(f"window {rwin.spec} does not match spec {spec}")
    weight = CesaroWeight(spec.H)
    terms = weight.t.astype(np.float64) * rwin.values
    return reduce_terms(terms) / spec.H


def average_summand(
    spec: WindowSpec, rwin: RWindow, psi_table: PsiTable
) -> np.ndarray:
    """Per-n terms e^{-n/N} (R(n) - (2 psi(n) - n)) t_H(n-N), n over the window.

    Shared by the exact theorem checks and the max-over-y scan; the
    final 1/H division is left to the caller.
    """
    if rwin.spec.N != spec.N or rwin.spec.H != spec.H:
        raise MismatchError(f"window {rwin.spec} does not match spec {spec}")
    n = np.arange(spec.lo, spec.hi + 1, dtype=np.int64)
    psi_vals = psi_table.values(n)
    weight = CesaroWeight(spec.H).t.astype(np.float64)
    damping = np.exp(-n / float(spec.N))
    return damping * (rwin.values - (2.0 * psi_vals - n)) * weight


def cesaro_lhs_average(spec: WindowSpec, rwin: RWindow, psi_table: PsiTable) -> float:
    """sum over n = N-H .. N+y of e^{-n/N} (R(n) - (2 psi(n) - n)) t_H(n-N) / H."""
    terms = average_summand(spec, rwin, psi_table)
    upto = spec.y + spec.H + 1  # n = N + y sits at index y + H
    return reduce_terms(terms[:upto]) / spec.H


def max_over_y(spec: WindowSpec, summand: np.ndarray) -> tuple[float, int]:
    """(max over y in [-H, H) of |prefix sum to N+y|, arg-max y).

    summand[i] is the term at n = N - H + i and must cover at least the
    2H points below N+H.  Single compensated prefix scan; ties keep the
    smallest y.
    """
    if len(summand) < 2 * spec.H:
        raise CoverageError(
            f"summand length {len(summand)} < {2 * spec.H} required for y < H scan"
        )
    acc = NeumaierSum()
    best = -1.0
    best_y = -spec.H
    for i in range(2 * spec.H):
        acc.add(float(summand[i]))
        mag = abs(acc.value)
        if mag > best:
            best = mag
            best_y = i - spec.H
    return best, best_y
