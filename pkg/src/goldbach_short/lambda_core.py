"""von Mangoldt function, Chebyshev psi, and sieved Lambda windows.

Lambda is stored structurally: each nonzero entry keeps its prime p and
exponent k next to the cached ln p, so prime-power identities are pure
integer facts and never depend on float rounding.  The float value
Lambda(n) = ln p is derived, not primary.

All logarithms are produced by math.log, entry by entry.  The vectorized
numpy log can differ from libm by an ulp on some inputs; routing every
ln p through the same scalar function makes sieve output and the
trial-division oracle bitwise comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CacheFormatError,
    CoverageError,
    InvalidRangeError,
    RangeOverflowError,
)
from .summation import NeumaierSum

# Segments sized to stay cache-resident; windows near 1e8 must not
# allocate O(N) scratch per base prime.
DEFAULT_SEGMENT = 1 << 20

# hi above this would overflow the int64 arithmetic in p*p stepping
# long before memory did.
MAX_SUPPORTED_HI = 1 << 52

_CACHE_MAGIC = "gbshort-lambda-cache"
_CACHE_VERSION = 1

# Deterministic Miller-Rabin witness set, valid for all n < 3.3e24
# (Sorenson-Webster), far beyond MAX_SUPPORTED_HI.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime_int(n: int) -> bool:
    """Exact deterministic primality for machine-range integers."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _integer_kth_root(n: int, k: int) -> int:
    """floor(n ** (1/k)) by Newton steps on an isqrt-based seed; exact."""
    if k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = int(round(n ** (1.0 / k)))
    # float seed can be off by one or two in either direction
    while x > 1 and x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def prime_power_split(n: int):
    """Return (p, k) with n = p**k and p prime, or None.

    Pure integer logic: for each candidate exponent k take the integer
    k-th root, check the exact power identity, then test primality.
    """
    if n < 2:
        return None
    max_k = n.bit_length() - 1  # 2**k <= n
    for k in range(max(1, max_k), 0, -1):
        p = _integer_kth_root(n, k)
        if p < 2:
            continue
        if p**k == n and is_prime_int(p):
            return p, k
    return None


def lambda_point(n: int) -> float:
    """Lambda(n): ln p when n = p**k, else 0.  Total on n >= 1."""
    if n < 1:
        raise InvalidRangeError(f"Lambda is defined for n >= 1, got {n}")
    split = prime_power_split(n)
    if split is None:
        return 0.0
    return math.log(split[0])


def _base_primes(limit: int) -> np.ndarray:
    """All primes <= limit, plain boolean sieve (limit ~ sqrt(hi), small)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.nonzero(flags)[0].astype(np.int64)


@dataclass(frozen=True)
class LambdaWindow:
    """Exact-structure table of Lambda over [lo, hi].

    Parallel arrays indexed by n - lo:
      p[i]    prime base, 0 when Lambda(n) = 0
      k[i]    exponent, 0 when Lambda(n) = 0
      logp[i] ln p, 0.0 when Lambda(n) = 0
    """

    lo: int
    hi: int
    p: np.ndarray
    k: np.ndarray
    logp: np.ndarray

    def __post_init__(self):
        for arr in (self.p, self.k, self.logp):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def covers(self, lo: int, hi: int) -> bool:
        return self.lo <= lo and hi <= self.hi

    def require_cover(self, lo: int, hi: int) -> None:
        if not self.covers(lo, hi):
            raise CoverageError(
                f"window [{self.lo}, {self.hi}] does not cover [{lo}, {hi}]"
            )

    def entry(self, n: int):
        """(p, k, logp) when Lambda(n) != 0, else None."""
        if not self.lo <= n <= self.hi:
            raise CoverageError(f"n={n} outside window [{self.lo}, {self.hi}]")
        i = n - self.lo
        if self.k[i] == 0:
            return None
        return int(self.p[i]), int(self.k[i]), float(self.logp[i])

    def values(self) -> np.ndarray:
        """Flat float64 array of Lambda(n), n = lo..hi (read-only view)."""
        return self.logp

    def slice(self, lo: int, hi: int) -> "LambdaWindow":
        self.require_cover(lo, hi)
        a = lo - self.lo
        b = hi - self.lo + 1
        return LambdaWindow(lo, hi, self.p[a:b], self.k[a:b], self.logp[a:b])


def sieve_window(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT) -> LambdaWindow:
    """Segmented sieve of Lambda structure over [lo, hi].

    Output is independent of segment_size (tested property).  Primes in
    a segment are the survivors of composite marking by base primes up
    to sqrt(hi); prime powers p**k (k >= 2) are enumerated directly,
    which is cheap since only O(sqrt(hi) log hi) of them exist.
    """
    if lo < 1 or lo > hi:
        raise InvalidRangeError(f"need 1 <= lo <= hi, got lo={lo} hi={hi}")
    if hi > MAX_SUPPORTED_HI:
        raise RangeOverflowError(f"hi={hi} exceeds supported magnitude {MAX_SUPPORTED_HI}")
    if segment_size < 8:
        raise InvalidRangeError(f"segment_size too small: {segment_size}")

    length = hi - lo + 1
    p_arr = np.zeros(length, dtype=np.int64)
    k_arr = np.zeros(length, dtype=np.int16)

    root = math.isqrt(hi)
    base = _base_primes(root)

    for seg_lo in range(lo, hi + 1, segment_size):
        seg_hi = min(seg_lo + segment_size - 1, hi)
        seg_len = seg_hi - seg_lo + 1
        flags = np.ones(seg_len, dtype=bool)
        if seg_lo == 1:
            flags[0] = False
        for p in base.tolist():
            start = max(p * p, ((seg_lo + p - 1) // p) * p)
            if start > seg_hi:
                continue
            flags[start - seg_lo :: p] = False
        idx = np.nonzero(flags)[0]
        off = seg_lo - lo
        p_arr[off + idx] = idx + seg_lo
        k_arr[off + idx] = 1

    # prime powers p**k, k >= 2; their base is always <= sqrt(hi)
    for p in base.tolist():
        q = p * p
        k = 2
        while q <= hi:
            if q >= lo:
                i = q - lo
                p_arr[i] = p
                k_arr[i] = k
            q *= p
            k += 1

    logp = np.zeros(length, dtype=np.float64)
    nz = np.nonzero(k_arr)[0]
    # scalar math.log keeps values bitwise equal to the oracle's
    logp[nz] = [math.log(int(v)) for v in p_arr[nz]]
    return LambdaWindow(lo, hi, p_arr, k_arr, logp)


def lambda_values_upto(n: int, segment_size: int = DEFAULT_SEGMENT) -> np.ndarray:
    """Lambda(0..n) as float64 with a leading zero, handy for convolutions."""
    window = sieve_window(1, n, segment_size)
    out = np.zeros(n + 1, dtype=np.float64)
    out[1:] = window.values()
    return out


@dataclass(frozen=True)
class PsiValue:
    """psi(x) = sum of Lambda(m) for m <= x."""

    x: int
    value: float


class PsiTable:
    """Prefix sums of Lambda at its jump points.

    Stores ascending prime-power positions and the compensated running
    sums there; psi(x) is a binary-search lookup.  The accumulation is a
    single left-to-right NeumaierSum pass, so cached lookups equal the
    ascending compensated sum by construction.
    """

    def __init__(self, positions: np.ndarray, prefix: np.ndarray, cover: int):
        self.positions = positions
        self.prefix = prefix
        self.cover = cover
        positions.setflags(write=False)
        prefix.setflags(write=False)

    @classmethod
    def from_window(cls, window: LambdaWindow) -> "PsiTable":
        if window.lo != 1:
            raise CoverageError("psi table needs a window starting at 1")
        nz = np.nonzero(window.k)[0]
        positions = (nz + window.lo).astype(np.int64)
        acc = NeumaierSum()
        prefix = np.empty(len(nz), dtype=np.float64)
        for i, v in enumerate(window.logp[nz].tolist()):
            acc.add(v)
            prefix[i] = acc.value
        return cls(positions, prefix, window.hi)

    def require_cover(self, x: int):
        if x > self.cover:
            raise CoverageError(f"psi table covers [1, {self.cover}], need {x}")

    def value(self, x: int) -> float:
        if x < 0:
            raise InvalidRangeError(f"psi needs x >= 0, got {x}")
        self.require_cover(x)
        i = int(np.searchsorted(self.positions, x, side="right"))
        return 0.0 if i == 0 else float(self.prefix[i - 1])

    def values(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        if xs.size and (int(xs.min()) < 0 or int(xs.max()) > self.cover):
            raise CoverageError(
                f"psi table covers [1, {self.cover}], got range "
                f"[{int(xs.min())}, {int(xs.max())}]"
            )
        idx = np.searchsorted(self.positions, xs, side="right")
        padded = np.concatenate(([0.0], self.prefix))
        return padded[idx]


def psi(x: int, window: LambdaWindow) -> PsiValue:
    """psi(x) from a window covering [1, x]."""
    if x < 0:
        raise InvalidRangeError(f"psi needs x >= 0, got {x}")
    if x <= 1:
        return PsiValue(x, 0.0)
    window.require_cover(1, x)
    table = PsiTable.from_window(window)
    return PsiValue(x, table.value(x))


def save_window_cache(window: LambdaWindow, path: str) -> None:
    """Binary cache: versioned header plus the three entry arrays."""
    np.savez_compressed(
        path,
        magic=np.array(_CACHE_MAGIC),
        version=np.array(_CACHE_VERSION),
        lo=np.array(window.lo, dtype=np.int64),
        hi=np.array(window.hi, dtype=np.int64),
        p=window.p,
        k=window.k,
        logp=window.logp,
    )


def load_window_cache(path: str) -> LambdaWindow:
    with np.load(path, allow_pickle=False) as data:
        if "magic" not in data or str(data["magic"]) != _CACHE_MAGIC:
            raise CacheFormatError(f"{path}: not a lambda cache file")
        version = int(data["version"])
        if version != _CACHE_VERSION:
            raise CacheFormatError(
                f"{path}: cache version {version}, expected {_CACHE_VERSION}"
            )
        return LambdaWindow(
            int(data["lo"]),
            int(data["hi"]),
            data["p"].copy(),
            data["k"].copy(),
            data["logp"].copy(),
        )
