"""Independent reference computations used to pin expected values.

Everything here deliberately avoids the package's own algorithms: the
Lambda oracle is trial division organized by divisor, the analytic
oracles go through mpmath at 50 digits, and the spot-check index stream
is a fixed linear congruential generator written out in full.  Frozen
constants in the test files all cite the helper that reproduces them.
"""

from __future__ import annotations

import math
from typing import Iterator

import mpmath as mp
import numpy as np

ORACLE_DPS = 50

# Closed forms (exact up to the final binary rounding):
#   psi(10) = 3 ln2 + 2 ln3 + ln5 + ln7   (Lambda at 2,3,4,5,7,8,9)
#   R(4)    = (ln2)^2                     (only the pair 2+2 contributes)
#   R(6)    = 2 (ln2)^2 + (ln3)^2         (2+4, 4+2, 3+3)
PSI_10 = 7.832014180505469
R_4 = 0.4804530139182014
R_6 = 2.167854988648985


def trial_division_lambda(limit: int) -> tuple[np.ndarray, dict[int, tuple[int, int]]]:
    """Lambda on [0, limit] by trial division, plus the (p, k) structure.

    Composites are found by walking divisors upward and striking their
    multiples (trial division by increasing divisor, vectorized); prime
    powers then get ln p by repeated multiplication.  No segmentation, no
    wheel, nothing shared with the package sieve.
    """
    composite = np.zeros(limit + 1, dtype=bool)
    for d in range(2, math.isqrt(limit) + 1):
        if not composite[d]:
            composite[d * d :: d] = True
    lam = np.zeros(limit + 1, dtype=np.float64)
    structure: dict[int, tuple[int, int]] = {}
    for p in range(2, limit + 1):
        if composite[p]:
            continue
        logp = math.log(p)
        q, k = p, 1
        while q <= limit:
            lam[q] = logp
            structure[q] = (p, k)
            q *= p
            k += 1
    return lam, structure


def lcg_indices(count: int, lo: int, hi: int, seed: int = 1) -> list[int]:
    """`count` reproducible pseudo-random integers in [lo, hi].

    Classic 31-bit linear congruential step, written out so the stream is
    fixed by this file alone; the package itself stays RNG-free.
    """
    out: list[int] = []
    x = seed
    span = hi - lo + 1
    while len(out) < count:
        x = (1103515245 * x + 12345) % (1 << 31)
        out.append(lo + x % span)
    return out


def lcg_floats(count: int, seed: int = 7) -> Iterator[float]:
    """Reproducible floats in [0, 1) from the same congruential step."""
    x = seed
    for _ in range(count):
        x = (1103515245 * x + 12345) % (1 << 31)
        yield x / float(1 << 31)


def mp_second_diff_single(gamma: float, N: int, H: int) -> float:
    """2 Re of [(N+H)^{rho+2} - 2 N^{rho+2} + (N-H)^{rho+2}] / (rho(rho+1)(rho+2)).

    The ordinate is taken binary-exactly, so this matches what the package
    computes from the same float64 input, not from a higher-precision zero.
    """
    with mp.workdps(ORACLE_DPS):
        rho = mp.mpc(mp.mpf(1) / 2, mp.mpf(gamma))
        num = (
            (mp.mpf(N) + H) ** (rho + 2)
            - 2 * mp.mpf(N) ** (rho + 2)
            + (mp.mpf(N) - H) ** (rho + 2)
        )
        return float(2 * (num / (rho * (rho + 1) * (rho + 2))).real)


def mp_psi_term_single(gamma: float, M: float, order: int = 2) -> float:
    """2 Re M^{rho+1} / (rho (rho+1) [... (rho+order-1)]) at one ordinate."""
    with mp.workdps(ORACLE_DPS):
        rho = mp.mpc(mp.mpf(1) / 2, mp.mpf(gamma))
        den = rho
        for j in range(1, order):
            den *= rho + j
        return float(2 * (mp.mpf(M) ** (rho + 1) / den).real)


def mp_psi_sum(gammas: np.ndarray, M: float, order: int = 2) -> float:
    """Sum of mp_psi_term_single over a whole table, at 50 digits."""
    with mp.workdps(ORACLE_DPS):
        total = mp.mpf(0)
        for gamma in gammas:
            rho = mp.mpc(mp.mpf(1) / 2, mp.mpf(float(gamma)))
            den = rho
            for j in range(1, order):
                den *= rho + j
            total += 2 * (mp.mpf(M) ** (rho + 1) / den).real
        return float(total)


def mp_second_diff_sum(gammas: np.ndarray, N: int, H: int) -> float:
    """Sum of mp_second_diff_single over a whole table, at 50 digits."""
    with mp.workdps(ORACLE_DPS):
        total = mp.mpf(0)
        for gamma in gammas:
            rho = mp.mpc(mp.mpf(1) / 2, mp.mpf(float(gamma)))
            num = (
                (mp.mpf(N) + H) ** (rho + 2)
                - 2 * mp.mpf(N) ** (rho + 2)
                + (mp.mpf(N) - H) ** (rho + 2)
            )
            total += 2 * (num / (rho * (rho + 1) * (rho + 2))).real
        return float(total)


def mp_zeta_half(t: float) -> complex:
    """zeta(1/2 + it) by mpmath, the referee for the in-package evaluator."""
    with mp.workdps(ORACLE_DPS):
        return complex(mp.zeta(mp.mpc(mp.mpf(1) / 2, mp.mpf(t))))
