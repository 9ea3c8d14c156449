"""Reproducible compensated summation.

Every reduction that feeds a reported number goes through one of these
helpers so reruns are bit-identical.  Policy: "parallel map, sequential
reduce".  Term arrays may be produced by vectorized code in any layout,
but the final reduction is always a sequential, order-fixed, exactly
rounded sum.

`math.fsum` is exactly rounded regardless of order, so it is the default
reducer for finished arrays.  `NeumaierSum` serves streaming contexts
(segmented sieves, prefix tables) where the terms are never materialized
at once; its error is bounded by ~2 eps * sum(|x|), a few ulp for every
magnitude profile in this package.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np


class NeumaierSum:
    """Streaming compensated accumulator (Kahan with Neumaier's branch).

    Unlike plain Kahan, stays accurate when an addend exceeds the
    running sum in magnitude, which happens at the start of every
    prefix-sum pass.
    """

    __slots__ = ("total", "carry")

    def __init__(self, start: float = 0.0):
        self.total = float(start)
        self.carry = 0.0

    def add(self, value: float) -> None:
        t = self.total + value
        if abs(self.total) >= abs(value):
            self.carry += (self.total - t) + value
        else:
            self.carry += (value - t) + self.total
        self.total = t

    @property
    def value(self) -> float:
        return self.total + self.carry


def fsum_ascending(values: Iterable[float]) -> float:
    """Exactly rounded sum; the name documents the call-site ordering.

    fsum's result is order-independent, so the contract "ascending
    compensated sum" is met with the stronger guarantee of exact
    rounding.  Callers still pass terms in ascending index order to
    keep the evaluation narrative auditable.
    """
    return math.fsum(values)


def reduce_terms(terms: np.ndarray) -> float:
    """Deterministic reduction of a vectorized term array.

    Accepts float64 arrays (any shape, reduced in C order).  NaN or inf
    in the input propagates, it is never masked.
    """
    arr = np.asarray(terms, dtype=np.float64)
    return math.fsum(arr.ravel(order="C").tolist())


def prefix_sums(values: np.ndarray) -> np.ndarray:
    """Compensated running prefix sums, same length as the input.

    out[i] = sum(values[:i+1]) accumulated with NeumaierSum, left to
    right.  Used for psi tables and max-over-y prefix scans where each
    intermediate value is part of the contract, not only the total.
    """
    arr = np.asarray(values, dtype=np.float64)
    out = np.empty_like(arr)
    acc = NeumaierSum()
    for i, v in enumerate(arr.tolist()):
        acc.add(v)
        out[i] = acc.value
    return out
