"""Numerical verification of a short-interval Cesaro-weighted explicit
formula for the Goldbach counting function R(n) = sum_{h+k=n} L(h)L(k).

Layers, bottom up: exact arithmetic tables (lambda_core, goldbach),
zeta-zero data and truncated zero sums (zeros, zero_sums), exponential
sums and circle-method integrals (exp_sums, circle), theorem-level
checks and campaigns (verify, lemmas), and emission (report, config).
An HTTP service (goldbach_short.service) and a CLI (gbshort) wrap the
same pipeline.
"""

__version__ = "0.1.0"

from .config import DEFAULT_CONSTANTS, RunConfig, resolve_config
from .errors import (
    AliasBudgetError,
    CacheFormatError,
    ConvergenceError,
    CoverageError,
    DataError,
    EmptyZeroSetError,
    GridResolutionError,
    InvalidRangeError,
    MismatchError,
    OrderingViolationError,
    RangeOverflowError,
    ResourceError,
    SpecViolationError,
    UsageError,
    ZeroTableError,
)
from .goldbach import (
    CesaroWeight,
    RWindow,
    WindowSpec,
    cesaro_lhs_average,
    cesaro_lhs_main,
    max_over_y,
    r_direct,
    r_values_upto,
    r_window_direct,
    r_window_fft,
)
from .lambda_core import (
    LambdaWindow,
    PsiTable,
    lambda_point,
    lambda_values_upto,
    load_window_cache,
    prime_power_split,
    psi,
    save_window_cache,
    sieve_window,
)
from .lemmas import LEMMAS, run_lemma
from .result import CheckResult
from .verify import (
    CampaignResult,
    VerificationReport,
    consistency_chain,
    grid_campaign,
    theta_pairs,
    verify_average,
    verify_long_interval,
    verify_main,
)
from .zero_sums import (
    ZeroSumResult,
    pesato_identity_check,
    psi_formula_check,
    psi_zero_sum,
    second_difference_term,
    second_difference_term_integral,
)
from .zeros import ZeroSet, count_check, find_zeros_low, load_zeros

__all__ = [
    "AliasBudgetError",
    "CacheFormatError",
    "CampaignResult",
    "CesaroWeight",
    "CheckResult",
    "ConvergenceError",
    "CoverageError",
    "DEFAULT_CONSTANTS",
    "DataError",
    "EmptyZeroSetError",
    "GridResolutionError",
    "InvalidRangeError",
    "LEMMAS",
    "LambdaWindow",
    "MismatchError",
    "OrderingViolationError",
    "PsiTable",
    "RWindow",
    "RangeOverflowError",
    "ResourceError",
    "RunConfig",
    "SpecViolationError",
    "UsageError",
    "VerificationReport",
    "WindowSpec",
    "ZeroSet",
    "ZeroSumResult",
    "ZeroTableError",
    "cesaro_lhs_average",
    "cesaro_lhs_main",
    "consistency_chain",
    "count_check",
    "find_zeros_low",
    "grid_campaign",
    "lambda_point",
    "lambda_values_upto",
    "load_window_cache",
    "load_zeros",
    "max_over_y",
    "pesato_identity_check",
    "prime_power_split",
    "psi",
    "psi_formula_check",
    "psi_zero_sum",
    "r_direct",
    "r_values_upto",
    "r_window_direct",
    "r_window_fft",
    "resolve_config",
    "run_lemma",
    "save_window_cache",
    "second_difference_term",
    "second_difference_term_integral",
    "sieve_window",
    "theta_pairs",
    "verify_average",
    "verify_long_interval",
    "verify_main",
    "__version__",
]
