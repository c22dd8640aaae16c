"""Structure-wide tuning parameters and the rebuild trigger.

All trees built by this package share one (a, b) pair derived from the
bit-length class ``log_n`` the structure was last rebuilt for.  ``a`` is the
arity base (internal nodes carry a/4 to 4a children), ``b`` the dynamic leaf
capacity in bits.  Parameters are recomputed only when the whole structure is
rebuilt, never incrementally.
"""

import math
from dataclasses import dataclass

MIN_LOG_N = 4


@dataclass(frozen=True)
class Params:
    """Tuning constants for one (re)build of the tree."""

    log_n: int        # bit-length class the tree was built for, >= 4
    a: int            # arity base; children counts range in [a/4, 4a]
    b: int            # dynamic leaf capacity in bits, multiple of 16
    flatten_cap: int  # largest subtree size eligible for flattening


def compute_params(log_n: int) -> Params:
    """Derive (a, b, flatten_cap) for a structure of about 2**log_n elements.

    ``log_n`` is floored at 4 so that tiny structures get well-defined
    parameters.  The inner log in b's formula is real-valued; integer
    flooring would make b non-monotone across powers of two.
    """
    log_n = max(MIN_LOG_N, log_n)
    s = math.isqrt(log_n)
    if s * s < log_n:
        s += 1
    a = max(16, s)
    denom = 16.0 * max(1.0, math.log2(log_n))
    b = 16 * math.ceil(log_n * log_n / denom)
    # 2**log_n // log_n can fall below b for log_n <= 7; flattening must
    # stay possible, so the cap never drops under one leaf capacity.
    flatten_cap = max(b, (1 << log_n) // log_n)
    return Params(log_n=log_n, a=a, b=b, flatten_cap=flatten_cap)


def rebuild_due(current_log_n: int, built_log_n: int) -> bool:
    """True when the bit-length class left the hysteresis band: one step up
    or two steps down from the class the structure was built for."""
    return current_log_n >= built_log_n + 1 or current_log_n <= built_log_n - 2


def ceil_log2(n: int) -> int:
    """Smallest k with 2**k >= n, floored at MIN_LOG_N (n is clamped to 16)."""
    n = max(n, 16)
    return max(MIN_LOG_N, (n - 1).bit_length())
